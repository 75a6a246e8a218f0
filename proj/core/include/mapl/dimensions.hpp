#pragma once

// Natarajan and DS dimensions by exhaustive search, OIG density of a class,
// and a bracketing estimator for the realizable dimension.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mapl/core.hpp"

namespace mapl {

enum class SearchStatus { exact, lower_bound };

struct NatarajanWitness {
    std::vector<Instance> points;
    LabelVector f;
    LabelVector g;
};

struct PseudoCubeWitness {
    std::vector<Instance> points;
    std::vector<LabelVector> cube;
};

struct NatarajanResult {
    std::size_t dimension = 0;
    std::optional<NatarajanWitness> witness;
    SearchStatus status = SearchStatus::exact;
};

struct DsResult {
    std::size_t dimension = 0;
    std::optional<PseudoCubeWitness> witness;
    SearchStatus status = SearchStatus::exact;
};

inline constexpr std::uint64_t kDefaultNodeBudget = 50'000'000;

/// Largest d <= cap with an N-shattered d-tuple. Shattering is hereditary, so
/// the search walks d upward and stops at the first size with no witness.
/// Only instances with distinct columns are candidates (two points with equal
/// columns can never sit in the same shattered tuple).
NatarajanResult natarajan_dimension(const HypothesisClass& h, std::size_t cap,
                                    std::uint64_t node_budget = kDefaultNodeBudget);

/// Largest d <= cap such that some d-tuple's projection contains a pseudo-cube.
DsResult ds_dimension(const HypothesisClass& h, std::size_t cap, std::uint64_t node_budget = kDefaultNodeBudget);

/// Nonempty, and every vector has an i-neighbor in b for every i < d.
bool is_pseudo_cube(std::span<const LabelVector> b, std::size_t d);

/// Largest subfamily of `vectors` (all of length d) that survives repeated
/// removal of vectors lacking some i-neighbor. Empty iff `vectors` contains no
/// pseudo-cube. Result is sorted.
std::vector<LabelVector> pseudo_cube_core(std::vector<LabelVector> vectors, std::size_t d);

struct DensityResult {
    Rational value;
    /// False if some projection exceeded subset_cap and only a lower bound
    /// on its maximal average degree was available.
    bool exact = true;
    /// A tuple attaining `value`.
    std::vector<Instance> points;
};

/// mu_H(m): max over m-tuples x of the maximal average degree of G(H|x).
/// Repeated coordinates only add singleton edges, so it suffices to range
/// over sets of at most m distinct-column instances; the result is
/// nondecreasing in m.
DensityResult density(const HypothesisClass& h, std::size_t m, std::size_t subset_cap = 20);

struct RealizableDimensionEstimate {
    std::size_t lower = 0;
    std::size_t upper = 0;
    /// Set when the trial budget ran out before `lower` was located.
    bool budget_exhausted = false;
    /// Set if any density used for `upper` was itself only a lower bound.
    bool upper_uses_bound = false;
};

struct RealizableDimensionOptions {
    /// Generated distributions per n (each the uniform law on the graph of a
    /// member restricted to a random support).
    std::size_t family_size = 16;
    /// Training samples drawn per generated distribution.
    std::size_t samples_per_distribution = 8;
    std::size_t max_n = 4096;
};

/// Bracket for the realizable dimension at error level r.
///
/// upper: smallest n with ceil(mu_H(n+1)) / (n+1) <= r.
/// lower: smallest n at which the worst mean one-inclusion error over the
/// generated family is <= r; clamped to upper.
RealizableDimensionEstimate estimate_realizable_dimension(const HypothesisClass& h, double r,
                                                          std::size_t trial_budget, std::uint64_t seed,
                                                          const RealizableDimensionOptions& opts = {});

/// Smallest n >= 1 with ceil(mu(n+1))/(n+1) <= r, the one-inclusion upper
/// bound alone.
std::size_t oig_sample_bound(const HypothesisClass& h, double r, std::size_t max_n = 4096, bool* used_bound = nullptr);

} // namespace mapl
