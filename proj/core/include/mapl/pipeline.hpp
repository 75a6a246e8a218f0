#pragma once

// The three-stage agnostic learner: cover by compression, list by
// multiplicative weights, final hypothesis by menu-restricted compression.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "mapl/compression.hpp"
#include "mapl/core.hpp"

namespace mapl {

struct MaplConfig {
    Mode mode = Mode::practical;
    double epsilon = 0.1;
    double delta = 0.1;
    double eta = 0.5;
    /// Weak sample size for the cover stage; derived from the class if unset.
    std::optional<std::size_t> d_override;
    /// Natarajan dimension for the final stage; computed if unset.
    std::optional<std::size_t> d_n_override;
    std::uint64_t seed = 0;
    CompressionParams compression{};
    /// Cover enumeration; block-aligned keeps |F| small.
    CoverOptions cover{CoverMode::block_aligned};
    /// Practical-mode multiplier for the sample-size formulas.
    double practical_scale = 0.05;
};

/// First floor(n/3), second floor(n/3), remainder. Requires |s| >= 3.
std::tuple<SampleSequence, SampleSequence, SampleSequence> split_thirds(std::span<const Example> s);

struct SampleSizes {
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    std::size_t n3 = 0;
    /// n1 and n3 carry unit hidden constants.
    bool order_level = true;
};

/// n1 = (d ln^2(d/eps) + ln(1/delta)) / eps
/// n2 = ceil(8 (2 ln|F| + 7 ln(9/delta) + 6) / eps)
/// n3 = (d_N ln n2 ln^2(d_N ln n2 / eps) + ln(1/delta)) / eps^2
/// When cover_size is unset, ln|F| is bounded by (k(n1) + 1) ln n1 with
/// k the cover-stage compression size. Practical mode multiplies each size
/// by `practical_scale` (never below 3).
SampleSizes sample_size_calculator(std::size_t d, std::size_t d_n, double epsilon, double delta, Mode mode,
                                   std::optional<std::size_t> cover_size = std::nullopt,
                                   double practical_scale = 0.05, double gamma = 1.0 / 3.0);

struct MaplReport {
    std::string entry;  // "split" or "sized"
    Mode mode = Mode::practical;
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    std::size_t n3 = 0;
    std::size_t d_weak = 0;
    std::size_t d_n = 0;
    std::size_t cover_size = 0;
    std::size_t list_length = 0;
    std::size_t menu_size = 0;
    std::size_t lscs_block = 0;
    std::size_t compressed_size = 0;
    std::size_t boost_rounds = 0;
    /// Lineage: the MW output (indices into the cover) and the menu it induced.
    std::vector<std::size_t> list_indices;
    std::vector<Hypothesis> list;
    Menu menu;
    HypothesisClass cover{1, 1, {Hypothesis::constant(1, 0)}};
};

struct MaplResult {
    Hypothesis hypothesis;
    MaplReport report;
};

/// Resolved weak size and Natarajan dimension for H under cfg.
std::pair<std::size_t, std::size_t> mapl_dimensions(const HypothesisClass& h, const MaplConfig& cfg);

/// Runs the stages on given samples (s2 must have at least one example).
MaplResult mapl_stages(std::span<const Example> s1, std::span<const Example> s2, std::span<const Example> s3,
                       const HypothesisClass& h, const MaplConfig& cfg);

/// Split mode: one sequence cut into thirds.
MaplResult mapl(std::span<const Example> s, const HypothesisClass& h, const MaplConfig& cfg);

/// Sized mode: draws n1 from P, sizes n2 from the cover actually built, then
/// draws n2 and n3.
MaplResult mapl_sized(const Distribution& p, const HypothesisClass& h, const MaplConfig& cfg);

} // namespace mapl
