#pragma once

// Selection schemes and sample compression: the boosted one-inclusion scheme
// (SCSR) and the enumerator of the finite cover it induces.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mapl/core.hpp"

namespace mapl {

enum class Mode { faithful, practical };

std::string to_string(Mode m);
Mode parse_mode(const std::string& s);

struct CompressionParams {
    double gamma = 1.0 / 3.0;
    Mode mode = Mode::practical;
    /// Weak sample size; 0 means derive it from the class (default_weak_size).
    std::size_t d_weak = 0;
    /// Cap on boosting rounds; 0 means the faithful round count.
    std::size_t max_boost_rounds = 0;
    /// Practical mode only: cap on the number of blocks in a compression
    /// (0 = no cap beyond max_boost_rounds). Also lowers size_fn.
    std::size_t max_blocks = 0;
    /// Weighted draws tried per round before the best one is taken.
    std::size_t retries_per_round = 64;
    /// Fresh boosting runs (new seeds) tried after the first one fails.
    std::size_t fallback_restarts = 8;
};

/// Predicts the labels at `queries` after training on `block`.
using BlockLearner = std::function<std::vector<Label>(std::span<const Example> block, std::span<const Instance> queries)>;

/// The fixed default hypothesis h-dagger: the all-zero table.
Hypothesis default_hypothesis(std::size_t n_domain);

/// Pointwise plurality; ties go to the smallest label.
Hypothesis majority_vote(std::span<const Hypothesis> classifiers);

/// ceil(3.01 ln(n+1) / ((1/(2 gamma) - 1)^2 gamma)).
std::size_t scsr_rounds(std::size_t n, double gamma);

/// Smallest n such that every projection onto at most n+1 points orients
/// with max out-degree <= gamma (n+1); by the leave-one-out argument, the
/// one-inclusion learner on n draws then has expected error <= gamma.
/// Throws BudgetExceeded if the number of projections to scan is too large.
std::size_t default_weak_size(const HypothesisClass& h, double gamma, std::size_t projection_budget = 200'000);

/// Weak learner used by SCSR: one-inclusion predictions on a realizable block,
/// the default label everywhere on a non-realizable one.
BlockLearner oig_block_learner(const HypothesisClass& h);

/// Majority over the consecutive complete blocks of t; h-dagger when t holds
/// no complete block. Block outputs are memoized per distinct block.
Hypothesis block_majority(std::span<const Example> t, std::size_t block, std::size_t n_domain,
                          const BlockLearner& learner);

/// Diagnostics from one boosting search.
struct BoostReport {
    std::size_t rounds = 0;
    std::size_t restarts = 0;
    bool shortcut = false;
};

/// Shared search: finds a sequence of whole blocks drawn from `target` whose
/// block majority realizes every example of `target`. `faithful_rounds` is the
/// forced round count in faithful mode and the default round cap otherwise.
/// Throws CompressionFailure if nothing realizing is found.
SampleSequence boost_compress(std::span<const Example> target, std::size_t block, std::size_t faithful_rounds,
                              const CompressionParams& params, std::size_t n_domain, const BlockLearner& learner,
                              std::uint64_t seed, BoostReport* report = nullptr);

/// Maps each example of t to the position of its first occurrence in s.
std::vector<std::size_t> indices_in(std::span<const Example> s, std::span<const Example> t);

/// Resolves params.d_weak (0 -> default_weak_size).
std::size_t weak_size(const HypothesisClass& h, const CompressionParams& params);

/// k(n): scsr_rounds(n) * d_weak, reduced by max_blocks in practical mode.
std::size_t scsr_size(std::size_t n, std::size_t d_weak, const CompressionParams& params);

Hypothesis scsr_reconstruct(std::span<const Example> t, const HypothesisClass& h, const CompressionParams& params);

std::vector<std::size_t> scsr_compress(std::span<const Example> s, const HypothesisClass& h,
                                       const CompressionParams& params, std::uint64_t seed,
                                       BoostReport* report = nullptr);

/// A compress/reconstruct pair with its size function. `block_size` and
/// `block_learner` describe the block structure that reconstruct applies, used
/// by block-aligned enumeration.
struct SelectionScheme {
    std::function<std::vector<std::size_t>(std::span<const Example>, std::uint64_t)> compress;
    std::function<Hypothesis(std::span<const Example>)> reconstruct;
    std::function<std::size_t(std::size_t)> size_fn;
    std::size_t block_size = 0;
    BlockLearner block_learner;
};

SelectionScheme make_scsr_scheme(const HypothesisClass& h, CompressionParams params);

enum class CoverMode { full, block_aligned };

struct CoverOptions {
    CoverMode mode = CoverMode::full;
    /// Full mode: maximum number of tuples to reconstruct.
    std::uint64_t element_budget = 5'000'000;
    /// Block-aligned mode: most blocks combined in one majority.
    std::size_t max_blocks = 1;
    /// Block-aligned mode: maximum number of distinct block contents.
    std::uint64_t block_budget = 2'000'000;
    /// Seed handed to compress when forming the per-member proxies.
    std::uint64_t seed = 0;
};

/// The finite cover F: reconstructions of every tuple of at most
/// size_fn(|s|) elements of s (full mode). Block-aligned mode instead takes
/// majorities of up to max_blocks block outputs, where every realizable set
/// of at most block_size distinct examples of s is a block, and adds
/// reconstruct(compress(s(h))) for every h together with h-dagger; all of
/// these also lie in the full cover.
/// Throws BudgetExceeded when the enumeration would exceed its budget.
HypothesisClass cc_enumerate(std::span<const Example> s, const HypothesisClass& h, const SelectionScheme& scheme,
                             const CoverOptions& opts = {});

} // namespace mapl
