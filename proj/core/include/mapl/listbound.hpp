#pragma once

// Learning restricted to a menu: menus induced by lists, the menu-restricted
// one-inclusion predictor LL, and the menu-loss compression scheme LSCS.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mapl/compression.hpp"
#include "mapl/core.hpp"

namespace mapl {

/// mu(x) = {h(x) : h in list}. An empty list gives the all-empty menu
/// (check Menu::all_empty()).
Menu menu_from_list(std::span<const Hypothesis> list, std::size_t n_domain, std::size_t n_labels);

/// Members h with h(a) in mu(a) for every anchor a; nullopt if none.
std::optional<HypothesisClass> restrict_to_menu(const HypothesisClass& h, const Menu& mu,
                                                std::span<const Instance> anchors);

/// The fixed fallback label y-dagger.
inline constexpr Label kFallbackLabel = kDefaultLabel;

/// Restricts H to the members allowed by mu at x and at every training
/// point, then runs the one-inclusion predictor on the restricted class.
/// Returns y-dagger if the restriction is empty or does not realize s.
Label ll_predict(std::span<const Example> s, const HypothesisClass& h, const Menu& mu, Instance x);

/// ll_predict at each query, sharing the work on the training anchors.
std::vector<Label> ll_predict_many(std::span<const Example> s, const HypothesisClass& h, const Menu& mu,
                                   std::span<const Instance> queries);

BlockLearner ll_block_learner(const HypothesisClass& h, const Menu& mu);

/// m = floor(60 d_N ln p), raised to 1 when that is 0 (p = 1).
std::size_t lscs_block_size(std::size_t d_n, std::size_t p);

/// ceil(40 ln(n+1)).
std::size_t lscs_rounds(std::size_t n);

/// k(n) = lscs_rounds(n) * m, reduced by the practical caps in params.
std::size_t lscs_size(std::size_t n, std::size_t d_n, std::size_t p, const CompressionParams& params);

/// s' = the examples of s whose label is on the menu.
SampleSequence menu_filter(std::span<const Example> s, const Menu& mu);

std::vector<std::size_t> lscs_compress(std::span<const Example> s, const HypothesisClass& h, const Menu& mu,
                                       std::size_t d_n, const CompressionParams& params, std::uint64_t seed,
                                       BoostReport* report = nullptr);

Hypothesis lscs_reconstruct(std::span<const Example> t, const HypothesisClass& h, const Menu& mu, std::size_t d_n);

} // namespace mapl
