#pragma once

// Multiplicative-weights list learning with adaptive rewards, and the bare
// weight recursion it runs on.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mapl/core.hpp"

namespace mapl {

/// 1 iff h is right on z and every hypothesis in `chosen` is wrong on z.
int adaptive_reward(const Hypothesis& h, const Example& z, std::span<const Hypothesis> chosen);

struct ListOutput {
    /// h_1 .. h_{T-1}.
    std::vector<Hypothesis> list;
    /// Per round t = 1..T: index into F of h_t and the reward r_t(h_t).
    std::vector<std::size_t> chosen;
    std::vector<int> reward;
};

/// T rounds of multiplicative weights over the members of F, round t scored
/// on s[t-1]. h_t is drawn from p_t by inverse CDF over F's canonical order
/// with the round's own split of `seed`. h_T is drawn but left off the list.
ListOutput mw_list_learn(std::size_t T, std::span<const Example> s, double eta, const HypothesisClass& f,
                         std::uint64_t seed);

/// p_1 .. p_T for externally supplied reward vectors: p_1 uniform,
/// p_{t+1}(j) proportional to p_t(j) exp(eta r_t(j)).
std::vector<std::vector<double>> mw_core(std::span<const std::vector<double>> rewards, double eta);

/// P(f(X) = Y and f(X) not in {h(X) : h in list}).
double list_miss_probability(const Hypothesis& f, std::span<const Hypothesis> list, const Distribution& p);
/// Same, from the exact table; requires p.has_exact().
Rational list_miss_probability_exact(const Hypothesis& f, std::span<const Hypothesis> list, const Distribution& p);

/// E_{(X,Y)~P} adaptive_reward(f, (X,Y), prefix), computed from the table.
double expected_adaptive_reward(const Hypothesis& f, std::span<const Hypothesis> prefix, const Distribution& p);

} // namespace mapl
