#include "mapl/listlearn.hpp"

#include <algorithm>
#include <cmath>

namespace mapl {

int adaptive_reward(const Hypothesis& h, const Example& z, std::span<const Hypothesis> chosen) {
    if (h(z.x) != z.y) return 0;
    for (const auto& c : chosen)
        if (c(z.x) == z.y) return 0;
    return 1;
}

namespace {

/// exp(logw - max) normalized.
std::vector<double> softmax(const std::vector<double>& logw) {
    const double top = *std::max_element(logw.begin(), logw.end());
    std::vector<double> p(logw.size());
    double total = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) total += p[j] = std::exp(logw[j] - top);
    for (double& v : p) v /= total;
    return p;
}

} // namespace

ListOutput mw_list_learn(std::size_t T, std::span<const Example> s, double eta, const HypothesisClass& f,
                         std::uint64_t seed) {
    require(T >= 1, "mw_list_learn: T must be at least 1");
    require(s.size() >= T, "mw_list_learn: needs at least T examples");
    require(eta > 0.0 && eta <= 1.0, "mw_list_learn: eta must lie in (0, 1]");
    const std::size_t d = f.size();
    std::vector<double> logw(d, 0.0);
    // covered[x] holds the labels some earlier h_s assigns to x.
    std::vector<std::vector<bool>> covered(f.n_domain(), std::vector<bool>(f.n_labels(), false));
    const Rng root(seed);
    ListOutput out;
    std::vector<double> cdf(d);
    for (std::size_t t = 0; t < T; ++t) {
        const auto p = softmax(logw);
        double acc = 0.0;
        for (std::size_t j = 0; j < d; ++j) cdf[j] = acc += p[j];
        Rng rng = root.split(t);
        const double u = rng.uniform01() * cdf.back();
        const auto pick = std::min<std::size_t>(
            static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin()), d - 1);

        const auto& z = s[t];
        require(z.x < f.n_domain() && z.y < f.n_labels(), "mw_list_learn: example out of range");
        const bool open = !covered[z.x][z.y];
        out.chosen.push_back(pick);
        out.reward.push_back(open && f[pick](z.x) == z.y ? 1 : 0);
        if (open)
            for (std::size_t j = 0; j < d; ++j)
                if (f[j](z.x) == z.y) logw[j] += eta;

        const auto& h = f[pick];
        for (Instance x = 0; x < f.n_domain(); ++x) covered[x][h(x)] = true;
        if (t + 1 < T) out.list.push_back(h);
    }
    return out;
}

std::vector<std::vector<double>> mw_core(std::span<const std::vector<double>> rewards, double eta) {
    require(eta > 0.0 && eta <= 1.0, "mw_core: eta must lie in (0, 1]");
    std::vector<std::vector<double>> ps;
    if (rewards.empty()) return ps;
    const std::size_t d = rewards.front().size();
    require(d >= 1, "mw_core: reward vectors must be nonempty");
    std::vector<double> logw(d, 0.0);
    for (const auto& r : rewards) {
        require(r.size() == d, "mw_core: reward vectors differ in length");
        ps.push_back(softmax(logw));
        for (std::size_t j = 0; j < d; ++j) logw[j] += eta * r[j];
    }
    return ps;
}

namespace {

bool missed(const Hypothesis& f, std::span<const Hypothesis> list, Instance x, Label y) {
    if (f(x) != y) return false;
    return std::none_of(list.begin(), list.end(), [&](const Hypothesis& h) { return h(x) == y; });
}

} // namespace

double list_miss_probability(const Hypothesis& f, std::span<const Hypothesis> list, const Distribution& p) {
    check_compatible(f, p);
    double mass = 0.0;
    for (Instance x = 0; x < p.n_domain(); ++x) {
        const Label y = f(x);
        if (y < p.n_labels() && missed(f, list, x, y)) mass += p.prob(x, y);
    }
    return mass;
}

Rational list_miss_probability_exact(const Hypothesis& f, std::span<const Hypothesis> list, const Distribution& p) {
    check_compatible(f, p);
    require(p.has_exact(), "list_miss_probability_exact: distribution has no exact table");
    Rational mass(0);
    for (Instance x = 0; x < p.n_domain(); ++x) {
        const Label y = f(x);
        if (y < p.n_labels() && missed(f, list, x, y)) mass += p.exact_prob(x, y);
    }
    return mass;
}

double expected_adaptive_reward(const Hypothesis& f, std::span<const Hypothesis> prefix, const Distribution& p) {
    return list_miss_probability(f, prefix, p);
}

} // namespace mapl
