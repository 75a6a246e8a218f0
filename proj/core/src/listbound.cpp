#include "mapl/listbound.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <numeric>

#include "mapl/oig.hpp"

namespace mapl {

Menu menu_from_list(std::span<const Hypothesis> list, std::size_t n_domain, std::size_t n_labels) {
    std::vector<std::vector<Label>> sets(n_domain);
    for (const auto& h : list) {
        require(h.domain_size() == n_domain, "menu_from_list: hypothesis domain size differs");
        for (Instance x = 0; x < n_domain; ++x) sets[x].push_back(h(x));
    }
    return Menu(n_labels, std::move(sets));
}

std::optional<HypothesisClass> restrict_to_menu(const HypothesisClass& h, const Menu& mu,
                                                std::span<const Instance> anchors) {
    require(mu.n_domain() == h.n_domain(), "restrict_to_menu: menu and class domains differ");
    return h.filter([&](const Hypothesis& g) {
        return std::all_of(anchors.begin(), anchors.end(), [&](Instance a) { return mu.contains(a, g(a)); });
    });
}

std::vector<Label> ll_predict_many(std::span<const Example> s, const HypothesisClass& h, const Menu& mu,
                                   std::span<const Instance> queries) {
    require(mu.n_domain() == h.n_domain(), "ll_predict: menu and class domains differ");
    std::vector<Instance> anchors;
    for (const auto& z : s) {
        require(z.x < h.n_domain(), "ll_predict: example out of range");
        anchors.push_back(z.x);
    }
    std::sort(anchors.begin(), anchors.end());
    anchors.erase(std::unique(anchors.begin(), anchors.end()), anchors.end());
    std::vector<std::size_t> base;
    for (std::size_t i = 0; i < h.size(); ++i)
        if (std::all_of(anchors.begin(), anchors.end(), [&](Instance a) { return mu.contains(a, h[i](a)); }))
            base.push_back(i);

    // Queries that admit the same members share one restricted class.
    std::map<std::vector<std::size_t>, std::vector<std::size_t>> groups;
    for (std::size_t q = 0; q < queries.size(); ++q) {
        const Instance x = queries[q];
        require(x < h.n_domain(), "ll_predict: query instance out of range");
        std::vector<std::size_t> keep;
        for (auto i : base)
            if (mu.contains(x, h[i](x))) keep.push_back(i);
        groups[std::move(keep)].push_back(q);
    }
    std::vector<Label> out(queries.size(), kFallbackLabel);
    for (const auto& [keep, qs] : groups) {
        if (keep.empty()) continue;
        std::vector<Hypothesis> members;
        for (auto i : keep) members.push_back(h[i]);
        const HypothesisClass restricted(h.n_domain(), h.n_labels(), std::move(members));
        if (!restricted.realizes(s)) continue;
        std::vector<Instance> xs;
        for (auto q : qs) xs.push_back(queries[q]);
        const auto pred = oig_predict_many(s, restricted, xs);
        for (std::size_t j = 0; j < qs.size(); ++j) out[qs[j]] = pred[j];
    }
    return out;
}

Label ll_predict(std::span<const Example> s, const HypothesisClass& h, const Menu& mu, Instance x) {
    const Instance q[1] = {x};
    return ll_predict_many(s, h, mu, q).front();
}

BlockLearner ll_block_learner(const HypothesisClass& h, const Menu& mu) {
    auto cls = std::make_shared<const HypothesisClass>(h);
    auto menu = std::make_shared<const Menu>(mu);
    return [cls, menu](std::span<const Example> block, std::span<const Instance> queries) {
        return ll_predict_many(block, *cls, *menu, queries);
    };
}

std::size_t lscs_block_size(std::size_t d_n, std::size_t p) {
    require(d_n >= 1, "lscs_block_size: d_N must be at least 1");
    if (p <= 1) return 1;
    const auto m = static_cast<std::size_t>(std::floor(60.0 * static_cast<double>(d_n) * std::log(static_cast<double>(p))));
    return std::max<std::size_t>(m, 1);
}

std::size_t lscs_rounds(std::size_t n) {
    return static_cast<std::size_t>(std::ceil(40.0 * std::log(static_cast<double>(n) + 1.0)));
}

std::size_t lscs_size(std::size_t n, std::size_t d_n, std::size_t p, const CompressionParams& params) {
    std::size_t rounds = lscs_rounds(n);
    if (params.mode == Mode::practical) {
        if (params.max_boost_rounds > 0) rounds = std::min(rounds, params.max_boost_rounds);
        if (params.max_blocks > 0) rounds = std::min(rounds, params.max_blocks);
    }
    return rounds * lscs_block_size(d_n, p);
}

SampleSequence menu_filter(std::span<const Example> s, const Menu& mu) {
    SampleSequence out;
    for (const auto& z : s)
        if (z.x < mu.n_domain() && mu.contains(z.x, z.y)) out.push_back(z);
    return out;
}

std::vector<std::size_t> lscs_compress(std::span<const Example> s, const HypothesisClass& h, const Menu& mu,
                                       std::size_t d_n, const CompressionParams& params, std::uint64_t seed,
                                       BoostReport* report) {
    const auto filtered = menu_filter(s, mu);
    const auto& best = h[most_consistent_member(h, filtered)];
    const auto target = realizable_subsequence(filtered, best);
    const auto t = boost_compress(target, lscs_block_size(d_n, mu.size()), lscs_rounds(s.size()), params,
                                  h.n_domain(), ll_block_learner(h, mu), seed, report);
    return indices_in(s, t);
}

Hypothesis lscs_reconstruct(std::span<const Example> t, const HypothesisClass& h, const Menu& mu, std::size_t d_n) {
    return block_majority(t, lscs_block_size(d_n, mu.size()), h.n_domain(), ll_block_learner(h, mu));
}

} // namespace mapl
