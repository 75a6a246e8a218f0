#include "mapl/compression.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <numeric>
#include <set>
#include <sstream>

#include "mapl/oig.hpp"

namespace mapl {

std::string to_string(Mode m) { return m == Mode::faithful ? "faithful" : "practical"; }

Mode parse_mode(const std::string& s) {
    if (s == "faithful") return Mode::faithful;
    if (s == "practical") return Mode::practical;
    throw ContractViolation("unknown mode '" + s + "' (expected faithful or practical)");
}

Hypothesis default_hypothesis(std::size_t n_domain) { return Hypothesis::constant(n_domain, kDefaultLabel); }

namespace {

/// Plurality of one column of votes; ties go to the smallest label.
Label plurality(std::vector<Label>& votes) {
    std::sort(votes.begin(), votes.end());
    Label best = votes.front();
    std::size_t best_count = 0;
    for (std::size_t i = 0; i < votes.size();) {
        std::size_t j = i;
        while (j < votes.size() && votes[j] == votes[i]) ++j;
        if (j - i > best_count) {
            best = votes[i];
            best_count = j - i;
        }
        i = j;
    }
    return best;
}

std::vector<Instance> all_instances(std::size_t n_domain) {
    std::vector<Instance> xs(n_domain);
    std::iota(xs.begin(), xs.end(), 0);
    return xs;
}

SampleSequence pad_cyclic(std::span<const Example> items, std::size_t length) {
    SampleSequence out;
    out.reserve(length);
    for (std::size_t i = 0; i < length; ++i) out.push_back(items[i % items.size()]);
    return out;
}

/// Running per-example vote tallies, to test whether the block majority
/// built so far realizes the target.
class VoteBoard {
public:
    explicit VoteBoard(std::span<const Example> target) : target_(target), votes_(target.size()) {}

    void add(std::span<const Label> predictions) {
        for (std::size_t i = 0; i < target_.size(); ++i) votes_[i].push_back(predictions[i]);
    }

    bool realizes() {
        for (std::size_t i = 0; i < target_.size(); ++i) {
            auto col = votes_[i];
            if (plurality(col) != target_[i].y) return false;
        }
        return true;
    }

private:
    std::span<const Example> target_;
    std::vector<std::vector<Label>> votes_;
};

} // namespace

Hypothesis majority_vote(std::span<const Hypothesis> classifiers) {
    require(!classifiers.empty(), "majority_vote: needs at least one classifier");
    const std::size_t n = classifiers.front().domain_size();
    for (const auto& c : classifiers) require(c.domain_size() == n, "majority_vote: domain sizes differ");
    std::vector<Label> table(n);
    std::vector<Label> col(classifiers.size());
    for (Instance x = 0; x < n; ++x) {
        for (std::size_t i = 0; i < classifiers.size(); ++i) col[i] = classifiers[i](x);
        table[x] = plurality(col);
    }
    return Hypothesis(std::move(table));
}

std::size_t scsr_rounds(std::size_t n, double gamma) {
    require(gamma > 0.0 && gamma < 0.5, "scsr_rounds: gamma must lie in (0, 1/2)");
    const double edge = 1.0 / (2.0 * gamma) - 1.0;
    return static_cast<std::size_t>(std::ceil(3.01 * std::log(static_cast<double>(n) + 1.0) / (edge * edge * gamma)));
}

std::size_t default_weak_size(const HypothesisClass& h, double gamma, std::size_t projection_budget) {
    require(gamma > 0.0 && gamma < 0.5, "default_weak_size: gamma must lie in (0, 1/2)");
    const auto& reps = h.distinct_columns();
    // worst[j]: largest min-max out-degree over projections onto j points.
    std::vector<std::size_t> worst(1, 0);
    std::size_t scanned = 0;
    auto worst_upto = [&](std::size_t m) {
        m = std::min(m, reps.size());
        while (worst.size() <= m) {
            const std::size_t j = worst.size();
            std::size_t k = 0;
            std::vector<std::size_t> idx(j);
            std::iota(idx.begin(), idx.end(), 0);
            while (true) {
                if (++scanned > projection_budget)
                    throw BudgetExceeded("default_weak_size: too many projections; pass d_weak explicitly");
                std::vector<Instance> pts;
                for (auto i : idx) pts.push_back(reps[i]);
                const auto g = OneInclusionGraph::build(h.project(pts), j);
                k = std::max(k, min_max_outdegree_orientation(g).max_out_degree);
                std::size_t i = j;
                while (i > 0 && idx[i - 1] == reps.size() - j + (i - 1)) --i;
                if (i == 0) break;
                ++idx[i - 1];
                for (std::size_t t = i; t < j; ++t) idx[t] = idx[t - 1] + 1;
            }
            worst.push_back(std::max(worst.back(), k));
        }
        return worst[m];
    };
    for (std::size_t n = 1;; ++n) {
        const auto k = static_cast<double>(worst_upto(n + 1));
        if (k <= gamma * static_cast<double>(n + 1) + 1e-12) return n;
    }
}

std::size_t weak_size(const HypothesisClass& h, const CompressionParams& params) {
    return params.d_weak > 0 ? params.d_weak : default_weak_size(h, params.gamma);
}

BlockLearner oig_block_learner(const HypothesisClass& h) {
    auto cls = std::make_shared<const HypothesisClass>(h);
    return [cls](std::span<const Example> block, std::span<const Instance> queries) {
        if (!cls->realizes(block)) return std::vector<Label>(queries.size(), kDefaultLabel);
        return oig_predict_many(block, *cls, queries);
    };
}

Hypothesis block_majority(std::span<const Example> t, std::size_t block, std::size_t n_domain,
                          const BlockLearner& learner) {
    require(block >= 1, "block_majority: block size must be positive");
    const std::size_t a = t.size() / block;
    if (a == 0) return default_hypothesis(n_domain);
    const auto xs = all_instances(n_domain);
    std::map<SampleSequence, Hypothesis> memo;
    std::vector<Hypothesis> outputs;
    outputs.reserve(a);
    for (std::size_t i = 0; i < a; ++i) {
        SampleSequence blk(t.begin() + static_cast<std::ptrdiff_t>(i * block),
                           t.begin() + static_cast<std::ptrdiff_t>((i + 1) * block));
        auto it = memo.find(blk);
        if (it == memo.end()) it = memo.emplace(blk, Hypothesis(learner(blk, xs))).first;
        outputs.push_back(it->second);
    }
    return majority_vote(outputs);
}

SampleSequence boost_compress(std::span<const Example> target, std::size_t block, std::size_t faithful_rounds,
                              const CompressionParams& params, std::size_t n_domain, const BlockLearner& learner,
                              std::uint64_t seed, BoostReport* report) {
    require(block >= 1, "boost_compress: block size must be positive");
    require(params.gamma > 0.0 && params.gamma < 0.5, "boost_compress: gamma must lie in (0, 1/2)");
    BoostReport local;
    BoostReport& rep = report ? *report : local;
    rep = {};

    SampleSequence distinct(target.begin(), target.end());
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.empty()) return {};
    for (const auto& z : distinct) require(z.x < n_domain, "boost_compress: example outside the domain");

    const bool faithful = params.mode == Mode::faithful;
    std::size_t rounds = std::max<std::size_t>(faithful_rounds, 1);
    if (!faithful) {
        if (params.max_boost_rounds > 0) rounds = std::min(rounds, params.max_boost_rounds);
        if (params.max_blocks > 0) rounds = std::min(rounds, params.max_blocks);
    }
    std::vector<Instance> xs;
    for (const auto& z : distinct) xs.push_back(z.x);

    // Small targets fit in one block: the learner sees every example.
    if (distinct.size() <= block) {
        const auto blk = pad_cyclic(distinct, block);
        const auto pred = learner(blk, xs);
        bool ok = true;
        for (std::size_t i = 0; i < distinct.size(); ++i) ok = ok && pred[i] == distinct[i].y;
        if (ok) {
            rep.shortcut = true;
            rep.rounds = faithful ? rounds : 1;
            SampleSequence t;
            for (std::size_t r = 0; r < rep.rounds; ++r) t.insert(t.end(), blk.begin(), blk.end());
            return t;
        }
    }

    const std::size_t n = distinct.size();
    const double shrink = std::exp(-0.5);
    const Rng root(seed);
    for (std::size_t attempt = 0; attempt <= params.fallback_restarts; ++attempt) {
        rep.restarts = attempt;
        Rng rng = root.split(attempt);
        std::vector<double> w(n, 1.0 / static_cast<double>(n));
        std::vector<double> cdf(n);
        VoteBoard board(distinct);
        SampleSequence t;
        for (std::size_t r = 0; r < rounds; ++r) {
            std::partial_sum(w.begin(), w.end(), cdf.begin());
            Rng round_rng = rng.split(r);
            double best_err = std::numeric_limits<double>::infinity();
            SampleSequence best_blk;
            std::vector<Label> best_pred;
            for (std::size_t k = 0; k < std::max<std::size_t>(params.retries_per_round, 1); ++k) {
                SampleSequence blk;
                blk.reserve(block);
                for (std::size_t j = 0; j < block; ++j) {
                    const double u = round_rng.uniform01() * cdf.back();
                    auto pos = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
                    blk.push_back(distinct[std::min(pos, n - 1)]);
                }
                auto pred = learner(blk, xs);
                double err = 0.0;
                for (std::size_t i = 0; i < n; ++i)
                    if (pred[i] != distinct[i].y) err += w[i];
                if (err < best_err) {
                    best_err = err;
                    best_blk = std::move(blk);
                    best_pred = std::move(pred);
                }
                if (best_err <= params.gamma) break;
            }
            t.insert(t.end(), best_blk.begin(), best_blk.end());
            board.add(best_pred);
            double total = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (best_pred[i] == distinct[i].y) w[i] *= shrink;
                total += w[i];
            }
            for (double& wi : w) wi /= total;
            rep.rounds = r + 1;
            if (!faithful && board.realizes()) return t;
        }
        if (faithful && board.realizes()) return t;
    }
    std::ostringstream msg;
    msg << "compression search failed: " << n << " distinct examples, block size " << block << ", " << rounds
        << " rounds, " << params.fallback_restarts + 1 << " runs, mode " << to_string(params.mode);
    throw CompressionFailure(msg.str());
}

std::vector<std::size_t> indices_in(std::span<const Example> s, std::span<const Example> t) {
    std::map<Example, std::size_t> first;
    for (std::size_t i = 0; i < s.size(); ++i) first.emplace(s[i], i);
    std::vector<std::size_t> out;
    out.reserve(t.size());
    for (const auto& z : t) {
        auto it = first.find(z);
        require(it != first.end(), "indices_in: example not present in the sequence");
        out.push_back(it->second);
    }
    return out;
}

std::size_t scsr_size(std::size_t n, std::size_t d_weak, const CompressionParams& params) {
    std::size_t rounds = scsr_rounds(n, params.gamma);
    if (params.mode == Mode::practical) {
        if (params.max_boost_rounds > 0) rounds = std::min(rounds, params.max_boost_rounds);
        if (params.max_blocks > 0) rounds = std::min(rounds, params.max_blocks);
    }
    return rounds * d_weak;
}

Hypothesis scsr_reconstruct(std::span<const Example> t, const HypothesisClass& h, const CompressionParams& params) {
    return block_majority(t, weak_size(h, params), h.n_domain(), oig_block_learner(h));
}

std::vector<std::size_t> scsr_compress(std::span<const Example> s, const HypothesisClass& h,
                                       const CompressionParams& params, std::uint64_t seed, BoostReport* report) {
    const std::size_t d = weak_size(h, params);
    const auto& best = h[most_consistent_member(h, s)];
    const auto target = realizable_subsequence(s, best);
    const auto t = boost_compress(target, d, scsr_rounds(s.size(), params.gamma), params, h.n_domain(),
                                  oig_block_learner(h), seed, report);
    return indices_in(s, t);
}

SelectionScheme make_scsr_scheme(const HypothesisClass& h, CompressionParams params) {
    params.d_weak = weak_size(h, params);
    auto cls = std::make_shared<const HypothesisClass>(h);
    auto learner = oig_block_learner(h);
    SelectionScheme scheme;
    scheme.compress = [cls, params](std::span<const Example> s, std::uint64_t seed) {
        return scsr_compress(s, *cls, params, seed);
    };
    scheme.reconstruct = [cls, params, learner](std::span<const Example> t) {
        return block_majority(t, params.d_weak, cls->n_domain(), learner);
    };
    scheme.size_fn = [params](std::size_t n) { return scsr_size(n, params.d_weak, params); };
    scheme.block_size = params.d_weak;
    scheme.block_learner = learner;
    return scheme;
}

namespace {

std::uint64_t saturating_tuple_count(std::size_t n, std::size_t k_max) {
    constexpr std::uint64_t cap = std::numeric_limits<std::uint64_t>::max() / 2;
    std::uint64_t total = 0;
    std::uint64_t term = 1;
    for (std::size_t k = 0; k <= k_max; ++k) {
        total = total > cap - term ? cap : total + term;
        if (n == 0) break;
        term = term > cap / n ? cap : term * n;
    }
    return total;
}

HypothesisClass full_cover(std::span<const Example> s, const HypothesisClass& h, const SelectionScheme& scheme,
                           const CoverOptions& opts) {
    const std::size_t n = s.size();
    const std::size_t k_max = scheme.size_fn(n);
    if (saturating_tuple_count(n, k_max) > opts.element_budget)
        throw BudgetExceeded("cc_enumerate: " + std::to_string(n) + "^<=" + std::to_string(k_max) +
                             " tuples exceed the element budget; use a smaller size_fn or block-aligned mode");
    std::set<Hypothesis> found;
    found.insert(scheme.reconstruct({}));
    SampleSequence t;
    for (std::size_t k = 1; k <= k_max && n > 0; ++k) {
        std::vector<std::size_t> idx(k, 0);
        while (true) {
            t.clear();
            for (auto i : idx) t.push_back(s[i]);
            found.insert(scheme.reconstruct(t));
            std::size_t pos = k;
            while (pos > 0 && idx[pos - 1] == n - 1) idx[--pos] = 0;
            if (pos == 0) break;
            ++idx[pos - 1];
        }
    }
    return HypothesisClass(h.n_domain(), h.n_labels(), std::vector<Hypothesis>(found.begin(), found.end()));
}

HypothesisClass block_aligned_cover(std::span<const Example> s, const HypothesisClass& h,
                                    const SelectionScheme& scheme, const CoverOptions& opts) {
    require(scheme.block_size >= 1 && scheme.block_learner, "cc_enumerate: scheme has no block structure");
    const std::size_t b = scheme.block_size;
    SampleSequence distinct(s.begin(), s.end());
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    const auto xs = all_instances(h.n_domain());

    std::set<Hypothesis> outputs;
    std::uint64_t blocks = 0;
    // Sets with two labels on one instance are skipped: no class member
    // realizes them, so both block learners answer with h-dagger there.
    std::vector<std::size_t> chosen;
    auto visit = [&](auto&& self, std::size_t from) -> void {
        if (!chosen.empty()) {
            if (++blocks > opts.block_budget)
                throw BudgetExceeded("cc_enumerate: block-aligned enumeration exceeds its block budget");
            SampleSequence set;
            for (auto i : chosen) set.push_back(distinct[i]);
            outputs.insert(Hypothesis(scheme.block_learner(pad_cyclic(set, b), xs)));
        }
        if (chosen.size() == b) return;
        for (std::size_t i = from; i < distinct.size(); ++i) {
            const bool clash = std::any_of(chosen.begin(), chosen.end(),
                                           [&](std::size_t j) { return distinct[j].x == distinct[i].x; });
            if (clash) continue;
            chosen.push_back(i);
            self(self, i + 1);
            chosen.pop_back();
        }
    };
    visit(visit, 0);

    std::set<Hypothesis> found(outputs.begin(), outputs.end());
    found.insert(default_hypothesis(h.n_domain()));
    const std::vector<Hypothesis> singles(outputs.begin(), outputs.end());
    const std::size_t max_blocks = std::min(opts.max_blocks, scheme.size_fn(s.size()) / b);
    for (std::size_t k = 2; k <= max_blocks && !singles.empty(); ++k) {
        std::vector<std::size_t> idx(k, 0);
        std::vector<Hypothesis> group(k);
        while (true) {
            if (++blocks > opts.block_budget)
                throw BudgetExceeded("cc_enumerate: block-aligned enumeration exceeds its block budget");
            for (std::size_t i = 0; i < k; ++i) group[i] = singles[idx[i]];
            found.insert(majority_vote(group));
            // Next nondecreasing index tuple (multisets of outputs).
            std::size_t pos = k;
            while (pos > 0 && idx[pos - 1] == singles.size() - 1) --pos;
            if (pos == 0) break;
            const auto v = idx[pos - 1] + 1;
            for (std::size_t i = pos - 1; i < k; ++i) idx[i] = v;
        }
    }
    for (const auto& member : h.members()) {
        const auto sub = realizable_subsequence(s, member);
        const auto picked = scheme.compress(sub, opts.seed);
        SampleSequence t;
        for (auto i : picked) t.push_back(sub[i]);
        found.insert(scheme.reconstruct(t));
    }
    return HypothesisClass(h.n_domain(), h.n_labels(), std::vector<Hypothesis>(found.begin(), found.end()));
}

} // namespace

HypothesisClass cc_enumerate(std::span<const Example> s, const HypothesisClass& h, const SelectionScheme& scheme,
                             const CoverOptions& opts) {
    return opts.mode == CoverMode::full ? full_cover(s, h, scheme, opts) : block_aligned_cover(s, h, scheme, opts);
}

} // namespace mapl
