#include "mapl/dimensions.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <set>

#include "mapl/oig.hpp"

namespace mapl {

namespace {

struct BudgetHit {};

/// Calls fn on each k-subset of [0, n) in lexicographic order; stops early if
/// fn returns true. Returns whether it stopped early.
template <class Fn>
bool for_each_combination(std::size_t n, std::size_t k, Fn&& fn) {
    if (k > n) return false;
    std::vector<std::size_t> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
        if (fn(std::span<const std::size_t>(idx))) return true;
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
        if (i == 0) return false;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

std::vector<Instance> pick(const std::vector<Instance>& reps, std::span<const std::size_t> idx) {
    std::vector<Instance> pts;
    pts.reserve(idx.size());
    for (auto i : idx) pts.push_back(reps[i]);
    return pts;
}

class NatarajanSearch {
public:
    NatarajanSearch(std::size_t d, std::uint64_t* nodes, std::uint64_t budget)
        : d_(d), f_(d), g_(d), nodes_(nodes), budget_(budget) {}

    bool run(const std::vector<LabelVector>& projection) { return extend(0, projection); }

    const LabelVector& f() const { return f_; }
    const LabelVector& g() const { return g_; }

private:
    bool extend(std::size_t i, const std::vector<LabelVector>& alive) {
        if (i == d_) return true;
        if (++*nodes_ > budget_) throw BudgetHit{};
        std::set<Label> labels;
        for (const auto& v : alive) labels.insert(v[i]);
        const std::vector<Label> cand(labels.begin(), labels.end());
        const std::size_t need = std::size_t{1} << (i + 1);
        for (std::size_t a = 0; a < cand.size(); ++a)
            for (std::size_t b = a + 1; b < cand.size(); ++b) {
                std::vector<LabelVector> next;
                std::set<LabelVector> prefixes;
                for (const auto& v : alive)
                    if (v[i] == cand[a] || v[i] == cand[b]) {
                        next.push_back(v);
                        prefixes.emplace(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(i + 1));
                    }
                if (prefixes.size() != need) continue;
                f_[i] = cand[a];
                g_[i] = cand[b];
                if (extend(i + 1, next)) return true;
            }
        return false;
    }

    std::size_t d_;
    LabelVector f_;
    LabelVector g_;
    std::uint64_t* nodes_;
    std::uint64_t budget_;
};

} // namespace

NatarajanResult natarajan_dimension(const HypothesisClass& h, std::size_t cap, std::uint64_t node_budget) {
    require(cap >= 1, "natarajan_dimension: cap must be at least 1");
    NatarajanResult result;
    const auto& reps = h.distinct_columns();
    std::uint64_t nodes = 0;
    try {
        for (std::size_t d = 1; d <= std::min(cap, reps.size()); ++d) {
            const bool found = for_each_combination(reps.size(), d, [&](std::span<const std::size_t> idx) {
                auto pts = pick(reps, idx);
                NatarajanSearch search(d, &nodes, node_budget);
                if (!search.run(h.project(pts))) return false;
                result.dimension = d;
                result.witness = NatarajanWitness{std::move(pts), search.f(), search.g()};
                return true;
            });
            if (!found) break;
        }
    } catch (const BudgetHit&) {
        result.status = SearchStatus::lower_bound;
    }
    return result;
}

bool is_pseudo_cube(std::span<const LabelVector> b, std::size_t d) {
    if (b.empty()) return false;
    for (const auto& v : b)
        if (v.size() != d) return false;
    auto g = OneInclusionGraph::build(std::vector<LabelVector>(b.begin(), b.end()), d);
    for (std::size_t v = 0; v < g.vertices().size(); ++v)
        if (g.degree(v) != d) return false;
    return true;
}

std::vector<LabelVector> pseudo_cube_core(std::vector<LabelVector> vectors, std::size_t d) {
    auto g = OneInclusionGraph::build(std::move(vectors), d);
    const std::size_t nv = g.vertices().size();
    std::vector<std::size_t> live(g.edges().size());
    for (std::size_t e = 0; e < live.size(); ++e) live[e] = g.edges()[e].members.size();
    std::vector<bool> alive(nv, true);
    std::vector<bool> queued(nv, false);
    std::deque<std::size_t> work;
    auto consider = [&](std::size_t v) {
        if (!alive[v] || queued[v]) return;
        for (std::size_t dir = 0; dir < d; ++dir)
            if (live[g.edge_of(v, dir)] < 2) {
                queued[v] = true;
                work.push_back(v);
                return;
            }
    };
    for (std::size_t v = 0; v < nv; ++v) consider(v);
    while (!work.empty()) {
        const auto v = work.front();
        work.pop_front();
        alive[v] = false;
        for (std::size_t dir = 0; dir < d; ++dir) {
            const auto e = g.edge_of(v, dir);
            if (--live[e] == 1)
                for (auto u : g.edges()[e].members) consider(u);
        }
    }
    std::vector<LabelVector> out;
    for (std::size_t v = 0; v < nv; ++v)
        if (alive[v]) out.push_back(g.vertices()[v]);
    return out;
}

DsResult ds_dimension(const HypothesisClass& h, std::size_t cap, std::uint64_t node_budget) {
    require(cap >= 1, "ds_dimension: cap must be at least 1");
    DsResult result;
    const auto& reps = h.distinct_columns();
    std::uint64_t nodes = 0;
    try {
        for (std::size_t d = 1; d <= std::min(cap, reps.size()); ++d) {
            const bool found = for_each_combination(reps.size(), d, [&](std::span<const std::size_t> idx) {
                if (++nodes > node_budget) throw BudgetHit{};
                auto pts = pick(reps, idx);
                auto core = pseudo_cube_core(h.project(pts), d);
                if (core.empty()) return false;
                result.dimension = d;
                result.witness = PseudoCubeWitness{std::move(pts), std::move(core)};
                return true;
            });
            if (!found) break;
        }
    } catch (const BudgetHit&) {
        result.status = SearchStatus::lower_bound;
    }
    return result;
}

DensityResult density(const HypothesisClass& h, std::size_t m, std::size_t subset_cap) {
    DensityResult best{Rational(0), true, {}};
    const auto& reps = h.distinct_columns();
    for (std::size_t k = 1; k <= std::min(m, reps.size()); ++k) {
        for_each_combination(reps.size(), k, [&](std::span<const std::size_t> idx) {
            auto pts = pick(reps, idx);
            const auto g = OneInclusionGraph::build(h.project(pts), pts.size());
            const auto md = max_average_degree(g, subset_cap);
            best.exact = best.exact && md.exact;
            if (md.value > best.value) {
                best.value = md.value;
                best.points = std::move(pts);
            }
            return false;
        });
    }
    return best;
}

std::size_t oig_sample_bound(const HypothesisClass& h, double r, std::size_t max_n, bool* used_bound) {
    require(r > 0.0 && r < 1.0, "oig_sample_bound: r must lie in (0, 1)");
    const std::size_t reps = h.distinct_columns().size();
    std::vector<std::optional<DensityResult>> memo(reps + 1);
    bool bound = false;
    for (std::size_t n = 1; n <= max_n; ++n) {
        const std::size_t m = std::min(n + 1, reps);
        if (!memo[m]) memo[m] = density(h, m);
        bound = bound || !memo[m]->exact;
        if (static_cast<double>(memo[m]->value.ceil()) <= r * static_cast<double>(n + 1)) {
            if (used_bound) *used_bound = bound;
            return n;
        }
    }
    throw BudgetExceeded("oig_sample_bound: no n <= max_n meets the one-inclusion bound");
}

RealizableDimensionEstimate estimate_realizable_dimension(const HypothesisClass& h, double r, std::size_t trial_budget,
                                                          std::uint64_t seed, const RealizableDimensionOptions& opts) {
    require(r > 0.0 && r < 0.5, "estimate_realizable_dimension: r must lie in (0, 1/2)");
    RealizableDimensionEstimate est;
    est.upper = oig_sample_bound(h, r, opts.max_n, &est.upper_uses_bound);

    struct Generated {
        std::size_t member;
        std::vector<Instance> support;
    };
    const Rng root(seed);
    std::vector<Generated> family;
    for (std::size_t f = 0; f < opts.family_size; ++f) {
        Rng rng = root.split(f);
        Generated gen;
        gen.member = static_cast<std::size_t>(rng.uniform_index(h.size()));
        std::vector<Instance> all(h.n_domain());
        std::iota(all.begin(), all.end(), 0);
        const auto k = 1 + static_cast<std::size_t>(rng.uniform_index(h.n_domain()));
        for (std::size_t i = 0; i < k; ++i) std::swap(all[i], all[i + rng.uniform_index(all.size() - i)]);
        gen.support.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k));
        std::sort(gen.support.begin(), gen.support.end());
        family.push_back(std::move(gen));
    }

    std::size_t trials = 0;
    for (std::size_t n = 1; n <= est.upper; ++n) {
        if (trials + opts.family_size * opts.samples_per_distribution > trial_budget) {
            est.lower = n;
            est.budget_exhausted = true;
            return est;
        }
        double worst = 0.0;
        for (std::size_t f = 0; f < family.size(); ++f) {
            const auto& gen = family[f];
            const auto& target = h[gen.member];
            Rng rng = root.split(1'000'003ULL * n + f + 0x5bd1e995ULL);
            double total = 0.0;
            for (std::size_t t = 0; t < opts.samples_per_distribution; ++t) {
                SampleSequence s;
                for (std::size_t i = 0; i < n; ++i) {
                    const auto x = gen.support[rng.uniform_index(gen.support.size())];
                    s.push_back({x, target(x)});
                }
                std::size_t wrong = 0;
                for (auto x : gen.support) wrong += oig_predict(s, h, x) != target(x);
                total += static_cast<double>(wrong) / static_cast<double>(gen.support.size());
                ++trials;
            }
            worst = std::max(worst, total / static_cast<double>(opts.samples_per_distribution));
        }
        if (worst <= r) {
            est.lower = n;
            return est;
        }
    }
    est.lower = est.upper;
    return est;
}

} // namespace mapl
