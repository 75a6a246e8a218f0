#include "mapl/oig.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>

#include "mapl/max_flow.hpp"

namespace mapl {

namespace {

constexpr Label kWildcard = std::numeric_limits<Label>::max();

std::int64_t sized_degree_term(std::size_t c) { return c >= 2 ? static_cast<std::int64_t>(c) : 0; }

} // namespace

OneInclusionGraph OneInclusionGraph::build(std::vector<LabelVector> vertices, std::size_t n) {
    for (const auto& v : vertices) require(v.size() == n, "build_oig: vertex length differs from n");
    std::sort(vertices.begin(), vertices.end());
    vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());

    OneInclusionGraph g;
    g.n_ = n;
    g.vertices_ = std::move(vertices);
    g.incident_.assign(g.vertices_.size() * n, 0);
    for (std::size_t dir = 0; dir < n; ++dir) {
        std::map<LabelVector, std::size_t> by_context;
        for (std::size_t v = 0; v < g.vertices_.size(); ++v) {
            LabelVector ctx = g.vertices_[v];
            ctx[dir] = kWildcard;
            auto [it, inserted] = by_context.emplace(std::move(ctx), g.edges_.size());
            if (inserted) g.edges_.push_back(OigEdge{dir, {}});
            g.edges_[it->second].members.push_back(v);
            g.incident_[v * n + dir] = it->second;
        }
    }
    return g;
}

std::size_t OneInclusionGraph::degree(std::size_t v) const {
    std::size_t d = 0;
    for (std::size_t dir = 0; dir < n_; ++dir) d += edges_[edge_of(v, dir)].members.size() >= 2;
    return d;
}

std::size_t OneInclusionGraph::find(const LabelVector& vertex) const {
    auto it = std::lower_bound(vertices_.begin(), vertices_.end(), vertex);
    if (it == vertices_.end() || *it != vertex) return vertices_.size();
    return static_cast<std::size_t>(it - vertices_.begin());
}

std::size_t out_degree(const OneInclusionGraph& g, std::span<const std::size_t> head, std::size_t v) {
    std::size_t out = 0;
    for (std::size_t dir = 0; dir < g.n(); ++dir) out += head[g.edge_of(v, dir)] != v;
    return out;
}

std::size_t max_out_degree(const OneInclusionGraph& g, std::span<const std::size_t> head) {
    std::size_t k = 0;
    for (std::size_t v = 0; v < g.vertices().size(); ++v) k = std::max(k, out_degree(g, head, v));
    return k;
}

bool orient_within(const OneInclusionGraph& g, std::size_t k, std::vector<std::size_t>* head) {
    const std::size_t nv = g.vertices().size();
    const std::size_t ne = g.edges().size();
    // Every vertex lies in exactly n edges, so out-degree <= k means the
    // vertex must head at least n - k of them.
    const std::size_t demand = g.n() > k ? g.n() - k : 0;
    const std::size_t source = ne + nv;
    const std::size_t sink = source + 1;
    MaxFlow flow(ne + nv + 2);
    std::vector<std::vector<std::size_t>> member_arcs(ne);
    for (std::size_t e = 0; e < ne; ++e) {
        flow.add_arc(source, e, 1);
        for (std::size_t v : g.edges()[e].members) member_arcs[e].push_back(flow.add_arc(e, ne + v, 1));
    }
    if (demand > 0)
        for (std::size_t v = 0; v < nv; ++v) flow.add_arc(ne + v, sink, static_cast<std::int64_t>(demand));
    const auto pushed = flow.run(source, sink);
    if (pushed != static_cast<std::int64_t>(demand * nv)) return false;
    if (head != nullptr) {
        head->assign(ne, 0);
        for (std::size_t e = 0; e < ne; ++e) {
            const auto& members = g.edges()[e].members;
            std::size_t chosen = members.front();
            for (std::size_t j = 0; j < members.size(); ++j)
                if (flow.flow_on(member_arcs[e][j]) > 0) {
                    chosen = members[j];
                    break;
                }
            (*head)[e] = chosen;
        }
    }
    return true;
}

Orientation min_max_outdegree_orientation(const OneInclusionGraph& g) {
    Orientation best;
    if (g.vertices().empty()) return best;
    std::size_t lo = 0;
    std::size_t hi = g.n();
    orient_within(g, hi, &best.head);
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        std::vector<std::size_t> head;
        if (orient_within(g, mid, &head)) {
            hi = mid;
            best.head = std::move(head);
        } else {
            lo = mid + 1;
        }
    }
    // Re-run at the optimum so the result does not depend on search history.
    orient_within(g, lo, &best.head);
    best.max_out_degree = max_out_degree(g, best.head);
    return best;
}

Rational average_degree(const OneInclusionGraph& g) {
    if (g.vertices().empty()) return Rational(0);
    std::int64_t total = 0;
    for (const auto& e : g.edges()) total += sized_degree_term(e.members.size());
    return Rational(total, static_cast<std::int64_t>(g.vertices().size()));
}

Rational max_average_outdegree(const OneInclusionGraph& g) {
    const std::size_t nv = g.vertices().size();
    if (nv == 0) return Rational(0);
    const std::size_t ne = g.edges().size();
    const auto n = static_cast<std::int64_t>(g.n());

    // F(W) = sum_{v in W} n - #{edges meeting W}.
    auto value_of = [&](const std::vector<bool>& in_w, std::int64_t* size) {
        std::int64_t f = 0;
        std::int64_t w = 0;
        for (std::size_t v = 0; v < nv; ++v)
            if (in_w[v]) {
                f += n;
                ++w;
            }
        for (const auto& e : g.edges())
            if (std::any_of(e.members.begin(), e.members.end(), [&](std::size_t v) { return in_w[v]; })) --f;
        *size = w;
        return f;
    };

    std::vector<bool> all(nv, true);
    std::int64_t size = 0;
    std::int64_t fv = value_of(all, &size);
    Rational lambda(fv, size);
    constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;
    for (int iter = 0; iter < 1000; ++iter) {
        const std::int64_t p = lambda.num();
        const std::int64_t q = lambda.den();
        const std::size_t source = nv + ne;
        const std::size_t sink = source + 1;
        MaxFlow flow(nv + ne + 2);
        std::int64_t positive = 0;
        for (std::size_t v = 0; v < nv; ++v) {
            const std::int64_t w = q * n - p;
            if (w > 0) {
                flow.add_arc(source, v, w);
                positive += w;
            } else if (w < 0) {
                flow.add_arc(v, sink, -w);
            }
        }
        for (std::size_t e = 0; e < ne; ++e) {
            for (std::size_t v : g.edges()[e].members) flow.add_arc(v, nv + e, kInf);
            flow.add_arc(nv + e, sink, q);
        }
        const std::int64_t best = positive - flow.run(source, sink);
        if (best <= 0) break;
        const auto side = flow.source_side(source);
        std::vector<bool> in_w(nv);
        for (std::size_t v = 0; v < nv; ++v) in_w[v] = side[v];
        const std::int64_t f = value_of(in_w, &size);
        if (size == 0) break;
        Rational next(f, size);
        if (next <= lambda) break;
        lambda = next;
    }
    return lambda;
}

DegreeBound max_average_degree(const OneInclusionGraph& g, std::size_t subset_cap) {
    const std::size_t nv = g.vertices().size();
    if (nv == 0) return {Rational(0), true};
    if (nv > subset_cap || nv >= 63) {
        Rational lb = std::max(average_degree(g), max_average_outdegree(g));
        return {lb, false};
    }
    // Gray-code walk over all nonempty subsets; each flip touches n edges.
    std::vector<std::size_t> count(g.edges().size(), 0);
    std::int64_t sum = 0;
    std::int64_t members = 0;
    std::int64_t best_num = 0;
    std::int64_t best_den = 1;
    std::uint64_t prev_gray = 0;
    const std::uint64_t total = 1ULL << nv;
    for (std::uint64_t i = 1; i < total; ++i) {
        const std::uint64_t gray = i ^ (i >> 1);
        const std::uint64_t diff = gray ^ prev_gray;
        prev_gray = gray;
        const auto v = static_cast<std::size_t>(__builtin_ctzll(diff));
        const bool adding = (gray & diff) != 0;
        members += adding ? 1 : -1;
        for (std::size_t dir = 0; dir < g.n(); ++dir) {
            auto& c = count[g.edge_of(v, dir)];
            sum -= sized_degree_term(c);
            c += adding ? 1 : static_cast<std::size_t>(-1);
            sum += sized_degree_term(c);
        }
        if (members > 0 && static_cast<__int128>(sum) * best_den > static_cast<__int128>(best_num) * members) {
            best_num = sum;
            best_den = members;
        }
    }
    return {Rational(best_num, best_den), true};
}

// ---- cache ---------------------------------------------------------------------

std::size_t OrientationCache::KeyHash::operator()(const std::vector<Label>& k) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (Label l : k) {
        h ^= l;
        h *= 0x100000001b3ULL;
    }
    return static_cast<std::size_t>(h);
}

std::vector<std::size_t> OrientationCache::heads_for(const OneInclusionGraph& g) {
    std::vector<Label> key;
    key.reserve(1 + g.vertices().size() * g.n());
    key.push_back(static_cast<Label>(g.n()));
    for (const auto& v : g.vertices()) key.insert(key.end(), v.begin(), v.end());
    {
        std::shared_lock lock(mutex_);
        if (auto it = map_.find(key); it != map_.end()) return it->second;
    }
    auto heads = min_max_outdegree_orientation(g).head;
    std::unique_lock lock(mutex_);
    if (map_.size() >= max_entries_) map_.clear();
    map_.emplace(std::move(key), heads);
    return heads;
}

std::size_t OrientationCache::size() const {
    std::shared_lock lock(mutex_);
    return map_.size();
}

void OrientationCache::clear() {
    std::unique_lock lock(mutex_);
    map_.clear();
}

OrientationCache& default_orientation_cache() {
    static OrientationCache cache;
    return cache;
}

// ---- predictor -------------------------------------------------------------------

namespace {

/// Predicts at x from the distinct training examples (points ascending).
/// Coordinates are ordered by (column id, instance), so the graph depends
/// only on the instance set, and on x only through its column when x is new.
Label predict_with(const HypothesisClass& h, std::span<const Instance> train_points,
                   std::span<const Label> train_labels, Instance x, OrientationCache& cache) {
    if (auto it = std::lower_bound(train_points.begin(), train_points.end(), x);
        it != train_points.end() && *it == x)
        return train_labels[static_cast<std::size_t>(it - train_points.begin())];

    auto before = [&](Instance a, Instance b) {
        const auto ca = h.column_of(a);
        const auto cb = h.column_of(b);
        return ca != cb ? ca < cb : a < b;
    };
    std::vector<std::size_t> order(train_points.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return before(train_points[i], train_points[j]); });
    std::vector<Instance> points;
    std::vector<Label> expect;
    std::size_t q = order.size();
    for (std::size_t i : order) {
        if (q == order.size() && before(x, train_points[i])) {
            q = points.size();
            points.push_back(x);
            expect.push_back(0);
        }
        points.push_back(train_points[i]);
        expect.push_back(train_labels[i]);
    }
    if (q == order.size()) {
        q = points.size();
        points.push_back(x);
        expect.push_back(0);
    }

    auto g = OneInclusionGraph::build(h.project(points), points.size());
    const auto heads = cache.heads_for(g);
    for (std::size_t v = 0; v < g.vertices().size(); ++v) {
        const auto& vert = g.vertices()[v];
        bool consistent = true;
        for (std::size_t j = 0; j < points.size() && consistent; ++j)
            consistent = j == q || vert[j] == expect[j];
        if (consistent) return g.vertices()[heads[g.edge_of(v, q)]][q];
    }
    throw NotRealizable("oig_predict: training sequence is not realizable by the class");
}

void distinct_training(std::span<const Example> s, const HypothesisClass& h, std::vector<Instance>* points,
                       std::vector<Label>* labels) {
    std::vector<Example> sorted(s.begin(), s.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        require(sorted[i].x < h.n_domain() && sorted[i].y < h.n_labels(), "oig_predict: example out of range");
        if (i > 0 && sorted[i].x == sorted[i - 1].x)
            throw NotRealizable("oig_predict: training sequence assigns two labels to one instance");
        points->push_back(sorted[i].x);
        labels->push_back(sorted[i].y);
    }
    if (!h.realizes(s)) throw NotRealizable("oig_predict: training sequence is not realizable by the class");
}

} // namespace

Label oig_predict(std::span<const Example> s, const HypothesisClass& h, Instance x, OrientationCache* cache) {
    require(x < h.n_domain(), "oig_predict: query instance out of range");
    std::vector<Instance> points;
    std::vector<Label> labels;
    distinct_training(s, h, &points, &labels);
    return predict_with(h, points, labels, x, cache ? *cache : default_orientation_cache());
}

std::vector<Label> oig_predict_many(std::span<const Example> s, const HypothesisClass& h,
                                    std::span<const Instance> queries, OrientationCache* cache) {
    std::vector<Instance> points;
    std::vector<Label> labels;
    distinct_training(s, h, &points, &labels);
    auto& c = cache ? *cache : default_orientation_cache();
    // Off the training set, the answer depends on x only through its column.
    std::vector<bool> trained(h.n_domain(), false);
    for (Instance x : points) trained[x] = true;
    std::map<std::size_t, Label> by_column;
    std::vector<Label> out;
    out.reserve(queries.size());
    for (Instance x : queries) {
        require(x < h.n_domain(), "oig_predict: query instance out of range");
        if (trained[x]) {
            out.push_back(predict_with(h, points, labels, x, c));
            continue;
        }
        auto [it, fresh] = by_column.try_emplace(h.column_of(x), 0);
        if (fresh) it->second = predict_with(h, points, labels, x, c);
        out.push_back(it->second);
    }
    return out;
}

Hypothesis oig_learn(std::span<const Example> s, const HypothesisClass& h, OrientationCache* cache) {
    std::vector<Instance> xs(h.n_domain());
    std::iota(xs.begin(), xs.end(), 0);
    return Hypothesis(oig_predict_many(s, h, xs, cache));
}

} // namespace mapl
