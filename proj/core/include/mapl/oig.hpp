#pragma once

// One-inclusion graphs, exact minimum-max-out-degree orientations, and the
// one-inclusion predictor used as the realizable weak learner downstream.

#include <cstddef>
#include <mutex>
#include <shared_mutex>
#include <span>
#include <unordered_map>
#include <vector>

#include "mapl/core.hpp"

namespace mapl {

struct OigEdge {
    std::size_t direction = 0;
    /// Indices into the graph's vertex list, ascending.
    std::vector<std::size_t> members;
};

/// Hypergraph on a set of label vectors in Y^n. One edge per (direction,
/// context) group, singletons included, so every vertex lies in exactly n
/// edges, one per direction.
class OneInclusionGraph {
public:
    /// Builds the graph of `vertices` (deduplicated and sorted here).
    static OneInclusionGraph build(std::vector<LabelVector> vertices, std::size_t n);

    std::size_t n() const noexcept { return n_; }
    const std::vector<LabelVector>& vertices() const noexcept { return vertices_; }
    const std::vector<OigEdge>& edges() const noexcept { return edges_; }
    /// Edge id containing vertex v in `direction`.
    std::size_t edge_of(std::size_t v, std::size_t direction) const { return incident_[v * n_ + direction]; }
    /// Number of incident edges of size >= 2.
    std::size_t degree(std::size_t v) const;
    /// Index of `vertex` in vertices(), or vertices().size() if absent.
    std::size_t find(const LabelVector& vertex) const;

private:
    std::size_t n_ = 0;
    std::vector<LabelVector> vertices_;
    std::vector<OigEdge> edges_;
    std::vector<std::size_t> incident_;
};

/// Head vertex per edge, plus the resulting maximum out-degree.
struct Orientation {
    std::vector<std::size_t> head;
    std::size_t max_out_degree = 0;
};

/// Incident edges of v whose head is some other vertex.
std::size_t out_degree(const OneInclusionGraph& g, std::span<const std::size_t> head, std::size_t v);
std::size_t max_out_degree(const OneInclusionGraph& g, std::span<const std::size_t> head);

/// Tries to orient g with every out-degree <= k. Fills `head` on success.
bool orient_within(const OneInclusionGraph& g, std::size_t k, std::vector<std::size_t>* head);

/// Orientation achieving the exact minimum maximum out-degree (binary search
/// on k, each threshold decided by max-flow).
Orientation min_max_outdegree_orientation(const OneInclusionGraph& g);

/// (1/|V|) * sum over edges of size >= 2 of the edge size.
Rational average_degree(const OneInclusionGraph& g);

/// Average out-degree form: max over U of (sum_e (|e cap U| - 1)_+) / |U|.
/// Exact, via Dinkelbach iteration over min-cut selection problems.
Rational max_average_outdegree(const OneInclusionGraph& g);

struct DegreeBound {
    Rational value;
    /// False when `value` is only a lower bound on the maximal average degree.
    bool exact = true;
};

/// Maximal average degree over induced subgraphs. Exhaustive when
/// |V| <= subset_cap; otherwise the larger of avgdeg(G) and the exact
/// average out-degree density, flagged as a lower bound.
DegreeBound max_average_degree(const OneInclusionGraph& g, std::size_t subset_cap = 20);

/// Memo of orientations keyed by the projected vertex set. Safe for
/// concurrent readers with a single writer at a time.
class OrientationCache {
public:
    explicit OrientationCache(std::size_t max_entries = 1 << 16) : max_entries_(max_entries) {}

    /// Orientation of the graph on `vertices` (sorted, distinct) in Y^n.
    std::vector<std::size_t> heads_for(const OneInclusionGraph& g);

    std::size_t size() const;
    void clear();

private:
    struct KeyHash {
        std::size_t operator()(const std::vector<Label>& k) const noexcept;
    };

    std::size_t max_entries_;
    mutable std::shared_mutex mutex_;
    std::unordered_map<std::vector<Label>, std::vector<std::size_t>, KeyHash> map_;
};

/// Process-wide cache used when callers do not supply their own.
OrientationCache& default_orientation_cache();

/// The one-inclusion prediction at x after training on s.
///
/// The class is projected onto the distinct instances among the training
/// points and x, ordered by (column id, instance); the graph is given a
/// minimum-max-out-degree orientation, and the answer is the x-coordinate of
/// the head of the edge (in x's direction) holding the vertices consistent
/// with s. Because the coordinate order depends only on the instance set,
/// the predictor is symmetric in its training sequence, and one orientation
/// serves every leave-one-out split of a fixed set.
///
/// Throws NotRealizable if no member of H is consistent with s.
Label oig_predict(std::span<const Example> s, const HypothesisClass& h, Instance x,
                  OrientationCache* cache = nullptr);

/// oig_predict at each of `queries`, sharing the validation of s.
std::vector<Label> oig_predict_many(std::span<const Example> s, const HypothesisClass& h,
                                    std::span<const Instance> queries, OrientationCache* cache = nullptr);

/// The full prediction table of the one-inclusion learner trained on s.
Hypothesis oig_learn(std::span<const Example> s, const HypothesisClass& h, OrientationCache* cache = nullptr);

} // namespace mapl
