#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "mapl/harness.hpp"
#include "mapl/oig.hpp"
#include "oracles.hpp"

using namespace mapl;

namespace {

oracle::Graph oracle_graph(const std::vector<LabelVector>& vs, std::size_t n) {
    return oracle::build_graph(std::set<LabelVector>(vs.begin(), vs.end()), n);
}

} // namespace

TEST(OneInclusionGraph, SquareHasFourEdgesOfSizeTwo) {
    const auto g = OneInclusionGraph::build({{0, 0}, {0, 1}, {1, 0}, {1, 1}}, 2);
    std::size_t big = 0;
    for (const auto& e : g.edges()) big += e.members.size() >= 2;
    EXPECT_EQ(big, 4u);
    for (std::size_t v = 0; v < 4; ++v) EXPECT_EQ(g.degree(v), 2u);
    EXPECT_EQ(average_degree(g), Rational(2));
}

TEST(OneInclusionGraph, EveryVertexInOneEdgePerDirection) {
    Rng rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + rng.uniform_index(4);
        const auto g = OneInclusionGraph::build(gen_random_vertices(n, 3, 1 + rng.uniform_index(20), rng), n);
        for (std::size_t v = 0; v < g.vertices().size(); ++v)
            for (std::size_t dir = 0; dir < n; ++dir) {
                const auto& e = g.edges()[g.edge_of(v, dir)];
                EXPECT_EQ(e.direction, dir);
                EXPECT_TRUE(std::binary_search(e.members.begin(), e.members.end(), v));
            }
    }
}

TEST(OneInclusionGraph, NontrivialEdgesMatchPairwiseScan) {
    Rng rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + rng.uniform_index(4);
        const auto vs = gen_random_vertices(n, 3, 1 + rng.uniform_index(20), rng);
        const auto g = OneInclusionGraph::build(vs, n);
        const auto o = oracle_graph(vs, n);
        ASSERT_EQ(g.vertices(), o.vertices);
        std::multiset<std::vector<std::size_t>> mine;
        std::multiset<std::vector<std::size_t>> theirs;
        for (const auto& e : g.edges())
            if (e.members.size() >= 2) mine.insert(e.members);
        for (const auto& e : o.edges)
            if (e.size() >= 2) theirs.insert(e);
        EXPECT_EQ(mine, theirs);
    }
}

TEST(Orientation, SquareNeedsOutDegreeOne) {
    const auto g = OneInclusionGraph::build({{0, 0}, {0, 1}, {1, 0}, {1, 1}}, 2);
    const auto o = min_max_outdegree_orientation(g);
    EXPECT_EQ(o.max_out_degree, 1u);
    EXPECT_EQ(max_out_degree(g, o.head), 1u);
    std::vector<std::size_t> head;
    EXPECT_FALSE(orient_within(g, 0, &head));
}

TEST(Orientation, MatchesBruteForce) {
    Rng rng(77);
    int checked = 0;
    while (checked < 150) {
        const std::size_t n = 1 + rng.uniform_index(3);
        const auto vs = gen_random_vertices(n, 3, 1 + rng.uniform_index(10), rng);
        const auto o = oracle_graph(vs, n);
        std::size_t choices = 1;
        for (const auto& e : o.edges) choices = std::min<std::size_t>(choices * e.size(), 1'000'000);
        if (choices > 50'000) continue;
        const auto g = OneInclusionGraph::build(vs, n);
        const auto got = min_max_outdegree_orientation(g);
        EXPECT_EQ(got.max_out_degree, oracle::brute_min_max_outdegree(o));
        EXPECT_EQ(oracle::search_min_max_outdegree(o), oracle::brute_min_max_outdegree(o));
        EXPECT_EQ(max_out_degree(g, got.head), got.max_out_degree);
        for (std::size_t e = 0; e < g.edges().size(); ++e) {
            const auto& m = g.edges()[e].members;
            EXPECT_TRUE(std::binary_search(m.begin(), m.end(), got.head[e]));
        }
        ++checked;
    }
}

TEST(Orientation, OptimumIsCeilOfAverageOutDegreeDensity) {
    Rng rng(12);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + rng.uniform_index(4);
        const auto g = OneInclusionGraph::build(gen_random_vertices(n, 3, 1 + rng.uniform_index(30), rng), n);
        EXPECT_EQ(static_cast<std::int64_t>(min_max_outdegree_orientation(g).max_out_degree),
                  max_average_outdegree(g).ceil());
    }
}

TEST(MaxAverageDegree, MatchesOracle) {
    Rng rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + rng.uniform_index(3);
        const auto vs = gen_random_vertices(n, 3, 1 + rng.uniform_index(12), rng);
        const auto got = max_average_degree(OneInclusionGraph::build(vs, n));
        const auto want = oracle::max_average_degree(oracle_graph(vs, n));
        EXPECT_TRUE(got.exact);
        EXPECT_EQ(got.value, Rational(want.first, want.second));
    }
}

TEST(MaxAverageDegree, LowerBoundPathStaysBelowExact) {
    Rng rng(8);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 2 + rng.uniform_index(2);
        const auto g = OneInclusionGraph::build(gen_random_vertices(n, 3, 4 + rng.uniform_index(10), rng), n);
        const auto exact = max_average_degree(g);
        const auto bound = max_average_degree(g, 2);
        EXPECT_FALSE(bound.exact);
        EXPECT_LE(bound.value, exact.value);
        EXPECT_GE(bound.value, average_degree(g));
    }
}

TEST(OrientationCache, CachedHeadsAreOptimal) {
    OrientationCache cache(4);
    Rng rng(2);
    for (int trial = 0; trial < 20; ++trial) {
        const auto g = OneInclusionGraph::build(gen_random_vertices(3, 3, 10, rng), 3);
        const auto a = cache.heads_for(g);
        const auto b = cache.heads_for(g);
        EXPECT_EQ(a, b);
        EXPECT_EQ(max_out_degree(g, a), min_max_outdegree_orientation(g).max_out_degree);
        EXPECT_LE(cache.size(), 4u);
    }
    cache.clear();
    EXPECT_EQ(cache.size(), 0u);
}

TEST(OigPredict, ReturnsTrainingLabelOnTrainingPoint) {
    const auto h = gen_singleton_class(5, 3);
    const SampleSequence s{{1, 2}, {3, 0}};
    EXPECT_EQ(oig_predict(s, h, 1), 2u);
    EXPECT_EQ(oig_predict(s, h, 3), 0u);
    // Realizability forces 0 everywhere else.
    EXPECT_EQ(oig_predict(s, h, 4), 0u);
}

TEST(OigPredict, RejectsNonRealizableSample) {
    const auto h = gen_constant_class(3, 4);
    const SampleSequence s{{0, 1}, {2, 2}};
    EXPECT_THROW(oig_predict(s, h, 1), NotRealizable);
    const SampleSequence clash{{0, 1}, {0, 2}};
    EXPECT_THROW(oig_predict(clash, h, 1), NotRealizable);
    EXPECT_THROW(oig_predict(SampleSequence{{9, 0}}, h, 1), ContractViolation);
}

TEST(OigPredict, SymmetricInTrainingOrder) {
    Rng rng(40);
    for (int trial = 0; trial < 40; ++trial) {
        const auto h = gen_random_class(5, 3, 2 + rng.uniform_index(20), rng);
        const auto& target = h[rng.uniform_index(h.size())];
        SampleSequence s;
        for (int i = 0; i < 4; ++i) {
            const auto x = static_cast<Instance>(rng.uniform_index(5));
            s.push_back({x, target(x)});
        }
        auto shuffled = s;
        std::reverse(shuffled.begin(), shuffled.end());
        shuffled.push_back(shuffled.front());
        for (Instance x = 0; x < 5; ++x) EXPECT_EQ(oig_predict(s, h, x), oig_predict(shuffled, h, x));
    }
}

TEST(OigPredict, ManyAgreesWithSingle) {
    Rng rng(41);
    for (int trial = 0; trial < 40; ++trial) {
        const auto h = gen_random_class(6, 3, 2 + rng.uniform_index(30), rng);
        const auto& target = h[rng.uniform_index(h.size())];
        SampleSequence s;
        for (int i = 0; i < 3; ++i) {
            const auto x = static_cast<Instance>(rng.uniform_index(6));
            s.push_back({x, target(x)});
        }
        OrientationCache cache;
        const auto table = oig_learn(s, h, &cache);
        for (Instance x = 0; x < 6; ++x) EXPECT_EQ(table(x), oig_predict(s, h, x));
        EXPECT_TRUE(table.realizes(s));
    }
}

TEST(OigPredict, LeaveOneOutMistakesBoundedByOrientation) {
    Rng rng(55);
    for (int trial = 0; trial < 60; ++trial) {
        const auto h = gen_random_class(4, 3, 2 + rng.uniform_index(25), rng);
        std::vector<Instance> pts{0, 1, 2, 3};
        const std::size_t m = 2 + rng.uniform_index(3);
        pts.resize(m);
        const auto graph = oracle::build_graph(oracle::projection(h, pts), m);
        std::size_t choices = 1;
        for (const auto& e : graph.edges) choices = std::min<std::size_t>(choices * e.size(), 1'000'000);
        if (choices > 50'000) continue;
        const auto bound = oracle::brute_min_max_outdegree(graph);
        for (const auto& target : h.members()) {
            std::size_t mistakes = 0;
            for (std::size_t i = 0; i < m; ++i) {
                SampleSequence s;
                for (std::size_t j = 0; j < m; ++j)
                    if (j != i) s.push_back({pts[j], target(pts[j])});
                mistakes += oig_predict(s, h, pts[i]) != target(pts[i]);
            }
            EXPECT_LE(mistakes, bound);
        }
    }
}
