#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "mapl/dimensions.hpp"
#include "mapl/harness.hpp"
#include "oracles.hpp"

using namespace mapl;

namespace {

HypothesisClass cube(std::size_t d) {
    std::vector<Hypothesis> members;
    for (const auto& v : oracle::all_vectors(d, 2)) members.emplace_back(v);
    return HypothesisClass(d, 2, std::move(members));
}

std::vector<LabelVector> cycle6() { return {{0, 0}, {0, 1}, {1, 1}, {1, 2}, {2, 2}, {2, 0}}; }

HypothesisClass cycle_class() {
    std::vector<Hypothesis> members;
    for (auto& v : cycle6()) members.emplace_back(v);
    return HypothesisClass(2, 3, std::move(members));
}

HypothesisClass random_small_class(Rng& rng) {
    const auto nd = 1 + rng.uniform_index(4);
    const auto k = 2 + rng.uniform_index(3);
    const auto size = 1 + rng.uniform_index(40);
    return gen_random_class(nd, k, size, rng);
}

} // namespace

TEST(Natarajan, FullCubeHasDimensionD) {
    for (std::size_t d = 1; d <= 4; ++d) {
        const auto r = natarajan_dimension(cube(d), 8);
        EXPECT_EQ(r.dimension, d);
        ASSERT_TRUE(r.witness);
        EXPECT_EQ(r.witness->points.size(), d);
        EXPECT_EQ(r.status, SearchStatus::exact);
    }
}

TEST(Natarajan, ConstantsHaveDimensionOne) {
    for (std::size_t k = 2; k <= 5; ++k) {
        const auto h = gen_constant_class(k, 4);
        EXPECT_EQ(natarajan_dimension(h, 4).dimension, 1u);
        EXPECT_EQ(oracle::natarajan(h), 1u);
    }
}

TEST(Natarajan, SingleHypothesisHasDimensionZero) {
    HypothesisClass h(3, 3, {Hypothesis({0, 1, 2})});
    const auto r = natarajan_dimension(h, 3);
    EXPECT_EQ(r.dimension, 0u);
    EXPECT_FALSE(r.witness);
}

TEST(Natarajan, WitnessIsGenuine) {
    Rng rng(11);
    for (int i = 0; i < 50; ++i) {
        const auto h = random_small_class(rng);
        const auto r = natarajan_dimension(h, 4);
        if (!r.witness) continue;
        const auto& w = *r.witness;
        const auto proj = oracle::projection(h, w.points);
        for (std::uint32_t mask = 0; mask < (1u << w.points.size()); ++mask) {
            LabelVector mix(w.points.size());
            for (std::size_t j = 0; j < mix.size(); ++j) {
                ASSERT_NE(w.f[j], w.g[j]);
                mix[j] = (mask >> j & 1u) ? w.g[j] : w.f[j];
            }
            EXPECT_TRUE(proj.count(mix));
        }
    }
}

TEST(Natarajan, TinyBudgetReportsLowerBound) {
    const auto r = natarajan_dimension(cube(4), 4, 3);
    EXPECT_EQ(r.status, SearchStatus::lower_bound);
    EXPECT_LT(r.dimension, 4u);
}

TEST(PseudoCube, BinarySquareIsPseudoCube) {
    std::vector<LabelVector> sq{{0, 0}, {0, 1}, {1, 0}, {1, 1}};
    EXPECT_TRUE(is_pseudo_cube(sq, 2));
}

TEST(PseudoCube, LonePointIsNot) {
    std::vector<LabelVector> one{{0, 0}};
    EXPECT_FALSE(is_pseudo_cube(one, 2));
    std::vector<LabelVector> one1{{0}};
    EXPECT_FALSE(is_pseudo_cube(one1, 1));
    EXPECT_FALSE(is_pseudo_cube(std::vector<LabelVector>{}, 2));
}

TEST(PseudoCube, SixCycleMatchesOracle) {
    const auto c = cycle6();
    EXPECT_TRUE(oracle::is_pseudo_cube(c, 2));
    EXPECT_TRUE(is_pseudo_cube(c, 2));
}

TEST(PseudoCube, InvariantUnderPermutationAndRenaming) {
    Rng rng(4);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t d = 1 + rng.uniform_index(3);
        auto b = gen_random_vertices(d, 3, 1 + rng.uniform_index(12), rng);
        const bool base = is_pseudo_cube(b, d);
        EXPECT_EQ(base, oracle::is_pseudo_cube(b, d));
        std::vector<std::size_t> perm(d);
        std::iota(perm.begin(), perm.end(), 0);
        std::reverse(perm.begin(), perm.end());
        std::vector<std::vector<Label>> rename(d, {2, 0, 1});
        auto moved = b;
        for (auto& v : moved) {
            LabelVector w(d);
            for (std::size_t i = 0; i < d; ++i) w[i] = rename[i][v[perm[i]]];
            v = w;
        }
        EXPECT_EQ(is_pseudo_cube(moved, d), base);
    }
}

TEST(Ds, CubeAndSingleton) {
    EXPECT_EQ(ds_dimension(cube(3), 5).dimension, 3u);
    HypothesisClass one(2, 2, {Hypothesis({1, 1})});
    EXPECT_EQ(ds_dimension(one, 2).dimension, 0u);
}

TEST(Ds, CycleSeparatesFromNatarajan) {
    const auto h = cycle_class();
    const auto ds = ds_dimension(h, 2);
    EXPECT_EQ(ds.dimension, 2u);
    ASSERT_TRUE(ds.witness);
    EXPECT_EQ(ds.witness->cube.size(), 6u);
    EXPECT_TRUE(is_pseudo_cube(ds.witness->cube, 2));
    EXPECT_EQ(natarajan_dimension(h, 2).dimension, 1u);
    EXPECT_EQ(oracle::natarajan(h), 1u);
    EXPECT_EQ(oracle::ds(h), 2u);
}

TEST(Ds, ConstantsHaveDimensionOne) {
    EXPECT_EQ(ds_dimension(gen_constant_class(4, 3), 3).dimension, 1u);
    EXPECT_EQ(oracle::ds(gen_constant_class(4, 3)), 1u);
}

TEST(Ds, CoreIsMaximalPseudoCube) {
    Rng rng(21);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t d = 1 + rng.uniform_index(3);
        auto b = gen_random_vertices(d, 3, 1 + rng.uniform_index(14), rng);
        const auto core = pseudo_cube_core(b, d);
        EXPECT_EQ(!core.empty(), oracle::contains_pseudo_cube(b, d));
        if (!core.empty()) EXPECT_TRUE(is_pseudo_cube(core, d));
    }
}

TEST(Dimensions, AgreeWithOraclesOnRandomClasses) {
    Rng rng(2024);
    for (int i = 0; i < 60; ++i) {
        const auto h = random_small_class(rng);
        const auto dn = natarajan_dimension(h, 4).dimension;
        const auto dds = ds_dimension(h, 4).dimension;
        EXPECT_EQ(dn, oracle::natarajan(h));
        EXPECT_EQ(dds, oracle::ds(h));
        EXPECT_LE(dn, dds);
    }
}

TEST(Dimensions, BinaryCaseEqualsVc) {
    Rng rng(8);
    for (int i = 0; i < 60; ++i) {
        const auto h = gen_random_class(1 + rng.uniform_index(4), 2, 1 + rng.uniform_index(16), rng);
        const auto vc = oracle::vc(h);
        EXPECT_EQ(natarajan_dimension(h, 4).dimension, vc);
        EXPECT_EQ(ds_dimension(h, 4).dimension, vc);
    }
}

TEST(Density, CubeHasDensityM) {
    for (std::size_t m = 1; m <= 4; ++m) EXPECT_EQ(density(cube(m), m).value, Rational(static_cast<std::int64_t>(m)));
}

TEST(Density, SingleHypothesisIsZero) {
    HypothesisClass h(3, 2, {Hypothesis({0, 1, 0})});
    EXPECT_EQ(density(h, 3).value, Rational(0));
}

TEST(Density, CycleHasDensityTwo) { EXPECT_EQ(density(cycle_class(), 2).value, Rational(2)); }

TEST(Density, MatchesOracleOverTuplesWithRepetition) {
    Rng rng(17);
    for (int trial = 0; trial < 40; ++trial) {
        const auto h = gen_random_class(1 + rng.uniform_index(3), 2 + rng.uniform_index(2), 1 + rng.uniform_index(10), rng);
        for (std::size_t m = 1; m <= 3; ++m) {
            // Every ordered m-tuple, repetition allowed; the graph lives on
            // the distinct points of the tuple.
            std::pair<std::int64_t, std::int64_t> best{0, 1};
            std::vector<Instance> t(m, 0);
            while (true) {
                std::vector<Instance> pts(t.begin(), t.end());
                std::sort(pts.begin(), pts.end());
                pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
                const auto g = oracle::build_graph(oracle::projection(h, pts), pts.size());
                if (g.vertices.size() <= 16) {
                    const auto md = oracle::max_average_degree(g);
                    if (md.first * best.second > best.first * md.second) best = md;
                }
                std::size_t i = m;
                while (i > 0 && t[i - 1] + 1 == h.n_domain()) t[--i] = 0;
                if (i == 0) break;
                ++t[i - 1];
            }
            const auto got = density(h, m);
            ASSERT_TRUE(got.exact);
            EXPECT_EQ(got.value, Rational(best.first, best.second)) << "m=" << m;
        }
    }
}

TEST(Density, NondecreasingInM) {
    Rng rng(99);
    for (int trial = 0; trial < 30; ++trial) {
        const auto h = random_small_class(rng);
        Rational prev(0);
        for (std::size_t m = 1; m <= h.n_domain() + 1; ++m) {
            const auto cur = density(h, m).value;
            EXPECT_GE(cur, prev);
            prev = cur;
        }
    }
}

TEST(RealizableDimension, SingleHypothesisIsOne) {
    HypothesisClass h(4, 3, {Hypothesis({0, 2, 1, 0})});
    const auto est = estimate_realizable_dimension(h, 0.1, 10000, 1);
    EXPECT_EQ(est.lower, 1u);
    EXPECT_EQ(est.upper, 1u);
    EXPECT_FALSE(est.budget_exhausted);
}

TEST(RealizableDimension, CubeUpperMeetsDensityBound) {
    const double r = 1.0 / (9.0 * std::numbers::e);
    for (std::size_t d = 1; d <= 3; ++d) {
        const auto est = estimate_realizable_dimension(cube(d), r, 4000, 5);
        std::size_t n = 1;
        while (static_cast<double>(d) / static_cast<double>(n + 1) > r) ++n;
        EXPECT_LE(est.upper, n);
        EXPECT_LE(est.lower, est.upper);
    }
}

TEST(RealizableDimension, BinaryConstantsUpperFromUnitDensity) {
    const auto h = gen_constant_class(2, 5);
    const double r = 0.2;
    EXPECT_LE(density(h, 5).value, Rational(1));
    const auto est = estimate_realizable_dimension(h, r, 100000, 3);
    std::size_t n = 1;
    while (static_cast<double>(density(h, n + 1).value.ceil()) > r * static_cast<double>(n + 1)) ++n;
    EXPECT_EQ(est.upper, n);
}

TEST(RealizableDimension, ExhaustedBudgetIsFlagged) {
    const auto est = estimate_realizable_dimension(cube(3), 0.05, 1, 5);
    EXPECT_TRUE(est.budget_exhausted);
    EXPECT_LE(est.lower, est.upper);
}
