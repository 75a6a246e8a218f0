#include <gtest/gtest.h>

#include <cmath>

#include "mapl/harness.hpp"
#include "mapl/listlearn.hpp"

using namespace mapl;

TEST(AdaptiveReward, RightAndUncovered) {
    const Hypothesis h({1, 2});
    const std::vector<Hypothesis> none;
    const std::vector<Hypothesis> covering{Hypothesis({1, 0})};
    EXPECT_EQ(adaptive_reward(h, {0, 1}, none), 1);
    EXPECT_EQ(adaptive_reward(h, {0, 2}, none), 0);
    EXPECT_EQ(adaptive_reward(h, {0, 1}, covering), 0);
    EXPECT_EQ(adaptive_reward(h, {1, 2}, covering), 1);
}

TEST(MwCore, FollowsTheExponentialRecursion) {
    const std::vector<std::vector<double>> r{{1, 0, 0}, {0, 1, 1}, {1, 1, 0}};
    const auto ps = mw_core(r, 0.5);
    ASSERT_EQ(ps.size(), 3u);
    for (double v : ps[0]) EXPECT_NEAR(v, 1.0 / 3.0, 1e-15);
    // Weights after two rounds: e^{0.5}, e^{0.5}, e^{0.5}.
    for (double v : ps[2]) EXPECT_NEAR(v, 1.0 / 3.0, 1e-15);
    const double a = std::exp(0.5);
    EXPECT_NEAR(ps[1][0], a / (a + 2), 1e-15);
    EXPECT_NEAR(ps[1][1], 1 / (a + 2), 1e-15);
}

TEST(MwCore, RegretInequalityOnRandomRewards) {
    Rng rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t d = 1 + rng.uniform_index(20);
        const std::size_t T = 1 + rng.uniform_index(60);
        const double eta = 0.05 + 0.95 * rng.uniform01();
        std::vector<std::vector<double>> r(T, std::vector<double>(d));
        for (auto& row : r)
            for (auto& v : row) v = rng.uniform_index(3) == 0 ? rng.uniform01() : static_cast<double>(rng.uniform_index(2));
        const auto ps = mw_core(r, eta);
        double gained = 0.0;
        std::vector<double> per_expert(d, 0.0);
        for (std::size_t t = 0; t < T; ++t)
            for (std::size_t j = 0; j < d; ++j) {
                gained += ps[t][j] * r[t][j];
                per_expert[j] += r[t][j];
            }
        const double lnd = std::log(static_cast<double>(d));
        for (std::size_t j = 0; j < d; ++j)
            EXPECT_GE(gained + 1e-9, per_expert[j] / (1 + eta) - lnd / (eta * (1 + eta)));
    }
}

TEST(MwCore, RejectsBadInput) {
    const std::vector<std::vector<double>> r{{1.0}, {1.0, 0.0}};
    EXPECT_THROW(mw_core(r, 0.5), ContractViolation);
    EXPECT_THROW(mw_core(r, 0.0), ContractViolation);
    EXPECT_TRUE(mw_core({}, 0.5).empty());
}

TEST(MwListLearn, ShapesAndRewards) {
    Rng rng(9);
    const auto f = gen_random_class(5, 4, 12, rng);
    SampleSequence s;
    for (int i = 0; i < 30; ++i)
        s.push_back({static_cast<Instance>(rng.uniform_index(5)), static_cast<Label>(rng.uniform_index(4))});
    const auto out = mw_list_learn(20, s, 0.5, f, 77);
    ASSERT_EQ(out.chosen.size(), 20u);
    ASSERT_EQ(out.reward.size(), 20u);
    ASSERT_EQ(out.list.size(), 19u);
    for (std::size_t t = 0; t < 20; ++t) {
        ASSERT_LT(out.chosen[t], f.size());
        if (t + 1 < 20) EXPECT_EQ(out.list[t], f[out.chosen[t]]);
        const std::span<const Hypothesis> prefix(out.list.data(), t);
        EXPECT_EQ(out.reward[t], adaptive_reward(f[out.chosen[t]], s[t], prefix));
    }
    const auto again = mw_list_learn(20, s, 0.5, f, 77);
    EXPECT_EQ(again.chosen, out.chosen);
}

TEST(MwListLearn, RejectsShortSample) {
    const auto f = gen_constant_class(2, 2);
    const SampleSequence s{{0, 0}};
    EXPECT_THROW(mw_list_learn(2, s, 0.5, f, 0), ContractViolation);
    EXPECT_THROW(mw_list_learn(1, s, 1.5, f, 0), ContractViolation);
}

TEST(ListMiss, ConstantsExample) {
    // Three points, labels 0 / 1 / 2 with masses 1/2, 1/3, 1/6.
    const auto p = Distribution::exact(3, 3,
                                       {Rational(1, 2), 0, 0, 0, Rational(1, 3), 0, 0, 0, Rational(1, 6)});
    const Hypothesis f = Hypothesis::constant(3, 1);
    const std::vector<Hypothesis> none;
    const std::vector<Hypothesis> zero{Hypothesis::constant(3, 0)};
    const std::vector<Hypothesis> one{Hypothesis::constant(3, 1)};
    EXPECT_EQ(list_miss_probability_exact(f, none, p), Rational(1, 3));
    EXPECT_EQ(list_miss_probability_exact(f, zero, p), Rational(1, 3));
    EXPECT_EQ(list_miss_probability_exact(f, one, p), Rational(0));
    EXPECT_NEAR(list_miss_probability(f, zero, p), 1.0 / 3.0, 1e-12);
    EXPECT_NEAR(expected_adaptive_reward(f, none, p), 1.0 / 3.0, 1e-12);
}

TEST(ListMiss, ExactAndFloatingAgree) {
    Rng rng(4);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Rational> probs(12);
        std::int64_t total = 0;
        std::vector<std::int64_t> w(12);
        for (auto& v : w) total += v = static_cast<std::int64_t>(rng.uniform_index(5));
        if (total == 0) continue;
        for (std::size_t i = 0; i < 12; ++i) probs[i] = Rational(w[i], total);
        const auto p = Distribution::exact(4, 3, probs);
        const auto cls = gen_random_class(4, 3, 5, rng);
        const std::vector<Hypothesis> list(cls.members().begin() + 1, cls.members().end());
        EXPECT_NEAR(list_miss_probability(cls[0], list, p), list_miss_probability_exact(cls[0], list, p).to_double(),
                    1e-12);
    }
}

TEST(MwCore, ZeroRewardsStayUniform) {
    const std::vector<std::vector<double>> r(5, std::vector<double>(4, 0.0));
    for (const auto& p : mw_core(r, 1.0))
        for (double v : p) EXPECT_DOUBLE_EQ(v, 0.25);
}

TEST(MwCore, ClosedFormForOneRewardedExpert) {
    const double eta = 0.7;
    const std::vector<std::vector<double>> r(10, std::vector<double>{1.0, 0.0});
    const auto ps = mw_core(r, eta);
    for (std::size_t t = 0; t < ps.size(); ++t) {
        const double a = std::exp(eta * static_cast<double>(t));
        EXPECT_NEAR(ps[t][0], a / (a + 1), 1e-12);
        EXPECT_NEAR(ps[t][0] + ps[t][1], 1.0, 1e-12);
    }
}

TEST(MwListLearn, DegenerateSizes) {
    const auto one = gen_constant_class(1, 3);
    const SampleSequence s{{0, 0}, {1, 0}, {2, 0}};
    const auto out = mw_list_learn(3, s, 0.5, one, 1);
    ASSERT_EQ(out.list.size(), 2u);
    for (const auto& h : out.list) EXPECT_EQ(h, one[0]);
    EXPECT_TRUE(mw_list_learn(1, s, 0.5, gen_constant_class(3, 3), 1).list.empty());
}

TEST(MwListLearn, RewardsVanishOnceTheLabelIsCovered) {
    // All data labeled 2: once constant 2 is drawn, no member earns reward.
    const auto f = gen_constant_class(3, 2);
    const SampleSequence s(40, Example{0, 2});
    const auto out = mw_list_learn(40, s, 0.5, f, 3);
    bool covered = false;
    for (std::size_t t = 0; t < out.chosen.size(); ++t) {
        if (covered) EXPECT_EQ(out.reward[t], 0);
        covered = covered || out.chosen[t] == 2;
    }
    EXPECT_TRUE(covered);
}

TEST(ListMiss, HardConstantsListMissesOneThird) {
    const auto [h, p] = gen_appendix_a(11, 300);
    const std::vector<Hypothesis> list(h.members().begin() + 1, h.members().end());
    EXPECT_EQ(list_miss_probability_exact(h[0], list, p), Rational(1, 3));
    EXPECT_EQ(list_miss_probability_exact(h[0], std::vector<Hypothesis>{h[0]}, p), Rational(0));
}

TEST(ExpectedReward, NonincreasingAsPrefixGrows) {
    Rng rng(8);
    for (int trial = 0; trial < 30; ++trial) {
        const auto cls = gen_random_class(4, 4, 10, rng);
        const auto p = gen_random_distribution(4, 4, rng);
        for (const auto& f : cls.members()) {
            double prev = expected_adaptive_reward(f, {}, p);
            for (std::size_t len = 1; len <= cls.size(); ++len) {
                const std::span<const Hypothesis> prefix(cls.members().data(), len);
                const double cur = expected_adaptive_reward(f, prefix, p);
                EXPECT_LE(cur, prev + 1e-15);
                prev = cur;
            }
        }
    }
}
