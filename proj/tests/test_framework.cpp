#include <gtest/gtest.h>

#include <random>

#include "oracle.hpp"
#include "pka/errors.hpp"
#include "pka/framework.hpp"

namespace {

using pka::CovarianceSummary;
using pka::MomentSummary;

TEST(Decompose, PopulationVarianceExample) {
    const auto inst = pka::population_variance_instance();
    const auto parts = pka::decompose_check(inst, pka::summarize(std::vector<double>{1, 2, 3}),
                                            pka::summarize(std::vector<double>{4, 5}));
    EXPECT_NEAR(parts.a_term, 0.4, 1e-15);
    EXPECT_NEAR(parts.b_term, 0.1, 1e-15);
    EXPECT_NEAR(parts.g, 1.5, 1e-15);
    EXPECT_NEAR(parts.total(), 2.0, 1e-15);
}

TEST(Decompose, MeanHasNoRemainder) {
    const auto inst = pka::mean_instance();
    const auto parts = pka::decompose_check(inst, pka::summarize(std::vector<double>{1, 2, 3}),
                                            pka::summarize(std::vector<double>{10}));
    EXPECT_EQ(parts.g, 0.0);
    EXPECT_NEAR(parts.total(), 4.0, 1e-15);
}

TEST(Decompose, CovarianceExample) {
    const auto inst = pka::covariance_instance();
    const std::vector<pka::Point2> a{{1, 1}, {2, 2}};
    const std::vector<pka::Point2> b{{3, 0}};
    const CovarianceSummary c1 = pka::summarize_pairs(a);
    const CovarianceSummary c2 = pka::summarize_pairs(b);
    EXPECT_NEAR(inst.coefficient_a(c1.count(), c2.count()), 2.0 / 3.0, 1e-15);
    EXPECT_NEAR(inst.coefficient_b(c1.count(), c2.count()), 1.0 / 3.0, 1e-15);
    const auto parts = pka::decompose_check(inst, c1, c2);
    EXPECT_NEAR(parts.a_term, 2.0 / 3.0 * 0.25, 1e-15);
    EXPECT_EQ(parts.b_term, 0.0);
    EXPECT_NEAR(parts.g, -0.5, 1e-15);
    EXPECT_NEAR(parts.total(), -1.0 / 3.0, 1e-15);
}

TEST(Decompose, RejectsUndefinedStatistic) {
    const MomentSummary one = pka::summarize(std::vector<double>{1});
    EXPECT_THROW(pka::decompose_check(pka::population_variance_instance(), MomentSummary{}, one),
                 pka::StatisticUndefined);
    EXPECT_THROW(pka::decompose_check(pka::mean_instance(), one, MomentSummary{}),
                 pka::StatisticUndefined);
    EXPECT_THROW(pka::decompose_check(pka::covariance_instance(), CovarianceSummary{},
                                      CovarianceSummary{}),
                 pka::StatisticUndefined);
}

TEST(Decompose, InstancesCoherentOnRandomPairs) {
    std::mt19937_64 rng(404);
    const auto var = pka::population_variance_instance();
    const auto mean = pka::mean_instance();
    const auto cov = pka::covariance_instance();
    for (int i = 0; i < 200; ++i) {
        const auto s1 = pka::summarize(oracle::random_data(rng, 1, 500, 1e6));
        const auto s2 = pka::summarize(oracle::random_data(rng, 1, 500, 1e6));
        const auto pv = pka::decompose_check(var, s1, s2);
        EXPECT_TRUE(oracle::close(pv.total(), var.statistic(var.merge(s1, s2)), 1e-9));
        const auto pm = pka::decompose_check(mean, s1, s2);
        EXPECT_EQ(pm.g, 0.0);
        EXPECT_TRUE(oracle::close(pm.total(), mean.statistic(mean.merge(s1, s2)), 1e-9, 1e9));

        std::vector<pka::Point2> p1;
        std::vector<pka::Point2> p2;
        for (auto [x, y] : oracle::random_pairs(rng, 1, 500, 1e6)) p1.push_back({x, y});
        for (auto [x, y] : oracle::random_pairs(rng, 1, 500, 1e6)) p2.push_back({x, y});
        const auto c1 = pka::summarize_pairs(p1);
        const auto c2 = pka::summarize_pairs(p2);
        const auto pc = pka::decompose_check(cov, c1, c2);
        EXPECT_TRUE(oracle::close(pc.total(), cov.statistic(cov.merge(c1, c2)), 1e-9, 1e3 * 1e12));
    }
}

TEST(GenericEffectiveness, Examples) {
    const auto good = pka::generic_effectiveness(2.0, 1.0, 1.0);
    EXPECT_EQ(good.tau, 2.0);
    EXPECT_TRUE(good.beneficial);
    const auto bad = pka::generic_effectiveness(1.0, 2.0, 1.0);
    EXPECT_EQ(bad.tau, 0.5);
    EXPECT_FALSE(bad.beneficial);
    EXPECT_THROW(pka::generic_effectiveness(1.0, 0.0), pka::FactorUndefined);
}

TEST(GenericEffectiveness, CoefficientScales) {
    const auto r = pka::generic_effectiveness(3.0, 2.0, 0.5);
    EXPECT_EQ(r.tau, 0.75);
    EXPECT_FALSE(r.beneficial);
}

}  // namespace
