#include <gtest/gtest.h>

#include <random>

#include "pesc/costs.hpp"
#include "pesc/oracle.hpp"

using namespace pesc;

TEST(TotalVariation, ZeroOnConstants) {
    EXPECT_EQ(tv_eval(Image(4, 4, 7.0)), 0.0);
    EXPECT_EQ(tv_subgradient(Image(4, 4, 7.0)), Image(4, 4));
    EXPECT_EQ(tv_eval(Image(1, 1, 3.0)), 0.0);
}

TEST(TotalVariation, SmallExamples) {
    EXPECT_DOUBLE_EQ(tv_eval(Image::from_rows({{0, 1}, {0, 1}})), 2.0);
    EXPECT_DOUBLE_EQ(tv_eval(Image::row({0, 2, 1})), 3.0);
}

TEST(TotalVariation, SubgradientOfSignal) {
    EXPECT_EQ(tv_subgradient(Image::row({0, 2, 1})), Image::row({-1, 2, -1}));
}

TEST(L1, EvalAndSubgradient) {
    const Image w = Image::row({1, -2, 0});
    EXPECT_DOUBLE_EQ(l1_eval(w), 3.0);
    EXPECT_EQ(l1_subgradient(w), Image::row({1, -1, 0}));
}

TEST(L2, EvalAndSubgradient) {
    EXPECT_EQ(l2_eval(Image(3, 1)), 0.0);
    EXPECT_EQ(l2_subgradient(Image(3, 1)), Image(3, 1));
    const Image w = Image::row({3, 4});
    EXPECT_DOUBLE_EQ(l2_eval(w), 5.0);
    const Image g = l2_subgradient(w);
    EXPECT_NEAR(g(0, 0), 0.6, 1e-15);
    EXPECT_NEAR(g(1, 0), 0.8, 1e-15);
}

TEST(CostFunction, DispatchesAndParses) {
    EXPECT_EQ(parse_cost_kind("l1"), CostKind::L1);
    EXPECT_THROW(parse_cost_kind("fv"), ArgumentError);
    const Image w = Image::row({1, -2, 0});
    EXPECT_EQ(CostFunction(CostKind::L1).eval(w), l1_eval(w));
    EXPECT_EQ(CostFunction(CostKind::TV).subgradient(w), tv_subgradient(w));
}

class CostProperties : public ::testing::TestWithParam<CostKind> {};

TEST_P(CostProperties, SubgradientInequality) {
    const auto rep = oracle::cost_check(CostFunction(GetParam()), 4, 4, 1000, 99);
    EXPECT_EQ(rep.samples, 1000u);
    EXPECT_LE(rep.max_violation, 1e-9);
}

TEST_P(CostProperties, NonnegativeConvexHomogeneous) {
    const CostFunction f(GetParam());
    std::mt19937_64 rng(5);
    std::normal_distribution<double> n(0.0, 3.0);
    std::uniform_real_distribution<double> scale(0.0, 10.0);
    for (int trial = 0; trial < 200; ++trial) {
        Image u(4, 3), v(4, 3);
        for (double& x : u.data()) x = n(rng);
        for (double& x : v.data()) x = n(rng);
        EXPECT_GE(f.eval(u), 0.0);
        EXPECT_LE(f.eval((u + v) * 0.5), 0.5 * (f.eval(u) + f.eval(v)) + 1e-12);
        const double c = scale(rng);
        EXPECT_NEAR(f.eval(u * c), c * f.eval(u), 1e-10 * (1.0 + c * f.eval(u)));
    }
}

INSTANTIATE_TEST_SUITE_P(AllCosts, CostProperties,
                         ::testing::Values(CostKind::TV, CostKind::L1, CostKind::L2),
                         [](const auto& info) { return std::string(to_string(info.param)); });

TEST(CostCheck, ZeroSamplesGivesEmptyReport) {
    const auto rep = oracle::cost_check(CostFunction(CostKind::TV), 4, 4, 0, 1);
    EXPECT_EQ(rep.samples, 0u);
    EXPECT_EQ(rep.max_violation, 0.0);
}

TEST(CostCheck, L1IsExactUpToRounding) {
    EXPECT_LE(oracle::cost_check(CostFunction(CostKind::L1), 4, 4, 1000, 3).max_violation, 1e-12);
}
