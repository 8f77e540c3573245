#include <gtest/gtest.h>

#include <cmath>

#include "uip/error.hpp"
#include "uip/picard.hpp"

using namespace uip;

namespace {

const std::vector<double> kSpot{50.0, 1400.0};

PicardSettings coarse(std::size_t nodes = 61) {
    PicardSettings s;
    s.grid.nodes = nodes;
    return s;
}

}  // namespace

TEST(PicardDrift, ReferenceExample) {
    const MarketModel m(reference_market());
    const LogGrid g({Axis{0, 1, 3}, Axis{0, 1, 3}});
    const std::vector<ScalarField> grad{ScalarField(g, 1.0), ScalarField(g, 0.0)};
    const auto b = picard_drift(grad, m, 1.0);
    EXPECT_NEAR(b[0][4], -0.0697, 1e-15);
    EXPECT_NEAR(b[1][4], -0.029 - 0.5 * 0.36 * 0.2 * 0.3, 1e-15);
}

TEST(PicardDrift, ZeroGradientOrZeroGamma) {
    const MarketModel m(reference_market());
    const LogGrid g({Axis{0, 1, 3}, Axis{0, 1, 3}});
    const std::vector<ScalarField> zero{ScalarField(g, 0.0), ScalarField(g, 0.0)};
    const std::vector<ScalarField> big{ScalarField(g, 5.0), ScalarField(g, -3.0)};
    for (const auto& b : {picard_drift(zero, m, 1.0), picard_drift(big, m, 0.0)}) {
        for (double v : b[0].values) EXPECT_EQ(v, m.derived().A[0]);
        for (double v : b[1].values) EXPECT_EQ(v, m.derived().A[1]);
    }
    EXPECT_THROW(picard_drift(std::span<const ScalarField>(zero.data(), 1), m, 1.0), ValidationError);
}

TEST(LinearSolve, ConstantAndAffineTerminal) {
    const MarketModel m(reference_market());
    const LogGrid g({Axis{-3, 3, 61}, Axis{-3, 3, 61}});
    const double b0 = 0.05, b1 = -0.1, a0 = 1.5, a1 = -0.5;
    std::vector<std::vector<ScalarField>> drift(8, {ScalarField(g, b0), ScalarField(g, b1)});
    const auto c = linear_solve(ScalarField(g, 4.0), drift, m, 0.125);
    ASSERT_EQ(c.size(), 9u);
    for (const auto& slice : c)
        for (double v : slice.values) EXPECT_EQ(v, 4.0);
    KernelOptions lin;
    lin.extrapolation = Extrapolation::Linear;
    const ScalarField aff = sample(g, [&](std::span<const double> x) { return a0 * x[0] + a1 * x[1]; });
    const auto u = linear_solve(aff, drift, m, 0.125, lin);
    for (std::size_t i = 0; i < aff.size(); ++i) EXPECT_NEAR(u[0][i], aff[i] + (a0 * b0 + a1 * b1) * 1.0, 1e-11);
}

TEST(LinearSolve, ConstantDriftMatchesLinearSplitting) {
    MarketParams p = reference_market();
    p.gamma = 0.0;
    const MarketModel m(p);
    SplitSettings s;
    s.grid.nodes = 61;
    const PriceResult split = solve(vulnerable_put({}), p, kSpot, s);
    const LogGrid& g = split.price.grid;
    const ScalarField terminal = terminal_field(g, *terminal_payoff(vulnerable_put({})), 1.0);
    std::vector<std::vector<ScalarField>> drift(11, constant_drift(g, m));
    const auto u = linear_solve(terminal, drift, m, 1.0 / 11.0);
    EXPECT_EQ(u[0].values, split.price.values);
}

TEST(PicardIterate, GammaZeroConvergesImmediately) {
    MarketParams p = reference_market();
    p.gamma = 0.0;
    const PicardResult r = picard_iterate(vulnerable_put({}), p, kSpot, coarse());
    EXPECT_TRUE(r.converged);
    EXPECT_EQ(r.iterations, 1u);
    EXPECT_EQ(r.trace.size(), 1u);
    EXPECT_EQ(r.trace[0].sup_delta, 0.0);
}

TEST(PicardIterate, ConstantPayoff) {
    MarketParams p = reference_market();
    p.lambda_units = 2.0;
    const PicardResult r = picard_iterate(constant_payoff(10.0, 2), p, kSpot, coarse());
    EXPECT_TRUE(r.converged);
    EXPECT_EQ(r.iterations, 1u);
    for (double v : r.result.price.values) EXPECT_EQ(v, 20.0);
}

TEST(PicardIterate, AgreesWithSplittingAtLowRiskAversion) {
    MarketParams p = reference_market();
    p.gamma = 0.01;
    PicardSettings ps = coarse(101);
    const PicardResult pr = picard_iterate(vulnerable_put({}), p, kSpot, ps);
    EXPECT_TRUE(pr.converged);
    SplitSettings ss;
    ss.grid.nodes = 101;
    const PriceResult sr = solve(vulnerable_put({}), p, kSpot, ss);
    ASSERT_TRUE(pr.result.price.grid == sr.price.grid);
    for (std::size_t i = 0; i < sr.price.size(); ++i) {
        if (!sr.price.grid.interior(i, 5)) continue;
        EXPECT_NEAR(pr.result.price[i], sr.price[i], 0.02 * std::max(sr.price[i], 0.01));
    }
}

TEST(PicardIterate, BoundsAndTrace) {
    const PicardResult r = picard_iterate(vulnerable_put({}), reference_market(), kSpot, coarse(41));
    EXPECT_EQ(r.trace.size(), r.iterations);
    for (std::size_t m = 0; m < r.trace.size(); ++m) EXPECT_EQ(r.trace[m].iteration, m + 1);
    for (const auto& slice : r.slices)
        for (double v : slice.values) {
            EXPECT_GE(v, 0.0);
            EXPECT_LE(v, 150.0);
        }
}

TEST(PicardIterate, FlagsNonConvergence) {
    PicardSettings s = coarse(41);
    s.max_iter = 2;
    const PicardResult r = picard_iterate(vulnerable_put({}), reference_market(), kSpot, s);
    EXPECT_FALSE(r.converged);
    EXPECT_EQ(r.iterations, 2u);
}

TEST(PicardIterate, Errors) {
    PicardSettings s = coarse();
    s.tol = 0.0;
    EXPECT_THROW(picard_iterate(vulnerable_put({}), reference_market(), kSpot, s), ValidationError);
    s = coarse();
    s.max_iter = 0;
    EXPECT_THROW(picard_iterate(vulnerable_put({}), reference_market(), kSpot, s), ValidationError);
}
