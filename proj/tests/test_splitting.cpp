#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "uip/error.hpp"
#include "uip/splitting.hpp"

using namespace uip;

namespace {

const std::vector<double> kSpot{50.0, 1400.0};

SplitSettings coarse(std::size_t steps = 11, std::size_t nodes = 61) {
    SplitSettings s;
    s.steps = steps;
    s.grid.nodes = nodes;
    return s;
}

// g + k for a fixed payoff g.
class Shifted final : public Payoff {
public:
    Shifted(PayoffPtr g, double k) : g_(std::move(g)), k_(k) {}
    std::size_t dims() const override { return g_->dims(); }
    double operator()(std::span<const double> s) const override { return (*g_)(s) + k_; }
    double bound() const override { return g_->bound() + k_; }

private:
    PayoffPtr g_;
    double k_;
};

class NotANumber final : public Payoff {
public:
    std::size_t dims() const override { return 2; }
    double operator()(std::span<const double>) const override { return std::numeric_limits<double>::quiet_NaN(); }
    double bound() const override { return 1.0; }
};

// One asset with c = gamma (1 - kappa_bar) = 1 and unit common loading.
MarketModel unit_common_model() {
    MarketParams p;
    p.mu_P = 0.1;
    p.sigma_P = 0.3;
    p.sigma_bar_P = 0.3;
    p.gamma = 2.0;
    p.assets = {AssetParams{0.05, 0.5, 1.0}};
    return MarketModel(p);
}

}  // namespace

TEST(ApplyS1, OneDimensionalLogMoment) {
    const MarketModel m = unit_common_model();
    ASSERT_DOUBLE_EQ(m.params().gamma * (1.0 - m.derived().kappa_bar_P), 1.0);
    const LogGrid g({Axis{-10.0, 10.0, 401}});
    const ScalarField f = sample(g, [](std::span<const double> x) { return x[0]; });
    const ScalarField u = apply_s1(f, 0.04, m, m.params().gamma);
    for (std::size_t i = 50; i <= 350; ++i) EXPECT_NEAR(u[i], f[i] - 0.02, 1e-12);
}

TEST(ApplyS2, DeterministicFlowShiftsAffineFields) {
    MarketParams p = unit_common_model().params();
    p.assets[0].sigma = 0.0;
    const MarketModel m(p);
    const LogGrid g({Axis{-10.0, 10.0, 401}});
    const ScalarField f = sample(g, [](std::span<const double> x) { return 2.0 * x[0] + 1.0; });
    const ScalarField u = apply_s2(f, 0.1, m, 0.7);
    for (std::size_t i = 20; i <= 380; ++i) EXPECT_NEAR(u[i], f[i] + 2.0 * m.derived().A[0] * 0.1, 1e-12);
}

TEST(ApplyS, ConstantsAndGammaZero) {
    const MarketModel m(reference_market());
    const LogGrid g({Axis{0.0, 6.0, 41}, Axis{5.0, 9.0, 41}});
    const ScalarField c(g, 12.5);
    for (double v : apply_s1(c, 0.1, m, 1.0).values) EXPECT_EQ(v, 12.5);
    for (double v : apply_s2(c, 0.1, m, 1.0).values) EXPECT_EQ(v, 12.5);
    const ScalarField f = sample(g, [](std::span<const double> x) { return std::sin(x[0]) + x[1]; });
    const double A[2] = {m.derived().A[0], m.derived().A[1]};
    const ScalarField lin = drifted_convolve(f, A, m.sigma(), 0.1);
    EXPECT_EQ(apply_s2(f, 0.1, m, 0.0).values, lin.values);
    EXPECT_EQ(apply_s1(f, 0.1, m, 0.0).values, directional_convolve(f, m.sigma_bar(), 0.1).values);
}

TEST(BuildGrid, CoversSpotAndFeatures) {
    const MarketModel m(reference_market());
    const auto g = build_grid({}, m, *vulnerable_put({}), kSpot);
    EXPECT_EQ(g.axis(0).count, 201u);
    for (std::size_t k = 0; k < 2; ++k) {
        EXPECT_NEAR(0.5 * (g.axis(k).min + g.axis(k).max), std::log(kSpot[k]), 0.5 * g.axis(k).spacing() + 1e-12);
        EXPECT_GE(g.axis(k).max - g.axis(k).min, 10.0 * m.derived().total_vol[k] - 1e-12);
    }
    EXPECT_LT(g.axis(0).min, std::log(150.0));
    EXPECT_GT(g.axis(0).max, std::log(150.0));
    EXPECT_LT(g.axis(1).min, std::log(1000.0));
    // Strike and default threshold sit on nodes.
    for (auto [k, level] : {std::pair{0, 150.0}, std::pair{1, 1000.0}}) {
        const double cells = (std::log(level) - g.axis(k).min) / g.axis(k).spacing();
        EXPECT_NEAR(cells, std::round(cells), 1e-9);
    }
    GridSpec cover;
    cover.cover = {{10.0, 1400.0}, {150.0, 1400.0}};
    const auto gc = build_grid(cover, m, *vulnerable_put({}), kSpot);
    EXPECT_LT(gc.axis(0).min, std::log(10.0) - 5.0 * m.derived().total_vol[0] + 1e-9);
}

TEST(Solve, ConstantPayoffForEveryStepCount) {
    MarketParams p = reference_market();
    p.lambda_units = 3.0;
    for (std::size_t n : {1u, 3u, 11u}) {
        const PriceResult r = solve(constant_payoff(10.0, 2), p, kSpot, coarse(n));
        for (double v : r.price.values) EXPECT_NEAR(v, 30.0, 1e-12);
        EXPECT_NEAR(r.price_at_spot, 30.0, 1e-12);
        for (double v : r.hedge.values) EXPECT_NEAR(v, 0.0, 1e-9);
        EXPECT_EQ(r.steps.size(), n);
    }
}

TEST(Solve, BoundsAndDiagnostics) {
    const PriceResult r = solve(vulnerable_put({}), reference_market(), kSpot, coarse());
    EXPECT_DOUBLE_EQ(r.payoff_bound, 150.0);
    for (double v : r.price.values) {
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 150.0);
    }
    for (const auto& s : r.steps) {
        EXPECT_GE(s.min, 0.0);
        EXPECT_LE(s.max, 150.0);
    }
    EXPECT_GT(r.price_at_spot, 0.0);
    EXPECT_LT(r.price_at_spot, 150.0);
    EXPECT_TRUE(std::isfinite(r.residual_sup));
    EXPECT_NEAR(r.dt, 1.0 / 11.0, 1e-15);
}

TEST(Solve, CashInvariance) {
    const PayoffPtr g = terminal_payoff(vulnerable_put({}));
    const PayoffPtr gk = std::make_shared<Shifted>(g, 7.0);
    const PriceResult a = solve(g, reference_market(), kSpot, coarse());
    SplitSettings s = coarse();
    s.grid.axes = a.price.grid.axes();
    s.epsilon = 0.0;
    const PriceResult b = solve(gk, reference_market(), kSpot, s);
    for (std::size_t i = 0; i < a.price.size(); ++i) EXPECT_NEAR(b.price[i], a.price[i] + 7.0, 1e-10);
}

TEST(Solve, LambdaScalingIdentity) {
    MarketParams a = reference_market(), b = reference_market();
    a.gamma = 0.5;
    a.lambda_units = 2.0;
    b.gamma = 1.0;
    const PriceResult ra = solve(vulnerable_put({}), a, kSpot, coarse());
    const PriceResult rb = solve(vulnerable_put({}), b, kSpot, coarse());
    for (std::size_t i = 0; i < ra.price.size(); ++i) EXPECT_NEAR(ra.price[i], 2.0 * rb.price[i], 1e-9);
}

TEST(Solve, MonotoneInTerminalData) {
    // (K - s1)^+ dominates the vulnerable put.
    const PriceResult hi = solve(put(150.0, 2), reference_market(), kSpot, coarse());
    SplitSettings s = coarse();
    s.grid.axes = hi.price.grid.axes();
    const PriceResult lo = solve(vulnerable_put({}), reference_market(), kSpot, s);
    for (std::size_t i = 0; i < hi.price.size(); ++i) EXPECT_LE(lo.price[i], hi.price[i] + 1e-12 * 150.0);
}

TEST(Solve, NoCommonIndexLoadingMeansNoHedge) {
    MarketParams p = reference_market();
    p.sigma_bar_P = 0.0;
    const PriceResult r = solve(vulnerable_put({}), p, kSpot, coarse());
    for (double v : r.hedge.values) EXPECT_EQ(v, 0.0);
}

TEST(Solve, HedgeSignForAPut) {
    const PriceResult r = solve(put(150.0, 2), reference_market(), kSpot, coarse());
    EXPECT_GT(r.hedge_at_spot, 0.0);
}

TEST(Solve, StepOrdersConvergeTogether) {
    auto gap = [](std::size_t steps) {
        SplitSettings a = coarse(steps), b = coarse(steps);
        b.order = StepOrder::CorrectPredict;
        const double pa = solve(vulnerable_put({}), reference_market(), kSpot, a).price_at_spot;
        const double pb = solve(vulnerable_put({}), reference_market(), kSpot, b).price_at_spot;
        return std::abs(pa - pb);
    };
    // On this coarse grid interpolation error also grows with N, so only the
    // direction of the trend is asserted.
    const double g11 = gap(11), g22 = gap(22), g44 = gap(44);
    EXPECT_LT(g11, 0.05 * 10.0);
    EXPECT_LT(g22, g11);
    EXPECT_LT(g44, g22);
}

TEST(Solve, Errors) {
    EXPECT_THROW(solve(vulnerable_put({}), reference_market(), kSpot, coarse(0)), ValidationError);
    EXPECT_THROW(solve(put(150.0, 1), reference_market(), kSpot, coarse()), ValidationError);
    try {
        solve(std::make_shared<NotANumber>(), reference_market(), kSpot, coarse());
        FAIL();
    } catch (const NumericalError& e) {
        EXPECT_EQ(e.step(), 1u);
    }
}

TEST(Solve, ThreadCountIsBitIdentical) {
    SplitSettings one = coarse(), three = coarse();
    three.kernel.threads = 3;
    const PriceResult a = solve(vulnerable_put({}), reference_market(), kSpot, one);
    const PriceResult b = solve(vulnerable_put({}), reference_market(), kSpot, three);
    EXPECT_EQ(a.price.values, b.price.values);
    EXPECT_EQ(a.hedge.values, b.hedge.values);
}
