#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <random>

#include "uip/error.hpp"
#include "uip/payoff.hpp"

using namespace uip;

namespace {

double at(const Payoff& g, double s1, double s2) {
    const std::array<double, 2> s{s1, s2};
    return g(s);
}

}  // namespace

TEST(VulnerablePut, ReferenceValues) {
    const auto g = vulnerable_put({});
    EXPECT_DOUBLE_EQ(at(*g, 100, 1400), 50.0);
    EXPECT_DOUBLE_EQ(at(*g, 100, 500), 23.75);
    EXPECT_EQ(at(*g, 200, 500), 0.0);
    EXPECT_EQ(at(*g, 200, 5000), 0.0);
    EXPECT_DOUBLE_EQ(at(*g, 100, 1000), 50.0);  // solvency branch at s2 = L
    EXPECT_DOUBLE_EQ(g->bound(), 150.0);
}

TEST(VulnerablePut, ParameterValidation) {
    EXPECT_THROW(vulnerable_put({0.0, 1000, 0.05, 0}), ValidationError);
    EXPECT_THROW(vulnerable_put({150, -1, 0.05, 0}), ValidationError);
    EXPECT_THROW(vulnerable_put({150, 1000, 1.5, 0}), ValidationError);
    EXPECT_THROW(vulnerable_put({150, 1000, 0.05, 1000}), ValidationError);
    EXPECT_NO_THROW(vulnerable_put({150, 1000, 1.0, 0}));
}

TEST(Smoothing, BandMidpointAndOutsideBand) {
    const auto raw = vulnerable_put({});
    const auto g = smooth(raw, 10.0);
    EXPECT_NEAR(at(*g, 100, 1000), 0.5 * (0.95 * 50 * 0.99 + 50), 1e-12);
    EXPECT_NEAR(at(*g, 100, 1000), 48.5125, 1e-12);
    EXPECT_EQ(at(*g, 100, 980), at(*raw, 100, 980));
    EXPECT_EQ(at(*g, 100, 1020), at(*raw, 100, 1020));
    EXPECT_EQ(at(*g, 100, 990), at(*raw, 100, 990));
    EXPECT_EQ(at(*g, 100, 1010), at(*raw, 100, 1010));
}

TEST(Smoothing, DefaultBandAndEpsilonField) {
    const auto g = vulnerable_put({150, 1000, 0.05, 10.0});
    const auto h = terminal_payoff(vulnerable_put({}));
    for (double s2 : {985.0, 995.0, 1000.0, 1007.0})
        EXPECT_DOUBLE_EQ(at(*g, 80, s2), at(*h, 80, s2));
    const auto raw = terminal_payoff(vulnerable_put({}), 0.0);
    EXPECT_DOUBLE_EQ(at(*raw, 100, 999.0), 0.95 * 50 * 0.999);
}

TEST(Smoothing, Errors) {
    const auto raw = vulnerable_put({});
    EXPECT_THROW(smooth(raw, 0.0), ValidationError);
    EXPECT_THROW(smooth(raw, 1000.0), ValidationError);
    EXPECT_THROW(smooth(put(150, 2), 10.0), ValidationError);
}

TEST(Smoothing, ZeroDeadweightHasNoJump) {
    const auto raw = vulnerable_put({150, 1000, 0.0, 0});
    EXPECT_FALSE(raw->discontinuity().has_value());
    EXPECT_NEAR(at(*raw, 100, 1000 - 1e-9), at(*raw, 100, 1000), 1e-9);
    const auto g = terminal_payoff(raw);
    for (double s2 : {990.0, 1000.0, 1005.0}) EXPECT_EQ(at(*g, 100, s2), at(*raw, 100, s2));
}

TEST(BasketPut, ReferenceValues) {
    const auto g = spread_put(150);
    EXPECT_DOUBLE_EQ(at(*g, 50, 50), 50.0);
    EXPECT_DOUBLE_EQ(at(*g, 1e-300, 1e-300), 150.0);
    EXPECT_EQ(at(*g, 100, 60), 0.0);
    const auto b = basket_put(150, {0.5, 2.0});
    EXPECT_DOUBLE_EQ(at(*b, 100, 10), 80.0);
    EXPECT_DOUBLE_EQ(b->bound(), 150.0);
    EXPECT_THROW(basket_put(-1, {1, 1}), ValidationError);
}

TEST(OtherPayoffs, PutCallConstant) {
    const std::array<double, 1> s{120.0};
    EXPECT_DOUBLE_EQ((*put(150))(s), 30.0);
    EXPECT_DOUBLE_EQ((*capped_call(100, 15))(s), 15.0);
    EXPECT_DOUBLE_EQ((*constant_payoff(10, 1))(s), 10.0);
}

TEST(PayoffProperty, BoundsAndMonotonicity) {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> logs(std::log(1.0), std::log(5000.0));
    std::uniform_real_distribution<double> bump(0.0, 0.5);
    const std::vector<PayoffPtr> family = {vulnerable_put({}), smooth(vulnerable_put({}), 10.0),
                                           smooth(vulnerable_put({}), 100.0),
                                           vulnerable_put({120, 800, 0.3, 0}), spread_put(150)};
    for (const auto& g : family) {
        for (int trial = 0; trial < 4000; ++trial) {
            const double s1 = std::exp(logs(rng)), s2 = std::exp(logs(rng));
            const double v = at(*g, s1, s2);
            EXPECT_GE(v, 0.0);
            EXPECT_LE(v, g->bound());
            const double up = std::exp(bump(rng));
            if (g != family.back()) {
                EXPECT_LE(at(*g, s1 * up, s2), v + 1e-12);  // nonincreasing in s1
                EXPECT_GE(at(*g, s1, s2 * up), v - 1e-12);  // nondecreasing in s2
            }
        }
    }
}

TEST(PayoffProperty, SmoothingConvergesOffTheThreshold) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> s1d(1.0, 200.0), s2d(100.0, 3000.0);
    const auto raw = vulnerable_put({});
    for (int trial = 0; trial < 2000; ++trial) {
        const double s1 = s1d(rng), s2 = s2d(rng);
        const double h = std::max(150.0 - s1, 0.0);
        for (double eps : {100.0, 30.0, 10.0, 3.0, 1e-3}) {
            const double err = std::abs(at(*smooth(raw, eps), s1, s2) - at(*raw, s1, s2));
            if (std::abs(s2 - 1000.0) >= eps)
                EXPECT_EQ(err, 0.0);
            else
                EXPECT_LE(err, h * (0.05 + 0.95 * eps / 1000.0) + 1e-12);
        }
    }
}
