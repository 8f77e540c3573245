#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "uip/market.hpp"
#include "uip/payoff.hpp"

namespace uip {

/// Nested quadrature over the common factor and each idiosyncratic factor.
/// Every Gaussian axis is cut at +-z_max and split at the payoff's
/// breakpoints; each panel uses `nodes` Gauss-Legendre points.
struct QuadratureSpec {
    std::size_t nodes = 64;
    double z_max = 10.0;
};

/// Certainty equivalent -(1/gamma) ln E^P[exp(-gamma lambda g(S_T))] under the
/// physical dynamics; lambda E^P[g] when gamma = 0. This is the price when
/// the index is independent of the assets.
double no_hedge_price(const Payoff& payoff, const MarketParams& params, std::span<const double> spot,
                      const QuadratureSpec& quad = {});

/// lambda E^P[g(S_T)].
double expected_payoff(const Payoff& payoff, const MarketParams& params, std::span<const double> spot,
                       const QuadratureSpec& quad = {});

/// lambda E[g(S_T)] with zero-drift (zero-rate risk-neutral) joint lognormal
/// assets, the price if every asset were traded.
double complete_market_price(const Payoff& payoff, const MarketParams& params, std::span<const double> spot,
                             const QuadratureSpec& quad = {});

struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
};

enum class McMeasure { NoHedge, Physical, Complete };

/// Seeded Monte Carlo counterpart of the quadrature prices; the no-hedge
/// standard error uses the delta method through the logarithm.
McEstimate monte_carlo_price(const Payoff& payoff, const MarketParams& params, std::span<const double> spot,
                             McMeasure measure, std::size_t paths, std::uint64_t seed);

/// Driver of the pricing BSDE, z in R^{n+2} ordered (W^1..W^n, common, index
/// idiosyncratic). The index loading vector is (0, ..., 0, sigma_bar_P, sigma_P).
double bsde_driver(std::span<const double> z, const MarketParams& params);

/// Reduced form -vartheta d_eta u - gamma/2 sum sigma_i^2 (d_i u)^2
/// - gamma/2 (1 - kappa_bar) (d_eta u)^2 of the same driver.
double reduced_driver(std::span<const double> grad_u, const MarketModel& model);

/// z(grad u) = (sigma_1 d_1 u, ..., sigma_n d_n u, d_eta u, 0).
std::vector<double> driver_argument(std::span<const double> grad_u, const MarketModel& model);

/// Zero-rate Black-Scholes put.
double black_scholes_put(double spot, double strike, double vol, double T);

}  // namespace uip
