#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "uip/grid.hpp"
#include "uip/market.hpp"
#include "uip/payoff.hpp"
#include "uip/splitting.hpp"

namespace uip {

struct PicardSettings {
    double tol = 0.015;  // sup-norm change between iterates, currency
    std::size_t max_iter = 20;
    std::size_t steps = 11;  // sub-steps of every linear solve
    GridSpec grid;
    KernelOptions kernel;
    std::optional<double> epsilon;
};

/// Log-price drift of the forward SDE with the martingale integrand frozen at
/// z(grad u): b_i = A_i - gamma/2 sigma_i^2 d_i u - gamma/2 (1 - kappa_bar)
/// sigma_bar_i d_eta u.
std::vector<ScalarField> picard_drift(std::span<const ScalarField> grad, const MarketModel& model, double gamma);

/// Backward solve of du/dt + 1/2 sum sigma_i^2 u_ii + 1/2 u_eta,eta + b(x).grad u = 0
/// over `drift.size()` equal sub-steps of length dt. drift[k] acts on the step
/// from t_{k+1} to t_k. Returns every slice, slices[k] at t_k.
std::vector<ScalarField> linear_solve(const ScalarField& terminal, std::span<const std::vector<ScalarField>> drift,
                                      const MarketModel& model, double dt, const KernelOptions& opts = {});

/// Constant drift A on every node, the iteration seed.
std::vector<ScalarField> constant_drift(const LogGrid& grid, const MarketModel& model);

struct PicardTraceRow {
    std::size_t iteration = 0;
    double sup_delta = 0.0;
};

struct PicardResult {
    PriceResult result;
    std::vector<PicardTraceRow> trace;
    bool converged = false;
    std::size_t iterations = 0;
    std::vector<ScalarField> slices;  // final iterate at every time slice
};

/// Picard iteration u^{m+1} = linear_solve(lambda g^eps, picard_drift(grad u^m)),
/// seeded with the zero-gradient drift. Stops when the sup-norm change over
/// all slices is <= tol; otherwise returns the last iterate with
/// converged = false.
PicardResult picard_iterate(const PayoffPtr& payoff, const MarketParams& params, std::span<const double> spot,
                            const PicardSettings& settings = {});

}  // namespace uip
