#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "uip/grid.hpp"
#include "uip/market.hpp"
#include "uip/payoff.hpp"

namespace uip {

/// How the log-price grid is laid out around the spot.
struct GridSpec {
    std::size_t nodes = 201;              // per axis
    double vol_widths = 5.0;              // half-width floor in total-vol * sqrt(T)
    double feature_vol_widths = 3.0;      // padding beyond strikes and thresholds
    std::vector<std::vector<double>> cover;  // extra spots the grid must contain
    std::vector<Axis> axes;               // explicit layout; overrides the rule when set
};

/// Centres the grid on the spot (or on the span of spot plus `cover`) with
/// half-width max(vol_widths * v, feature span + feature_vol_widths * v) per
/// axis, v being the asset's total volatility times sqrt(T).
LogGrid build_grid(const GridSpec& spec, const MarketModel& model, const Payoff& payoff,
                   std::span<const double> spot);

enum class StepOrder {
    PredictCorrect,  // common-factor semigroup first, then the idiosyncratic one
    CorrectPredict,
};

struct SplitSettings {
    std::size_t steps = 11;
    GridSpec grid;
    KernelOptions kernel;
    std::optional<double> epsilon;  // smoothing band; payoff default when unset
    StepOrder order = StepOrder::PredictCorrect;
};

struct StepDiagnostics {
    std::size_t step = 0;  // 1 = first backward step from maturity
    double min = 0.0;
    double max = 0.0;
};

struct PriceResult {
    ScalarField price;     // t = 0, currency
    ScalarField previous;  // t = dt, feeds the residual check
    ScalarField hedge;     // index position from the common-factor gradient
    double dt = 0.0;
    double price_at_spot = 0.0;
    double hedge_at_spot = 0.0;
    double payoff_bound = 0.0;  // lambda * sup g
    std::vector<StepDiagnostics> steps;
    double residual_sup = 0.0;  // interior sup-norm of the discrete PDE residual
};

/// Common-factor semigroup over dt: Cole-Hopf with c = gamma (1 - kappa_bar_P)
/// around a heat flow along (sigma_bar_1, ..., sigma_bar_n).
ScalarField apply_s1(const ScalarField& field, double dt, const MarketModel& model, double gamma,
                     const KernelOptions& opts = {});

/// Idiosyncratic semigroup over dt: Cole-Hopf with c = gamma around the
/// drift-diffusion with drift A and volatilities sigma_i.
ScalarField apply_s2(const ScalarField& field, double dt, const MarketModel& model, double gamma,
                     const KernelOptions& opts = {});

/// Indifference price of lambda units by N predict/correct steps backward
/// from lambda * g^eps.
PriceResult solve(const PayoffPtr& payoff, const MarketParams& params, std::span<const double> spot,
                  const SplitSettings& settings = {});

/// Assembles hedge, spot values and the residual diagnostic from the t = 0 and
/// t = dt slices. Shared by every grid solver.
PriceResult make_price_result(const MarketModel& model, ScalarField price, ScalarField previous, double dt,
                              std::span<const double> spot, double payoff_bound);

/// lambda * g(exp(x)) on the grid nodes.
ScalarField terminal_field(const LogGrid& grid, const Payoff& payoff, double lambda);

double value_at(const ScalarField& field, std::span<const double> spot);

}  // namespace uip
