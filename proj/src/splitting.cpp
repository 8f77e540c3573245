#include "uip/splitting.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "uip/error.hpp"
#include "uip/validation.hpp"

namespace uip {

LogGrid build_grid(const GridSpec& spec, const MarketModel& model, const Payoff& payoff,
                   std::span<const double> spot) {
    const std::size_t n = model.dims();
    if (spot.size() != n) throw ValidationError("spot", "needs one price per asset");
    if (!spec.axes.empty()) {
        if (spec.axes.size() != n) throw ValidationError("grid.axes", "needs one axis per asset");
        return LogGrid(spec.axes);
    }
    if (spec.nodes < 3) throw ValidationError("solver.nodes", "must be >= 3");
    std::vector<Axis> axes(n);
    const double sqrt_t = std::sqrt(model.params().T);
    for (std::size_t k = 0; k < n; ++k) {
        if (!(spot[k] > 0.0)) throw ValidationError("spot", "prices must be > 0");
        double lo = std::log(spot[k]), hi = lo;
        for (const auto& c : spec.cover) {
            if (c.size() != n || !(c[k] > 0.0)) throw ValidationError("grid.cover", "invalid spot");
            lo = std::min(lo, std::log(c[k]));
            hi = std::max(hi, std::log(c[k]));
        }
        const double centre = 0.5 * (lo + hi);
        const double v = model.derived().total_vol[k] * sqrt_t;
        double half = 0.5 * (hi - lo) + spec.vol_widths * v;
        for (double f : payoff.features(k))
            if (f > 0.0) half = std::max(half, std::abs(std::log(f) - centre) + spec.feature_vol_widths * v);
        // Put the jump level (or the first kink) on a node. A feature inside a
        // cell is smeared asymmetrically by linear interpolation, which biases
        // the price by an amount that depends on where the spot happens to sit.
        // Half a cell of extra width on each side absorbs the shift.
        double anchor = 0.0;
        if (const auto jump = payoff.discontinuity(); jump && jump->axis == k) anchor = jump->level;
        else if (const auto f = payoff.features(k); !f.empty()) anchor = f.front();
        Axis a{centre - half, centre + half, spec.nodes};
        if (anchor > 0.0 && spec.nodes > 3) {
            const double h = 2.0 * half / static_cast<double>(spec.nodes - 2);
            const double lo = centre - half - 0.5 * h;
            const double cells = (std::log(anchor) - lo) / h;
            const double shift = (cells - std::round(cells)) * h;
            a = Axis{lo + shift, lo + shift + static_cast<double>(spec.nodes - 1) * h, spec.nodes};
        }
        axes[k] = a;
    }
    return LogGrid(std::move(axes));
}

// Both semigroups interpolate in price units and exponentiate at the
// quadrature points. Interpolating exp(-c u) instead loses accuracy wherever
// c times the price change across one cell is not small.
ScalarField apply_s1(const ScalarField& field, double dt, const MarketModel& model, double gamma,
                     const KernelOptions& opts) {
    const double c = gamma * (1.0 - model.derived().kappa_bar_P);
    return entropic_directional_convolve(field, model.sigma_bar(), dt, c, opts);
}

ScalarField apply_s2(const ScalarField& field, double dt, const MarketModel& model, double gamma,
                     const KernelOptions& opts) {
    return entropic_drifted_convolve(field, model.derived().A, model.sigma(), dt, gamma, opts);
}

ScalarField terminal_field(const LogGrid& grid, const Payoff& payoff, double lambda) {
    if (payoff.dims() != grid.dims()) throw ValidationError("payoff", "dimension does not match the market");
    std::array<double, kMaxGridDims> s{};
    return sample(grid, [&](std::span<const double> x) {
        for (std::size_t k = 0; k < x.size(); ++k) s[k] = std::exp(x[k]);
        return lambda * payoff(std::span<const double>(s.data(), x.size()));
    });
}

double value_at(const ScalarField& field, std::span<const double> spot) {
    Point x{};
    for (std::size_t k = 0; k < spot.size(); ++k) x[k] = std::log(spot[k]);
    return interpolate(field, std::span<const double>(x.data(), spot.size()), Extrapolation::Flat);
}

PriceResult make_price_result(const MarketModel& model, ScalarField price, ScalarField previous, double dt,
                              std::span<const double> spot, double payoff_bound) {
    const auto& p = model.params();
    const auto& d = model.derived();
    PriceResult r;
    r.dt = dt;
    r.payoff_bound = payoff_bound;
    r.hedge = ScalarField(price.grid, 0.0);
    if (p.sigma_bar_P != 0.0) {
        const auto grad = gradient(price);
        const double scale = -d.kappa_bar_P / p.sigma_bar_P;
        for (std::size_t i = 0; i < price.size(); ++i) {
            double eta = 0.0;
            for (std::size_t k = 0; k < model.dims(); ++k) eta += p.assets[k].sigma_bar * grad[k][i];
            r.hedge[i] = scale * eta;
        }
    }
    r.price_at_spot = value_at(price, spot);
    r.hedge_at_spot = value_at(r.hedge, spot);
    r.residual_sup = pde_residual(price, previous, model, p.gamma, dt).interior_sup();
    r.price = std::move(price);
    r.previous = std::move(previous);
    return r;
}

PriceResult solve(const PayoffPtr& payoff, const MarketParams& params, std::span<const double> spot,
                  const SplitSettings& settings) {
    const MarketModel model(params);
    if (settings.steps < 1) throw ValidationError("solver.N", "must be >= 1");
    const PayoffPtr g = terminal_payoff(payoff, settings.epsilon);
    if (g->dims() != model.dims()) throw ValidationError("payoff", "dimension does not match the market");
    const LogGrid grid = build_grid(settings.grid, model, *g, spot);

    const double lambda = params.lambda_units;
    const double gamma = params.gamma;
    const double dt = params.T / static_cast<double>(settings.steps);
    ScalarField field = terminal_field(grid, *g, lambda);
    ScalarField previous = field;
    std::vector<StepDiagnostics> diag;
    diag.reserve(settings.steps);

    for (std::size_t step = 1; step <= settings.steps; ++step) {
        if (step == settings.steps) previous = field;
        if (settings.order == StepOrder::PredictCorrect)
            field = apply_s2(apply_s1(field, dt, model, gamma, settings.kernel), dt, model, gamma, settings.kernel);
        else
            field = apply_s1(apply_s2(field, dt, model, gamma, settings.kernel), dt, model, gamma, settings.kernel);
        if (!field.all_finite()) throw NumericalError(step, "non-finite value in the splitting scheme");
        diag.push_back({step, field.min(), field.max()});
    }

    PriceResult r = make_price_result(model, std::move(field), std::move(previous), dt, spot, lambda * g->bound());
    r.steps = std::move(diag);
    return r;
}

}  // namespace uip
