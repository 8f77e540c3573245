#include "uip/picard.hpp"

#include <algorithm>
#include <cmath>

#include "uip/error.hpp"

namespace uip {

std::vector<ScalarField> picard_drift(std::span<const ScalarField> grad, const MarketModel& model, double gamma) {
    const std::size_t n = model.dims();
    if (grad.size() != n) throw ValidationError("grad", "one gradient field per asset is required");
    const auto& p = model.params();
    const auto& d = model.derived();
    const LogGrid& grid = grad[0].grid;
    std::vector<ScalarField> b(n, ScalarField(grid, 0.0));
    const double common = 0.5 * gamma * (1.0 - d.kappa_bar_P);
    for (std::size_t node = 0; node < grid.size(); ++node) {
        double eta = 0.0;
        for (std::size_t k = 0; k < n; ++k) eta += p.assets[k].sigma_bar * grad[k][node];
        for (std::size_t k = 0; k < n; ++k) {
            const double s = p.assets[k].sigma;
            b[k][node] = d.A[k] - 0.5 * gamma * s * s * grad[k][node] - common * p.assets[k].sigma_bar * eta;
        }
    }
    return b;
}

std::vector<ScalarField> constant_drift(const LogGrid& grid, const MarketModel& model) {
    std::vector<ScalarField> b;
    for (double a : model.derived().A) b.emplace_back(grid, a);
    return b;
}

std::vector<ScalarField> linear_solve(const ScalarField& terminal, std::span<const std::vector<ScalarField>> drift,
                                      const MarketModel& model, double dt, const KernelOptions& opts) {
    const std::size_t steps = drift.size();
    if (steps < 1) throw ValidationError("solver.N", "must be >= 1");
    const auto v = model.sigma_bar();
    const auto sig = model.sigma();
    std::vector<ScalarField> slices(steps + 1);
    slices[steps] = terminal;
    for (std::size_t k = steps; k-- > 0;) {
        // Same composition as the gamma = 0 splitting step: common factor, then
        // the idiosyncratic drift-diffusion.
        ScalarField u = directional_convolve(slices[k + 1], v, dt, opts);
        u = drifted_convolve(u, std::span<const ScalarField>(drift[k]), sig, dt, opts);
        if (!u.all_finite()) throw NumericalError(steps - k, "non-finite value in the linear solve");
        slices[k] = std::move(u);
    }
    return slices;
}

PicardResult picard_iterate(const PayoffPtr& payoff, const MarketParams& params, std::span<const double> spot,
                            const PicardSettings& settings) {
    const MarketModel model(params);
    if (settings.steps < 1) throw ValidationError("solver.N", "must be >= 1");
    if (!(settings.tol > 0.0)) throw ValidationError("solver.tol", "must be > 0");
    if (settings.max_iter < 1) throw ValidationError("solver.max_iter", "must be >= 1");
    const PayoffPtr g = terminal_payoff(payoff, settings.epsilon);
    if (g->dims() != model.dims()) throw ValidationError("payoff", "dimension does not match the market");
    const LogGrid grid = build_grid(settings.grid, model, *g, spot);
    const double dt = params.T / static_cast<double>(settings.steps);
    const double gamma = params.gamma;
    const ScalarField terminal = terminal_field(grid, *g, params.lambda_units);

    std::vector<std::vector<ScalarField>> drift(settings.steps, constant_drift(grid, model));
    std::vector<ScalarField> u = linear_solve(terminal, drift, model, dt, settings.kernel);

    PicardResult out;
    for (std::size_t m = 1; m <= settings.max_iter; ++m) {
        for (std::size_t k = 0; k < settings.steps; ++k) {
            const auto grad = gradient(u[k + 1]);
            drift[k] = picard_drift(grad, model, gamma);
        }
        std::vector<ScalarField> next = linear_solve(terminal, drift, model, dt, settings.kernel);
        double delta = 0.0;
        for (std::size_t k = 0; k < next.size(); ++k)
            for (std::size_t i = 0; i < grid.size(); ++i) delta = std::max(delta, std::abs(next[k][i] - u[k][i]));
        u = std::move(next);
        out.trace.push_back({m, delta});
        out.iterations = m;
        if (delta <= settings.tol) {
            out.converged = true;
            break;
        }
    }

    out.result = make_price_result(model, u[0], u[1], dt, spot, params.lambda_units * g->bound());
    out.slices = std::move(u);
    return out;
}

}  // namespace uip
