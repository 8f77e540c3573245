#include "uip/validation.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <sstream>

#include "uip/analytic.hpp"
#include "uip/error.hpp"

namespace uip {

double ResidualField::interior_sup() const {
    double sup = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i)
        if (values.grid.interior(i, margin)) sup = std::max(sup, std::abs(values[i]));
    return sup;
}

ResidualField pde_residual(const ScalarField& now, const ScalarField& later, const MarketModel& model,
                           double gamma, double dt, std::size_t margin) {
    if (!(now.grid == later.grid)) throw ValidationError("residual", "time slices must share a grid");
    if (!(dt > 0.0)) throw ValidationError("residual.dt", "must be > 0");
    margin = std::max<std::size_t>(margin, 1);
    const LogGrid& g = now.grid;
    const std::size_t n = g.dims();
    const auto& p = model.params();
    const auto& d = model.derived();
    const double* u = now.values.data();

    ResidualField out{ScalarField(g, 0.0), margin};
    for (std::size_t node = 0; node < g.size(); ++node) {
        if (!g.interior(node, margin)) continue;
        std::array<double, kMaxGridDims> du{};
        double second = 0.0, drift = 0.0, quad = 0.0, eta = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const std::size_t sk = g.stride(k);
            const double hk = g.axis(k).spacing();
            du[k] = (u[node + sk] - u[node - sk]) / (2.0 * hk);
            const double sig = p.assets[k].sigma;
            const double uxx = (u[node + sk] - 2.0 * u[node] + u[node - sk]) / (hk * hk);
            second += 0.5 * sig * sig * uxx;
            drift += d.A[k] * du[k];
            quad += sig * sig * du[k] * du[k];
            eta += p.assets[k].sigma_bar * du[k];
        }
        double eta2 = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            for (std::size_t l = 0; l < n; ++l) {
                const double w = p.assets[k].sigma_bar * p.assets[l].sigma_bar;
                if (w == 0.0) continue;
                const std::size_t sk = g.stride(k), sl = g.stride(l);
                const double hk = g.axis(k).spacing(), hl = g.axis(l).spacing();
                double ukl;
                if (k == l)
                    ukl = (u[node + sk] - 2.0 * u[node] + u[node - sk]) / (hk * hk);
                else
                    ukl = (u[node + sk + sl] - u[node + sk - sl] - u[node - sk + sl] + u[node - sk - sl]) /
                          (4.0 * hk * hl);
                eta2 += w * ukl;
            }
        }
        const double dudt = (later[node] - u[node]) / dt;
        out.values[node] = dudt + second + 0.5 * eta2 + drift - 0.5 * gamma * quad -
                           0.5 * gamma * (1.0 - d.kappa_bar_P) * eta * eta;
    }
    return out;
}

namespace {

std::string join(const std::vector<double>& v) {
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ";" : "") << v[i];
    return os.str();
}

double max_difference(const ScalarField& a, const ScalarField& b) {
    if (!(a.grid == b.grid)) throw ValidationError("solver", "price fields are on different grids");
    double worst = -INFINITY;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, a[i] - b[i]);
    return worst;
}

double max_abs_difference(const ScalarField& a, const ScalarField& b) {
    if (!(a.grid == b.grid)) throw ValidationError("solver", "price fields are on different grids");
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

}  // namespace

PropertyReport check_gamma_monotonicity(const MarketParams& params, const std::vector<double>& gammas,
                                        const PriceSolver& solver, double payoff_bound) {
    PropertyReport r{"gamma_monotonicity"};
    r.slack = 1e-6 * payoff_bound;
    for (std::size_t k = 0; k < gammas.size(); ++k) {
        if (!(gammas[k] > 0.0)) throw ValidationError("gammas", "must be > 0");
        if (k && gammas[k] < gammas[k - 1]) throw ValidationError("gammas", "must be sorted");
    }
    std::optional<ScalarField> prev;
    for (double gamma : gammas) {
        MarketParams p = params;
        p.gamma = gamma;
        ScalarField cur = solver(p).price;
        if (prev) r.observe(max_difference(cur, *prev));
        prev = std::move(cur);
    }
    r.detail = "gammas=" + join(gammas);
    r.finish();
    return r;
}

PropertyReport check_kappa_monotonicity(const MarketParams& params, const std::vector<double>& sigma_P,
                                        const PriceSolver& solver, double payoff_bound) {
    PropertyReport r{"kappa_monotonicity"};
    r.slack = 1e-6 * payoff_bound;
    for (std::size_t k = 1; k < sigma_P.size(); ++k)
        if (sigma_P[k] < sigma_P[k - 1]) throw ValidationError("sigma_P", "must be sorted");
    std::vector<double> prices;
    for (double s : sigma_P) {
        MarketParams p = params;
        p.sigma_P = s;
        p = with_capm_drifts(p);
        for (double res : capm_residual(p))
            if (std::abs(res) > 1e-12) throw ValidationError("asset.mu", "precondition violated: CAPM residual");
        const double price = solver(p).price_at_spot;
        if (!prices.empty()) r.observe(price - prices.back());
        prices.push_back(price);
    }
    r.detail = "sigma_P=" + join(sigma_P) + " prices=" + join(prices);
    r.finish();
    return r;
}

PropertyReport check_gamma_zero_limit(const MarketParams& params, const std::vector<double>& gammas,
                                      const PriceSolver& solver, const Benchmark& complete_price) {
    PropertyReport r{"gamma_zero_limit"};
    const MarketParams capm = with_capm_drifts(params);
    const double bench = complete_price(capm);
    std::vector<double> sorted = gammas;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    std::vector<double> errors;
    double smallest_positive_error = NAN;
    for (double gamma : sorted) {
        MarketParams p = capm;
        p.gamma = gamma;
        const double price = solver(p).price_at_spot;
        const double rel = std::abs(price - bench) / std::max(std::abs(bench), 1e-300);
        if (gamma == 0.0) {
            r.observe(rel - 0.005);
        } else {
            // The gap must not widen as gamma falls.
            if (!errors.empty() && !std::isnan(smallest_positive_error)) r.observe(rel - smallest_positive_error - 1e-6);
            smallest_positive_error = rel;
        }
        errors.push_back(rel);
    }
    if (!std::isnan(smallest_positive_error)) r.observe(smallest_positive_error - 0.02);
    r.detail = "benchmark=" + std::to_string(bench) + " gammas=" + join(sorted) + " rel_errors=" + join(errors);
    r.finish();
    return r;
}

PropertyReport check_sigma_zero_limit(const MarketParams& params, const std::vector<double>& scales,
                                      const PriceSolver& solver, const Benchmark& complete_price) {
    PropertyReport r{"sigma_zero_limit"};
    if (params.sigma_bar_P == 0.0) throw ValidationError("market.sigma_bar_P", "must be nonzero");
    const double ratio = params.mu_P / params.sigma_bar_P;
    MarketParams limit = params;
    for (auto& a : limit.assets) {
        a.sigma = 0.0;
        a.mu = ratio * a.sigma_bar;
    }
    const double bench = complete_price(limit);
    std::vector<double> sorted = scales;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    std::vector<double> errors;
    for (double s : sorted) {
        MarketParams p = params;
        p.sigma_P = s * params.sigma_P;
        for (std::size_t i = 0; i < p.assets.size(); ++i) {
            p.assets[i].sigma = s * params.assets[i].sigma;
            p.assets[i].mu = ratio * p.assets[i].sigma_bar;
        }
        const double price = solver(p).price_at_spot;
        errors.push_back(std::abs(price - bench) / std::max(std::abs(bench), 1e-300));
    }
    if (!errors.empty()) r.observe(errors.back() - 0.02);
    r.detail = "benchmark=" + std::to_string(bench) + " scales=" + join(sorted) + " rel_errors=" + join(errors);
    r.finish();
    return r;
}

PropertyReport check_lambda_scaling(const MarketParams& params, const std::vector<double>& lambdas,
                                    const PriceSolver& solver, double payoff_bound) {
    PropertyReport r{"lambda_scaling"};
    std::vector<double> unit;
    for (double lambda : lambdas) {
        if (!(lambda > 0.0)) throw ValidationError("lambdas", "must be > 0");
        MarketParams a = params;
        a.lambda_units = lambda;
        MarketParams b = params;
        b.lambda_units = 1.0;
        b.gamma = params.gamma * lambda;
        const PriceResult ra = solver(a);
        const PriceResult rb = solver(b);
        ScalarField scaled = rb.price;
        for (double& v : scaled.values) v *= lambda;
        r.observe(max_abs_difference(ra.price, scaled) - 1e-9);
        const double u = ra.price_at_spot / lambda;
        if (!unit.empty() && lambda >= lambdas[unit.size() - 1]) r.observe(u - unit.back() - 1e-6 * payoff_bound);
        unit.push_back(u);
    }
    r.detail = "lambdas=" + join(lambdas) + " unit_prices=" + join(unit);
    r.finish();
    return r;
}

std::vector<PropertyReport> check_semigroup_axioms(const ScalarField& field, const MarketModel& model, double dt,
                                                   const KernelOptions& opts, std::uint64_t seed) {
    const double gamma = model.params().gamma;
    using Op = std::function<ScalarField(const ScalarField&)>;
    const std::vector<std::pair<std::string, Op>> ops = {
        {"s1", [&](const ScalarField& f) { return apply_s1(f, dt, model, gamma, opts); }},
        {"s2", [&](const ScalarField& f) { return apply_s2(f, dt, model, gamma, opts); }},
        {"step",
         [&](const ScalarField& f) { return apply_s2(apply_s1(f, dt, model, gamma, opts), dt, model, gamma, opts); }},
    };
    const double scale = std::max({1.0, std::abs(field.min()), std::abs(field.max())});
    const double k = 0.37 * scale;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> bump(1e-6 * scale, 0.1 * scale);
    ScalarField lower = field;
    for (double& v : lower.values) v -= bump(rng);
    ScalarField constant(field.grid, k);
    ScalarField shifted = field;
    for (double& v : shifted.values) v += k;

    PropertyReport constancy{"constant_preservation"}, cash{"cash_invariance"}, mono{"monotonicity"};
    constancy.slack = cash.slack = 1e-12 * scale;
    std::size_t violations = 0;
    for (const auto& [name, op] : ops) {
        const ScalarField c = op(constant);
        double err = 0.0;
        for (double v : c.values) err = std::max(err, std::abs(v - k));
        constancy.observe(err);

        const ScalarField base = op(field);
        ScalarField plus = base;
        for (double& v : plus.values) v += k;
        cash.observe(max_abs_difference(op(shifted), plus));

        const ScalarField lo = op(lower);
        const double worst = max_difference(lo, base);
        for (std::size_t i = 0; i < lo.size(); ++i) violations += lo[i] > base[i];
        mono.observe(worst);
    }
    mono.slack = 0.0;
    mono.detail = "violating_nodes=" + std::to_string(violations);
    constancy.finish();
    cash.finish();
    mono.finish();
    mono.passed = mono.passed && violations == 0;
    return {constancy, cash, mono};
}

PropertyReport check_generator_order(double gamma, const KernelOptions& opts) {
    PropertyReport r{"generator_order"};
    MarketParams p;
    p.mu_P = 0.1;
    p.sigma_P = 0.15;
    p.sigma_bar_P = 0.2;
    p.gamma = gamma;
    p.assets = {AssetParams{0.15, 0.5, 1.0}};
    const MarketModel model(p);
    const auto& d = model.derived();
    const LogGrid grid({Axis{-4.0, 4.0, 40001}});
    const ScalarField phi = sample(grid, [](std::span<const double> x) { return 0.5 * x[0] * x[0]; });
    const double c1 = gamma * (1.0 - d.kappa_bar_P);
    const double sig = p.assets[0].sigma, vbar = p.assets[0].sigma_bar, A = d.A[0];
    // Generators applied to phi = x^2 / 2.
    auto l1 = [&](double x) { return 0.5 * vbar * vbar - 0.5 * c1 * vbar * vbar * x * x; };
    auto l2 = [&](double x) { return 0.5 * sig * sig + A * x - 0.5 * gamma * sig * sig * x * x; };
    const std::vector<double> probes{-1.0, -0.5, 0.0, 0.5, 1.0};
    const std::vector<double> dts{0.02, 0.01, 0.005};

    std::vector<double> orders;
    for (int which = 0; which < 2; ++which) {
        std::vector<std::vector<double>> quotient;
        for (double dt : dts) {
            const ScalarField s = which == 0 ? apply_s1(phi, dt, model, gamma, opts) : apply_s2(phi, dt, model, gamma, opts);
            std::vector<double> q;
            for (double x : probes) {
                const double xs[1] = {x};
                q.push_back((interpolate(s, xs) - 0.5 * x * x) / dt);
            }
            quotient.push_back(q);
        }
        double e0 = 0.0, e1 = 0.0, e2 = 0.0;
        for (std::size_t j = 0; j < probes.size(); ++j) {
            const double gen = which == 0 ? l1(probes[j]) : l2(probes[j]);
            e0 = std::max(e0, std::abs(quotient[0][j] - gen));
            e1 = std::max(e1, std::abs(quotient[1][j] - gen));
            e2 = std::max(e2, std::abs(quotient[2][j] - gen));
        }
        // Richardson: the differences of successive quotients share the
        // leading error term, so their ratio gives the order without bias.
        double d01 = 0.0, d12 = 0.0;
        for (std::size_t j = 0; j < probes.size(); ++j) {
            d01 = std::max(d01, std::abs(quotient[0][j] - quotient[1][j]));
            d12 = std::max(d12, std::abs(quotient[1][j] - quotient[2][j]));
        }
        const double order = std::log2(d01 / d12);
        orders.push_back(order);
        // Quotients must also approach the analytic generator.
        r.observe(e2 - e1);
        r.observe(1.0 - order);
    }
    r.slack = 0.05;
    r.detail = "order_s1=" + std::to_string(orders[0]) + " order_s2=" + std::to_string(orders[1]);
    r.finish();
    return r;
}

PropertyReport check_driver_consistency(const MarketModel& model, std::size_t samples, std::uint64_t seed,
                                        double driver_sign) {
    PropertyReport r{"driver_consistency"};
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    std::vector<double> grad(model.dims());
    for (std::size_t s = 0; s < samples; ++s) {
        for (double& g : grad) g = u(rng);
        const double f = driver_sign * bsde_driver(driver_argument(grad, model), model.params());
        const double reduced = reduced_driver(grad, model);
        r.observe(std::abs(f - reduced) - 1e-12 * std::max(1.0, std::abs(reduced)));
    }
    r.slack = 0.0;
    r.finish();
    return r;
}

}  // namespace uip
