#include "uip/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "uip/error.hpp"
#include "uip/quadrature.hpp"

namespace uip {

namespace {

enum class Reduction { Mean, CertaintyEquivalent };

// Gauss-Legendre on [-z_max, z_max] split at `cuts`, weighted by the standard
// normal density.
template <class F>
double normal_expectation(const QuadratureSpec& quad, std::vector<double> cuts, F&& f) {
    const QuadratureRule& gl = gauss_legendre(quad.nodes);
    std::vector<double> edges{-quad.z_max};
    std::sort(cuts.begin(), cuts.end());
    for (double c : cuts)
        if (c > edges.back() && c < quad.z_max) edges.push_back(c);
    edges.push_back(quad.z_max);
    static const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * M_PI);
    double acc = 0.0;
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
        const double mid = 0.5 * (edges[p] + edges[p + 1]);
        const double half = 0.5 * (edges[p + 1] - edges[p]);
        double panel = 0.0;
        for (std::size_t j = 0; j < gl.size(); ++j) {
            const double z = mid + half * gl.nodes[j];
            panel += gl.weights[j] * std::exp(-0.5 * z * z) * f(z);
        }
        acc += half * panel;
    }
    return acc * inv_sqrt_2pi;
}

class Integrator {
public:
    Integrator(const Payoff& g, const MarketParams& p, std::span<const double> spot, bool physical_drift,
               const QuadratureSpec& quad, std::function<double(double)> leaf)
        : g_(g), p_(p), quad_(quad), leaf_(std::move(leaf)) {
        const std::size_t n = p.dims();
        if (spot.size() != n) throw ValidationError("spot", "needs one price per asset");
        if (g.dims() != n) throw ValidationError("payoff", "dimension does not match the market");
        if (quad.nodes < 2) throw ValidationError("quad.nodes", "must be >= 2");
        const double sqrt_t = std::sqrt(p.T);
        for (std::size_t i = 0; i < n; ++i) {
            if (!(spot[i] > 0.0)) throw ValidationError("spot", "prices must be > 0");
            const auto& a = p.assets[i];
            const double drift = physical_drift ? a.mu : 0.0;
            log_mean_.push_back(std::log(spot[i]) + (drift - 0.5 * (a.sigma * a.sigma + a.sigma_bar * a.sigma_bar)) * p.T);
            idio_.push_back(a.sigma * sqrt_t);
            common_.push_back(a.sigma_bar * sqrt_t);
        }
        s_.assign(n, 0.0);
        base_.assign(n, 0.0);
    }

    double run() {
        // The common factor is smooth after the inner integrals unless some
        // asset has no idiosyncratic noise; cut at that asset's breakpoints then.
        std::vector<double> cuts;
        std::vector<double> spot(p_.dims());
        for (std::size_t i = 0; i < p_.dims(); ++i) spot[i] = std::exp(log_mean_[i]);
        for (std::size_t i = 0; i < p_.dims(); ++i) {
            if (idio_[i] != 0.0 || common_[i] == 0.0) continue;
            for (double b : g_.breaks(i, spot))
                if (b > 0.0) cuts.push_back((std::log(b) - log_mean_[i]) / common_[i]);
        }
        return normal_expectation(quad_, cuts, [this](double zc) {
            for (std::size_t i = 0; i < p_.dims(); ++i) base_[i] = log_mean_[i] + common_[i] * zc;
            return level(0);
        });
    }

private:
    double level(std::size_t i) {
        if (i == p_.dims()) return leaf_(g_(s_));
        if (idio_[i] == 0.0) {
            s_[i] = std::exp(base_[i]);
            return level(i + 1);
        }
        std::vector<double> cuts;
        for (double b : g_.breaks(i, s_))
            if (b > 0.0) cuts.push_back((std::log(b) - base_[i]) / idio_[i]);
        return normal_expectation(quad_, std::move(cuts), [this, i](double z) {
            s_[i] = std::exp(base_[i] + idio_[i] * z);
            return level(i + 1);
        });
    }

    const Payoff& g_;
    const MarketParams& p_;
    QuadratureSpec quad_;
    std::function<double(double)> leaf_;
    std::vector<double> log_mean_, idio_, common_, base_, s_;
};

double certainty_equivalent(const Payoff& payoff, const MarketParams& params, std::span<const double> spot,
                            bool physical, const QuadratureSpec& quad) {
    validate(params);
    const double lambda = params.lambda_units;
    const double gamma = params.gamma;
    if (gamma == 0.0) {
        Integrator it(payoff, params, spot, physical, quad, [lambda](double v) { return lambda * v; });
        return it.run();
    }
    // E[exp(-gamma lambda g)] directly when it is small; otherwise as
    // 1 + E[expm1(...)] through log1p, which keeps small gamma accurate.
    Integrator plain(payoff, params, spot, physical, quad,
                     [lambda, gamma](double v) { return std::exp(-gamma * lambda * v); });
    const double mass = plain.run();
    if (mass < 0.5) return -std::log(mass) / gamma;
    Integrator small(payoff, params, spot, physical, quad,
                     [lambda, gamma](double v) { return std::expm1(-gamma * lambda * v); });
    return -std::log1p(small.run()) / gamma;
}

}  // namespace

double no_hedge_price(const Payoff& payoff, const MarketParams& params, std::span<const double> spot,
                      const QuadratureSpec& quad) {
    return certainty_equivalent(payoff, params, spot, true, quad);
}

double expected_payoff(const Payoff& payoff, const MarketParams& params, std::span<const double> spot,
                       const QuadratureSpec& quad) {
    MarketParams p = params;
    p.gamma = 0.0;
    return certainty_equivalent(payoff, p, spot, true, quad);
}

double complete_market_price(const Payoff& payoff, const MarketParams& params, std::span<const double> spot,
                             const QuadratureSpec& quad) {
    MarketParams p = params;
    p.gamma = 0.0;
    return certainty_equivalent(payoff, p, spot, false, quad);
}

McEstimate monte_carlo_price(const Payoff& payoff, const MarketParams& params, std::span<const double> spot,
                             McMeasure measure, std::size_t paths, std::uint64_t seed) {
    validate(params);
    const std::size_t n = params.dims();
    if (spot.size() != n) throw ValidationError("spot", "needs one price per asset");
    if (paths < 2) throw ValidationError("paths", "must be >= 2");
    const double sqrt_t = std::sqrt(params.T);
    const double lambda = params.lambda_units;
    const double gamma = measure == McMeasure::NoHedge ? params.gamma : 0.0;
    std::vector<double> log_mean(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& a = params.assets[i];
        const double drift = measure == McMeasure::Complete ? 0.0 : a.mu;
        log_mean[i] = std::log(spot[i]) + (drift - 0.5 * (a.sigma * a.sigma + a.sigma_bar * a.sigma_bar)) * params.T;
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    std::vector<double> s(n);
    double sum = 0.0, sum_sq = 0.0, plain = 0.0;
    for (std::size_t k = 0; k < paths; ++k) {
        const double zc = normal(rng);
        for (std::size_t i = 0; i < n; ++i) {
            const auto& a = params.assets[i];
            s[i] = std::exp(log_mean[i] + a.sigma * sqrt_t * normal(rng) + a.sigma_bar * sqrt_t * zc);
        }
        const double v = lambda * payoff(s);
        const double x = gamma == 0.0 ? v : std::expm1(-gamma * v);
        sum += x;
        sum_sq += x * x;
        plain += std::exp(-gamma * v);
    }
    const double m = static_cast<double>(paths);
    const double mean = sum / m;
    const double var = std::max(0.0, (sum_sq - m * mean * mean) / (m - 1.0));
    const double se = std::sqrt(var / m);
    if (gamma == 0.0) return {mean, se};
    // Delta method through the logarithm.
    const double mass = plain / m;
    const double ce = mass < 0.5 ? -std::log(mass) / gamma : -std::log1p(mean) / gamma;
    return {ce, se / (gamma * mass)};
}

double bsde_driver(std::span<const double> z, const MarketParams& params) {
    if (params.gamma == 0.0) throw ValidationError("market.gamma", "driver is singular at gamma = 0");
    const std::size_t n = params.dims();
    if (z.size() != n + 2) throw ValidationError("z", "driver argument must have n + 2 components");
    const double gamma = params.gamma;
    const double norm_p = params.sigma_P * params.sigma_P + params.sigma_bar_P * params.sigma_bar_P;
    double zz = 0.0;
    for (double v : z) zz += v * v;
    const double sz = params.sigma_bar_P * z[n] + params.sigma_P * z[n + 1];
    const double cross = sz - params.mu_P / gamma;
    return -0.5 * gamma * zz + gamma / (2.0 * norm_p) * cross * cross -
           params.mu_P * params.mu_P / (2.0 * gamma * norm_p);
}

std::vector<double> driver_argument(std::span<const double> grad_u, const MarketModel& model) {
    const std::size_t n = model.dims();
    std::vector<double> z(n + 2, 0.0);
    double eta = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        z[i] = model.params().assets[i].sigma * grad_u[i];
        eta += model.params().assets[i].sigma_bar * grad_u[i];
    }
    z[n] = eta;
    return z;
}

double reduced_driver(std::span<const double> grad_u, const MarketModel& model) {
    const auto& p = model.params();
    const auto& d = model.derived();
    double eta = 0.0, idio = 0.0;
    for (std::size_t i = 0; i < model.dims(); ++i) {
        eta += p.assets[i].sigma_bar * grad_u[i];
        idio += p.assets[i].sigma * p.assets[i].sigma * grad_u[i] * grad_u[i];
    }
    return -d.vartheta_bar_P * eta - 0.5 * p.gamma * idio - 0.5 * p.gamma * (1.0 - d.kappa_bar_P) * eta * eta;
}

double black_scholes_put(double spot, double strike, double vol, double T) {
    const double sd = vol * std::sqrt(T);
    const double d1 = (std::log(spot / strike) + 0.5 * sd * sd) / sd;
    const double d2 = d1 - sd;
    auto cdf = [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); };
    return strike * cdf(-d2) - spot * cdf(-d1);
}

}  // namespace uip
