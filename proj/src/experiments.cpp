#include "uip/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>

#include "uip/analytic.hpp"
#include "uip/error.hpp"
#include "uip/parallel.hpp"
#include "uip/picard.hpp"

namespace uip {
namespace {

QuadratureSpec quad_spec(const ExperimentConfig& cfg) {
    QuadratureSpec q;
    q.nodes = cfg.solver.benchmark_nodes;
    return q;
}

// Benchmarks price the same (smoothed) terminal payoff the grid solvers see.
PayoffPtr solver_payoff(const ExperimentConfig& cfg) { return terminal_payoff(make_payoff(cfg), cfg.payoff.epsilon); }

std::vector<std::vector<double>> points_on_s1(const std::vector<double>& s1, double s2) {
    std::vector<std::vector<double>> out;
    for (double s : s1) out.push_back({s, s2});
    return out;
}

std::vector<std::vector<double>> points_on_s2(double s1, const std::vector<double>& s2) {
    std::vector<std::vector<double>> out;
    for (double s : s2) out.push_back({s1, s});
    return out;
}

std::vector<double> mid_span(const std::vector<std::vector<double>>& pts) {
    std::vector<double> spot(pts.front().size());
    for (std::size_t k = 0; k < spot.size(); ++k) {
        double lo = pts.front()[k], hi = lo;
        for (const auto& p : pts) {
            lo = std::min(lo, p[k]);
            hi = std::max(hi, p[k]);
        }
        spot[k] = std::sqrt(lo * hi);
    }
    return spot;
}

void require_two_assets(const ExperimentConfig& cfg, const std::string& what) {
    if (cfg.market.dims() != 2) throw ValidationError("market.assets", what + " needs a two-asset market");
}

// Independent solves run in parallel, one kernel thread each; the table is
// assembled afterwards in sweep order.
template <class Fn>
void sweep(std::size_t n, unsigned threads, Fn&& fn) {
    parallel_for(n, threads, fn);
}

double spot_price(const ExperimentConfig& cfg, const MarketParams& params, std::size_t steps, unsigned threads) {
    SplitSettings s = split_settings(cfg);
    s.steps = steps;
    s.kernel.threads = threads;
    return solve(make_payoff(cfg), params, cfg.spot, s).price_at_spot;
}

CsvTable figure_n(const ExperimentConfig& cfg) {
    const auto& e = cfg.experiment;
    CsvTable t;
    t.header = {"panel", "T", "N", "price"};
    const std::size_t nn = e.n_list.size();
    std::vector<double> prices(e.n_maturities.size() * nn);
    sweep(prices.size(), cfg.threads, [&](std::size_t i) {
        MarketParams p = cfg.market;
        p.T = e.n_maturities[i / nn];
        prices[i] = spot_price(cfg, p, static_cast<std::size_t>(e.n_list[i % nn]), 1);
    });
    for (std::size_t i = 0; i < prices.size(); ++i) {
        const double T = e.n_maturities[i / nn];
        t.add_row({T <= 1.0 ? "1" : "2", sci(T), std::to_string(static_cast<std::size_t>(e.n_list[i % nn])),
                   sci(prices[i])});
    }
    return t;
}

CsvTable figure_approx(const ExperimentConfig& cfg) {
    require_two_assets(cfg, "fig-approx");
    const auto pts = points_on_s1(cfg.experiment.approx_s1.points(), cfg.experiment.approx_s2);
    MarketParams p = cfg.market;
    p.sigma_bar_P = 0.0;
    const PayoffPtr g = solver_payoff(cfg);
    // One grid per spot: this table measures accuracy, and a grid stretched
    // over the whole sweep is twice as coarse.
    std::vector<double> explicit_price(pts.size()), split(pts.size());
    sweep(pts.size(), cfg.threads, [&](std::size_t i) {
        SplitSettings s = split_settings(cfg);
        s.kernel.threads = 1;
        split[i] = solve(make_payoff(cfg), p, pts[i], s).price_at_spot;
        explicit_price[i] = no_hedge_price(*g, p, pts[i], quad_spec(cfg));
    });
    CsvTable t;
    t.header = {"s1", "s2", "explicit", "splitting", "rel_diff"};
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double rel = std::abs(split[i] - explicit_price[i]) / std::max(std::abs(explicit_price[i]), 0.01);
        t.add_row({sci(pts[i][0]), sci(pts[i][1]), sci(explicit_price[i]), sci(split[i]), sci(rel)});
    }
    return t;
}

// Shared by fig-s and fig-v: risk-neutral, hedged and no-hedge prices along a
// line of spots, one grid solve per line.
void price_line(const ExperimentConfig& cfg, const std::vector<std::vector<double>>& pts, const std::string& panel,
                CsvTable& t) {
    const PriceResult r = solve_covering(cfg, cfg.market, pts, cfg.threads);
    const PayoffPtr g = solver_payoff(cfg);
    std::vector<double> rn(pts.size()), nh(pts.size());
    sweep(pts.size(), cfg.threads, [&](std::size_t i) {
        rn[i] = complete_market_price(*g, cfg.market, pts[i], quad_spec(cfg));
        nh[i] = no_hedge_price(*g, cfg.market, pts[i], quad_spec(cfg));
    });
    for (std::size_t i = 0; i < pts.size(); ++i)
        t.add_row({panel, sci(pts[i][0]), sci(pts[i][1]), sci(rn[i]), sci(value_at(r.price, pts[i])), sci(nh[i])});
}

CsvTable figure_s(const ExperimentConfig& cfg) {
    require_two_assets(cfg, "fig-s");
    CsvTable t;
    t.header = {"panel", "s1", "s2", "risk_neutral", "hedged", "no_hedge"};
    for (double s2 : cfg.experiment.s2_panels)
        price_line(cfg, points_on_s1(cfg.experiment.s1.points(), s2), sci(s2), t);
    return t;
}

CsvTable figure_v(const ExperimentConfig& cfg) {
    require_two_assets(cfg, "fig-v");
    CsvTable t;
    t.header = {"panel", "s1", "s2", "risk_neutral", "hedged", "no_hedge"};
    price_line(cfg, points_on_s2(cfg.experiment.s1_fixed, cfg.experiment.s2.points()), sci(cfg.experiment.s1_fixed), t);
    return t;
}

CsvTable figure_gamma(const ExperimentConfig& cfg) {
    const auto& e = cfg.experiment;
    const auto Ts = e.maturities.points();
    struct Point {
        std::string panel;
        MarketParams params;
    };
    std::vector<Point> pts;
    for (double gamma : e.gammas) {
        for (double T : Ts) {
            MarketParams p = cfg.market;
            p.gamma = gamma;
            p.T = T;
            pts.push_back({"gamma", p});
        }
    }
    if (cfg.market.dims() == 2) {
        for (std::size_t v = 0; v + 1 < e.vol_pairs.size(); v += 2) {
            for (double T : Ts) {
                MarketParams p = cfg.market;
                p.T = T;
                p.assets[0].sigma = e.vol_pairs[v];
                p.assets[1].sigma = e.vol_pairs[v + 1];
                for (std::size_t i = 0; i < p.assets.size(); ++i) p.assets[i].mu = e.capm_mu[i];
                pts.push_back({"vol", p});
            }
        }
    }
    std::vector<double> price(pts.size()), rn(pts.size());
    const PayoffPtr g = solver_payoff(cfg);
    sweep(pts.size(), cfg.threads, [&](std::size_t i) {
        price[i] = spot_price(cfg, pts[i].params, cfg.solver.steps, 1);
        rn[i] = complete_market_price(*g, pts[i].params, cfg.spot, quad_spec(cfg));
    });
    CsvTable t;
    t.header = {"panel", "gamma", "sigma1", "sigma2", "T", "price", "risk_neutral"};
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto& p = pts[i].params;
        t.add_row({pts[i].panel, sci(p.gamma), sci(p.assets[0].sigma), p.dims() > 1 ? sci(p.assets[1].sigma) : "",
                   sci(p.T), sci(price[i]), sci(rn[i])});
    }
    return t;
}

PriceSolver fixed_grid_solver(const ExperimentConfig& cfg) {
    SplitSettings s = split_settings(cfg);
    s.grid.nodes = cfg.validate.nodes;
    const PayoffPtr payoff = make_payoff(cfg);
    // One layout for every parameter point so fields compare node by node.
    s.grid.axes = build_grid(s.grid, MarketModel(cfg.market), *terminal_payoff(payoff, s.epsilon), cfg.spot).axes();
    const std::vector<double> spot = cfg.spot;
    return [payoff, spot, s](const MarketParams& p) { return solve(payoff, p, spot, s); };
}

PropertyReport residual_refinement(const ExperimentConfig& cfg) {
    PropertyReport r{"pde_residual"};
    SplitSettings s = split_settings(cfg);
    s.grid.nodes = cfg.validate.nodes;
    const double coarse = solve(make_payoff(cfg), cfg.market, cfg.spot, s).residual_sup;
    s.steps *= 2;
    s.grid.nodes = 2 * s.grid.nodes - 1;
    const double fine = solve(make_payoff(cfg), cfg.market, cfg.spot, s).residual_sup;
    r.observe(fine - coarse);
    r.detail = "coarse=" + sci(coarse) + " fine=" + sci(fine);
    r.finish();
    return r;
}

}  // namespace

PriceResult solve_covering(const ExperimentConfig& cfg, const MarketParams& params,
                           const std::vector<std::vector<double>>& cover, unsigned threads) {
    SplitSettings s = split_settings(cfg);
    s.kernel.threads = threads;
    s.grid.cover = cover;
    return solve(make_payoff(cfg), params, mid_span(cover), s);
}

CsvTable run_price(const ExperimentConfig& cfg, const RunOptions& opts) {
    validate(cfg);
    const auto start = std::chrono::steady_clock::now();
    const PayoffPtr payoff = make_payoff(cfg);
    const MarketParams& p = cfg.market;
    std::string steps;
    double price = 0.0;
    std::string hedge;
    auto diag = [&](const std::string& key, const std::string& value) {
        if (opts.diag) *opts.diag << key << '=' << value << '\n';
    };
    switch (cfg.solver.scheme) {
        case Scheme::Splitting: {
            const PriceResult r = solve(payoff, p, cfg.spot, split_settings(cfg));
            price = r.price_at_spot;
            hedge = sci(r.hedge_at_spot);
            steps = std::to_string(cfg.solver.steps);
            diag("residual_sup", sci(r.residual_sup));
            diag("payoff_bound", sci(r.payoff_bound));
            diag("field_min", sci(r.price.min()));
            diag("field_max", sci(r.price.max()));
            break;
        }
        case Scheme::Picard: {
            PicardSettings s;
            s.tol = cfg.solver.tol;
            s.max_iter = cfg.solver.max_iter;
            s.steps = cfg.solver.steps;
            s.grid.nodes = cfg.solver.nodes;
            s.grid.vol_widths = cfg.solver.vol_widths;
            s.kernel.quad_nodes = cfg.solver.quad_nodes;
            s.kernel.threads = cfg.threads;
            s.epsilon = cfg.payoff.epsilon;
            const PicardResult r = picard_iterate(payoff, p, cfg.spot, s);
            price = r.result.price_at_spot;
            hedge = sci(r.result.hedge_at_spot);
            steps = std::to_string(cfg.solver.steps);
            diag("iterations", std::to_string(r.iterations));
            diag("converged", r.converged ? "true" : "false");
            diag("final_delta", r.trace.empty() ? "nan" : sci(r.trace.back().sup_delta));
            diag("residual_sup", sci(r.result.residual_sup));
            break;
        }
        case Scheme::AnalyticNoHedge:
            price = no_hedge_price(*terminal_payoff(payoff, cfg.payoff.epsilon), p, cfg.spot, quad_spec(cfg));
            hedge = sci(0.0);
            break;
        case Scheme::AnalyticComplete:
            price = complete_market_price(*terminal_payoff(payoff, cfg.payoff.epsilon), p, cfg.spot, quad_spec(cfg));
            break;
        case Scheme::McNoHedge:
        case Scheme::McComplete: {
            const auto measure = cfg.solver.scheme == Scheme::McNoHedge ? McMeasure::NoHedge : McMeasure::Complete;
            const McEstimate m = monte_carlo_price(*terminal_payoff(payoff, cfg.payoff.epsilon), p, cfg.spot, measure,
                                                   cfg.solver.mc_paths, cfg.seed);
            price = m.value;
            if (measure == McMeasure::NoHedge) hedge = sci(0.0);
            diag("std_error", sci(m.std_error));
            diag("paths", std::to_string(cfg.solver.mc_paths));
            break;
        }
    }
    const double wall =
        opts.timing ? std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count() : 0.0;
    CsvTable t;
    t.header = {"scheme", "s1", "s2", "gamma", "lambda", "N", "price", "hedge", "wall_ms"};
    t.add_row({to_string(cfg.solver.scheme), sci(cfg.spot[0]), cfg.spot.size() > 1 ? sci(cfg.spot[1]) : "",
               sci(p.gamma), sci(p.lambda_units), steps, sci(price), hedge, sci(wall)});
    return t;
}

const std::vector<std::string>& figure_names() {
    static const std::vector<std::string> names{"fig-n", "fig-approx", "fig-s", "fig-v", "fig-gamma"};
    return names;
}

CsvTable run_figure(const ExperimentConfig& cfg, const std::string& name) {
    validate(cfg);
    if (name == "fig-n") return figure_n(cfg);
    if (name == "fig-approx") return figure_approx(cfg);
    if (name == "fig-s") return figure_s(cfg);
    if (name == "fig-v") return figure_v(cfg);
    if (name == "fig-gamma") return figure_gamma(cfg);
    throw ValidationError("figure", "unknown figure '" + name + "'");
}

const std::vector<std::string>& property_names() {
    static const std::vector<std::string> names{
        "gamma_monotonicity", "kappa_monotonicity", "gamma_zero_limit", "sigma_zero_limit", "lambda_scaling",
        "semigroup_axioms",   "generator_order",    "driver_consistency", "pde_residual"};
    return names;
}

CsvTable ValidationOutcome::table() const {
    CsvTable t;
    t.header = {"property", "points", "worst_violation", "slack", "passed", "detail"};
    for (const auto& r : reports)
        t.add_row({r.name, std::to_string(r.points), sci(r.worst_violation), sci(r.slack), r.passed ? "true" : "false",
                   r.detail});
    return t;
}

ValidationOutcome run_validation(const ExperimentConfig& cfg) {
    validate(cfg);
    std::vector<std::string> selected = cfg.validate.properties.value_or(property_names());
    for (const auto& name : selected)
        if (std::find(property_names().begin(), property_names().end(), name) == property_names().end())
            throw ValidationError("validate.properties", "unknown property '" + name + "'");

    const PayoffPtr payoff = make_payoff(cfg);
    const double bound = cfg.market.lambda_units * payoff->bound();
    const auto benchmark = [&](const MarketParams& p) {
        return complete_market_price(*solver_payoff(cfg), p, cfg.spot, quad_spec(cfg));
    };
    ValidationOutcome out;
    for (const auto& name : selected) {
        const PriceSolver solver = fixed_grid_solver(cfg);
        if (name == "gamma_monotonicity") {
            out.reports.push_back(check_gamma_monotonicity(cfg.market, cfg.validate.gammas, solver, bound));
        } else if (name == "kappa_monotonicity") {
            out.reports.push_back(
                check_kappa_monotonicity(with_capm_drifts(cfg.market), cfg.validate.sigma_P, solver, bound));
        } else if (name == "gamma_zero_limit") {
            out.reports.push_back(
                check_gamma_zero_limit(with_capm_drifts(cfg.market), cfg.validate.limit_gammas, solver, benchmark));
        } else if (name == "sigma_zero_limit") {
            out.reports.push_back(check_sigma_zero_limit(cfg.market, cfg.validate.sigma_scales, solver, benchmark));
        } else if (name == "lambda_scaling") {
            out.reports.push_back(check_lambda_scaling(cfg.market, cfg.validate.lambdas, solver, bound));
        } else if (name == "semigroup_axioms") {
            SplitSettings s = split_settings(cfg);
            s.grid.nodes = cfg.validate.nodes;
            const PayoffPtr g = terminal_payoff(payoff, s.epsilon);
            const MarketModel model(cfg.market);
            const ScalarField field =
                terminal_field(build_grid(s.grid, model, *g, cfg.spot), *g, cfg.market.lambda_units);
            const double dt = cfg.market.T / static_cast<double>(cfg.solver.steps);
            for (auto& r : check_semigroup_axioms(field, model, dt, s.kernel, cfg.seed)) out.reports.push_back(r);
        } else if (name == "generator_order") {
            out.reports.push_back(check_generator_order(cfg.market.gamma, split_settings(cfg).kernel));
        } else if (name == "driver_consistency") {
            const double sign = cfg.validate.inject_fault == "driver_sign" ? -1.0 : 1.0;
            out.reports.push_back(
                check_driver_consistency(MarketModel(cfg.market), cfg.validate.driver_samples, cfg.seed, sign));
        } else if (name == "pde_residual") {
            out.reports.push_back(residual_refinement(cfg));
        }
    }
    for (const auto& r : out.reports) out.passed = out.passed && r.passed;
    return out;
}

CsvTable run_converge(const ExperimentConfig& cfg) {
    validate(cfg);
    const auto& ns = cfg.experiment.n_list;
    std::vector<double> single(ns.size()), doubled(ns.size());
    sweep(2 * ns.size(), cfg.threads, [&](std::size_t i) {
        const auto n = static_cast<std::size_t>(ns[i / 2]);
        (i % 2 ? doubled : single)[i / 2] = spot_price(cfg, cfg.market, i % 2 ? 2 * n : n, 1);
    });
    CsvTable t;
    t.header = {"N", "price_N", "price_2N", "abs_diff", "rel_diff"};
    for (std::size_t i = 0; i < ns.size(); ++i) {
        const double d = std::abs(single[i] - doubled[i]);
        t.add_row({std::to_string(static_cast<std::size_t>(ns[i])), sci(single[i]), sci(doubled[i]), sci(d),
                   sci(d / std::max(std::abs(doubled[i]), 0.01))});
    }
    return t;
}

}  // namespace uip
