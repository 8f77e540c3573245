#include "uip/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <map>

#include "uip/error.hpp"

namespace uip {
namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    double v = 0.0;
    const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || end != t.data() + t.size() || !std::isfinite(v))
        throw ValidationError(key, "expected a finite number, got '" + t + "'");
    return v;
}

std::uint64_t to_u64(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    std::uint64_t v = 0;
    const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || end != t.data() + t.size())
        throw ValidationError(key, "expected a nonnegative integer, got '" + t + "'");
    return v;
}

std::size_t to_count(const std::string& key, const std::string& text, std::size_t min) {
    const std::uint64_t v = to_u64(key, text);
    if (v < min) throw ValidationError(key, "must be >= " + std::to_string(min));
    return static_cast<std::size_t>(v);
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    const std::string t = trim(text);
    if (t.empty()) return out;
    std::size_t start = 0;
    while (true) {
        const auto comma = t.find(',', start);
        out.push_back(trim(t.substr(start, comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

std::vector<double> to_list(const std::string& key, const std::string& text) {
    std::vector<double> out;
    for (const auto& item : split_list(text)) out.push_back(to_double(key, item));
    if (out.empty()) throw ValidationError(key, "list must not be empty");
    return out;
}

void set_range_part(Range& r, const std::string& key, const std::string& part, const std::string& value) {
    if (part == "min") r.min = to_double(key, value);
    else if (part == "max") r.max = to_double(key, value);
    else if (part == "count") r.count = to_count(key, value, 1);
    else throw ValidationError(key, "unknown key");
}

using Setter = std::function<void(ExperimentConfig&, const std::string&, const std::string&)>;

template <class T>
Setter number(T ExperimentConfig::*block, double T::*field) {
    return [=](ExperimentConfig& c, const std::string& k, const std::string& v) { c.*block.*field = to_double(k, v); };
}

template <class T>
Setter count(T ExperimentConfig::*block, std::size_t T::*field, std::size_t min) {
    return [=](ExperimentConfig& c, const std::string& k, const std::string& v) {
        c.*block.*field = to_count(k, v, min);
    };
}

template <class T>
Setter list(T ExperimentConfig::*block, std::vector<double> T::*field) {
    return [=](ExperimentConfig& c, const std::string& k, const std::string& v) { c.*block.*field = to_list(k, v); };
}

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = [] {
        using C = ExperimentConfig;
        std::map<std::string, Setter> m;
        m["market.mu_P"] = number(&C::market, &MarketParams::mu_P);
        m["market.sigma_P"] = number(&C::market, &MarketParams::sigma_P);
        m["market.sigma_bar_P"] = number(&C::market, &MarketParams::sigma_bar_P);
        m["market.gamma"] = number(&C::market, &MarketParams::gamma);
        m["market.lambda"] = number(&C::market, &MarketParams::lambda_units);
        m["market.T"] = number(&C::market, &MarketParams::T);
        m["market.assets"] = [](C& c, const std::string& k, const std::string& v) {
            const std::size_t n = to_count(k, v, 1);
            if (n > kMaxGridDims) throw ValidationError(k, "at most " + std::to_string(kMaxGridDims) + " assets");
            c.market.assets.resize(n);
        };
        m["spot"] = [](C& c, const std::string& k, const std::string& v) { c.spot = to_list(k, v); };
        m["seed"] = [](C& c, const std::string& k, const std::string& v) { c.seed = to_u64(k, v); };
        m["threads"] = [](C& c, const std::string& k, const std::string& v) {
            c.threads = static_cast<unsigned>(to_count(k, v, 1));
        };

        m["payoff.kind"] = [](C& c, const std::string& k, const std::string& v) {
            const std::string t = trim(v);
            if (t == "vulnerable_put") c.payoff.kind = PayoffKind::VulnerablePut;
            else if (t == "put") c.payoff.kind = PayoffKind::Put;
            else if (t == "constant") c.payoff.kind = PayoffKind::Constant;
            else throw ValidationError(k, "expected vulnerable_put, put or constant");
        };
        m["payoff.K"] = [](C& c, const std::string& k, const std::string& v) { c.payoff.vulnerable.K = to_double(k, v); };
        m["payoff.L"] = [](C& c, const std::string& k, const std::string& v) { c.payoff.vulnerable.L = to_double(k, v); };
        m["payoff.alpha"] = [](C& c, const std::string& k, const std::string& v) {
            c.payoff.vulnerable.alpha = to_double(k, v);
        };
        m["payoff.value"] = [](C& c, const std::string& k, const std::string& v) { c.payoff.value = to_double(k, v); };
        m["payoff.epsilon"] = [](C& c, const std::string& k, const std::string& v) {
            if (trim(v) == "default") c.payoff.epsilon.reset();
            else c.payoff.epsilon = to_double(k, v);
        };

        m["solver.scheme"] = [](C& c, const std::string& k, const std::string& v) {
            static const std::map<std::string, Scheme> names{{"splitting", Scheme::Splitting},
                                                             {"picard", Scheme::Picard},
                                                             {"analytic-no-hedge", Scheme::AnalyticNoHedge},
                                                             {"analytic-complete", Scheme::AnalyticComplete},
                                                             {"mc-no-hedge", Scheme::McNoHedge},
                                                             {"mc-complete", Scheme::McComplete}};
            const auto it = names.find(trim(v));
            if (it == names.end())
                throw ValidationError(k, "expected splitting, picard, analytic-no-hedge, analytic-complete, "
                                         "mc-no-hedge or mc-complete");
            c.solver.scheme = it->second;
        };
        m["solver.N"] = count(&C::solver, &SolverConfig::steps, 1);
        m["solver.nodes"] = count(&C::solver, &SolverConfig::nodes, 3);
        m["solver.quad_nodes"] = count(&C::solver, &SolverConfig::quad_nodes, 1);
        m["solver.vol_widths"] = number(&C::solver, &SolverConfig::vol_widths);
        m["solver.tol"] = number(&C::solver, &SolverConfig::tol);
        m["solver.max_iter"] = count(&C::solver, &SolverConfig::max_iter, 1);
        m["solver.benchmark_nodes"] = count(&C::solver, &SolverConfig::benchmark_nodes, 1);
        m["solver.mc_paths"] = count(&C::solver, &SolverConfig::mc_paths, 2);
        m["solver.order"] = [](C& c, const std::string& k, const std::string& v) {
            const std::string t = trim(v);
            if (t == "predict-correct") c.solver.order = StepOrder::PredictCorrect;
            else if (t == "correct-predict") c.solver.order = StepOrder::CorrectPredict;
            else throw ValidationError(k, "expected predict-correct or correct-predict");
        };

        for (const char* r : {"s1", "s2", "approx_s1", "maturities"}) {
            for (const char* part : {"min", "max", "count"}) {
                const std::string name = r, p = part;
                m["experiment." + name + "." + p] = [name, p](C& c, const std::string& k, const std::string& v) {
                    Range& range = name == "s1"          ? c.experiment.s1
                                   : name == "s2"        ? c.experiment.s2
                                   : name == "approx_s1" ? c.experiment.approx_s1
                                                         : c.experiment.maturities;
                    set_range_part(range, k, p, v);
                };
            }
        }
        m["experiment.s2_panels"] = list(&C::experiment, &ExperimentBlock::s2_panels);
        m["experiment.s1_fixed"] = number(&C::experiment, &ExperimentBlock::s1_fixed);
        m["experiment.approx_s2"] = number(&C::experiment, &ExperimentBlock::approx_s2);
        m["experiment.n_list"] = list(&C::experiment, &ExperimentBlock::n_list);
        m["experiment.n_maturities"] = list(&C::experiment, &ExperimentBlock::n_maturities);
        m["experiment.gammas"] = list(&C::experiment, &ExperimentBlock::gammas);
        m["experiment.vol_pairs"] = list(&C::experiment, &ExperimentBlock::vol_pairs);
        m["experiment.capm_mu"] = list(&C::experiment, &ExperimentBlock::capm_mu);

        m["validate.properties"] = [](C& c, const std::string&, const std::string& v) {
            c.validate.properties = split_list(v);
        };
        m["validate.inject_fault"] = [](C& c, const std::string& k, const std::string& v) {
            const std::string t = trim(v);
            if (t != "none" && t != "driver_sign") throw ValidationError(k, "expected none or driver_sign");
            c.validate.inject_fault = t;
        };
        m["validate.nodes"] = count(&C::validate, &ValidateBlock::nodes, 3);
        m["validate.gammas"] = list(&C::validate, &ValidateBlock::gammas);
        m["validate.sigma_P"] = list(&C::validate, &ValidateBlock::sigma_P);
        m["validate.lambdas"] = list(&C::validate, &ValidateBlock::lambdas);
        m["validate.limit_gammas"] = list(&C::validate, &ValidateBlock::limit_gammas);
        m["validate.sigma_scales"] = list(&C::validate, &ValidateBlock::sigma_scales);
        m["validate.driver_samples"] = count(&C::validate, &ValidateBlock::driver_samples, 1);
        return m;
    }();
    return table;
}

// asset.<i>.<field>, i counted from 1.
bool set_asset_value(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    if (key.rfind("asset.", 0) != 0) return false;
    const auto dot = key.find('.', 6);
    if (dot == std::string::npos) throw ValidationError(key, "expected asset.<i>.<field>");
    const std::size_t i = to_count(key, key.substr(6, dot - 6), 1);
    const std::string field = key.substr(dot + 1);
    auto& assets = cfg.market.assets;
    if (i > assets.size() + 1) throw ValidationError(key, "assets must be numbered contiguously from 1");
    if (i > kMaxGridDims) throw ValidationError(key, "at most " + std::to_string(kMaxGridDims) + " assets");
    double* target = nullptr;
    AssetParams next;
    AssetParams& a = i <= assets.size() ? assets[i - 1] : next;
    if (field == "mu") target = &a.mu;
    else if (field == "sigma") target = &a.sigma;
    else if (field == "sigma_bar") target = &a.sigma_bar;
    else throw ValidationError(key, "unknown key");
    *target = to_double(key, value);
    if (i > assets.size()) assets.push_back(next);
    return true;
}

}  // namespace

std::vector<double> Range::points() const {
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i)
        out[i] = count == 1 ? min : (i + 1 == count ? max : min + (max - min) * static_cast<double>(i) / (count - 1));
    return out;
}

void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    if (set_asset_value(cfg, key, value)) return;
    const auto& table = setters();
    const auto it = table.find(key);
    if (it == table.end()) throw ValidationError(key, "unknown key");
    it->second(cfg, key, value);
}

ExperimentConfig parse_config(std::istream& in) {
    ExperimentConfig cfg;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ValidationError("line " + std::to_string(lineno), "expected key = value");
        set_config_value(cfg, trim(line.substr(0, eq)), line.substr(eq + 1));
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("config", "cannot open '" + path + "'");
    return parse_config(in);
}

void validate(const ExperimentConfig& cfg) {
    validate(cfg.market);
    if (cfg.spot.size() != cfg.market.dims()) throw ValidationError("spot", "needs one price per asset");
    for (double s : cfg.spot)
        if (!(s > 0.0)) throw ValidationError("spot", "prices must be > 0");
    if (cfg.payoff.kind == PayoffKind::VulnerablePut) {
        if (cfg.market.dims() != 2) throw ValidationError("payoff.kind", "vulnerable_put needs two assets");
        validate(cfg.payoff.vulnerable);
    }
    if (cfg.payoff.kind == PayoffKind::Put && !(cfg.payoff.vulnerable.K > 0.0))
        throw ValidationError("payoff.K", "must be > 0");
    if (cfg.payoff.epsilon && !(*cfg.payoff.epsilon >= 0.0)) throw ValidationError("payoff.epsilon", "must be >= 0");
    if (!(cfg.solver.tol > 0.0)) throw ValidationError("solver.tol", "must be > 0");
    if (!(cfg.solver.vol_widths > 0.0)) throw ValidationError("solver.vol_widths", "must be > 0");

    const auto& e = cfg.experiment;
    const std::pair<const char*, const Range*> ranges[] = {
        {"experiment.s1", &e.s1}, {"experiment.s2", &e.s2}, {"experiment.approx_s1", &e.approx_s1},
        {"experiment.maturities", &e.maturities}};
    for (const auto& [name, r] : ranges) {
        if (!(r->min > 0.0) || r->max < r->min) throw ValidationError(name, "needs 0 < min <= max");
    }
    for (double n : e.n_list)
        if (n < 1.0 || n != std::floor(n)) throw ValidationError("experiment.n_list", "entries must be integers >= 1");
    for (double t : e.n_maturities)
        if (!(t > 0.0)) throw ValidationError("experiment.n_maturities", "entries must be > 0");
    for (double g : e.gammas)
        if (!(g >= 0.0)) throw ValidationError("experiment.gammas", "entries must be >= 0");
    if (e.vol_pairs.size() % 2 != 0) throw ValidationError("experiment.vol_pairs", "needs (sigma_1, sigma_2) pairs");
    for (double v : e.vol_pairs)
        if (!(v >= 0.0)) throw ValidationError("experiment.vol_pairs", "entries must be >= 0");
    if (e.capm_mu.size() != cfg.market.dims()) throw ValidationError("experiment.capm_mu", "needs one drift per asset");
    for (double s : e.s2_panels)
        if (!(s > 0.0)) throw ValidationError("experiment.s2_panels", "entries must be > 0");
    if (!(e.s1_fixed > 0.0)) throw ValidationError("experiment.s1_fixed", "must be > 0");
    if (!(e.approx_s2 > 0.0)) throw ValidationError("experiment.approx_s2", "must be > 0");
}

std::string to_string(Scheme scheme) {
    switch (scheme) {
        case Scheme::Splitting: return "splitting";
        case Scheme::Picard: return "picard";
        case Scheme::AnalyticNoHedge: return "analytic-no-hedge";
        case Scheme::AnalyticComplete: return "analytic-complete";
        case Scheme::McNoHedge: return "mc-no-hedge";
        case Scheme::McComplete: return "mc-complete";
    }
    return "unknown";
}

PayoffPtr make_payoff(const ExperimentConfig& cfg) {
    switch (cfg.payoff.kind) {
        case PayoffKind::VulnerablePut: return vulnerable_put(cfg.payoff.vulnerable);
        case PayoffKind::Put: return put(cfg.payoff.vulnerable.K, cfg.market.dims());
        case PayoffKind::Constant: return constant_payoff(cfg.payoff.value, cfg.market.dims());
    }
    throw ValidationError("payoff.kind", "unknown kind");
}

SplitSettings split_settings(const ExperimentConfig& cfg) {
    SplitSettings s;
    s.steps = cfg.solver.steps;
    s.grid.nodes = cfg.solver.nodes;
    s.grid.vol_widths = cfg.solver.vol_widths;
    s.kernel.quad_nodes = cfg.solver.quad_nodes;
    s.kernel.threads = cfg.threads;
    s.epsilon = cfg.payoff.epsilon;
    s.order = cfg.solver.order;
    return s;
}

}  // namespace uip
