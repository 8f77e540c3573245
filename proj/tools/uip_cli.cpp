#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "uip/error.hpp"
#include "uip/experiments.hpp"

namespace {

enum Exit { kOk = 0, kPropertyFailure = 1, kConfigError = 2, kNumericalAbort = 3 };

struct Common {
    std::string config;
    std::string out;
    std::vector<std::string> sets;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    bool timing = false;
};

uip::ExperimentConfig load(const Common& c, const CLI::App& app) {
    uip::ExperimentConfig cfg = c.config.empty() ? uip::ExperimentConfig{} : uip::load_config(c.config);
    for (const auto& kv : c.sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw uip::ValidationError(kv, "--set expects key=value");
        uip::set_config_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (app.count("--seed")) cfg.seed = c.seed;
    if (app.count("--threads")) cfg.threads = c.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : c.threads;
    return cfg;
}

void emit(const Common& c, const uip::CsvTable& table) {
    if (c.out.empty() || c.out == "-") {
        uip::write_csv(std::cout, table);
        return;
    }
    std::ofstream f(c.out);
    if (!f) throw uip::ValidationError("--out", "cannot write '" + c.out + "'");
    uip::write_csv(f, table);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Utility indifference prices for options on non-traded assets"};
    app.require_subcommand(1);
    app.fallthrough();
    Common c;
    app.add_option("--config", c.config, "Flat key = value config file")->check(CLI::ExistingFile);
    app.add_option("--set", c.sets, "Override one config key (key=value), repeatable");
    app.add_option("--out", c.out, "CSV destination (stdout when omitted)");
    app.add_option("--seed", c.seed, "Seed for Monte Carlo and randomized checks");
    app.add_option("--threads", c.threads, "Worker threads (0 = all cores)");
    app.add_flag("--timing", c.timing, "Fill the wall_ms column");
    app.set_version_flag("--version", "uip csv schema " + std::to_string(uip::kCsvSchemaVersion));

    auto* price = app.add_subcommand("price", "Price and hedge at the configured spot");
    std::string figure_name;
    auto* figure = app.add_subcommand("figure", "Sweep table for one figure");
    figure->add_option("name", figure_name, "fig-n | fig-approx | fig-s | fig-v | fig-gamma")->required();
    auto* validate = app.add_subcommand("validate", "Run the property suite; exit 1 on any failure");
    auto* converge = app.add_subcommand("converge", "Time-step doubling study at the spot");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        const uip::ExperimentConfig cfg = load(c, app);
        if (*price) {
            uip::RunOptions opts;
            opts.timing = c.timing;
            opts.diag = &std::cerr;
            emit(c, uip::run_price(cfg, opts));
        } else if (*figure) {
            emit(c, uip::run_figure(cfg, figure_name));
        } else if (*validate) {
            const uip::ValidationOutcome v = uip::run_validation(cfg);
            emit(c, v.table());
            return v.passed ? kOk : kPropertyFailure;
        } else if (*converge) {
            emit(c, uip::run_converge(cfg));
        }
    } catch (const uip::ValidationError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const uip::NumericalError& e) {
        std::cerr << "numerical abort: " << e.what() << '\n';
        return kNumericalAbort;
    }
    return kOk;
}
