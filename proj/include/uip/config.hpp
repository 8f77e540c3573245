#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "uip/market.hpp"
#include "uip/payoff.hpp"
#include "uip/splitting.hpp"

namespace uip {

enum class Scheme { Splitting, Picard, AnalyticNoHedge, AnalyticComplete, McNoHedge, McComplete };

enum class PayoffKind { VulnerablePut, Put, Constant };

struct PayoffConfig {
    PayoffKind kind = PayoffKind::VulnerablePut;
    VulnerablePayoffParams vulnerable;  // K also serves the plain put
    double value = 0.0;                 // constant payoff
    std::optional<double> epsilon;      // unset: the payoff's default band
};

struct SolverConfig {
    Scheme scheme = Scheme::Splitting;
    std::size_t steps = 11;
    std::size_t nodes = 201;
    std::size_t quad_nodes = 32;
    double vol_widths = 5.0;
    StepOrder order = StepOrder::PredictCorrect;
    double tol = 0.015;
    std::size_t max_iter = 20;
    std::size_t benchmark_nodes = 64;
    std::size_t mc_paths = 1000000;
};

struct Range {
    double min = 0.0;
    double max = 0.0;
    std::size_t count = 1;
    /// Evenly spaced, endpoints included; a single point sits at `min`.
    std::vector<double> points() const;
};

struct ExperimentBlock {
    Range s1{1.0, 200.0, 40};
    Range s2{100.0, 2000.0, 39};
    std::vector<double> s2_panels{500.0, 1400.0};
    double s1_fixed = 50.0;
    Range approx_s1{10.0, 150.0, 20};
    double approx_s2 = 1400.0;
    std::vector<double> n_list{1, 2, 4, 8, 11};
    std::vector<double> n_maturities{0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0};
    Range maturities{0.25, 2.0, 8};
    std::vector<double> gammas{0.5, 1.0, 2.0};
    std::vector<double> vol_pairs{0.0, 0.0, 0.25, 0.3, 1.0, 1.0};  // (sigma_1, sigma_2) pairs
    std::vector<double> capm_mu{0.1, 0.06};
};

struct ValidateBlock {
    std::optional<std::vector<std::string>> properties;  // unset: all
    std::string inject_fault = "none";
    std::size_t nodes = 201;
    std::vector<double> gammas{0.5, 1.0, 2.0};
    std::vector<double> sigma_P{0.1, 0.15, 0.25};
    std::vector<double> lambdas{1.0, 2.0, 4.0};
    std::vector<double> limit_gammas{0.5, 0.1, 0.01, 0.0};
    std::vector<double> sigma_scales{1.0, 0.5, 0.1};
    std::size_t driver_samples = 1000;
};

/// Everything a CLI run needs. Defaults reproduce the two-asset
/// counterparty-risk setup with K = 150, L = 1000, alpha = 0.05 and spot
/// (50, 100).
struct ExperimentConfig {
    MarketParams market = reference_market();
    std::vector<double> spot{50.0, 100.0};
    PayoffConfig payoff;
    SolverConfig solver;
    ExperimentBlock experiment;
    ValidateBlock validate;
    std::uint64_t seed = 20240101;
    unsigned threads = 1;
};

/// Sets one dotted key, e.g. "market.sigma_P", "asset.2.mu", "solver.N".
/// Throws ValidationError whose field() is the key.
void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value);

/// Flat "key = value" lines; '#' starts a comment. Later keys override
/// earlier ones. Assets are numbered from 1 and must be contiguous.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

/// Cross-field checks (market validity, spot dimension, nonempty sweeps).
void validate(const ExperimentConfig& cfg);

std::string to_string(Scheme scheme);
PayoffPtr make_payoff(const ExperimentConfig& cfg);
SplitSettings split_settings(const ExperimentConfig& cfg);

}  // namespace uip
