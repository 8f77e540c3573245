#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "uip/config.hpp"
#include "uip/csv.hpp"
#include "uip/splitting.hpp"
#include "uip/validation.hpp"

namespace uip {

/// Bumped whenever a column is added, removed or renamed in any table below.
inline constexpr int kCsvSchemaVersion = 1;

struct RunOptions {
    bool timing = false;          // wall_ms stays 0 otherwise, keeping output byte-stable
    std::ostream* diag = nullptr;  // scheme diagnostics as key=value lines
};

/// One row at the configured spot: scheme,s1,s2,gamma,lambda,N,price,hedge,wall_ms.
CsvTable run_price(const ExperimentConfig& cfg, const RunOptions& opts = {});

const std::vector<std::string>& figure_names();

/// fig-n, fig-approx, fig-s, fig-v or fig-gamma. Unknown names throw
/// ValidationError("figure").
CsvTable run_figure(const ExperimentConfig& cfg, const std::string& name);

const std::vector<std::string>& property_names();

struct ValidationOutcome {
    std::vector<PropertyReport> reports;
    bool passed = true;
    CsvTable table() const;
};

/// Runs the selected properties (all when validate.properties is unset).
ValidationOutcome run_validation(const ExperimentConfig& cfg);

/// |price(N) - price(2N)| at the spot for every N in experiment.n_list.
CsvTable run_converge(const ExperimentConfig& cfg);

/// Splitting prices of the configured payoff on a grid that also contains
/// every point of `cover`.
PriceResult solve_covering(const ExperimentConfig& cfg, const MarketParams& params,
                           const std::vector<std::vector<double>>& cover, unsigned threads);

}  // namespace uip
