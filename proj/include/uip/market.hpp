#pragma once

#include <cstddef>
#include <vector>

namespace uip {

/// One non-traded asset: dS/S = mu dt + sigma dW^i + sigma_bar dW^common.
struct AssetParams {
    double mu = 0.0;
    double sigma = 0.0;      // idiosyncratic volatility
    double sigma_bar = 0.0;  // loading on the common factor
};

/// One-factor market: a traded index P and n non-traded assets sharing the
/// common Brownian factor. Risk aversion and position size live here too
/// because every pricing route needs them.
struct MarketParams {
    double mu_P = 0.0;
    double sigma_P = 0.0;      // idiosyncratic volatility of the index
    double sigma_bar_P = 0.0;  // common-factor volatility of the index
    std::vector<AssetParams> assets;
    double gamma = 1.0;         // exponential risk aversion
    double lambda_units = 1.0;  // number of option units held
    double T = 1.0;             // maturity in years

    std::size_t dims() const noexcept { return assets.size(); }
};

/// Quantities derived from MarketParams. Correlations are outputs only.
struct DerivedParams {
    double kappa_bar_P = 0.0;     // common share of index variance
    double vartheta_bar_P = 0.0;  // mu_P sigma_bar_P / |sigma_P|^2
    double theta_bar_P = 0.0;     // mu_P^2 / |sigma_P|^2
    double index_var = 0.0;       // sigma_P^2 + sigma_bar_P^2
    std::vector<double> A;        // log-drift under the pricing generator
    std::vector<double> total_vol;
    std::vector<std::vector<double>> rho_assets;
    std::vector<double> rho_index;
    std::vector<double> sharpe;  // SR_i
    double sharpe_P = 0.0;
};

/// Throws ValidationError naming the first offending field.
void validate(const MarketParams& params);

DerivedParams derive(const MarketParams& params);

/// Per asset: vartheta_bar_P - mu_i / sigma_bar_i. Zero means the Sharpe
/// ratio of asset i is the CAPM multiple of the index Sharpe ratio.
std::vector<double> capm_residual(const MarketParams& params);

/// Copy of `params` with each mu_i reset to vartheta_bar_P * sigma_bar_i.
MarketParams with_capm_drifts(MarketParams params);

/// Two-asset counterparty-risk setup: mu_P = 0.1, sigma_P = 0.15,
/// sigma_bar_P = 0.2; assets (0.15, 0.25, 0.3) and (0.1, 0.3, 0.2); gamma = 1,
/// lambda = 1, T = 1.
MarketParams reference_market();

/// Validated parameters paired with their derived quantities.
class MarketModel {
public:
    explicit MarketModel(MarketParams params);

    const MarketParams& params() const noexcept { return params_; }
    const DerivedParams& derived() const noexcept { return derived_; }
    std::size_t dims() const noexcept { return params_.dims(); }

    std::vector<double> sigma() const;      // idiosyncratic vols
    std::vector<double> sigma_bar() const;  // common loadings

private:
    MarketParams params_;
    DerivedParams derived_;
};

}  // namespace uip
