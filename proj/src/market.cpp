#include "uip/market.hpp"

#include <cmath>
#include <string>

#include "uip/error.hpp"

namespace uip {

namespace {

bool finite(double x) { return std::isfinite(x); }

std::string asset_field(std::size_t i, const char* name) {
    return "asset." + std::to_string(i + 1) + "." + name;
}

}  // namespace

void validate(const MarketParams& p) {
    if (!finite(p.mu_P)) throw ValidationError("market.mu_P", "must be finite");
    if (!finite(p.sigma_P) || p.sigma_P < 0.0)
        throw ValidationError("market.sigma_P", "must be finite and >= 0");
    if (!finite(p.sigma_bar_P)) throw ValidationError("market.sigma_bar_P", "must be finite");
    if (p.sigma_P * p.sigma_P + p.sigma_bar_P * p.sigma_bar_P <= 0.0)
        throw ValidationError("market.sigma_P", "index must have nonzero total volatility");
    // gamma = 0 is admitted as the risk-neutral-under-P limit of the pricing rule.
    if (!finite(p.gamma) || p.gamma < 0.0) throw ValidationError("market.gamma", "must be >= 0");
    if (!finite(p.lambda_units) || p.lambda_units <= 0.0)
        throw ValidationError("market.lambda", "must be > 0");
    if (!finite(p.T) || p.T <= 0.0) throw ValidationError("market.T", "must be > 0");
    if (p.assets.empty()) throw ValidationError("asset", "at least one asset is required");
    for (std::size_t i = 0; i < p.assets.size(); ++i) {
        const auto& a = p.assets[i];
        if (!finite(a.mu)) throw ValidationError(asset_field(i, "mu"), "must be finite");
        if (!finite(a.sigma) || a.sigma < 0.0)
            throw ValidationError(asset_field(i, "sigma"), "must be finite and >= 0");
        if (!finite(a.sigma_bar)) throw ValidationError(asset_field(i, "sigma_bar"), "must be finite");
        if (a.sigma * a.sigma + a.sigma_bar * a.sigma_bar <= 0.0)
            throw ValidationError(asset_field(i, "sigma"), "asset must have nonzero total volatility");
    }
}

DerivedParams derive(const MarketParams& p) {
    validate(p);
    DerivedParams d;
    const std::size_t n = p.dims();
    d.index_var = p.sigma_P * p.sigma_P + p.sigma_bar_P * p.sigma_bar_P;
    d.kappa_bar_P = p.sigma_bar_P * p.sigma_bar_P / d.index_var;
    d.vartheta_bar_P = p.mu_P * p.sigma_bar_P / d.index_var;
    d.theta_bar_P = p.mu_P * p.mu_P / d.index_var;
    const double index_vol = std::sqrt(d.index_var);
    d.sharpe_P = p.mu_P / index_vol;

    d.A.resize(n);
    d.total_vol.resize(n);
    d.rho_index.resize(n);
    d.sharpe.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& a = p.assets[i];
        const double var = a.sigma * a.sigma + a.sigma_bar * a.sigma_bar;
        d.A[i] = a.mu - 0.5 * var - d.vartheta_bar_P * a.sigma_bar;
        d.total_vol[i] = std::sqrt(var);
        d.rho_index[i] = a.sigma_bar * p.sigma_bar_P / (d.total_vol[i] * index_vol);
        d.sharpe[i] = a.mu / d.total_vol[i];
    }
    d.rho_assets.assign(n, std::vector<double>(n, 1.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j)
                d.rho_assets[i][j] =
                    p.assets[i].sigma_bar * p.assets[j].sigma_bar / (d.total_vol[i] * d.total_vol[j]);
    return d;
}

std::vector<double> capm_residual(const MarketParams& p) {
    const auto d = derive(p);
    std::vector<double> r(p.dims());
    for (std::size_t i = 0; i < p.dims(); ++i) {
        if (p.assets[i].sigma_bar == 0.0)
            throw ValidationError(asset_field(i, "sigma_bar"), "CAPM residual undefined");
        r[i] = d.vartheta_bar_P - p.assets[i].mu / p.assets[i].sigma_bar;
    }
    return r;
}

MarketParams with_capm_drifts(MarketParams p) {
    const auto d = derive(p);
    for (auto& a : p.assets) a.mu = d.vartheta_bar_P * a.sigma_bar;
    return p;
}

MarketModel::MarketModel(MarketParams params) : params_(std::move(params)), derived_(derive(params_)) {}

std::vector<double> MarketModel::sigma() const {
    std::vector<double> v;
    v.reserve(dims());
    for (const auto& a : params_.assets) v.push_back(a.sigma);
    return v;
}

std::vector<double> MarketModel::sigma_bar() const {
    std::vector<double> v;
    v.reserve(dims());
    for (const auto& a : params_.assets) v.push_back(a.sigma_bar);
    return v;
}


MarketParams reference_market() {
    MarketParams p;
    p.mu_P = 0.1;
    p.sigma_P = 0.15;
    p.sigma_bar_P = 0.2;
    p.assets = {AssetParams{0.15, 0.25, 0.3}, AssetParams{0.1, 0.3, 0.2}};
    return p;
}

}  // namespace uip
