#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace uip {

/// A jump of the payoff across the hyperplane s[axis] = level.
struct Discontinuity {
    std::size_t axis = 0;
    double level = 0.0;
    double default_epsilon = 0.0;
};

/// Terminal payoff g(s_1, ..., s_n) on the positive orthant, bounded by
/// `bound()`. Implementations are immutable.
class Payoff {
public:
    virtual ~Payoff() = default;

    virtual std::size_t dims() const = 0;
    virtual double operator()(std::span<const double> s) const = 0;
    virtual double bound() const = 0;

    /// Lipschitz constant with respect to log-prices, when one is known.
    virtual std::optional<double> log_lipschitz() const { return std::nullopt; }

    /// Points along `axis` (price units) where g restricted to that axis is
    /// not smooth. Only s[0..axis) are meaningful on entry.
    virtual std::vector<double> breaks(std::size_t axis, std::span<const double> s) const;

    /// Strikes and thresholds per axis, used to size pricing grids.
    virtual std::vector<double> features(std::size_t axis) const;

    virtual std::optional<Discontinuity> discontinuity() const { return std::nullopt; }
};

using PayoffPtr = std::shared_ptr<const Payoff>;

struct VulnerablePayoffParams {
    double K = 150.0;
    double L = 1000.0;
    double alpha = 0.05;
    double epsilon = 0.0;
};

void validate(const VulnerablePayoffParams& params);

/// Put on s_1 whose writer defaults when s_2 < L; the holder then recovers
/// (1 - alpha) h(s_1) s_2 / L. Smoothed over [L - eps, L + eps] when
/// params.epsilon > 0.
PayoffPtr vulnerable_put(const VulnerablePayoffParams& params);

/// (K - s_1)^+ on an n-asset market (other coordinates ignored).
PayoffPtr put(double K, std::size_t dims = 1);

/// (K - sum_i w_i s_i)^+.
PayoffPtr basket_put(double K, std::vector<double> weights);

/// (K - s_1 - s_2)^+.
PayoffPtr spread_put(double K);

/// min((s_1 - K)^+, cap). Calls are unbounded, so a cap is mandatory.
PayoffPtr capped_call(double K, double cap, std::size_t dims = 1);

PayoffPtr constant_payoff(double k, std::size_t dims);

/// Lipschitz approximation of a payoff with a single jump: linear in
/// s[axis] across [level - eps, level + eps], unchanged outside.
PayoffPtr smooth(PayoffPtr g, double eps);

/// The payoff actually fed to the solvers: smoothed with `eps` (or the
/// payoff's default band when unset) if it has a jump; eps = 0 keeps it raw.
PayoffPtr terminal_payoff(PayoffPtr g, std::optional<double> eps = std::nullopt);

}  // namespace uip
