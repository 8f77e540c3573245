#include "uip/payoff.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

#include "uip/error.hpp"

namespace uip {

std::vector<double> Payoff::breaks(std::size_t, std::span<const double>) const { return {}; }

std::vector<double> Payoff::features(std::size_t) const { return {}; }

namespace {

constexpr std::size_t kMaxDims = 8;

void check_dims(std::size_t n) {
    if (n == 0 || n > kMaxDims)
        throw ValidationError("payoff.dims", "must be in [1, " + std::to_string(kMaxDims) + "]");
}

class VulnerablePut final : public Payoff {
public:
    explicit VulnerablePut(const VulnerablePayoffParams& p) : p_(p) {}

    std::size_t dims() const override { return 2; }

    double operator()(std::span<const double> s) const override {
        const double h = std::max(p_.K - s[0], 0.0);
        if (s[1] >= p_.L) return h;
        return (1.0 - p_.alpha) * h / p_.L * s[1];
    }

    double bound() const override { return p_.K; }

    std::vector<double> breaks(std::size_t axis, std::span<const double>) const override {
        return {axis == 0 ? p_.K : p_.L};
    }

    std::vector<double> features(std::size_t axis) const override { return {axis == 0 ? p_.K : p_.L}; }

    std::optional<Discontinuity> discontinuity() const override {
        if (p_.alpha == 0.0) {
            // No deadweight loss: the recovery branch meets h(s_1) at s_2 = L.
            return std::nullopt;
        }
        return Discontinuity{1, p_.L, p_.L / 100.0};
    }

private:
    VulnerablePayoffParams p_;
};

class BasketPut final : public Payoff {
public:
    BasketPut(double K, std::vector<double> w) : K_(K), w_(std::move(w)) {}

    std::size_t dims() const override { return w_.size(); }

    double operator()(std::span<const double> s) const override {
        double x = 0.0;
        for (std::size_t i = 0; i < w_.size(); ++i) x += w_[i] * s[i];
        return std::max(K_ - x, 0.0);
    }

    double bound() const override { return K_; }

    std::optional<double> log_lipschitz() const override { return K_; }

    std::vector<double> breaks(std::size_t axis, std::span<const double> s) const override {
        if (axis + 1 != w_.size() || w_[axis] == 0.0) return {};
        double rest = 0.0;
        for (std::size_t i = 0; i < axis; ++i) rest += w_[i] * s[i];
        const double b = (K_ - rest) / w_[axis];
        if (b > 0.0) return {b};
        return {};
    }

    std::vector<double> features(std::size_t axis) const override {
        if (w_[axis] <= 0.0) return {};
        return {K_ / w_[axis]};
    }

private:
    double K_;
    std::vector<double> w_;
};

class CappedCall final : public Payoff {
public:
    CappedCall(double K, double cap, std::size_t n) : K_(K), cap_(cap), n_(n) {}

    std::size_t dims() const override { return n_; }
    double operator()(std::span<const double> s) const override {
        return std::min(std::max(s[0] - K_, 0.0), cap_);
    }
    double bound() const override { return cap_; }
    std::vector<double> breaks(std::size_t axis, std::span<const double>) const override {
        if (axis != 0) return {};
        return {K_, K_ + cap_};
    }
    std::vector<double> features(std::size_t axis) const override {
        if (axis != 0) return {};
        return {K_, K_ + cap_};
    }

private:
    double K_, cap_;
    std::size_t n_;
};

class ConstantPayoff final : public Payoff {
public:
    ConstantPayoff(double k, std::size_t n) : k_(k), n_(n) {}

    std::size_t dims() const override { return n_; }
    double operator()(std::span<const double>) const override { return k_; }
    double bound() const override { return k_; }
    std::optional<double> log_lipschitz() const override { return 0.0; }

private:
    double k_;
    std::size_t n_;
};

class SmoothedPayoff final : public Payoff {
public:
    SmoothedPayoff(PayoffPtr base, Discontinuity jump, double eps)
        : base_(std::move(base)), jump_(jump), lo_(jump.level - eps), hi_(jump.level + eps) {}

    std::size_t dims() const override { return base_->dims(); }

    double operator()(std::span<const double> s) const override {
        const double x = s[jump_.axis];
        if (x <= lo_ || x >= hi_) return (*base_)(s);
        std::array<double, kMaxDims> buf{};
        std::copy(s.begin(), s.end(), buf.begin());
        const std::span<const double> view(buf.data(), s.size());
        buf[jump_.axis] = lo_;
        const double a = (*base_)(view);
        buf[jump_.axis] = hi_;
        const double b = (*base_)(view);
        return a + (x - lo_) / (hi_ - lo_) * (b - a);
    }

    double bound() const override { return base_->bound(); }

    std::vector<double> breaks(std::size_t axis, std::span<const double> s) const override {
        auto b = base_->breaks(axis, s);
        if (axis != jump_.axis) return b;
        std::erase(b, jump_.level);
        b.push_back(lo_);
        b.push_back(hi_);
        std::sort(b.begin(), b.end());
        return b;
    }

    std::vector<double> features(std::size_t axis) const override { return base_->features(axis); }

private:
    PayoffPtr base_;
    Discontinuity jump_;
    double lo_, hi_;
};

}  // namespace

void validate(const VulnerablePayoffParams& p) {
    if (!(p.K > 0.0)) throw ValidationError("payoff.K", "must be > 0");
    if (!(p.L > 0.0)) throw ValidationError("payoff.L", "must be > 0");
    if (!(p.alpha >= 0.0 && p.alpha <= 1.0)) throw ValidationError("payoff.alpha", "must be in [0, 1]");
    if (!(p.epsilon >= 0.0 && p.epsilon < p.L))
        throw ValidationError("payoff.epsilon", "must satisfy 0 <= epsilon < L");
}

PayoffPtr vulnerable_put(const VulnerablePayoffParams& params) {
    validate(params);
    PayoffPtr raw = std::make_shared<VulnerablePut>(params);
    if (params.epsilon == 0.0 || !raw->discontinuity()) return raw;
    return smooth(std::move(raw), params.epsilon);
}

PayoffPtr put(double K, std::size_t dims) {
    check_dims(dims);
    if (!(K > 0.0)) throw ValidationError("payoff.K", "must be > 0");
    std::vector<double> w(dims, 0.0);
    w[0] = 1.0;
    return std::make_shared<BasketPut>(K, std::move(w));
}

PayoffPtr basket_put(double K, std::vector<double> weights) {
    check_dims(weights.size());
    if (!(K > 0.0)) throw ValidationError("payoff.K", "must be > 0");
    for (double w : weights)
        if (!(w >= 0.0)) throw ValidationError("payoff.weights", "must be >= 0");
    return std::make_shared<BasketPut>(K, std::move(weights));
}

PayoffPtr spread_put(double K) { return basket_put(K, {1.0, 1.0}); }

PayoffPtr capped_call(double K, double cap, std::size_t dims) {
    check_dims(dims);
    if (!(K > 0.0)) throw ValidationError("payoff.K", "must be > 0");
    if (!(cap > 0.0) || !std::isfinite(cap))
        throw ValidationError("payoff.cap", "a call needs a finite positive cap to be bounded");
    return std::make_shared<CappedCall>(K, cap, dims);
}

PayoffPtr constant_payoff(double k, std::size_t dims) {
    check_dims(dims);
    if (!(k >= 0.0) || !std::isfinite(k)) throw ValidationError("payoff.value", "must be finite and >= 0");
    return std::make_shared<ConstantPayoff>(k, dims);
}

PayoffPtr smooth(PayoffPtr g, double eps) {
    const auto jump = g->discontinuity();
    if (!jump) throw ValidationError("payoff.epsilon", "payoff has no discontinuity to smooth");
    if (!(eps > 0.0)) throw ValidationError("payoff.epsilon", "must be > 0");
    if (eps >= jump->level) throw ValidationError("payoff.epsilon", "must be smaller than the jump level");
    return std::make_shared<SmoothedPayoff>(std::move(g), *jump, eps);
}

PayoffPtr terminal_payoff(PayoffPtr g, std::optional<double> eps) {
    const auto jump = g->discontinuity();
    if (!jump) return g;
    const double e = eps.value_or(jump->default_epsilon);
    if (e == 0.0) return g;
    return smooth(std::move(g), e);
}

}  // namespace uip
