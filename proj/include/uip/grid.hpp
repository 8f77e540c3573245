#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

namespace uip {

/// Uniform axis in log-price coordinates.
struct Axis {
    double min = 0.0;
    double max = 1.0;
    std::size_t count = 3;

    double spacing() const noexcept { return (max - min) / static_cast<double>(count - 1); }
    double coord(std::size_t i) const noexcept {
        return i + 1 == count ? max : min + static_cast<double>(i) * spacing();
    }
};

inline constexpr std::size_t kMaxGridDims = 3;

using Point = std::array<double, kMaxGridDims>;

/// Tensor grid in log-price space, x_k = ln s_k. The last axis varies fastest
/// in the flat node ordering.
class LogGrid {
public:
    LogGrid() = default;
    explicit LogGrid(std::vector<Axis> axes);

    std::size_t dims() const noexcept { return axes_.size(); }
    const Axis& axis(std::size_t k) const { return axes_[k]; }
    const std::vector<Axis>& axes() const noexcept { return axes_; }
    std::size_t size() const noexcept { return size_; }
    std::size_t stride(std::size_t k) const noexcept { return stride_[k]; }

    std::size_t index_along(std::size_t flat, std::size_t k) const noexcept {
        return (flat / stride_[k]) % axes_[k].count;
    }
    Point node(std::size_t flat) const noexcept;

    /// True when the node is at least `margin` nodes away from every boundary.
    bool interior(std::size_t flat, std::size_t margin) const noexcept;

    bool operator==(const LogGrid& other) const noexcept;

private:
    std::vector<Axis> axes_;
    std::array<std::size_t, kMaxGridDims> stride_{};
    std::size_t size_ = 0;
};

/// Real values on every node of a LogGrid.
struct ScalarField {
    LogGrid grid;
    std::vector<double> values;

    ScalarField() = default;
    ScalarField(LogGrid g, double fill);
    ScalarField(LogGrid g, std::vector<double> v);

    double operator[](std::size_t i) const { return values[i]; }
    double& operator[](std::size_t i) { return values[i]; }
    std::size_t size() const noexcept { return values.size(); }

    double min() const;
    double max() const;
    bool all_finite() const;
};

/// Samples f(x) at every node (x in log coordinates).
ScalarField sample(const LogGrid& grid, const std::function<double(std::span<const double>)>& f);

enum class Extrapolation {
    Linear,  // constant slope from the boundary cell
    Flat,    // clamp to the boundary value; keeps interpolation monotone
};

struct KernelOptions {
    std::size_t quad_nodes = 32;
    Extrapolation extrapolation = Extrapolation::Flat;
    unsigned threads = 1;
};

/// Multilinear interpolation; outside the grid each exceeded axis is
/// extrapolated according to `mode`.
double interpolate(const ScalarField& field, std::span<const double> x,
                   Extrapolation mode = Extrapolation::Linear);

/// u(x) = E[field(x + v Z)], Z ~ N(0, t), by Gauss-Hermite quadrature.
ScalarField directional_convolve(const ScalarField& field, std::span<const double> v, double t,
                                 const KernelOptions& opts = {});

/// u(x) = E[field(x + drift t + diag(sig) sqrt(t) Z)], Z standard normal with
/// independent components. Applied one axis at a time, which for a constant
/// drift equals the tensor-product rule.
ScalarField drifted_convolve(const ScalarField& field, std::span<const double> drift,
                             std::span<const double> sig, double t, const KernelOptions& opts = {});

/// Entropic counterparts: u(x) = -(1/c) ln E[exp(-c field(x + ...))] with the
/// field interpolated in its own units before exponentiation; c = 0 gives the
/// linear kernels. Adding a constant to the field adds it to the result.
ScalarField entropic_directional_convolve(const ScalarField& field, std::span<const double> v, double t, double c,
                                          const KernelOptions& opts = {});
ScalarField entropic_drifted_convolve(const ScalarField& field, std::span<const double> drift,
                                      std::span<const double> sig, double t, double c,
                                      const KernelOptions& opts = {});

/// As above with a node-dependent drift, one field per axis.
ScalarField drifted_convolve(const ScalarField& field, std::span<const ScalarField> drift,
                             std::span<const double> sig, double t, const KernelOptions& opts = {});

/// d field / d x_k for every axis: central differences inside, second-order
/// one-sided differences on the boundary.
std::vector<ScalarField> gradient(const ScalarField& field);

/// CSV with columns x1..xn, s1..sn, value.
void write_csv(std::ostream& os, const ScalarField& field);

}  // namespace uip
