#include "uip/grid.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "uip/csv.hpp"
#include "uip/error.hpp"
#include "uip/parallel.hpp"
#include "uip/quadrature.hpp"

namespace uip {

LogGrid::LogGrid(std::vector<Axis> axes) : axes_(std::move(axes)) {
    if (axes_.empty() || axes_.size() > kMaxGridDims)
        throw ValidationError("grid.dims", "grids support 1 to 3 dimensions");
    for (std::size_t k = 0; k < axes_.size(); ++k) {
        const auto& a = axes_[k];
        const std::string name = "grid.axis." + std::to_string(k + 1);
        if (a.count < 3) throw ValidationError(name + ".count", "must be >= 3");
        if (!std::isfinite(a.min) || !std::isfinite(a.max) || !(a.max > a.min))
            throw ValidationError(name, "requires finite max > min");
    }
    size_ = 1;
    for (std::size_t k = axes_.size(); k-- > 0;) {
        stride_[k] = size_;
        size_ *= axes_[k].count;
    }
}

Point LogGrid::node(std::size_t flat) const noexcept {
    Point p{};
    for (std::size_t k = 0; k < dims(); ++k) p[k] = axes_[k].coord(index_along(flat, k));
    return p;
}

bool LogGrid::interior(std::size_t flat, std::size_t margin) const noexcept {
    for (std::size_t k = 0; k < dims(); ++k) {
        const std::size_t i = index_along(flat, k);
        if (i < margin || i + margin >= axes_[k].count) return false;
    }
    return true;
}

bool LogGrid::operator==(const LogGrid& o) const noexcept {
    if (dims() != o.dims()) return false;
    for (std::size_t k = 0; k < dims(); ++k) {
        const auto &a = axes_[k], &b = o.axes_[k];
        if (a.min != b.min || a.max != b.max || a.count != b.count) return false;
    }
    return true;
}

ScalarField::ScalarField(LogGrid g, double fill) : grid(std::move(g)), values(grid.size(), fill) {}

ScalarField::ScalarField(LogGrid g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
    if (values.size() != grid.size()) throw ValidationError("field", "value count does not match grid size");
}

double ScalarField::min() const { return *std::min_element(values.begin(), values.end()); }
double ScalarField::max() const { return *std::max_element(values.begin(), values.end()); }
bool ScalarField::all_finite() const {
    return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

ScalarField sample(const LogGrid& grid, const std::function<double(std::span<const double>)>& f) {
    ScalarField out(grid, 0.0);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const Point p = grid.node(i);
        out[i] = f(std::span<const double>(p.data(), grid.dims()));
    }
    return out;
}

namespace {

struct Loc {
    std::size_t cell;
    double theta;
};

Loc locate(const Axis& a, double x, Extrapolation mode) {
    const double last = static_cast<double>(a.count - 1);
    double u = (x - a.min) / a.spacing();
    if (std::isnan(u)) return {0, u};
    if (mode == Extrapolation::Flat) u = std::clamp(u, 0.0, last);
    // Snap round-off so that grid nodes reproduce stored values.
    const double r = std::nearbyint(u);
    if (std::abs(u - r) < 1e-10) u = r;
    const double fl = std::floor(u);
    std::size_t c;
    if (fl < 0.0)
        c = 0;
    else if (fl >= last)
        c = a.count - 2;
    else
        c = static_cast<std::size_t>(fl);
    return {c, u - static_cast<double>(c)};
}

inline double lerp(double a, double b, double t) {
    if (t == 0.0) return a;
    if (t == 1.0) return b;
    return a + t * (b - a);
}

double interp_at(const double* f, const LogGrid& g, const Loc* loc) {
    std::size_t base = 0;
    for (std::size_t k = 0; k < g.dims(); ++k) base += loc[k].cell * g.stride(k);
    switch (g.dims()) {
        case 1:
            return lerp(f[base], f[base + 1], loc[0].theta);
        case 2: {
            const std::size_t s0 = g.stride(0);
            const double a = lerp(f[base], f[base + 1], loc[1].theta);
            const double b = lerp(f[base + s0], f[base + s0 + 1], loc[1].theta);
            return lerp(a, b, loc[0].theta);
        }
        default: {
            const std::size_t s0 = g.stride(0), s1 = g.stride(1);
            auto plane = [&](std::size_t o) {
                const double a = lerp(f[o], f[o + 1], loc[2].theta);
                const double b = lerp(f[o + s1], f[o + s1 + 1], loc[2].theta);
                return lerp(a, b, loc[1].theta);
            };
            return lerp(plane(base), plane(base + s0), loc[0].theta);
        }
    }
}

void require_positive_time(double t) {
    if (!(t > 0.0) || !std::isfinite(t)) throw ValidationError("t", "convolution time must be > 0");
}

// Quadrature sum of sampled values. With c > 0 this is the certainty
// equivalent -(1/c) ln sum w exp(-c v). Both forms work relative to the
// smallest sample, so constants come back exactly and exponents are <= 0. The
// expm1 form keeps precision for small c; the plain form takes over when the
// mass is dominated by a few samples.
double reduce(const double* v, const double* w, std::size_t m, double c) {
    const double lo = *std::min_element(v, v + m);
    if (c == 0.0) {
        double acc = 0.0;
        for (std::size_t j = 0; j < m; ++j) acc += w[j] * (v[j] - lo);
        return lo + acc;
    }
    double small = 0.0, plain = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        const double x = c * (v[j] - lo);
        double e, ex;
        if (x < 0.5) {
            e = std::expm1(-x);
            ex = e + 1.0;
        } else {
            ex = std::exp(-x);
            e = ex - 1.0;
        }
        small += w[j] * e;
        plain += w[j] * ex;
    }
    return lo - (plain < 0.5 ? std::log(plain) : std::log1p(small)) / c;
}

// One Gauss-Hermite pass along axis k with a shift that is either constant
// (drift_field == nullptr) or read per output node.
ScalarField axis_pass(const ScalarField& f, std::size_t k, double shift, const ScalarField* drift_field,
                      double t, double scale, double c, const KernelOptions& opts) {
    const LogGrid& g = f.grid;
    const Axis& ax = g.axis(k);
    const std::size_t stride = g.stride(k);
    static const QuadratureRule kPoint{{0.0}, {1.0}};
    const QuadratureRule& q = scale > 0.0 ? gauss_hermite(opts.quad_nodes) : kPoint;
    const std::size_t m = q.size();
    const double* src = f.values.data();

    std::vector<Loc> table;
    if (!drift_field) {
        table.resize(ax.count * m);
        for (std::size_t i = 0; i < ax.count; ++i)
            for (std::size_t j = 0; j < m; ++j)
                table[i * m + j] = locate(ax, ax.coord(i) + shift + scale * q.nodes[j], opts.extrapolation);
    }

    ScalarField out(g, 0.0);
    parallel_for(g.size(), opts.threads, [&](std::size_t node) {
        const std::size_t i = g.index_along(node, k);
        const std::size_t base = node - i * stride;
        thread_local std::vector<double> vals;
        vals.resize(m);
        if (drift_field) {
            const double x0 = ax.coord(i) + (*drift_field)[node] * t;
            for (std::size_t j = 0; j < m; ++j) {
                const Loc l = locate(ax, x0 + scale * q.nodes[j], opts.extrapolation);
                const std::size_t a = base + l.cell * stride;
                vals[j] = lerp(src[a], src[a + stride], l.theta);
            }
        } else {
            const Loc* row = &table[i * m];
            for (std::size_t j = 0; j < m; ++j) {
                const std::size_t a = base + row[j].cell * stride;
                vals[j] = lerp(src[a], src[a + stride], row[j].theta);
            }
        }
        out[node] = reduce(vals.data(), q.weights.data(), m, c);
    });
    return out;
}

ScalarField directional_pass(const ScalarField& field, std::span<const double> v, double t, double c,
                             const KernelOptions& opts) {
    const LogGrid& g = field.grid;
    const QuadratureRule& q = gauss_hermite(opts.quad_nodes);
    const double sd = std::sqrt(t);
    const std::size_t n = g.dims(), m = q.size();
    const double* src = field.values.data();

    ScalarField out(g, 0.0);
    parallel_for(g.size(), opts.threads, [&](std::size_t node) {
        const Point p = g.node(node);
        std::array<Loc, kMaxGridDims> loc{};
        thread_local std::vector<double> vals;
        vals.resize(m);
        for (std::size_t j = 0; j < m; ++j) {
            const double dz = sd * q.nodes[j];
            for (std::size_t k = 0; k < n; ++k) loc[k] = locate(g.axis(k), p[k] + v[k] * dz, opts.extrapolation);
            vals[j] = interp_at(src, g, loc.data());
        }
        out[node] = reduce(vals.data(), q.weights.data(), m, c);
    });
    return out;
}

void check_rate(double c) {
    if (!(c >= 0.0) || !std::isfinite(c)) throw ValidationError("c", "entropic rate must be finite and >= 0");
}

void check_vector(std::span<const double> v, std::size_t n, const char* name) {
    if (v.size() != n) throw ValidationError(name, "length must equal the grid dimension");
}

}  // namespace

double interpolate(const ScalarField& field, std::span<const double> x, Extrapolation mode) {
    const LogGrid& g = field.grid;
    check_vector(x, g.dims(), "x");
    std::array<Loc, kMaxGridDims> loc{};
    for (std::size_t k = 0; k < g.dims(); ++k) loc[k] = locate(g.axis(k), x[k], mode);
    return interp_at(field.values.data(), g, loc.data());
}

ScalarField directional_convolve(const ScalarField& field, std::span<const double> v, double t,
                                 const KernelOptions& opts) {
    return entropic_directional_convolve(field, v, t, 0.0, opts);
}

ScalarField entropic_directional_convolve(const ScalarField& field, std::span<const double> v, double t, double c,
                                          const KernelOptions& opts) {
    require_positive_time(t);
    check_vector(v, field.grid.dims(), "v");
    check_rate(c);
    return directional_pass(field, v, t, c, opts);
}

ScalarField drifted_convolve(const ScalarField& field, std::span<const double> drift,
                             std::span<const double> sig, double t, const KernelOptions& opts) {
    return entropic_drifted_convolve(field, drift, sig, t, 0.0, opts);
}

ScalarField entropic_drifted_convolve(const ScalarField& field, std::span<const double> drift,
                                      std::span<const double> sig, double t, double c, const KernelOptions& opts) {
    require_positive_time(t);
    const std::size_t n = field.grid.dims();
    check_vector(drift, n, "drift");
    check_vector(sig, n, "sig");
    check_rate(c);
    ScalarField cur = field;
    for (std::size_t k = 0; k < n; ++k) {
        if (!(sig[k] >= 0.0)) throw ValidationError("sig", "volatilities must be >= 0");
        if (sig[k] == 0.0 && drift[k] == 0.0) continue;
        cur = axis_pass(cur, k, drift[k] * t, nullptr, t, sig[k] * std::sqrt(t), c, opts);
    }
    return cur;
}

ScalarField drifted_convolve(const ScalarField& field, std::span<const ScalarField> drift,
                             std::span<const double> sig, double t, const KernelOptions& opts) {
    require_positive_time(t);
    const std::size_t n = field.grid.dims();
    if (drift.size() != n) throw ValidationError("drift", "one drift field per axis is required");
    check_vector(sig, n, "sig");
    ScalarField cur = field;
    for (std::size_t k = 0; k < n; ++k) {
        if (!(drift[k].grid == field.grid)) throw ValidationError("drift", "drift field grid mismatch");
        if (!(sig[k] >= 0.0)) throw ValidationError("sig", "volatilities must be >= 0");
        cur = axis_pass(cur, k, 0.0, &drift[k], t, sig[k] * std::sqrt(t), 0.0, opts);
    }
    return cur;
}

std::vector<ScalarField> gradient(const ScalarField& field) {
    const LogGrid& g = field.grid;
    std::vector<ScalarField> out;
    out.reserve(g.dims());
    const double* f = field.values.data();
    for (std::size_t k = 0; k < g.dims(); ++k) {
        const std::size_t s = g.stride(k), cnt = g.axis(k).count;
        const double h = g.axis(k).spacing();
        ScalarField d(g, 0.0);
        for (std::size_t node = 0; node < g.size(); ++node) {
            const std::size_t i = g.index_along(node, k);
            if (i == 0)
                d[node] = (-3.0 * f[node] + 4.0 * f[node + s] - f[node + 2 * s]) / (2.0 * h);
            else if (i + 1 == cnt)
                d[node] = (3.0 * f[node] - 4.0 * f[node - s] + f[node - 2 * s]) / (2.0 * h);
            else
                d[node] = (f[node + s] - f[node - s]) / (2.0 * h);
        }
        out.push_back(std::move(d));
    }
    return out;
}

void write_csv(std::ostream& os, const ScalarField& field) {
    const LogGrid& g = field.grid;
    CsvTable t;
    for (std::size_t k = 0; k < g.dims(); ++k) t.header.push_back("x" + std::to_string(k + 1));
    for (std::size_t k = 0; k < g.dims(); ++k) t.header.push_back("s" + std::to_string(k + 1));
    t.header.push_back("value");
    for (std::size_t i = 0; i < g.size(); ++i) {
        const Point p = g.node(i);
        std::vector<std::string> row;
        for (std::size_t k = 0; k < g.dims(); ++k) row.push_back(sci(p[k]));
        for (std::size_t k = 0; k < g.dims(); ++k) row.push_back(sci(std::exp(p[k])));
        row.push_back(sci(field[i]));
        t.add_row(std::move(row));
    }
    write_csv(os, t);
}

}  // namespace uip
