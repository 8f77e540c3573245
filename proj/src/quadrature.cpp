#include "uip/quadrature.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>

#include "uip/error.hpp"

namespace uip {

namespace {

// Golub-Welsch: nodes are the eigenvalues of the symmetric Jacobi matrix of the
// orthogonal family, weights are mu0 times the squared first eigenvector components.
template <class OffDiag>
QuadratureRule golub_welsch(std::size_t m, double mu0, OffDiag beta) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    for (std::size_t k = 1; k < m; ++k) {
        const auto i = static_cast<Eigen::Index>(k);
        J(i, i - 1) = J(i - 1, i) = beta(k);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(J);
    QuadratureRule r;
    r.nodes.resize(m);
    r.weights.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        r.nodes[j] = eig.eigenvalues()(jj);
        const double v = eig.eigenvectors()(0, jj);
        r.weights[j] = mu0 * v * v;
    }
    return r;
}

// Symmetrize about zero; the eigen-solver leaves O(eps) asymmetry.
void symmetrize(QuadratureRule& r) {
    const std::size_t m = r.size();
    for (std::size_t j = 0; j < m / 2; ++j) {
        const std::size_t k = m - 1 - j;
        const double x = 0.5 * (r.nodes[k] - r.nodes[j]);
        const double w = 0.5 * (r.weights[k] + r.weights[j]);
        r.nodes[j] = -x;
        r.nodes[k] = x;
        r.weights[j] = r.weights[k] = w;
    }
    if (m % 2 == 1) r.nodes[m / 2] = 0.0;
}

template <class Make>
const QuadratureRule& cached(std::map<std::size_t, std::unique_ptr<QuadratureRule>>& cache, std::mutex& mu,
                             std::size_t m, Make make) {
    if (m < 1) throw ValidationError("quad_nodes", "must be >= 1");
    std::lock_guard lock(mu);
    auto& slot = cache[m];
    if (!slot) slot = std::make_unique<QuadratureRule>(make(m));
    return *slot;
}

}  // namespace

const QuadratureRule& gauss_hermite(std::size_t m) {
    static std::map<std::size_t, std::unique_ptr<QuadratureRule>> cache;
    static std::mutex mu;
    return cached(cache, mu, m, [](std::size_t n) {
        auto r = golub_welsch(n, 1.0, [](std::size_t k) { return std::sqrt(static_cast<double>(k)); });
        symmetrize(r);
        const double total = std::accumulate(r.weights.begin(), r.weights.end(), 0.0);
        for (double& w : r.weights) w /= total;
        return r;
    });
}

const QuadratureRule& gauss_legendre(std::size_t m) {
    static std::map<std::size_t, std::unique_ptr<QuadratureRule>> cache;
    static std::mutex mu;
    return cached(cache, mu, m, [](std::size_t n) {
        auto r = golub_welsch(n, 2.0, [](std::size_t k) {
            const double kk = static_cast<double>(k);
            return kk / std::sqrt(4.0 * kk * kk - 1.0);
        });
        symmetrize(r);
        return r;
    });
}

}  // namespace uip
