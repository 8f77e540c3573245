#pragma once

#include <cstddef>
#include <vector>

namespace uip {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const noexcept { return nodes.size(); }
};

/// E[f(Z)], Z ~ N(0,1), as sum_j w_j f(z_j). Weights are positive and sum to
/// one. Rules are computed once per size and cached.
const QuadratureRule& gauss_hermite(std::size_t m);

/// Integral over [-1, 1] as sum_j w_j f(x_j).
const QuadratureRule& gauss_legendre(std::size_t m);

}  // namespace uip
