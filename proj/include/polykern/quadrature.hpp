#pragma once

#include <cstddef>
#include <vector>

#include "polykern/numeric.hpp"

namespace polykern {

/// Nodes and weights of a rule on [-1, 1].
template <class T>
struct QuadratureRule {
    std::vector<T> nodes;
    std::vector<T> weights;

    std::size_t size() const { return nodes.size(); }
};

/// Gauss–Jacobi rule for the weight (1-x)^alpha (1+x)^beta on [-1, 1],
/// alpha, beta > -1. Exact for polynomials of degree <= 2n-1.
template <class T>
QuadratureRule<T> gauss_jacobi(std::size_t n, double alpha, double beta);

template <class T>
QuadratureRule<T> gauss_legendre(std::size_t n) {
    return gauss_jacobi<T>(n, 0.0, 0.0);
}

extern template QuadratureRule<double> gauss_jacobi<double>(std::size_t, double, double);
extern template QuadratureRule<xreal> gauss_jacobi<xreal>(std::size_t, double, double);

}  // namespace polykern
