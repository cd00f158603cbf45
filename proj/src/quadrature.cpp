#include "polykern/quadrature.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace polykern {

namespace {

// Monic three-term recurrence p_{k+1} = (x - a_k) p_k - b_k p_{k-1} for the
// Jacobi weight; b_k is returned squared.
template <class T>
void jacobi_recurrence(std::size_t n, const T& alpha, const T& beta, std::vector<T>& a,
                       std::vector<T>& b2) {
    a.assign(n, T(0));
    b2.assign(n, T(0));
    const T ab = alpha + beta;
    a[0] = (beta - alpha) / (ab + T(2));
    for (std::size_t k = 1; k < n; ++k) {
        const T kk(static_cast<double>(k));
        const T s = T(2) * kk + ab;
        a[k] = (beta * beta - alpha * alpha) / (s * (s + T(2)));
        if (k == 1) {
            b2[k] = T(4) * (T(1) + alpha) * (T(1) + beta) / ((ab + T(2)) * (ab + T(2)) * (ab + T(3)));
        } else {
            b2[k] = T(4) * kk * (kk + alpha) * (kk + beta) * (kk + ab) /
                    (s * s * (s + T(1)) * (s - T(1)));
        }
    }
}

}  // namespace

template <class T>
QuadratureRule<T> gauss_jacobi(std::size_t n, double alpha_d, double beta_d) {
    if (n == 0) throw std::invalid_argument("gauss_jacobi: n must be positive");
    if (!(alpha_d > -1.0) || !(beta_d > -1.0))
        throw std::invalid_argument("gauss_jacobi: exponents must exceed -1");

    using std::abs;
    using std::lgamma;
    using std::log;
    using std::exp;
    using std::sqrt;

    // Initial nodes from the symmetric tridiagonal Jacobi matrix in double.
    std::vector<double> ad, b2d;
    jacobi_recurrence<double>(n, alpha_d, beta_d, ad, b2d);
    Eigen::VectorXd diag(n), sub(n > 1 ? n - 1 : 1);
    for (std::size_t k = 0; k < n; ++k) diag[k] = ad[k];
    for (std::size_t k = 1; k < n; ++k) sub[k - 1] = std::sqrt(b2d[k]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    if (n > 1) {
        es.computeFromTridiagonal(diag, sub.head(n - 1), Eigen::EigenvaluesOnly);
    }

    const T alpha(alpha_d), beta(beta_d);
    std::vector<T> a, b2;
    jacobi_recurrence<T>(n, alpha, beta, a, b2);
    // mu0 = integral of the weight = 2^{a+b+1} Gamma(a+1) Gamma(b+1) / Gamma(a+b+2)
    const T mu0 = exp((alpha + beta + T(1)) * log(T(2)) + lgamma(alpha + T(1)) +
                      lgamma(beta + T(1)) - lgamma(alpha + beta + T(2)));

    QuadratureRule<T> rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    std::vector<T> p(n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        T x = n > 1 ? T(es.eigenvalues()[i]) : a[0];
        // Newton on the monic p_n, derivative by the differentiated recurrence.
        for (int it = 0; it < 8; ++it) {
            T p0(1), p1 = x - a[0], d0(0), d1(1);
            for (std::size_t k = 1; k < n; ++k) {
                const T p2 = (x - a[k]) * p1 - b2[k] * p0;
                const T d2 = p1 + (x - a[k]) * d1 - b2[k] * d0;
                p0 = p1;
                p1 = p2;
                d0 = d1;
                d1 = d2;
            }
            const T step = p1 / d1;
            x -= step;
            if (abs(step) <= std::numeric_limits<T>::epsilon() * T(4)) break;
        }
        // Christoffel number: 1 / sum_k q_k(x)^2 with q_k orthonormal.
        T q0 = T(1) / sqrt(mu0);
        T q1 = n > 1 ? (x - a[0]) * q0 / sqrt(b2[1]) : T(0);
        T acc = q0 * q0 + q1 * q1;
        for (std::size_t k = 1; k + 1 < n; ++k) {
            const T q2 = ((x - a[k]) * q1 - sqrt(b2[k]) * q0) / sqrt(b2[k + 1]);
            acc += q2 * q2;
            q0 = q1;
            q1 = q2;
        }
        rule.nodes[i] = x;
        rule.weights[i] = T(1) / acc;
    }
    return rule;
}

template QuadratureRule<double> gauss_jacobi<double>(std::size_t, double, double);
template QuadratureRule<xreal> gauss_jacobi<xreal>(std::size_t, double, double);

}  // namespace polykern
