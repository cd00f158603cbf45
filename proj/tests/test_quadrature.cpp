#include <cmath>

#include "doctest.h"
#include "polykern/quadrature.hpp"

using namespace polykern;

namespace {

template <class T, class F>
T integrate(const QuadratureRule<T>& q, F&& f) {
    T s(0);
    for (std::size_t i = 0; i < q.size(); ++i) s += q.weights[i] * f(q.nodes[i]);
    return s;
}

double beta_fn(double x, double y) { return std::exp(std::lgamma(x) + std::lgamma(y) - std::lgamma(x + y)); }

}  // namespace

TEST_CASE("Gauss-Legendre integrates polynomials exactly") {
    const auto q = gauss_legendre<double>(12);
    CHECK(q.size() == 12);
    for (int k = 0; k <= 23; ++k) {
        const double exact = (k % 2) ? 0.0 : 2.0 / (k + 1);
        CHECK(std::abs(integrate(q, [k](double x) { return std::pow(x, k); }) - exact) < 1e-14);
    }
}

TEST_CASE("Gauss-Jacobi total mass and first moment") {
    for (auto [a, b] : {std::pair{-0.3, 0.7}, std::pair{0.5, 0.5}, std::pair{-0.8, 2.0}}) {
        const auto q = gauss_jacobi<double>(20, a, b);
        const double mu0 = std::pow(2.0, a + b + 1) * beta_fn(a + 1, b + 1);
        CHECK(std::abs(integrate(q, [](double) { return 1.0; }) / mu0 - 1.0) < 1e-13);
        const double mean = (b - a) / (a + b + 2);
        CHECK(std::abs(integrate(q, [](double x) { return x; }) / mu0 - mean) < 1e-13);
        for (std::size_t i = 0; i < q.size(); ++i) {
            CHECK(q.weights[i] > 0.0);
            CHECK(std::abs(q.nodes[i]) < 1.0);
        }
    }
}

TEST_CASE("Chebyshev second kind") {
    const auto q = gauss_jacobi<double>(5, 0.5, 0.5);
    CHECK(std::abs(integrate(q, [](double) { return 1.0; }) - M_PI / 2) < 1e-14);
    // nodes are cos(k pi / 6)
    for (std::size_t i = 0; i < q.size(); ++i) {
        double best = 1.0;
        for (int k = 1; k <= 5; ++k) best = std::min(best, std::abs(q.nodes[i] - std::cos(k * M_PI / 6)));
        CHECK(best < 1e-14);
    }
}

TEST_CASE("extended-precision rule") {
    const auto q = gauss_jacobi<xreal>(30, -0.3, 0.7);
    const xreal mass = integrate(q, [](const xreal&) { return xreal(1); });
    // 2^{a+b+1} B(a+1, b+1) with the same binary64 exponents the rule sees
    using boost::multiprecision::tgamma;
    const xreal a(-0.3), b(0.7);
    const xreal exact = pow(xreal(2), a + b + 1) * tgamma(a + 1) * tgamma(b + 1) / tgamma(a + b + 2);
    CHECK(abs(mass / exact - 1) < xreal(1e-30));
    const auto l = gauss_legendre<xreal>(16);
    const xreal x10 = integrate(l, [](const xreal& x) { return pow(x, 10); });
    CHECK(abs(x10 - xreal(2) / 11) < xreal(1e-32));
}

TEST_CASE("invalid rules") {
    CHECK_THROWS_AS(gauss_jacobi<double>(0, 0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(gauss_jacobi<double>(5, -1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(gauss_jacobi<double>(5, 0.0, -1.5), std::invalid_argument);
}
