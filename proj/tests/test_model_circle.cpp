#include <cmath>
#include <random>

#include "doctest.h"
#include "polykern/hyperfun.hpp"
#include "polykern/model_circle.hpp"

using namespace polykern;

namespace {

const cplx I(0.0, 1.0);

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

double kernel_at_one(double g, std::size_t n) {
    // (2g+2)_n / n!
    double r = 1.0;
    for (std::size_t j = 0; j < n; ++j) r *= (2 * g + 2 + double(j)) / double(j + 1);
    return r;
}

}  // namespace

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS((HuaPickrellParams{-0.5, 0.0}.validate()), DomainError);
    CHECK_THROWS_AS(hp_kernel(3, 1.0, 1.0, HuaPickrellParams{-0.6, 0.0}), DomainError);
    CHECK_THROWS_AS(limit_kernel(1.0, 1.0, HuaPickrellParams{0.0, INFINITY}), DomainError);
    CHECK_NOTHROW((HuaPickrellParams{-0.49, 3.0}.validate()));
}

TEST_CASE("model weight") {
    CHECK(hp_weight(1.3, {0.0, 0.0}) == doctest::Approx(1.0));
    for (double g : {-0.3, 0.5, 2.0}) {
        const double C = std::pow(4.0, g) * std::pow(std::tgamma(1 + g), 2) / std::tgamma(2 * g + 1);
        CHECK(hp_weight(M_PI, {g, 0.0}) == doctest::Approx(C));
    }
    CHECK(std::isinf(hp_weight(0.0, {-0.2, 0.0})));
    CHECK(hp_weight(2 * M_PI, {0.7, 0.0}) == 0.0);
    // the jump factor e^{(pi - theta) tau}
    CHECK(hp_weight(1.0, {0.5, 0.4}) / hp_weight(2 * M_PI - 1.0, {0.5, 0.4}) ==
          doctest::Approx(std::exp(0.4 * (2 * M_PI - 2.0))));
}

TEST_CASE("closed-form polynomials") {
    const HuaPickrellParams flat{0.0, 0.0};
    const cplx z(0.3, -0.6);
    for (std::size_t n : {0u, 1u, 6u}) {
        CHECK(rel(hp_monic(n, z, flat), std::pow(z, double(n))) < 1e-13);
        CHECK(hp_kappa(n, flat) == doctest::Approx(1.0));
    }
    CHECK(hp_kappa(1, {1.0, 0.0}) == doctest::Approx(std::sqrt(4.0 / 3.0)));

    // Phi_n^*(z) = z^n conj(Phi_n(1/conj z))
    const HuaPickrellParams p{0.7, -1.3};
    for (std::size_t n : {1u, 5u, 17u}) {
        const cplx star = std::pow(z, double(n)) * std::conj(hp_monic(n, 1.0 / std::conj(z), p));
        CHECK(rel(hp_star(n, z, p), star) < 1e-11);
        // alpha_{n-1} = -conj(Phi_n(0)); the binary64 2F1 at x = 1 alternates in sign
        CHECK(std::abs(to_double(hp_verblunsky(n - 1, p)) + std::conj(hp_monic(n, 0.0, p))) < 1e-11);
    }

    const auto cf = hp_monic_coefficients(9, p);
    CHECK(double(abs(cf[9] - xcplx(1))) < 1e-30);
    cplx horner = 0.0;
    for (std::size_t j = cf.size(); j-- > 0;) horner = horner * z + to_double(cf[j]);
    CHECK(rel(horner, hp_monic(9, z, p)) < 1e-12);
}

TEST_CASE("monic coefficients match the Szego recursion at high degree") {
    // expanding about z = 1 would cancel terms of size C(60,30)^2
    for (const HuaPickrellParams p : {HuaPickrellParams{-0.3, 0.7}, HuaPickrellParams{2.5, -0.4}}) {
        const std::size_t n = 60;
        std::vector<xcplx> phi{xcplx(1)}, star{xcplx(1)};
        for (std::size_t k = 0; k < n; ++k) {
            const xcplx a = hp_verblunsky(k, p);
            std::vector<xcplx> np(k + 2), ns(k + 2);
            for (std::size_t j = 0; j <= k; ++j) {
                np[j + 1] += phi[j];
                np[j] -= std::conj(a) * star[j];
                ns[j] += star[j];
                ns[j + 1] -= a * phi[j];
            }
            phi.swap(np);
            star.swap(ns);
        }
        const auto cf = hp_monic_coefficients(n, p);
        double worst = 0.0;
        for (std::size_t j = 0; j <= n; ++j) worst = std::max(worst, double(abs(cf[j] - phi[j])));
        CHECK(worst < 1e-25);
    }
}

TEST_CASE("closed-form moments and Verblunsky coefficients") {
    const HuaPickrellParams p{1.5, 0.4};
    CHECK(hp_moment(0, p) == xcplx(1));
    // c_1 = -y / (1 + conj y)
    const cplx y = p.y();
    CHECK(std::abs(to_double(hp_moment(1, p)) + y / (1.0 + std::conj(y))) < 1e-15);
    for (std::size_t k = 0; k < 50; ++k) CHECK(double(abs(hp_verblunsky(k, p))) < 1.0);
}

TEST_CASE("kernel at z = w = 1 up to n = 500") {
    for (double g : {-0.3, 0.0, 1.0, 2.5})
        for (double t : {0.0, 0.7})
            for (std::size_t n : {0u, 1u, 7u, 100u, 500u})
                CHECK(hp_kernel(n, 1.0, 1.0, {g, t}).value.real() == doctest::Approx(kernel_at_one(g, n)).epsilon(1e-10));
}

TEST_CASE("kernel against the Szego recursion") {
    const HuaPickrellParams p{-0.3, 0.7};
    const auto vc = monic_from_moments(trig_moments(p.weight(), 40), 40).vc;
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.2, 1.2);
    for (int i = 0; i < 10; ++i) {
        const cplx z(u(rng), u(rng)), w(u(rng), u(rng));
        const auto a = hp_kernel(40, z, w, p);
        CHECK(rel(a.value, kernel_direct(vc, 40, z, w).value) < 1e-10);
        CHECK(a.measure_tag == "hua-pickrell");
    }
    // flat case: geometric sum
    const cplx z(0.2, 0.9), w(-0.4, 0.1), q = z * std::conj(w);
    CHECK(rel(hp_kernel(25, z, w, {0.0, 0.0}).value, (1.0 - std::pow(q, 26.0)) / (1.0 - q)) < 1e-13);
}

TEST_CASE("limit kernel special values") {
    for (const HuaPickrellParams p : {HuaPickrellParams{0.0, 0.0}, HuaPickrellParams{1.0, 0.5}, HuaPickrellParams{-0.3, -1.0}}) {
        const auto v = limit_kernel(0.0, 0.0, p);
        CHECK(std::abs(v.value - 1.0) < 1e-13);
        CHECK(v.branch == KernelBranch::diagonal);
    }
    // flat case: (e^{i(a - conj b)} - 1) / (i (a - conj b))
    const HuaPickrellParams flat{0.0, 0.0};
    for (auto [a, b] : {std::pair{cplx(1.0), cplx(2.0)}, std::pair{cplx(0.5, 1.0), cplx(-1.0, 0.3)}}) {
        const cplx d = a - std::conj(b);
        const auto v = limit_kernel(a, b, flat);
        CHECK(v.branch == KernelBranch::generic);
        CHECK(rel(v.value, (std::exp(I * d) - 1.0) / (I * d)) < 1e-12);
    }
}

TEST_CASE("limit kernel is the limit of normalized kernels") {
    const HuaPickrellParams p{0.5, 0.7};
    const cplx a(1.0, 0.5), b(-2.0, 0.0);
    const cplx L = limit_kernel(a, b, p).value;
    double prev = INFINITY;
    for (std::size_t n : {100u, 1000u, 10000u}) {
        const double nn = double(n);
        const cplx r = hp_kernel(n, std::exp(I * a / nn), std::exp(I * b / nn), p).value / kernel_at_one(p.gamma, n);
        const double err = std::abs(r - L);
        CHECK(err < prev);
        prev = err;
    }
    CHECK(prev < 1e-3);
}

TEST_CASE("limit kernel symmetry") {
    const HuaPickrellParams p{1.2, -0.8};
    const cplx a(0.7, -0.3), b(1.5, 0.4);
    CHECK(std::abs(limit_kernel(a, b, p).value - std::conj(limit_kernel(b, a, p).value)) < 1e-12);
    CHECK(limit_kernel(2.0, 2.0, p).value.real() > 0.0);
}

TEST_CASE("diagonal branch is continuous with the generic quotient") {
    for (const HuaPickrellParams p : {HuaPickrellParams{0.5, 0.7}, HuaPickrellParams{-0.2, -1.5}, HuaPickrellParams{2.0, 0.0}}) {
        for (cplx b : {cplx(1.0), cplx(-2.0, 0.5), cplx(0.3, -1.0)}) {
            const cplx d = limit_kernel(std::conj(b), b, p).value;
            double prev = INFINITY;
            for (double eps : {1e-4, 1e-5}) {
                const double err = std::abs(limit_kernel_generic(std::conj(b) + eps, b, p) - d);
                CHECK(err < prev);
                CHECK(err < 1e-3);
                prev = err;
            }
            // just outside the branch radius the generic quotient is used
            CHECK(limit_kernel(std::conj(b) + 2e-6, b, p).branch == KernelBranch::generic);
            CHECK(limit_kernel(std::conj(b) + 5e-7, b, p).branch == KernelBranch::diagonal);
        }
    }
}

TEST_CASE("T function") {
    for (double g : {-0.4, 0.0, 0.5, 2.5}) {
        CHECK(T_func(0.0, g) == doctest::Approx(1.0));
        CHECK(T_func(3.0, g) == doctest::Approx(limit_kernel(3.0, 3.0, {g, 0.0}).value.real()));
        for (double a = -20.0; a <= 20.0; a += 0.5) CHECK(T_func(a, g) > 0.0);
    }
    // flat case: K_n(z, z) / K_n(1, 1) = 1 on the circle
    CHECK(T_func(7.0, 0.0) == doctest::Approx(1.0));
    CHECK(lemma_1f1_quotient(2.5, 0.8) == doctest::Approx(T_func(2.5, 0.8)));
    CHECK(lemma_1f1_quotient(cplx(1.0, 1.0), 0.5) > 0.0);
}

TEST_CASE("Theta ratio") {
    CHECK(std::abs(theta_ratio(0.0, 0.7) - 1.0) < 1e-15);
    // at a = 12 the 1F1 series on the imaginary axis has terms ~1e3 times its value
    for (double a : {-5.0, -0.5, 1.0, 12.0}) CHECK(std::abs(std::abs(theta_ratio(a, 0.7)) - 1.0) < 1e-11);
    CHECK(std::abs(theta_ratio(I, 0.5)) < 1.0);
    CHECK(std::abs(theta_ratio(-I, 0.5)) > 1.0);
    CHECK(std::abs(theta_ratio(cplx(2.0, -1.0), 0.5) * std::conj(theta_ratio(cplx(2.0, 1.0), 0.5)) - 1.0) < 1e-12);
}

TEST_CASE("Hermite-Biehler margin") {
    CHECK(std::abs(hb_margin(3.0, {0.5, 0.7})) < 1e-14);
    CHECK(hb_margin(I, {0.0, 0.0}) == doctest::Approx(std::exp(0.5) - std::exp(-0.5)));
    CHECK(hb_margin(cplx(1.0, 1.0), {0.5, 0.7}) > 0.0);
    CHECK(hb_margin(cplx(-4.0, 0.2), {1.5, -2.0}) > 0.0);
}

TEST_CASE("hypergeometric bound") {
    const HuaPickrellParams flat{0.0, 0.0};
    CHECK(fbound_check(2.0, 50, 25, flat, 2.1));
    CHECK(fbound_check(0.0, 10, 10, {0.5, 0.3}, 1.0));
    const auto [lhs, rhs] = fbound_sides(0.0, 10, 4, {0.5, 0.3}, 1.0);
    CHECK(lhs == doctest::Approx(1.0));
    CHECK(rhs >= 1.0);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int i = 0; i < 50; ++i) {
        const HuaPickrellParams p{std::abs(u(rng)) / 2, u(rng)};
        const std::size_t n = 20 + std::size_t(i) * 7, m = n / 3;
        CHECK(fbound_check(cplx(u(rng), u(rng) / 3), n, m, p, 2.0));
    }
    CHECK_THROWS_AS(fbound_check(1.0, 0, 0, flat, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(fbound_check(1.0, 5, 6, flat, 2.0), std::invalid_argument);
}

TEST_CASE("Christoffel limit") {
    for (double g : {0.0, 0.5, 1.0}) {
        const HuaPickrellParams p{g, 0.0};
        CHECK(model_christoffel_limit(0.0, p) == doctest::Approx(std::tgamma(2 * g + 2)));
        CHECK(model_christoffel_limit(2.0, p) == doctest::Approx(std::tgamma(2 * g + 2) / T_func(2.0, g)));
    }
}
