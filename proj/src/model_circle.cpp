#include "polykern/model_circle.hpp"

#include <cmath>

#include "polykern/hyperfun.hpp"

namespace polykern {

void HuaPickrellParams::validate() const {
    if (!(gamma > -0.5)) throw DomainError("HuaPickrellParams: gamma must exceed -1/2");
    if (!std::isfinite(tau)) throw DomainError("HuaPickrellParams: tau must be finite");
}

double hp_weight(double theta, const HuaPickrellParams& p) {
    p.validate();
    const double C = p.weight().normalization();
    const double jump = std::exp((M_PI - theta) * p.tau);
    if (theta <= 0.0 || theta >= 2.0 * M_PI) {
        if (p.gamma < 0) return std::numeric_limits<double>::infinity();
        return p.gamma == 0 ? C * jump : 0.0;
    }
    return C * jump * std::pow(std::sin(theta / 2.0), 2.0 * p.gamma);
}

namespace {

// (2g+1)_n / (s)_n as a running product of ratios.
cplx pochhammer_ratio(double top, cplx s, std::size_t n) {
    cplx r = 1.0;
    for (std::size_t j = 0; j < n; ++j) r *= (top + double(j)) / (s + double(j));
    return r;
}

}  // namespace

cplx hp_monic(std::size_t n, cplx z, const HuaPickrellParams& p) {
    p.validate();
    const cplx y = p.y();
    const double c = 2.0 * p.gamma + 1.0;
    return pochhammer_ratio(c, 1.0 + y, n) * hyp2f1_terminating(n, 1.0 + y, cplx(c), 1.0 - z);
}

std::vector<xcplx> hp_monic_coefficients(std::size_t n, const HuaPickrellParams& p) {
    p.validate();
    const xcplx b(xreal(1) + xreal(p.gamma), xreal(p.tau));
    const xreal c = xreal(2) * xreal(p.gamma) + xreal(1);
    // Connection formula for the terminating 2F1 about z = 0:
    // [z^j] Phi_n = C(n,j) (b)_j (c-b)_{n-j} / (b)_n, every term of one sign pattern, no cancellation.
    std::vector<xcplx> head(n + 1), tail(n + 1);
    head[0] = xcplx(1);
    tail[0] = xcplx(1);
    for (std::size_t j = 0; j < n; ++j) {
        const xreal jj(static_cast<double>(j));
        head[j + 1] = head[j] * (b + jj);
        tail[j + 1] = tail[j] * (c - b + jj);
    }
    std::vector<xcplx> out(n + 1);
    xreal binom = 1;
    for (std::size_t j = 0; j <= n; ++j) {
        if (j > 0) binom = binom * xreal(static_cast<double>(n - j + 1)) / xreal(static_cast<double>(j));
        out[j] = binom * head[j] * tail[n - j] / head[n];
    }
    return out;
}

cplx hp_star(std::size_t n, cplx z, const HuaPickrellParams& p) {
    p.validate();
    const cplx y = p.y();
    const double c = 2.0 * p.gamma + 1.0;
    return pochhammer_ratio(c, 1.0 + std::conj(y), n) * hyp2f1_terminating(n, y, cplx(c), 1.0 - z);
}

double hp_kappa(std::size_t n, const HuaPickrellParams& p) {
    p.validate();
    const cplx y = p.y();
    const double c = 2.0 * p.gamma + 1.0;
    double k2 = 1.0;
    for (std::size_t j = 0; j < n; ++j)
        k2 *= std::norm(1.0 + y + double(j)) / ((double(j) + 1.0) * (c + double(j)));
    return std::sqrt(k2);
}

xcplx hp_verblunsky(std::size_t n, const HuaPickrellParams& p) {
    p.validate();
    const xcplx y(xreal(p.gamma), xreal(p.tau));
    xcplx r(1);
    for (std::size_t j = 0; j <= n; ++j) {
        const xreal jj(static_cast<double>(j));
        r *= (y + jj) / (xreal(1) + std::conj(y) + jj);
    }
    return -r;
}

xcplx hp_moment(std::size_t k, const HuaPickrellParams& p) {
    p.validate();
    const xcplx y(xreal(p.gamma), xreal(p.tau));
    xcplx r(1);
    for (std::size_t j = 0; j < k; ++j) {
        const xreal jj(static_cast<double>(j));
        r *= (jj - y) / (xreal(1) + std::conj(y) + jj);
    }
    return r;
}

namespace {

// F_m = 2F1(-m, b; c; x) for m = 0..n by the contiguous relation in the first
// parameter: (c-a) F(a-1) + (2a - c + (b-a) x) F(a) + a (x-1) F(a+1) = 0, a = -m.
// Rounding grows roughly like n^2 eps along the recurrence, so it runs in
// extended precision.
std::vector<xcplx> terminating_bank(std::size_t n, const xcplx& b, const xreal& c, const xcplx& x) {
    std::vector<xcplx> F(n + 1);
    F[0] = xcplx(1);
    if (n == 0) return F;
    F[1] = xreal(1) - b * x / c;
    for (std::size_t m = 1; m < n; ++m) {
        const xreal a = -xreal(static_cast<double>(m));
        F[m + 1] = -((xreal(2) * a - c + (b - a) * x) * F[m] + a * (x - xreal(1)) * F[m - 1]) / (c - a);
    }
    return F;
}

}  // namespace

KernelEvaluation hp_kernel(std::size_t n, cplx z, cplx w, const HuaPickrellParams& p) {
    p.validate();
    const xcplx b = xreal(1) + widen<xreal>(p.y());
    const xreal c = xreal(2.0 * p.gamma + 1.0);
    const auto Fz = terminating_bank(n, b, c, xreal(1) - widen<xreal>(z));
    const auto Fw = (w == z) ? Fz : terminating_bank(n, b, c, xreal(1) - widen<xreal>(w));
    // kappa_m^2 |(2g+1)_m/(1+y)_m|^2 = (2g+1)_m / m!
    xreal rho = 1;
    xcplx sum(0);
    for (std::size_t m = 0; m <= n; ++m) {
        if (m > 0) rho *= (c + xreal(static_cast<double>(m - 1))) / xreal(static_cast<double>(m));
        sum += rho * Fz[m] * std::conj(Fw[m]);
    }
    return {n, z, w, to_double(sum), "hua-pickrell", 53};
}

cplx limit_kernel_generic(cplx a, cplx b, const HuaPickrellParams& p) {
    const cplx y = p.y(), yb = std::conj(y), bb = std::conj(b);
    const cplx I(0.0, 1.0);
    const cplx c = 2.0 * p.gamma + 1.0;
    const cplx num = hyp1f1(yb, c, -I * bb) * hyp1f1(y, c, I * a) -
                     hyp1f1(1.0 + yb, c, -I * bb) * hyp1f1(1.0 + y, c, I * a);
    return c * num / (I * (bb - a));
}

cplx limit_kernel_diagonal(cplx b, const HuaPickrellParams& p) {
    const cplx y = p.y(), yb = std::conj(y), bb = std::conj(b);
    const cplx I(0.0, 1.0);
    const cplx c = 2.0 * p.gamma + 1.0;
    return hyp1f1(1.0 + yb, c, -I * bb) * hyp1f1(2.0 + y, c + 1.0, I * bb) * (1.0 + y) -
           hyp1f1(yb, c, -I * bb) * hyp1f1(1.0 + y, c + 1.0, I * bb) * y;
}

LimitKernelValue limit_kernel(cplx a, cplx b, const HuaPickrellParams& p) {
    p.validate();
    if (std::abs(std::conj(b) - a) < 1e-6) return {limit_kernel_diagonal(b, p), KernelBranch::diagonal};
    return {limit_kernel_generic(a, b, p), KernelBranch::generic};
}

double T_func(double a, double gamma) {
    return limit_kernel_diagonal(cplx(a), HuaPickrellParams{gamma, 0.0}).real();
}

cplx theta_ratio(cplx a, double gamma) {
    if (a.imag() < 0) return 1.0 / std::conj(theta_ratio(std::conj(a), gamma));
    const cplx I(0.0, 1.0);
    const cplx c = 2.0 * gamma + 1.0;
    const cplx den = hyp1f1(cplx(gamma), c, I * a);
    if (std::abs(den) < 1e-13) throw DomainError("theta_ratio: denominator vanishes");
    return hyp1f1(cplx(1.0 + gamma), c, I * a) / den;
}

double hb_margin(cplx z, const HuaPickrellParams& p) {
    const cplx I(0.0, 1.0);
    const cplx c = 2.0 * p.gamma + 1.0;
    auto E = [&](cplx x) { return hyp1f1(p.y(), c, I * x) * std::exp(-I * x / 2.0); };
    return std::abs(E(z)) - std::abs(E(std::conj(z)));
}

double lemma_1f1_quotient(cplx a, double gamma) {
    if (a.imag() == 0.0) return T_func(a.real(), gamma);
    const cplx I(0.0, 1.0);
    const cplx c = 2.0 * gamma + 1.0;
    const double d = std::norm(hyp1f1(cplx(gamma), c, I * a)) - std::norm(hyp1f1(cplx(1.0 + gamma), c, I * a));
    return (2.0 * gamma + 1.0) * d / (2.0 * a.imag());
}

std::pair<double, double> fbound_sides(cplx a, std::size_t n, std::size_t m,
                                       const HuaPickrellParams& p, double C_K) {
    const cplx y = p.y();
    const cplx c = 2.0 * p.gamma + 1.0;
    const cplx x = 1.0 - std::exp(cplx(0.0, 1.0) * a / double(n));
    const double lhs = std::abs(hyp2f1_terminating(m, 1.0 + y, c, x));
    const double rhs = hyp2f1_terminating(n, cplx(1.0 + std::abs(y)), c, cplx(-C_K / double(n))).real();
    return {lhs, rhs};
}

bool fbound_check(cplx a, std::size_t n, std::size_t m, const HuaPickrellParams& p, double C_K) {
    p.validate();
    if (n == 0 || m > n) throw std::invalid_argument("fbound_check: need 1 <= n and m <= n");
    const auto [lhs, rhs] = fbound_sides(a, n, m, p, C_K);
    return lhs <= rhs;
}

double model_christoffel_limit(cplx a, const HuaPickrellParams& p) {
    const double g = std::real(gamma_complex(cplx(2.0 * p.gamma + 2.0)));
    return g / limit_kernel(a, a, p).value.real();
}

}  // namespace polykern
