#include "polykern/opuc.hpp"

#include <cmath>
#include <sstream>

#include "polykern/hyperfun.hpp"
#include "polykern/quadrature.hpp"

namespace polykern {

// ---------------------------------------------------------------------------
// SmoothFactor

SmoothFactor SmoothFactor::constant(double c) {
    SmoothFactor g;
    g.kind_ = Kind::constant;
    g.cos_ = {c};
    return g;
}

SmoothFactor SmoothFactor::trig(std::vector<double> cos_coeffs, std::vector<double> sin_coeffs) {
    if (cos_coeffs.empty()) cos_coeffs.push_back(0.0);
    if (sin_coeffs.size() + 1 > cos_coeffs.size()) cos_coeffs.resize(sin_coeffs.size() + 1, 0.0);
    SmoothFactor g;
    g.kind_ = Kind::trig;
    g.cos_ = std::move(cos_coeffs);
    g.sin_ = std::move(sin_coeffs);
    return g;
}

SmoothFactor SmoothFactor::tabulated(std::vector<double> samples) {
    const std::size_t N = samples.size();
    if (N == 0) throw std::invalid_argument("SmoothFactor::tabulated: no samples");
    const std::size_t half = (N - 1) / 2;
    std::vector<double> a(half + 1 + (N % 2 == 0 ? 1 : 0), 0.0), b(half, 0.0);
    for (std::size_t j = 0; j < N; ++j) {
        const double th = 2.0 * M_PI * double(j) / double(N);
        a[0] += samples[j] / double(N);
        for (std::size_t k = 1; k <= half; ++k) {
            a[k] += 2.0 * samples[j] * std::cos(double(k) * th) / double(N);
            b[k - 1] += 2.0 * samples[j] * std::sin(double(k) * th) / double(N);
        }
        if (N % 2 == 0) a[N / 2] += samples[j] * ((j % 2 == 0) ? 1.0 : -1.0) / double(N);
    }
    SmoothFactor g = trig(std::move(a), std::move(b));
    g.kind_ = Kind::tabulated;
    return g;
}

double SmoothFactor::at_zero() const {
    double v = 0.0;
    for (double a : cos_) v += a;
    return v;
}

std::string SmoothFactor::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case Kind::constant: os << "const:" << cos_[0]; break;
        case Kind::trig:
        case Kind::tabulated:
            os << (kind_ == Kind::trig ? "trig:" : "table:");
            for (std::size_t k = 0; k < cos_.size(); ++k) os << (k ? "," : "") << cos_[k];
            if (!sin_.empty()) {
                os << "|";
                for (std::size_t k = 0; k < sin_.size(); ++k) os << (k ? "," : "") << sin_[k];
            }
            break;
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// CircleWeight

void CircleWeight::validate() const {
    if (!(gamma > -0.5)) throw DomainError("CircleWeight: gamma must exceed -1/2");
    if (!std::isfinite(tau)) throw DomainError("CircleWeight: tau must be finite");
    if (!(g.at_zero() > 0.0)) throw DomainError("CircleWeight: g(0) must be positive");
}

double CircleWeight::normalization() const {
    const cplx G = gamma_complex(cplx(1.0 + gamma, tau));
    return std::pow(4.0, gamma) * std::norm(G) / std::real(gamma_complex(cplx(2.0 * gamma + 1.0)));
}

xreal CircleWeight::normalization_extended() const {
    using boost::multiprecision::exp;
    using boost::multiprecision::log;
    const xreal g(gamma), t(tau);
    const xreal lg = g * log(xreal(4)) + 2 * log_abs_gamma(xcplx(1 + g, t)) - log_abs_gamma(xcplx(2 * g + 1));
    return exp(lg);
}

double CircleWeight::operator()(double theta) const {
    return g(theta) * normalization() * std::exp((M_PI - theta) * tau) *
           std::pow(std::sin(theta / 2.0), 2.0 * gamma);
}

std::string CircleWeight::tag() const {
    std::ostringstream os;
    os << "circle(gamma=" << gamma << ",tau=" << tau << ",g=" << g.describe() << ")";
    return os.str();
}

// ---------------------------------------------------------------------------
// trig_moments

namespace {

template <class T>
std::vector<std::complex<T>> moments_on_panels(const CircleWeight& wt, std::size_t K,
                                               std::size_t panels, std::size_t nodes) {
    using std::exp;
    using std::pow;
    using std::sin;
    using std::cos;
    const T pi = pi_v<T>();
    const T two_pi = T(2) * pi;
    T C;
    if constexpr (is_extended_v<T>)
        C = wt.normalization_extended();
    else
        C = T(wt.normalization());
    const T tau(wt.tau);
    const T two_gamma = T(2) * T(wt.gamma);
    const T h = two_pi / T(static_cast<double>(panels));

    std::vector<CompensatedSum<std::complex<T>>> acc(K + 1);
    auto accumulate = [&](const T& theta, const T& weight) {
        const std::complex<T> step(cos(theta), -sin(theta));
        std::complex<T> e(1);
        for (std::size_t k = 0; k <= K; ++k) {
            acc[k].add(weight * e);
            e *= step;
        }
    };

    const auto left = gauss_jacobi<T>(nodes, 0.0, 2.0 * wt.gamma);
    const auto right = gauss_jacobi<T>(nodes, 2.0 * wt.gamma, 0.0);
    const auto mid = gauss_legendre<T>(nodes);
    const T half_h = h / T(2);
    const T scale_end = pow(half_h, two_gamma) * half_h;

    for (std::size_t i = 0; i < nodes; ++i) {
        // theta in [0, h]: sin(theta/2)^{2g} = theta^{2g} (sin(theta/2)/theta)^{2g}
        const T th = half_h * (T(1) + left.nodes[i]);
        const T reg = C * exp((pi - th) * tau) * pow(sin(th / T(2)) / th, two_gamma) * wt.g(th);
        accumulate(th, scale_end * left.weights[i] * reg);
    }
    for (std::size_t i = 0; i < nodes; ++i) {
        // u = 2pi - theta in [0, h]
        const T u = half_h * (T(1) - right.nodes[i]);
        const T th = two_pi - u;
        const T reg = C * exp((pi - th) * tau) * pow(sin(u / T(2)) / u, two_gamma) * wt.g(th);
        accumulate(th, scale_end * right.weights[i] * reg);
    }
    for (std::size_t p = 1; p + 1 < panels; ++p) {
        const T a = h * T(static_cast<double>(p));
        for (std::size_t i = 0; i < nodes; ++i) {
            const T th = a + half_h * (T(1) + mid.nodes[i]);
            const T w = C * exp((pi - th) * tau) * pow(sin(th / T(2)), two_gamma) * wt.g(th);
            accumulate(th, half_h * mid.weights[i] * w);
        }
    }

    std::vector<std::complex<T>> c(K + 1);
    for (std::size_t k = 0; k <= K; ++k) c[k] = acc[k].value() / two_pi;
    return c;
}

template <class T>
MomentSequence trig_moments_impl(const CircleWeight& weight, std::size_t K,
                                 const QuadratureConfig& quad) {
    using std::abs;
    const double tol = quad.tol > 0 ? quad.tol : (is_extended_v<T> ? 1e-26 : 1e-13);
    // Panel width chosen so that each panel sees a bounded number of
    // oscillations of e^{-iK theta}.
    std::size_t panels = std::max<std::size_t>(8, (K + 1) * 2 / 5 + 4);
    auto prev = moments_on_panels<T>(weight, K, panels, quad.nodes_per_panel);
    for (int level = 0; level < quad.max_refinements; ++level) {
        panels *= 2;
        auto next = moments_on_panels<T>(weight, K, panels, quad.nodes_per_panel);
        T diff(0);
        for (std::size_t k = 0; k <= K; ++k) diff = std::max(diff, T(abs(next[k] - prev[k])));
        if (diff <= T(tol) * abs(next[0])) {
            MomentSequence m;
            m.c.reserve(K + 1);
            for (auto& v : next) m.c.emplace_back(xreal(v.real()), xreal(v.imag()));
            m.precision_bits = is_extended_v<T> ? 113 : 53;
            m.tag = weight.tag();
            return m;
        }
        prev = std::move(next);
    }
    throw NonconvergenceError("trig_moments: panel refinement exhausted");
}

}  // namespace

MomentSequence trig_moments(const CircleWeight& weight, std::size_t K, const QuadratureConfig& quad) {
    weight.validate();
    if (quad.precision == Precision::extended) return trig_moments_impl<xreal>(weight, K, quad);
    return trig_moments_impl<double>(weight, K, quad);
}

// ---------------------------------------------------------------------------
// Toeplitz factorization

namespace {

template <class T>
using Matrix = std::vector<std::vector<std::complex<T>>>;

// Lower Cholesky factor of the Toeplitz matrix G_{jk} = c_{k-j}.
template <class T>
Matrix<T> toeplitz_cholesky(const MomentSequence& moms, std::size_t N) {
    using std::sqrt;
    if (moms.size() < N) throw std::invalid_argument("toeplitz factorization: not enough moments");
    auto entry = [&](std::size_t j, std::size_t k) {
        const xcplx v = moms.at(long(k) - long(j));
        return std::complex<T>(T(v.real()), T(v.imag()));
    };
    Matrix<T> L(N, std::vector<std::complex<T>>(N));
    for (std::size_t j = 0; j < N; ++j) {
        CompensatedSum<T> d;
        d.add(entry(j, j).real());
        for (std::size_t k = 0; k < j; ++k) d.add(-std::norm(L[j][k]));
        const T piv = d.value();
        if (!(piv > T(0)))
            throw IndefiniteMatrixError("Toeplitz Gram matrix is not positive definite at order " +
                                        std::to_string(j + 1) + "; raise the working precision");
        const T ljj = sqrt(piv);
        L[j][j] = ljj;
        for (std::size_t i = j + 1; i < N; ++i) {
            CompensatedSum<std::complex<T>> s;
            s.add(entry(i, j));
            for (std::size_t k = 0; k < j; ++k) s.add(-L[i][k] * std::conj(L[j][k]));
            L[i][j] = s.value() / ljj;
        }
    }
    return L;
}

template <class T>
CircleBasis monic_impl(const MomentSequence& moms, std::size_t n) {
    const std::size_t N = n + 1;
    const Matrix<T> L = toeplitz_cholesky<T>(moms, N);
    // Rows of X = L^{-1} are the orthonormal polynomials.
    CircleBasis basis;
    basis.monic.resize(N);
    basis.vc.kappa.resize(N);
    basis.vc.alpha.resize(n);
    std::vector<std::complex<T>> row(N);
    for (std::size_t i = 0; i < N; ++i) {
        const T xii = T(1) / L[i][i].real();
        row[i] = xii;
        for (std::size_t jj = i; jj-- > 0;) {
            CompensatedSum<std::complex<T>> s;
            for (std::size_t k = jj + 1; k <= i; ++k) s.add(row[k] * L[k][jj]);
            row[jj] = -s.value() / L[jj][jj].real();
        }
        auto& out = basis.monic[i];
        out.resize(i + 1);
        for (std::size_t j = 0; j <= i; ++j) {
            const std::complex<T> v = row[j] / xii;
            out[j] = xcplx(xreal(v.real()), xreal(v.imag()));
        }
        out[i] = xcplx(1);
        basis.vc.kappa[i] = xreal(xii);
        if (i >= 1) basis.vc.alpha[i - 1] = -std::conj(out[0]);
    }
    basis.vc.tag = moms.tag;
    basis.vc.precision_bits = is_extended_v<T> ? 113 : 53;
    return basis;
}

}  // namespace

CircleBasis monic_from_moments(const MomentSequence& moms, std::size_t n, Precision prec) {
    if (prec == Precision::extended) return monic_impl<xreal>(moms, n);
    return monic_impl<double>(moms, n);
}

VerblunskyCoefficients verblunsky_from_alpha(std::vector<xcplx> alpha, xreal c0, std::string tag) {
    using boost::multiprecision::sqrt;
    VerblunskyCoefficients vc;
    vc.kappa.resize(alpha.size() + 1);
    vc.kappa[0] = 1 / sqrt(c0);
    for (std::size_t k = 0; k < alpha.size(); ++k) {
        const xreal rho2 = 1 - std::norm(alpha[k]);
        if (!(rho2 > 0)) throw DomainError("verblunsky_from_alpha: |alpha_k| >= 1");
        vc.kappa[k + 1] = vc.kappa[k] / sqrt(rho2);
    }
    vc.alpha = std::move(alpha);
    vc.tag = std::move(tag);
    return vc;
}

// ---------------------------------------------------------------------------
// Recursion and kernels

namespace {

// Calls f(k, Phi_k, Phi_k^*) for k = 0..n.
template <class F>
void szego_walk(const VerblunskyCoefficients& vc, std::size_t n, const xcplx& z, F&& f) {
    if (n > vc.alpha.size()) throw std::out_of_range("Szego recursion: degree exceeds alpha length");
    xcplx phi(1), star(1);
    f(std::size_t{0}, phi, star);
    for (std::size_t k = 0; k < n; ++k) {
        const xcplx a = vc.alpha[k];
        const xcplx next = z * phi - std::conj(a) * star;
        star = star - a * z * phi;
        phi = next;
        f(k + 1, phi, star);
    }
}

}  // namespace

std::pair<xcplx, xcplx> eval_phi_pair(const VerblunskyCoefficients& vc, std::size_t n, xcplx z) {
    xcplx p, s;
    szego_walk(vc, n, z, [&](std::size_t k, const xcplx& phi, const xcplx& star) {
        if (k == n) {
            p = phi;
            s = star;
        }
    });
    return {p, s};
}

std::pair<cplx, cplx> eval_phi_pair(const VerblunskyCoefficients& vc, std::size_t n, cplx z) {
    auto [p, s] = eval_phi_pair(vc, n, widen<xreal>(z));
    return {to_double(p), to_double(s)};
}

std::vector<cplx> phi_values(const VerblunskyCoefficients& vc, std::size_t n, cplx z) {
    std::vector<cplx> out(n + 1);
    szego_walk(vc, n, widen<xreal>(z),
               [&](std::size_t k, const xcplx& phi, const xcplx&) { out[k] = to_double(phi); });
    return out;
}

KernelEvaluation kernel_direct(const VerblunskyCoefficients& vc, std::size_t n, cplx z, cplx w) {
    if (n >= vc.kappa.size()) throw std::out_of_range("kernel_direct: degree exceeds basis");
    std::vector<xcplx> pz(n + 1);
    szego_walk(vc, n, widen<xreal>(z),
               [&](std::size_t k, const xcplx& phi, const xcplx&) { pz[k] = phi; });
    CompensatedSum<xcplx> sum;
    szego_walk(vc, n, widen<xreal>(w), [&](std::size_t k, const xcplx& phi, const xcplx&) {
        sum.add(vc.kappa[k] * vc.kappa[k] * pz[k] * std::conj(phi));
    });
    return {n, z, w, to_double(sum.value()), vc.tag, 113};
}

KernelEvaluation kernel_cd(const VerblunskyCoefficients& vc, std::size_t n, cplx z, cplx w) {
    if (std::abs(1.0 - z * std::conj(w)) < 1e-8)
        throw ConditioningError("kernel_cd: |1 - z conj(w)| < 1e-8; use kernel_direct");
    if (n + 1 >= vc.kappa.size()) throw std::out_of_range("kernel_cd: needs degree n+1");
    const auto [pz, sz] = eval_phi_pair(vc, n + 1, widen<xreal>(z));
    const auto [pw, sw] = eval_phi_pair(vc, n + 1, widen<xreal>(w));
    const xreal k2 = vc.kappa[n + 1] * vc.kappa[n + 1];
    const xcplx zx = widen<xreal>(z), wx = widen<xreal>(w);
    const xcplx v = k2 * (sz * std::conj(sw) - pz * std::conj(pw)) / (xreal(1) - zx * std::conj(wx));
    return {n, z, w, to_double(v), vc.tag, 113};
}

double christoffel(const VerblunskyCoefficients& vc, std::size_t n, cplx z) {
    return 1.0 / kernel_direct(vc, n, z, z).value.real();
}

double christoffel_oracle(const MomentSequence& moms, std::size_t n, cplx z) {
    const std::size_t N = n + 1;
    const auto L = toeplitz_cholesky<xreal>(moms, N);
    std::vector<xcplx> v(N), y(N), x(N);
    const xcplx zx = widen<xreal>(z);
    v[0] = 1;
    for (std::size_t j = 1; j < N; ++j) v[j] = v[j - 1] * zx;
    // G = L L^H; solve L y = v, L^H x = y.
    for (std::size_t i = 0; i < N; ++i) {
        xcplx s = v[i];
        for (std::size_t k = 0; k < i; ++k) s -= L[i][k] * y[k];
        y[i] = s / L[i][i].real();
    }
    for (std::size_t i = N; i-- > 0;) {
        xcplx s = y[i];
        for (std::size_t k = i + 1; k < N; ++k) s -= std::conj(L[k][i]) * x[k];
        x[i] = s / L[i][i].real();
    }
    CompensatedSum<xcplx> q;
    for (std::size_t j = 0; j < N; ++j) q.add(std::conj(v[j]) * x[j]);
    return static_cast<double>(1 / q.value().real());
}

double regularity_diagnostic(const VerblunskyCoefficients& vc, std::size_t n) {
    if (n == 0) throw std::invalid_argument("regularity_diagnostic: n must be >= 1");
    if (n >= vc.kappa.size()) throw std::out_of_range("regularity_diagnostic: degree exceeds basis");
    using boost::multiprecision::log;
    return std::exp(static_cast<double>(log(vc.kappa[n])) / double(n));
}

}  // namespace polykern
