#pragma once

// Orthogonal polynomials on the unit circle: moments of a weight, Toeplitz
// orthogonalization, the Szego recursion, reproducing kernels and Christoffel
// functions. Measures are absolutely continuous (no singular part).

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "polykern/numeric.hpp"

namespace polykern {

/// Smooth positive 2pi-periodic factor g(theta) multiplying the singular weight.
class SmoothFactor {
public:
    enum class Kind { constant, trig, tabulated };

    static SmoothFactor constant(double c = 1.0);
    /// g = a0 + sum_k a_k cos(k theta) + b_k sin(k theta); sin_coeffs[0] is b_1.
    static SmoothFactor trig(std::vector<double> cos_coeffs, std::vector<double> sin_coeffs = {});
    /// Samples at theta_j = 2 pi j / N, interpolated by the trigonometric interpolant.
    static SmoothFactor tabulated(std::vector<double> samples);

    template <class T>
    T operator()(const T& theta) const {
        using std::cos;
        using std::sin;
        T v(cos_[0]);
        for (std::size_t k = 1; k < cos_.size(); ++k) {
            const T kt = T(static_cast<double>(k)) * theta;
            v += T(cos_[k]) * cos(kt);
            if (k - 1 < sin_.size()) v += T(sin_[k - 1]) * sin(kt);
        }
        return v;
    }

    double at_zero() const;
    Kind kind() const { return kind_; }
    const std::vector<double>& cos_coeffs() const { return cos_; }
    const std::vector<double>& sin_coeffs() const { return sin_; }
    std::string describe() const;

private:
    Kind kind_ = Kind::constant;
    std::vector<double> cos_{1.0};
    std::vector<double> sin_;
};

/// w(theta) = g(theta) C e^{(pi-theta) tau} sin(theta/2)^{2 gamma} against dtheta/2pi,
/// with C = 4^gamma |Gamma(1+gamma+i tau)|^2 / Gamma(2 gamma+1).
struct CircleWeight {
    double gamma = 0.0;
    double tau = 0.0;
    SmoothFactor g = SmoothFactor::constant();

    void validate() const;
    double normalization() const;
    xreal normalization_extended() const;
    double operator()(double theta) const;
    std::string tag() const;
};

struct QuadratureConfig {
    Precision precision = Precision::extended;
    std::size_t nodes_per_panel = 40;
    double tol = 0.0;  ///< absolute tolerance relative to c0; 0 = per-precision default
    int max_refinements = 8;
};

/// c[k] = integral of e^{-ik theta} w(theta) dtheta / 2pi, k = 0..K.
struct MomentSequence {
    std::vector<xcplx> c;
    int precision_bits = 113;
    std::string tag;

    std::size_t size() const { return c.size(); }
    /// c[-k] = conj(c[k]).
    xcplx at(long k) const { return k >= 0 ? c[std::size_t(k)] : std::conj(c[std::size_t(-k)]); }
};

MomentSequence trig_moments(const CircleWeight& weight, std::size_t K,
                            const QuadratureConfig& quad = {});

struct VerblunskyCoefficients {
    std::vector<xcplx> alpha;  ///< alpha_0 .. alpha_{n-1}
    std::vector<xreal> kappa;  ///< kappa_0 .. kappa_n
    std::string tag;
    int precision_bits = 113;

    std::size_t degree() const { return alpha.size(); }
};

/// Monic basis: monic[k][j] is the coefficient of z^j in Phi_k.
struct CircleBasis {
    VerblunskyCoefficients vc;
    std::vector<std::vector<xcplx>> monic;
};

/// Hermitian (Cholesky) factorization of the Toeplitz moment matrix of order n+1.
/// Throws IndefiniteMatrixError on a nonpositive pivot.
CircleBasis monic_from_moments(const MomentSequence& moms, std::size_t n,
                               Precision prec = Precision::extended);

/// Verblunsky coefficients given directly (kappa is derived from c0 and alpha).
VerblunskyCoefficients verblunsky_from_alpha(std::vector<xcplx> alpha, xreal c0 = 1,
                                             std::string tag = {});

/// (Phi_n(z), Phi_n^*(z)) by the Szego recursion.
std::pair<cplx, cplx> eval_phi_pair(const VerblunskyCoefficients& vc, std::size_t n, cplx z);
std::pair<xcplx, xcplx> eval_phi_pair(const VerblunskyCoefficients& vc, std::size_t n, xcplx z);

/// Phi_0(z) .. Phi_n(z) in one recursion pass.
std::vector<cplx> phi_values(const VerblunskyCoefficients& vc, std::size_t n, cplx z);

struct KernelEvaluation {
    std::size_t n = 0;
    cplx z, w;
    cplx value;
    std::string measure_tag;
    int precision_bits = 53;
};

/// K_n(z, w) = sum_{m<=n} kappa_m^2 Phi_m(z) conj(Phi_m(w)).
KernelEvaluation kernel_direct(const VerblunskyCoefficients& vc, std::size_t n, cplx z, cplx w);

/// Christoffel–Darboux form; throws ConditioningError when |1 - z conj(w)| < 1e-8.
KernelEvaluation kernel_cd(const VerblunskyCoefficients& vc, std::size_t n, cplx z, cplx w);

/// lambda_n(z) = 1 / K_n(z, z).
double christoffel(const VerblunskyCoefficients& vc, std::size_t n, cplx z);

/// 1 / (v^H G^{-1} v), v = (1, z, ..., z^n), G the Toeplitz Gram matrix.
double christoffel_oracle(const MomentSequence& moms, std::size_t n, cplx z);

/// kappa_n^{1/n}.
double regularity_diagnostic(const VerblunskyCoefficients& vc, std::size_t n);

}  // namespace polykern
