#pragma once

// Area-orthogonal polynomials on G = {z : |z^m - 1| < r^m}, 0 < r < 1.
//
// Everything is organized by residue class: a degree n = km + s polynomial
// that is monic and orthogonal to lower degrees has the form z^s rho^k Q(w)
// with rho = r^m, w = (z^m - 1)/rho and Q monic of degree k in w. Q is
// orthogonal on the unit w-disk against |1 + rho w|^{-v_s} dA(w) with
// v_s = 2 - 2/m - 2s/m.

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "polykern/opuc.hpp"

namespace polykern {

struct LemniscateParams {
    double r = 0.5;
    int m = 1;

    void validate() const;
    double rho() const;  ///< r^m
    /// v_s = 2 - 2/m - 2s/m.
    double class_exponent(int s) const { return 2.0 - 2.0 / m - 2.0 * s / m; }
};

struct BoundaryPoint {
    double t = 0.0;
    int j = 0;
    cplx z0;
    cplx w0;
};

/// z0 = omega^j (1 + r^m e^{it})^{1/m}, w0 = e^{it}.
BoundaryPoint boundary_point(double t, int j, const LemniscateParams& p);

/// |r^m w + 1|^{-q} for |w| = 1.
double gamma_q_weight(cplx w, double q, const LemniscateParams& p);

/// Moments against dtheta/2pi of |1 + r^m e^{i theta}|^{-q}, k = 0..K, from the
/// double binomial series.
MomentSequence gamma_q_moments(std::size_t K, double q, const LemniscateParams& p,
                               Precision prec = Precision::extended);

/// (1 + r^m/z)^{q/2}, principal branch; DomainError when |z| <= r^m.
cplx szego_D(cplx z, double q, const LemniscateParams& p);

// ---------------------------------------------------------------------------
// Area quadrature

struct AreaResolution {
    std::size_t radial = 256;   ///< Gauss–Legendre nodes in |w|
    std::size_t angular = 512;  ///< trapezoid nodes in arg w
    double tol = 1e-8;          ///< relative change allowed under one doubling
    int max_doublings = 2;
};

struct AreaResult {
    cplx value;
    double error_estimate = 0.0;
    AreaResolution used;
};

/// Sum over the m components of the integral of f over the component, each
/// pulled back to the unit w-disk through z = omega^j (1 + rho w)^{1/m}.
AreaResult area_quadrature(const std::function<cplx(cplx)>& f, const LemniscateParams& p,
                           const AreaResolution& res = {});

// ---------------------------------------------------------------------------
// Bases

struct ClassGram {
    int s = 0;
    std::vector<std::vector<xreal>> G;  ///< <z^s w^k, z^s w^l> over G_{r,m}
    double error_estimate = 0.0;
};

/// Gram matrix of the adapted basis z^s w^k, k = 0..K, from the polar rule on the w-disk.
ClassGram adapted_gram(int s, std::size_t K, const LemniscateParams& p, const AreaResolution& res = {});

/// Same entries from the absolutely convergent binomial series (independent check).
ClassGram adapted_gram_series(int s, std::size_t K, const LemniscateParams& p);

struct LemniscateBasis {
    enum class Source { oracle, prop72 };

    LemniscateParams params;
    std::size_t max_degree = 0;
    Source source = Source::oracle;
    std::size_t prop72_threshold = 0;  ///< k from which the Prop 7.2 form is used
    /// wcoef[n][i]: coefficient of w^i in Q_n (monic, degree n / m).
    std::vector<std::vector<double>> wcoef;
    /// ||Phi_n||^2 / rho^{2k}, from the quadrature Gram matrix.
    std::vector<double> reduced_norm;
    double orthogonality_residual = 0.0;

    int residue(std::size_t n) const { return int(n % std::size_t(params.m)); }
    std::size_t block(std::size_t n) const { return n / std::size_t(params.m); }

    double norm_sq(std::size_t n) const;
    double kappa_sq(std::size_t n) const { return 1.0 / norm_sq(n); }
    cplx eval(std::size_t n, cplx z) const;
    /// Coefficients of Phi_n in powers of z (index = exponent).
    std::vector<cplx> monomial_coefficients(std::size_t n) const;
};

/// Gram–Schmidt per residue class in the adapted basis, extended precision.
LemniscateBasis gram_schmidt_oracle(std::size_t max_degree, const LemniscateParams& p,
                                    Precision prec = Precision::extended,
                                    const AreaResolution& res = {});

/// Gram–Schmidt on raw monomials z^0..z^N (small N only; conditioning grows geometrically).
/// Returns coefficient rows in powers of z and the squared norms.
struct MonomialBasis {
    std::vector<std::vector<cplx>> coef;
    std::vector<double> norm_sq;
};
MonomialBasis gram_schmidt_monomial(std::size_t N, const LemniscateParams& p,
                                    const AreaResolution& res = {});

/// Circle polynomials Phi_k(.; gamma^{(v_s)}) for each class s < m-1.
struct Prop72Bank {
    LemniscateParams params;
    std::size_t max_k = 0;
    std::vector<CircleBasis> circle;  ///< indexed by s

    static Prop72Bank build(std::size_t max_k, const LemniscateParams& p);
    /// Coefficients of Q in w for degree km + s.
    std::vector<xreal> wpoly(std::size_t k, int s) const;
};

/// Phi_n(z; mu0) from the closed forms. Throws BelowThresholdError for s < m-1 and k < threshold.
cplx prop72_phi(std::size_t n, cplx z, const Prop72Bank& bank, std::size_t threshold = 0);

/// Smallest k from which every class s < m-1 agrees with the oracle to tol, coefficientwise.
std::size_t find_prop72_threshold(const Prop72Bank& bank, const LemniscateBasis& oracle,
                                  double tol = 1e-6);

/// Basis for mu0 = area: oracle below the threshold, Prop 7.2 above it.
LemniscateBasis build_mu0_basis(std::size_t max_degree, const LemniscateParams& p,
                                const AreaResolution& res = {});

/// sum_{d <= n} Phi_d(z) conj(Phi_d(w)) / ||Phi_d||^2.
KernelEvaluation mu0_kernel(std::size_t n, cplx z, cplx w, const LemniscateBasis& basis);

struct KappaEstimate {
    enum class Kind { exact, asymptotic };
    double kappa_sq = 0.0;
    Kind kind = Kind::exact;
};

/// Exact at n = km + m - 1, leading-order asymptotic otherwise (needs n >= m).
KappaEstimate kappa_asymptotic(std::size_t n, const LemniscateParams& p);

/// H(t) = 1F1(2; 3; t) = 2 (e^t (t-1) + 1) / t^2.
cplx H_func(cplx t);
cplx H_series(cplx t);

/// A = (conj(w0) a z0^{m-1} + w0 conj(b) conj(z0)^{m-1}) / r^m.
cplx limit_A(cplx a, cplx b, const BoundaryPoint& bp, const LemniscateParams& p);

}  // namespace polykern
