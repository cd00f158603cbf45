#pragma once

// Closed forms for the Hua–Pickrell model measure on the unit circle and the
// confluent-hypergeometric limiting kernels of its universality limit.

#include <cstddef>
#include <vector>

#include "polykern/opuc.hpp"

namespace polykern {

struct HuaPickrellParams {
    double gamma = 0.0;
    double tau = 0.0;

    cplx y() const { return {gamma, tau}; }
    void validate() const;
    CircleWeight weight() const { return {gamma, tau, SmoothFactor::constant()}; }
};

/// Density against dtheta/2pi; +infinity at the endpoints when gamma < 0.
double hp_weight(double theta, const HuaPickrellParams& p);

/// Phi_n(z) = (2g+1)_n / (1+y)_n  2F1(-n, 1+y; 2g+1; 1-z).
cplx hp_monic(std::size_t n, cplx z, const HuaPickrellParams& p);
/// Coefficients of Phi_n in powers of z, C(n,j) (1+y)_j (g-y)_{n-j} / (1+y)_n, in extended precision.
std::vector<xcplx> hp_monic_coefficients(std::size_t n, const HuaPickrellParams& p);
/// Phi_n^*(z) = (2g+1)_n / (1+conj y)_n  2F1(-n, y; 2g+1; 1-z).
cplx hp_star(std::size_t n, cplx z, const HuaPickrellParams& p);
/// kappa_n = |(1+y)_n| / sqrt(n! (2g+1)_n).
double hp_kappa(std::size_t n, const HuaPickrellParams& p);
/// alpha_n = -(y)_{n+1} / (1+conj y)_{n+1}.
xcplx hp_verblunsky(std::size_t n, const HuaPickrellParams& p);
/// Closed-form trigonometric moments c_k = (-y)_k / (1+conj y)_k.
xcplx hp_moment(std::size_t k, const HuaPickrellParams& p);

/// K_n(z, w; model) in O(n) via the contiguous recurrence of the terminating 2F1 in its degree.
KernelEvaluation hp_kernel(std::size_t n, cplx z, cplx w, const HuaPickrellParams& p);

enum class KernelBranch { generic, diagonal };

struct LimitKernelValue {
    cplx value;
    KernelBranch branch = KernelBranch::generic;
};

/// Limit of K_n(e^{ia/n}, e^{ib/n}) / K_n(1, 1). Uses the continuation formula
/// when |conj(b) - a| < 1e-6.
LimitKernelValue limit_kernel(cplx a, cplx b, const HuaPickrellParams& p);

/// Same, forcing the generic quotient (used to validate the diagonal branch).
cplx limit_kernel_generic(cplx a, cplx b, const HuaPickrellParams& p);
cplx limit_kernel_diagonal(cplx b, const HuaPickrellParams& p);

/// T(a) for real a: the diagonal value of the tau = 0 limiting kernel.
double T_func(double a, double gamma);

/// Theta(a) = 1F1(1+g; 2g+1; ia) / 1F1(g; 2g+1; ia).
cplx theta_ratio(cplx a, double gamma);

/// |E(z)| - |E(conj z)| for E(z) = 1F1(y; 2g+1; iz) e^{-iz/2}.
double hb_margin(cplx z, const HuaPickrellParams& p);

/// (2g+1)(|1F1(g;2g+1;ia)|^2 - |1F1(1+g;2g+1;ia)|^2) / (2 Im a), or T(a) for real a.
double lemma_1f1_quotient(cplx a, double gamma);

/// Whether |2F1(-m,1+y;2g+1;1-e^{ia/n})| <= 2F1(-n,1+|y|;2g+1;-C_K/n).
bool fbound_check(cplx a, std::size_t n, std::size_t m, const HuaPickrellParams& p, double C_K);

/// Both sides of the bound above, for margin reporting.
std::pair<double, double> fbound_sides(cplx a, std::size_t n, std::size_t m,
                                       const HuaPickrellParams& p, double C_K);

/// Limit of n^{2g+1} lambda_n(e^{ia/n}) for the model measure: Gamma(2g+2) / L(a, a).
double model_christoffel_limit(cplx a, const HuaPickrellParams& p);

}  // namespace polykern
