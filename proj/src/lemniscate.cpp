#include "polykern/lemniscate.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "polykern/hyperfun.hpp"
#include "polykern/quadrature.hpp"

namespace polykern {

void LemniscateParams::validate() const {
    if (!(r > 0.0 && r < 1.0)) throw DomainError("LemniscateParams: r must lie in (0, 1)");
    if (m < 1) throw DomainError("LemniscateParams: m must be positive");
}

double LemniscateParams::rho() const { return std::pow(r, m); }

BoundaryPoint boundary_point(double t, int j, const LemniscateParams& p) {
    p.validate();
    if (j < 0 || j >= p.m) throw DomainError("boundary_point: component index out of range");
    const cplx w0 = std::polar(1.0, t);
    const cplx omega = std::polar(1.0, 2.0 * M_PI * j / p.m);
    return {t, j, omega * std::pow(1.0 + p.rho() * w0, 1.0 / p.m), w0};
}

double gamma_q_weight(cplx w, double q, const LemniscateParams& p) {
    return std::pow(std::abs(p.rho() * w + 1.0), -q);
}

MomentSequence gamma_q_moments(std::size_t K, double q, const LemniscateParams& p, Precision prec) {
    p.validate();
    const xreal rho(p.rho()), h(-q / 2.0);
    // rho^{2J} below 1e-40, with slack for the polynomial growth of the binomials
    const std::size_t J = std::size_t(std::ceil(-40.0 * std::log(10.0) / (2.0 * std::log(p.rho())))) +
                          std::size_t(std::abs(q)) + 16;
    std::vector<xreal> beta(J + K + 1);
    beta[0] = 1;
    for (std::size_t j = 0; j + 1 < beta.size(); ++j)
        beta[j + 1] = beta[j] * (h - xreal(double(j))) / xreal(double(j + 1)) * rho;
    MomentSequence out;
    out.c.resize(K + 1);
    for (std::size_t k = 0; k <= K; ++k) {
        CompensatedSum<xreal> s;
        for (std::size_t j = 0; j <= J; ++j) s.add(beta[j + k] * beta[j]);
        const xreal v = s.value();
        out.c[k] = prec == Precision::extended ? xcplx(v) : xcplx(xreal(double(v)));
    }
    out.precision_bits = bits(prec);
    out.tag = "gamma_q(q=" + std::to_string(q) + ",rho=" + std::to_string(p.rho()) + ")";
    return out;
}

cplx szego_D(cplx z, double q, const LemniscateParams& p) {
    if (std::abs(z) <= p.rho()) throw DomainError("szego_D: need |z| > r^m");
    return std::pow(1.0 + p.rho() / z, q / 2.0);
}

namespace {

// Polar rule on the unit w-disk: Gauss–Legendre in |w| on [0,1], trapezoid in arg w.
template <class T>
struct PolarRule {
    std::vector<T> s, ws;
    std::size_t na = 0;
};

template <class T>
PolarRule<T> polar_rule(std::size_t nr, std::size_t na) {
    const auto gl = gauss_legendre<T>(nr);
    PolarRule<T> r;
    r.na = na;
    r.s.resize(nr);
    r.ws.resize(nr);
    for (std::size_t i = 0; i < nr; ++i) {
        r.s[i] = (gl.nodes[i] + T(1)) / T(2);
        r.ws[i] = gl.weights[i] / T(2);
    }
    return r;
}

struct AreaSums {
    cplx value;
    double scale = 0.0;
};

// Visits every node z of the pulled-back polar rule with its area weight.
template <class Visit>
void for_each_area_node(const LemniscateParams& p, std::size_t nr, std::size_t na, Visit&& visit) {
    const auto rule = polar_rule<double>(nr, na);
    const double rho = p.rho();
    const double dphi = 2.0 * M_PI / double(na);
    std::vector<cplx> omega(std::size_t(p.m));
    for (int j = 0; j < p.m; ++j) omega[std::size_t(j)] = std::polar(1.0, 2.0 * M_PI * j / p.m);
    for (std::size_t i = 0; i < nr; ++i) {
        const double s = rule.s[i];
        for (std::size_t a = 0; a < na; ++a) {
            const cplx w = std::polar(s, dphi * double(a));
            const cplx base = 1.0 + rho * w;
            const double jac = rho * rho / double(p.m * p.m) * std::pow(std::abs(base), 2.0 / p.m - 2.0);
            const double wt = rule.ws[i] * s * dphi * jac;
            const cplx root = std::pow(base, 1.0 / p.m);
            for (int j = 0; j < p.m; ++j) visit(omega[std::size_t(j)] * root, wt);
        }
    }
}

AreaSums area_sum(const std::function<cplx(cplx)>& f, const LemniscateParams& p, std::size_t nr,
                  std::size_t na) {
    CompensatedSum<cplx> sum;
    CompensatedSum<double> scale;
    for_each_area_node(p, nr, na, [&](cplx z, double wt) {
        const cplx v = f(z);
        sum.add(wt * v);
        scale.add(wt * std::abs(v));
    });
    return {sum.value(), scale.value()};
}

// G_{kl} = (rho^2/m) int w^k conj(w)^l |1 + rho w|^{-v} dA(w). The weight is
// even in arg w, so only cosine moments of the angular factor are needed.
std::vector<std::vector<xreal>> gram_polar(double v, std::size_t K, const LemniscateParams& p,
                                           std::size_t nr, std::size_t na) {
    using std::cos;
    using std::pow;
    const auto rule = polar_rule<xreal>(nr, na);
    const xreal rho(p.rho()), two_pi = 2 * pi_v<xreal>();
    const xreal dphi = two_pi / xreal(double(na));
    std::vector<xreal> cosine(na);
    for (std::size_t a = 0; a < na; ++a) cosine[a] = cos(dphi * xreal(double(a)));
    const std::size_t half = na / 2;  // na is even

    std::vector<std::vector<xreal>> G(K + 1, std::vector<xreal>(K + 1, xreal(0)));
    std::vector<xreal> W(half + 1), f(K + 1), spow(2 * K + 2);
    for (std::size_t i = 0; i < nr; ++i) {
        const xreal s = rule.s[i];
        for (std::size_t a = 0; a <= half; ++a) {
            const xreal mod2 = 1 + 2 * rho * s * cosine[a] + rho * rho * s * s;
            const xreal wt = (a == 0 || a == half) ? xreal(1) : xreal(2);
            W[a] = v == 0.0 ? wt : wt * pow(mod2, xreal(-v / 2.0));
        }
        for (std::size_t d = 0; d <= K; ++d) {
            xreal acc = 0;
            for (std::size_t a = 0; a <= half; ++a) acc += W[a] * cosine[(d * a) % na];
            f[d] = acc * dphi;
        }
        spow[0] = s;
        for (std::size_t e = 1; e < spow.size(); ++e) spow[e] = spow[e - 1] * s;
        for (std::size_t k = 0; k <= K; ++k)
            for (std::size_t l = k; l <= K; ++l) G[k][l] += rule.ws[i] * spow[k + l] * f[l - k];
    }
    const xreal pref = rho * rho / xreal(double(p.m));
    for (std::size_t k = 0; k <= K; ++k)
        for (std::size_t l = k; l <= K; ++l) {
            G[k][l] *= pref;
            G[l][k] = G[k][l];
        }
    return G;
}

template <class T>
struct ClassOrtho {
    std::vector<std::vector<T>> Q;  // monic rows in w
    std::vector<T> N;               // reduced squared norms
    double residual = 0.0;
};

// Cholesky G = L L^T; the rows of L^{-1} are the orthogonal polynomials.
template <class T>
ClassOrtho<T> orthogonalize(const std::vector<std::vector<xreal>>& Gx) {
    using std::abs;
    using std::sqrt;
    const std::size_t n = Gx.size();
    std::vector<std::vector<T>> L(n, std::vector<T>(n, T(0)));
    for (std::size_t j = 0; j < n; ++j) {
        T d = T(Gx[j][j]);
        for (std::size_t k = 0; k < j; ++k) d -= L[j][k] * L[j][k];
        if (!(d > T(0))) throw IndefiniteMatrixError("lemniscate Gram: nonpositive pivot at " + std::to_string(j));
        L[j][j] = sqrt(d);
        for (std::size_t i = j + 1; i < n; ++i) {
            T x = T(Gx[i][j]);
            for (std::size_t k = 0; k < j; ++k) x -= L[i][k] * L[j][k];
            L[i][j] = x / L[j][j];
        }
    }
    ClassOrtho<T> out;
    out.Q.resize(n);
    out.N.resize(n);
    // Row i of L^{-1} by forward substitution, then scaled to be monic.
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<T> row(i + 1, T(0));
        row[i] = T(1) / L[i][i];
        for (std::size_t c = i; c-- > 0;) {
            T x = T(0);
            for (std::size_t k = c + 1; k <= i; ++k) x -= row[k] * L[k][c];
            row[c] = x / L[c][c];
        }
        for (auto& x : row) x *= L[i][i];
        out.Q[i] = std::move(row);
        out.N[i] = L[i][i] * L[i][i];
    }
    // Orthogonality residual q_i^T G q_j / sqrt(N_i N_j), i != j.
    double worst = 0.0;
    std::vector<std::vector<T>> GQ(n, std::vector<T>(n, T(0)));
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t r = 0; r < n; ++r) {
            T x = T(0);
            for (std::size_t c = 0; c <= j; ++c) x += T(Gx[r][c]) * out.Q[j][c];
            GQ[j][r] = x;
        }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) {
            T x = T(0);
            for (std::size_t r = 0; r <= i; ++r) x += out.Q[i][r] * GQ[j][r];
            worst = std::max(worst, double(abs(x) / sqrt(out.N[i] * out.N[j])));
        }
    out.residual = worst;
    return out;
}

xreal quadratic_form(const std::vector<xreal>& q, const std::vector<std::vector<xreal>>& G) {
    CompensatedSum<xreal> s;
    for (std::size_t i = 0; i < q.size(); ++i)
        for (std::size_t j = 0; j < q.size(); ++j) s.add(q[i] * G[i][j] * q[j]);
    return s.value();
}

std::size_t class_size(std::size_t max_degree, int s, int m) {
    if (std::size_t(s) > max_degree) return 0;
    return (max_degree - std::size_t(s)) / std::size_t(m) + 1;
}

template <class T>
cplx horner(const std::vector<T>& c, cplx x) {
    cplx v = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) v = v * x + double(c[i]);
    return v;
}

LemniscateBasis empty_basis(std::size_t max_degree, const LemniscateParams& p) {
    LemniscateBasis b;
    b.params = p;
    b.max_degree = max_degree;
    b.wcoef.resize(max_degree + 1);
    b.reduced_norm.resize(max_degree + 1);
    return b;
}

}  // namespace

AreaResult area_quadrature(const std::function<cplx(cplx)>& f, const LemniscateParams& p,
                           const AreaResolution& res) {
    p.validate();
    std::size_t nr = res.radial, na = res.angular;
    AreaSums coarse = area_sum(f, p, nr, na);
    for (int d = 0; d < std::max(1, res.max_doublings); ++d) {
        nr *= 2;
        na *= 2;
        const AreaSums fine = area_sum(f, p, nr, na);
        const double err = std::abs(fine.value - coarse.value);
        if (err <= res.tol * std::max(std::abs(fine.value), fine.scale))
            return {fine.value, err, AreaResolution{nr, na, res.tol, res.max_doublings}};
        coarse = fine;
    }
    throw NonconvergenceError("area_quadrature: refinement budget exhausted");
}

ClassGram adapted_gram(int s, std::size_t K, const LemniscateParams& p, const AreaResolution& res) {
    p.validate();
    const double v = p.class_exponent(s);
    std::size_t nr = std::max(res.radial, K + 64);
    std::size_t na = std::max(res.angular, 4 * K + 64);
    na += na % 2;
    auto coarse = gram_polar(v, K, p, nr, na);
    for (int d = 0; d < std::max(1, res.max_doublings); ++d) {
        nr *= 2;
        na *= 2;
        auto fine = gram_polar(v, K, p, nr, na);
        double err = 0.0;
        for (std::size_t k = 0; k <= K; ++k)
            for (std::size_t l = 0; l <= K; ++l) {
                const xreal scale = sqrt(fine[k][k] * fine[l][l]);
                err = std::max(err, double(abs(fine[k][l] - coarse[k][l]) / scale));
            }
        if (err <= res.tol) return {s, std::move(fine), err};
        coarse = std::move(fine);
    }
    throw NonconvergenceError("adapted_gram: refinement budget exhausted");
}

ClassGram adapted_gram_series(int s, std::size_t K, const LemniscateParams& p) {
    p.validate();
    const double v = p.class_exponent(s);
    const xreal rho(p.rho());
    const std::size_t J = std::size_t(std::ceil(-40.0 * std::log(10.0) / std::log(p.rho()))) + 16;
    std::vector<xreal> beta(J + K + 1);
    beta[0] = 1;
    for (std::size_t j = 0; j + 1 < beta.size(); ++j)
        beta[j + 1] = beta[j] * (xreal(-v / 2.0) - xreal(double(j))) / xreal(double(j + 1)) * rho;
    ClassGram out{s, std::vector<std::vector<xreal>>(K + 1, std::vector<xreal>(K + 1)), 0.0};
    const xreal pref = pi_v<xreal>() * rho * rho / xreal(double(p.m));
    for (std::size_t k = 0; k <= K; ++k)
        for (std::size_t l = 0; l <= K; ++l) {
            CompensatedSum<xreal> acc;
            // w^{k+j} conj(w)^{l+j'} integrates to pi/(k+j+1) when k + j = l + j'.
            for (std::size_t jp = (k > l ? k - l : 0); jp <= J; ++jp) {
                const std::size_t j = l + jp - k;
                if (j >= beta.size()) break;
                acc.add(beta[j] * beta[jp] / xreal(double(k + j + 1)));
            }
            out.G[k][l] = pref * acc.value();
        }
    return out;
}

double LemniscateBasis::norm_sq(std::size_t n) const {
    return std::pow(params.rho(), 2.0 * double(block(n))) * reduced_norm.at(n);
}

cplx LemniscateBasis::eval(std::size_t n, cplx z) const {
    const cplx w = (std::pow(z, params.m) - 1.0) / params.rho();
    return std::pow(z, residue(n)) * std::pow(params.rho(), double(block(n))) * horner(wcoef.at(n), w);
}

std::vector<cplx> LemniscateBasis::monomial_coefficients(std::size_t n) const {
    const auto& q = wcoef.at(n);
    const std::size_t k = block(n), s = std::size_t(residue(n)), m = std::size_t(params.m);
    const xreal rho(params.rho());
    std::vector<cplx> out(n + 1, 0.0);
    // z^s sum_i q_i rho^{k-i} (z^m - 1)^i
    for (std::size_t j = 0; j <= k; ++j) {
        CompensatedSum<xreal> acc;
        xreal binom = 1;  // C(i, j), starting at i = j
        for (std::size_t i = j; i <= k; ++i) {
            if (i > j) binom = binom * xreal(double(i)) / xreal(double(i - j));
            const xreal sign = ((i - j) % 2) ? xreal(-1) : xreal(1);
            acc.add(sign * binom * xreal(q[i]) * pow(rho, int(k - i)));
        }
        out[s + m * j] = double(acc.value());
    }
    return out;
}

LemniscateBasis gram_schmidt_oracle(std::size_t max_degree, const LemniscateParams& p, Precision prec,
                                    const AreaResolution& res) {
    p.validate();
    LemniscateBasis basis = empty_basis(max_degree, p);
    basis.source = LemniscateBasis::Source::oracle;
    basis.prop72_threshold = std::numeric_limits<std::size_t>::max();
    const std::size_t m = std::size_t(p.m);
    for (int s = 0; s < p.m; ++s) {
        const std::size_t n_k = class_size(max_degree, s, p.m);
        if (n_k == 0) continue;
        const auto G = adapted_gram(s, n_k - 1, p, res);
        auto fill = [&](const auto& ortho) {
            for (std::size_t k = 0; k < n_k; ++k) {
                const std::size_t n = k * m + std::size_t(s);
                basis.wcoef[n].assign(k + 1, 0.0);
                for (std::size_t i = 0; i <= k; ++i) basis.wcoef[n][i] = double(ortho.Q[k][i]);
                basis.reduced_norm[n] = double(ortho.N[k]);
            }
            basis.orthogonality_residual = std::max(basis.orthogonality_residual, ortho.residual);
        };
        if (prec == Precision::extended)
            fill(orthogonalize<xreal>(G.G));
        else
            fill(orthogonalize<double>(G.G));
    }
    return basis;
}

MonomialBasis gram_schmidt_monomial(std::size_t N, const LemniscateParams& p, const AreaResolution& res) {
    p.validate();
    using Mat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic>;
    const std::size_t d = N + 1;
    auto gram_at = [&](std::size_t nr, std::size_t na) {
        Mat G = Mat::Zero(d, d);
        std::vector<cplx> zp(d);
        for_each_area_node(p, nr, na, [&](cplx z, double wt) {
            zp[0] = 1.0;
            for (std::size_t i = 1; i < d; ++i) zp[i] = zp[i - 1] * z;
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j) G(i, j) += wt * zp[i] * std::conj(zp[j]);
        });
        return G;
    };
    const Mat Gc = gram_at(res.radial, res.angular);
    const Mat G = gram_at(2 * res.radial, 2 * res.angular);
    if ((Gc - G).cwiseAbs().maxCoeff() > res.tol * G.cwiseAbs().maxCoeff())
        throw NonconvergenceError("gram_schmidt_monomial: quadrature not converged");
    // <z^i, z^j> = G(i, j); the Hermitian form used below is G^T.
    Mat A = G.transpose();
    Eigen::LLT<Mat> llt(A);
    if (llt.info() != Eigen::Success) throw IndefiniteMatrixError("gram_schmidt_monomial: Gram not positive definite");
    const Mat L = llt.matrixL();
    const Mat Linv = L.triangularView<Eigen::Lower>().solve(Mat::Identity(d, d));
    MonomialBasis out;
    out.coef.resize(d);
    out.norm_sq.resize(d);
    for (std::size_t n = 0; n < d; ++n) {
        out.coef[n].resize(n + 1);
        for (std::size_t j = 0; j <= n; ++j) out.coef[n][j] = std::conj(Linv(n, j) / Linv(n, n));
        out.norm_sq[n] = std::norm(L(n, n));
    }
    return out;
}

Prop72Bank Prop72Bank::build(std::size_t max_k, const LemniscateParams& p) {
    p.validate();
    Prop72Bank bank;
    bank.params = p;
    bank.max_k = max_k;
    for (int s = 0; s + 1 < p.m; ++s) {
        const auto moms = gamma_q_moments(max_k + 1, p.class_exponent(s), p);
        bank.circle.push_back(monic_from_moments(moms, max_k + 1));
    }
    return bank;
}

std::vector<xreal> Prop72Bank::wpoly(std::size_t k, int s) const {
    if (k > max_k) throw std::out_of_range("Prop72Bank::wpoly: k beyond the bank");
    std::vector<xreal> q(k + 1, xreal(0));
    if (s == params.m - 1) {
        q[k] = 1;
        return q;
    }
    const auto& mon = circle.at(std::size_t(s)).monic;
    const xreal rho(params.rho());
    auto at_minus_rho = [&](const std::vector<xcplx>& c) {
        xreal v = 0;
        for (std::size_t i = c.size(); i-- > 0;) v = v * (-rho) + c[i].real();
        return v;
    };
    const xreal R = at_minus_rho(mon[k + 1]) / at_minus_rho(mon[k]);
    std::vector<xreal> P(k + 2);
    for (std::size_t i = 0; i <= k + 1; ++i)
        P[i] = mon[k + 1][i].real() - (i <= k ? R * mon[k][i].real() : xreal(0));
    // P = (w + rho) Q, so p_i = q_{i-1} + rho q_i.
    q[k] = P[k + 1];
    for (std::size_t i = k; i >= 1; --i) q[i - 1] = P[i] - rho * q[i];
    return q;
}

cplx prop72_phi(std::size_t n, cplx z, const Prop72Bank& bank, std::size_t threshold) {
    const auto& p = bank.params;
    const std::size_t m = std::size_t(p.m), k = n / m;
    const int s = int(n % m);
    const cplx zm = std::pow(z, p.m);
    if (s == p.m - 1) return std::pow(z, p.m - 1) * std::pow(zm - 1.0, double(k));
    if (k < threshold) throw BelowThresholdError("prop72_phi: degree below the validated threshold");
    if (k > bank.max_k) throw std::out_of_range("prop72_phi: degree beyond the bank");

    const double rho = p.rho();
    const auto& mon = bank.circle.at(std::size_t(s)).monic;
    const xreal R = [&] {
        auto at = [&](const std::vector<xcplx>& c) {
            xreal v = 0;
            for (std::size_t i = c.size(); i-- > 0;) v = v * xreal(-rho) + c[i].real();
            return v;
        };
        return at(mon[k + 1]) / at(mon[k]);
    }();
    std::vector<double> P(k + 2);
    for (std::size_t i = 0; i <= k + 1; ++i)
        P[i] = double(mon[k + 1][i].real() - (i <= k ? R * mon[k][i].real() : xreal(0)));

    const cplx denom = zm - 1.0 + rho * rho;
    const cplx w = (zm - 1.0) / rho;
    if (std::abs(denom) >= 1e-8)
        return std::pow(z, s) * std::pow(rho, double(k + 1)) * horner(P, w) / denom;

    // P(-rho) = 0: expand P(w)/(w + rho) in u = w + rho using derivatives at -rho.
    std::vector<double> d(5, 0.0);  // P^{(j)}(-rho) / j!
    std::vector<double> c = P;
    for (std::size_t j = 0; j < d.size() && !c.empty(); ++j) {
        double v = 0.0;
        for (std::size_t i = c.size(); i-- > 0;) v = v * (-rho) + c[i];
        d[j] = v;
        // synthetic division by (w + rho) shifts to the next Taylor coefficient
        std::vector<double> nc(c.size() > 1 ? c.size() - 1 : 0);
        double carry = 0.0;
        for (std::size_t i = c.size(); i-- > 1;) {
            carry = c[i] + carry * (-rho);
            nc[i - 1] = carry;
        }
        c = std::move(nc);
    }
    const cplx u = denom / rho;
    const cplx local = d[1] + u * (d[2] + u * (d[3] + u * d[4]));
    return std::pow(z, s) * std::pow(rho, double(k)) * local;
}

std::size_t find_prop72_threshold(const Prop72Bank& bank, const LemniscateBasis& oracle, double tol) {
    const auto& p = bank.params;
    if (p.m == 1) return 0;
    const std::size_t m = std::size_t(p.m);
    std::size_t top = bank.max_k;
    for (int s = 0; s + 1 < p.m; ++s) top = std::min(top, class_size(oracle.max_degree, s, p.m) - 1);
    std::size_t threshold = top + 1;
    for (std::size_t k = top + 1; k-- > 0;) {
        bool ok = true;
        for (int s = 0; s + 1 < p.m && ok; ++s) {
            const auto q = bank.wpoly(k, s);
            const auto& o = oracle.wcoef[k * m + std::size_t(s)];
            for (std::size_t i = 0; i <= k; ++i)
                if (std::abs(double(q[i]) - o[i]) > tol) ok = false;
        }
        if (!ok) break;
        threshold = k;
    }
    return threshold;
}

LemniscateBasis build_mu0_basis(std::size_t max_degree, const LemniscateParams& p, const AreaResolution& res) {
    p.validate();
    const std::size_t m = std::size_t(p.m);
    LemniscateBasis oracle = empty_basis(max_degree, p);
    LemniscateBasis basis = empty_basis(max_degree, p);
    basis.source = LemniscateBasis::Source::prop72;

    std::vector<std::vector<std::vector<xreal>>> grams(m);
    for (int s = 0; s < p.m; ++s) {
        const std::size_t n_k = class_size(max_degree, s, p.m);
        if (n_k == 0) continue;
        grams[std::size_t(s)] = adapted_gram(s, n_k - 1, p, res).G;
        const auto ortho = orthogonalize<xreal>(grams[std::size_t(s)]);
        for (std::size_t k = 0; k < n_k; ++k) {
            const std::size_t n = k * m + std::size_t(s);
            oracle.wcoef[n].resize(k + 1);
            for (std::size_t i = 0; i <= k; ++i) oracle.wcoef[n][i] = double(ortho.Q[k][i]);
            oracle.reduced_norm[n] = double(ortho.N[k]);
        }
        basis.orthogonality_residual = std::max(basis.orthogonality_residual, ortho.residual);
    }

    const std::size_t max_k = max_degree / m;
    const Prop72Bank bank = Prop72Bank::build(max_k, p);
    basis.prop72_threshold = find_prop72_threshold(bank, oracle);

    for (std::size_t n = 0; n <= max_degree; ++n) {
        const std::size_t k = n / m;
        const int s = int(n % m);
        if (k < basis.prop72_threshold && s + 1 < p.m) {
            basis.wcoef[n] = oracle.wcoef[n];
            basis.reduced_norm[n] = oracle.reduced_norm[n];
            continue;
        }
        const auto q = bank.wpoly(k, s);
        basis.wcoef[n].resize(k + 1);
        for (std::size_t i = 0; i <= k; ++i) basis.wcoef[n][i] = double(q[i]);
        basis.reduced_norm[n] = double(quadratic_form(q, grams[std::size_t(s)]));
    }
    return basis;
}

KernelEvaluation mu0_kernel(std::size_t n, cplx z, cplx w, const LemniscateBasis& basis) {
    if (n > basis.max_degree) throw std::out_of_range("mu0_kernel: n exceeds the basis degree");
    const auto& p = basis.params;
    const double rho = p.rho();
    const cplx wz = (std::pow(z, p.m) - 1.0) / rho, ww = (std::pow(w, p.m) - 1.0) / rho;
    std::vector<cplx> zs(std::size_t(p.m)), ws(std::size_t(p.m));
    for (int s = 0; s < p.m; ++s) {
        zs[std::size_t(s)] = std::pow(z, s);
        ws[std::size_t(s)] = std::pow(w, s);
    }
    // |Phi_d|^2 / ||Phi_d||^2: the rho^{2k} factors cancel.
    CompensatedSum<cplx> sum;
    for (std::size_t d = 0; d <= n; ++d) {
        const std::size_t s = std::size_t(basis.residue(d));
        const auto& q = basis.wcoef[d];
        sum.add(zs[s] * std::conj(ws[s]) * horner(q, wz) * std::conj(horner(q, ww)) / basis.reduced_norm[d]);
    }
    return {n, z, w, sum.value(), "mu0-area", 53};
}

KappaEstimate kappa_asymptotic(std::size_t n, const LemniscateParams& p) {
    p.validate();
    const std::size_t m = std::size_t(p.m), k = n / m, s = n % m;
    const double denom = M_PI * std::pow(p.rho(), 2.0 * double(k) + 2.0);
    if (s == m - 1) return {double(m * k + m) / denom, KappaEstimate::Kind::exact};
    if (k == 0) throw DomainError("kappa_asymptotic: need n >= m off the exact classes");
    const double v = p.class_exponent(int(s));
    return {double(m * k + 1 + s) * (1.0 + v / (2.0 * double(k))) / denom, KappaEstimate::Kind::asymptotic};
}

cplx H_series(cplx t) {
    // sum_k 2 t^k / ((k+2) k!)
    cplx term = 1.0, sum = 0.0;
    for (int k = 0; k < 80; ++k) {
        if (k > 0) term *= t / double(k);
        const cplx add = 2.0 * term / double(k + 2);
        sum += add;
        if (std::abs(add) <= 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

cplx H_func(cplx t) {
    if (std::abs(t) < 1e-3) return H_series(t);
    return 2.0 * (t * std::exp(t) - expm1_complex(t)) / (t * t);
}

cplx limit_A(cplx a, cplx b, const BoundaryPoint& bp, const LemniscateParams& p) {
    const cplx zp = std::pow(bp.z0, p.m - 1);
    return (std::conj(bp.w0) * a * zp + bp.w0 * std::conj(b) * std::conj(zp)) / p.rho();
}

}  // namespace polykern
