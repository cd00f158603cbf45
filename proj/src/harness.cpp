#include "polykern/harness.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <locale>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

#include "polykern/hyperfun.hpp"

namespace polykern {

namespace {

const cplx I(0.0, 1.0);

std::size_t max_n(const StudyConfig& cfg) { return cfg.n_list.back(); }

VerblunskyCoefficients engine_basis(const StudyConfig& cfg, std::size_t n) {
    const Precision prec = precision_from_bits(cfg.precision_bits);
    QuadratureConfig qc;
    qc.precision = prec;
    const auto moms = trig_moments(cfg.circle_weight(), n, qc);
    return monic_from_moments(moms, n, prec).vc;
}

std::vector<cplx> distinct_a(const std::vector<GridPoint>& grid) {
    std::vector<cplx> out;
    for (const auto& g : grid)
        if (std::find(out.begin(), out.end(), g.a) == out.end()) out.push_back(g.a);
    return out;
}

}  // namespace

std::vector<ConvergenceRow> run_circle_study(const StudyConfig& cfg) {
    cfg.validate();
    if (cfg.setting == Setting::lemniscate) throw std::invalid_argument("run_circle_study: lemniscate config");
    const auto p = cfg.hp();
    const bool model = cfg.setting == Setting::circle_model;
    VerblunskyCoefficients vc;
    if (!model) vc = engine_basis(cfg, max_n(cfg));
    auto kernel = [&](std::size_t n, cplx z, cplx w) {
        return model ? hp_kernel(n, z, w, p).value : kernel_direct(vc, n, z, w).value;
    };

    std::vector<cplx> limits;
    for (const auto& g : cfg.grid) limits.push_back(limit_kernel(g.a, g.b, p).value);

    std::vector<ConvergenceRow> rows;
    for (std::size_t n : cfg.n_list) {
        const cplx k11 = kernel(n, 1.0, 1.0);
        for (std::size_t i = 0; i < cfg.grid.size(); ++i) {
            const auto& g = cfg.grid[i];
            const cplx z = std::exp(I * g.a / double(n)), w = std::exp(I * g.b / double(n));
            const cplx ratio = kernel(n, z, w) / k11;
            rows.push_back({n, g.a, g.b, ratio, limits[i], std::abs(ratio - limits[i])});
        }
    }
    return rows;
}

std::vector<ConvergenceRow> run_lemniscate_study(const StudyConfig& cfg) {
    cfg.validate();
    return run_lemniscate_study(cfg, build_mu0_basis(max_n(cfg), cfg.lemniscate()));
}

std::vector<ConvergenceRow> run_lemniscate_study(const StudyConfig& cfg, const LemniscateBasis& basis) {
    cfg.validate();
    if (cfg.setting != Setting::lemniscate) throw std::invalid_argument("run_lemniscate_study: circle config");
    if (basis.max_degree < max_n(cfg)) throw std::invalid_argument("run_lemniscate_study: basis degree too small");
    const auto p = cfg.lemniscate();
    const auto bp = boundary_point(cfg.t, cfg.j, p);
    std::vector<ConvergenceRow> rows;
    for (std::size_t n : cfg.n_list) {
        // A constant density cancels in the ratio.
        const cplx k00 = mu0_kernel(n, bp.z0, bp.z0, basis).value;
        for (const auto& g : cfg.grid) {
            const cplx ratio =
                mu0_kernel(n, bp.z0 + g.a / double(n), bp.z0 + g.b / double(n), basis).value / k00;
            const cplx limit = H_func(limit_A(g.a, g.b, bp, p));
            rows.push_back({n, g.a, g.b, ratio, limit, std::abs(ratio - limit)});
        }
    }
    return rows;
}

std::vector<std::pair<std::size_t, double>> max_error_by_n(const std::vector<ConvergenceRow>& rows) {
    std::vector<std::pair<std::size_t, double>> out;
    for (const auto& r : rows) {
        if (out.empty() || out.back().first != r.n) out.emplace_back(r.n, 0.0);
        out.back().second = std::max(out.back().second, r.abs_err);
    }
    return out;
}

std::vector<ChristoffelRow> run_christoffel_study(const StudyConfig& cfg) {
    cfg.validate();
    if (cfg.setting == Setting::lemniscate)
        return run_christoffel_study(cfg, build_mu0_basis(max_n(cfg), cfg.lemniscate()));

    const auto p = cfg.hp();
    const bool model = cfg.setting == Setting::circle_model;
    const double g0 = cfg.circle_weight().g.at_zero();
    VerblunskyCoefficients vc;
    if (!model) vc = engine_basis(cfg, max_n(cfg));
    std::vector<ChristoffelRow> rows;
    const auto as = distinct_a(cfg.grid);
    for (std::size_t n : cfg.n_list) {
        const double scale = std::pow(double(n), 2.0 * p.gamma + 1.0);
        for (const auto& a : as) {
            const cplx z = std::exp(I * a / double(n));
            const double lambda = model ? 1.0 / hp_kernel(n, z, z, p).value.real() : christoffel(vc, n, z);
            rows.push_back({n, a, scale * lambda, g0 * model_christoffel_limit(a, p)});
        }
    }
    return rows;
}

std::vector<ChristoffelRow> run_christoffel_study(const StudyConfig& cfg, const LemniscateBasis& basis) {
    cfg.validate();
    if (cfg.setting != Setting::lemniscate) throw std::invalid_argument("run_christoffel_study: circle config");
    const auto p = cfg.lemniscate();
    const auto bp = boundary_point(cfg.t, cfg.j, p);
    const double target = 2.0 * M_PI * cfg.density * p.rho() * p.rho() / std::pow(std::abs(bp.z0), 2.0 * p.m - 2.0);
    std::vector<ChristoffelRow> rows;
    for (std::size_t n : cfg.n_list) {
        // lambda_n for density * area is density / K_n(area).
        const double lambda = cfg.density / mu0_kernel(n, bp.z0, bp.z0, basis).value.real();
        rows.push_back({n, 0.0, double(n) * double(n) * lambda, target});
    }
    return rows;
}

namespace {

std::ostream& fixed17(std::ostream& out) {
    out.imbue(std::locale::classic());
    return out << std::setprecision(17);
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<ConvergenceRow>& rows) {
    fixed17(out) << "n,re_a,im_a,re_b,im_b,re_ratio,im_ratio,re_limit,im_limit,abs_err\n";
    for (const auto& r : rows)
        out << r.n << ',' << r.a.real() << ',' << r.a.imag() << ',' << r.b.real() << ',' << r.b.imag() << ','
            << r.ratio.real() << ',' << r.ratio.imag() << ',' << r.limit.real() << ',' << r.limit.imag() << ','
            << r.abs_err << '\n';
}

void write_christoffel_csv(std::ostream& out, const std::vector<ChristoffelRow>& rows) {
    fixed17(out) << "n,re_a,im_a,scaled,target,rel_dev\n";
    for (const auto& r : rows)
        out << r.n << ',' << r.a.real() << ',' << r.a.imag() << ',' << r.scaled << ',' << r.target << ','
            << (r.scaled / r.target - 1.0) << '\n';
}

// ---------------------------------------------------------------------------
// Property suites

namespace {

const std::vector<HuaPickrellParams> kParamSweep{{-0.3, 0.0}, {0.0, 0.0}, {1.0, 0.0}, {2.5, 0.0},
                                                  {1.0, 0.5}, {-0.3, 0.7}, {0.5, 0.7}};

std::string fmt(double x) {
    std::ostringstream os;
    os << std::setprecision(3) << x;
    return os.str();
}

SuiteResult tolerance_suite(std::string name, double worst, double tol, std::string what) {
    return {std::move(name), worst <= tol, tol - worst, what + " worst " + fmt(worst) + " (tol " + fmt(tol) + ")"};
}

// The binary64 evaluation (whatever path it takes) against the transformed
// side summed directly in extended precision.
SuiteResult suite_kummer() {
    const std::vector<cplx> xs{0.3, {1.0, 0.5}, {-1.7, 0.2}, 2.5, {0.5, -0.7}};
    const std::vector<cplx> ys{1.2, 3.0, 0.4, 6.0};
    SeriesOptions direct;
    direct.allow_kummer = false;
    double worst = 0.0;
    for (const auto& x : xs)
        for (const auto& y : ys)
            for (double rad : {0.5, 2.0, 5.0, 7.5, 12.0})
                for (int k = 0; k < 8; ++k) {
                    const cplx z = std::polar(rad, 2.0 * M_PI * k / 8 + 0.1);
                    const cplx f = hyp1f1(x, y, z);
                    const xcplx zx = widen<xreal>(z);
                    const xcplx g = exp(zx) * hyp1f1<xreal>(widen<xreal>(y - x), widen<xreal>(y), -zx, direct).value;
                    worst = std::max(worst, std::abs(f - to_double(g)) / std::max(1.0, std::abs(f)));
                }
    return tolerance_suite("kummer", worst, 1e-10, "|1F1(x;y;z) - e^z 1F1(y-x;y;-z)|");
}

SuiteResult suite_conjugation() {
    double worst = 0.0;
    for (double s : {0.3, 1.5, -0.4})
        for (double t : {1.2, 2.0, 4.5})
            for (int k = 0; k < 12; ++k) {
                const cplx z = std::polar(0.5 + 0.5 * k, 0.7 * k);
                const cplx f = hyp1f1(cplx(s), cplx(t), z), g = hyp1f1(cplx(s), cplx(t), std::conj(z));
                worst = std::max(worst, std::abs(std::conj(f) - g) / std::max(1.0, std::abs(f)));
            }
    const auto grid = default_grid();
    for (const auto& p : kParamSweep) {
        worst = std::max(worst, std::abs(limit_kernel(0.0, 0.0, p).value - 1.0));
        for (const auto& g : grid) {
            const cplx ab = limit_kernel(g.a, g.b, p).value, ba = limit_kernel(g.b, g.a, p).value;
            worst = std::max(worst, std::abs(ab - std::conj(ba)) / std::max(1.0, std::abs(ab)));
        }
    }
    return tolerance_suite("conjugation", worst, 1e-12, "conjugation and kernel hermiticity");
}

SuiteResult suite_T_positive() {
    double worst = std::numeric_limits<double>::infinity();
    std::string where;
    for (double g : {-0.3, 0.0, 1.0, 2.5})
        for (int i = 0; i <= 160; ++i) {
            const double a = -20.0 + 0.25 * i, T = T_func(a, g);
            if (T < worst) {
                worst = T;
                where = "gamma=" + fmt(g) + " a=" + fmt(a);
            }
        }
    return {"T_positive", worst > 0, worst, "min T(a) = " + fmt(worst) + " at " + where};
}

SuiteResult suite_lemma_1f1() {
    double worst = std::numeric_limits<double>::infinity();
    for (double g : {-0.3, 0.0, 0.5, 1.0, 2.5})
        for (double im : {-3.0, -1.0, -0.1, 0.1, 1.0, 3.0})
            for (int i = 0; i <= 40; ++i) worst = std::min(worst, lemma_1f1_quotient({-10.0 + 0.5 * i, im}, g));
    return {"lemma_1f1", worst > 0, worst, "min quotient = " + fmt(worst)};
}

SuiteResult suite_theta_modulus() {
    double dev = 0.0, inside = std::numeric_limits<double>::infinity();
    for (double g : {-0.3, 0.0, 0.5, 1.0, 2.5}) {
        for (int i = 0; i <= 40; ++i) dev = std::max(dev, std::abs(std::abs(theta_ratio(-10.0 + 0.5 * i, g)) - 1.0));
        for (double im : {0.1, 1.0, 3.0})
            for (int i = 0; i <= 20; ++i)
                inside = std::min(inside, 1.0 - std::abs(theta_ratio({-10.0 + i, im}, g)));
    }
    const double margin = std::min(1e-10 - dev, inside);
    return {"theta_modulus", dev <= 1e-10 && inside > 0, margin,
            "max ||Theta|-1| on R = " + fmt(dev) + ", min 1-|Theta| for Im a>0 = " + fmt(inside)};
}

SuiteResult suite_hb_margin() {
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& p : kParamSweep)
        for (double im : {0.05, 0.5, 1.0, 3.0})
            for (int i = 0; i <= 20; ++i) worst = std::min(worst, hb_margin({-10.0 + i, im}, p));
    return {"hb_margin", worst >= -1e-10, worst + 1e-10, "min |E(z)|-|E(conj z)| = " + fmt(worst)};
}

std::vector<cplx> compact_samples() {
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<cplx> out;
    for (const auto& g : default_grid()) out.push_back(g.a);
    while (out.size() < 40) {
        const cplx a(3.0 * u(rng), 3.0 * u(rng));
        if (std::abs(a) <= 3.0) out.push_back(a);
    }
    return out;
}

SuiteResult suite_fbound() {
    const auto as = compact_samples();
    double C = 0.0;
    for (const auto& a : as)
        for (std::size_t n = 1; n <= 100; ++n) C = std::max(C, double(n) * std::abs(std::exp(I * a / double(n)) - 1.0));
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& p : kParamSweep)
        for (std::size_t n : {5u, 20u, 50u, 100u})
            for (std::size_t m : {std::size_t(0), n / 4, n / 2, n})
                for (const auto& a : as) {
                    const auto [lhs, rhs] = fbound_sides(a, n, m, p, C);
                    worst = std::min(worst, (rhs - lhs) / rhs);
                }
    return {"fbound", worst >= 0, worst, "min relative slack = " + fmt(worst) + " with C_K = " + fmt(C)};
}

SuiteResult suite_lemma_or() {
    const auto as = compact_samples();
    const double C = lemma_or_constant(as, 200);
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& a : as)
        for (std::size_t n : {1u, 5u, 50u, 200u})
            for (double r : {0.01, 0.1, 1.0, 2.0})
                for (int k = 0; k < 16; ++k) {
                    const double th = 2.0 * M_PI * k / 16;
                    const cplx e = std::exp(I * a / double(n));
                    const double lhs = r * double(n) * std::log(std::abs((std::exp(I * th) + e) / (2.0 * e)));
                    worst = std::min(worst, C * r * std::abs(a) / 2.0 - lhs);
                }
    return {"lemma_or", worst >= -1e-12, worst, "min log-slack = " + fmt(worst) + " with C_K = " + fmt(C)};
}

cplx derform_closed(cplx z, std::size_t P) {
    const double q = double(P);
    return (1.0 - (q + 2.0) * std::pow(z, q + 1.0) + (q + 1.0) * std::pow(z, q + 2.0)) / ((1.0 - z) * (1.0 - z));
}

SuiteResult suite_derform() {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> rad(0.2, 1.5), ang(0.0, 2.0 * M_PI);
    double worst = 0.0;
    for (int trial = 0; trial < 40; ++trial) {
        const cplx z = std::polar(rad(rng), ang(rng));
        if (std::abs(z - 1.0) < 0.1) continue;
        for (std::size_t P : {1u, 10u, 50u, 200u}) {
            CompensatedSum<cplx> s;
            cplx zk = 1.0;
            for (std::size_t k = 0; k <= P; ++k, zk *= z) s.add(double(k + 1) * zk);
            worst = std::max(worst, std::abs(s.value() - derform_closed(z, P)) / std::abs(s.value()));
        }
    }
    // (2/L^2) sum_{k<L} (k+1)(1+z/L)^k -> H(z)
    double gap = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 12; ++k) {
        const cplx z = std::polar(0.5 + 0.25 * k, 0.9 * k);
        auto err = [&](std::size_t L) {
            CompensatedSum<cplx> s;
            cplx pk = 1.0;
            const cplx base = 1.0 + z / double(L);
            for (std::size_t j = 0; j < L; ++j, pk *= base) s.add(double(j + 1) * pk);
            return std::abs(2.0 * s.value() / double(L * L) - H_func(z));
        };
        gap = std::min(gap, err(50) - err(400));
    }
    return {"derform", worst <= 1e-10 && gap > 0, std::min(1e-10 - worst, gap),
            "closed-form rel err " + fmt(worst) + ", min err(50)-err(400) = " + fmt(gap)};
}

SuiteResult suite_zm_symmetry() {
    double worst = 0.0;
    for (int m : {2, 3}) {
        const LemniscateParams p{std::pow(0.6, 1.0 / m), m};
        const auto basis = build_mu0_basis(std::size_t(8 * m), p);
        const cplx omega = std::polar(1.0, 2.0 * M_PI / m);
        const auto bp = boundary_point(0.7, 0, p);
        const std::vector<std::pair<cplx, cplx>> pts{{bp.z0, bp.z0}, {bp.z0, 1.0}, {{1.1, 0.1}, {0.9, -0.2}}};
        for (std::size_t n : {std::size_t(5), std::size_t(8 * m)})
            for (const auto& [z, w] : pts) {
                const cplx k = mu0_kernel(n, z, w, basis).value, kr = mu0_kernel(n, omega * z, omega * w, basis).value;
                worst = std::max(worst, std::abs(k - kr) / std::abs(k));
            }
        AreaResolution res{64, 128, 1e-10, 3};
        for (int i = 0; i <= 4; ++i)
            for (int j = 0; j < i; ++j) {
                if ((i - j) % m == 0) continue;
                auto f = [i, j](cplx z) { return std::pow(z, i) * std::conj(std::pow(z, j)); };
                const double gij = std::abs(area_quadrature(f, p, res).value);
                const double gii = area_quadrature([i](cplx z) { return cplx(std::norm(std::pow(z, i))); }, p, res).value.real();
                const double gjj = area_quadrature([j](cplx z) { return cplx(std::norm(std::pow(z, j))); }, p, res).value.real();
                worst = std::max(worst, gij / std::sqrt(gii * gjj));
            }
    }
    return tolerance_suite("zm_symmetry", worst, 1e-10, "rotation invariance and cross-class Gram");
}

SuiteResult suite_oracle_equivalence() {
    double worst = 0.0;
    for (const auto& p : std::vector<HuaPickrellParams>{{1.0, 0.5}, {-0.3, 0.7}, {2.5, 0.0}}) {
        const std::size_t N = 20;
        const auto moms = trig_moments(p.weight(), N);
        const auto basis = monic_from_moments(moms, N);
        for (std::size_t n = 0; n <= N; ++n) {
            const auto cf = hp_monic_coefficients(n, p);
            for (std::size_t j = 0; j <= n; ++j)
                worst = std::max(worst, double(abs(cf[j] - basis.monic[n][j])));
        }
        for (std::size_t k = 0; k < N; ++k) worst = std::max(worst, double(abs(basis.vc.alpha[k] - hp_verblunsky(k, p))));
        for (std::size_t n : {5u, 20u})
            for (cplx z : {cplx(1.0), std::polar(1.0, 0.3), cplx(0.2, 0.5)}) {
                const double a = christoffel(basis.vc, n, z), b = christoffel_oracle(moms, n, z);
                worst = std::max(worst, std::abs(a - b) / b);
            }
    }
    for (int m : {2, 3}) {
        const LemniscateParams p{std::pow(0.6, 1.0 / m), m};
        for (int s = 0; s < m; ++s) {
            const auto q = adapted_gram(s, 10, p), r = adapted_gram_series(s, 10, p);
            for (std::size_t k = 0; k <= 10; ++k)
                for (std::size_t l = 0; l <= 10; ++l)
                    worst = std::max(worst, double(abs(q.G[k][l] - r.G[k][l]) / sqrt(r.G[k][k] * r.G[l][l])));
        }
    }
    return tolerance_suite("oracle_equivalence", worst, 1e-8, "closed forms vs engines");
}

SuiteResult suite_verblunsky() {
    SuiteResult worst{"verblunsky", true, std::numeric_limits<double>::infinity(), ""};
    std::vector<CircleWeight> weights{HuaPickrellParams{1.0, 0.5}.weight(), HuaPickrellParams{-0.3, 0.7}.weight(),
                                      {0.0, 0.0, SmoothFactor::trig({2.0, 1.0})},
                                      {1.0, 0.3, SmoothFactor::trig({2.0, 1.0})}};
    for (const auto& w : weights) {
        const auto r = check_verblunsky(monic_from_moments(trig_moments(w, 40), 40).vc);
        if (r.worst_margin < worst.worst_margin) worst = r;
    }
    worst.name = "verblunsky";
    return worst;
}

}  // namespace

SuiteResult check_verblunsky(const VerblunskyCoefficients& vc) {
    double margin = std::numeric_limits<double>::infinity();
    std::string detail = "all |alpha_k| < 1 and kappa nondecreasing";
    for (std::size_t k = 0; k < vc.alpha.size(); ++k) {
        const double slack = 1.0 - double(abs(vc.alpha[k]));
        if (slack < margin) {
            margin = slack;
            if (slack <= 0) detail = "invariant violated: |alpha_" + std::to_string(k) + "| = " + fmt(1.0 - slack);
        }
    }
    for (std::size_t k = 0; k + 1 < vc.kappa.size(); ++k) {
        const double step = double((vc.kappa[k + 1] - vc.kappa[k]) / vc.kappa[k]);
        if (!(step >= 0) && step < margin) {
            margin = std::isnan(step) ? -1.0 : step;
            detail = "invariant violated: kappa decreases at k = " + std::to_string(k);
        }
    }
    return {"verblunsky", margin > 0, margin, detail};
}

double lemma_or_constant(const std::vector<cplx>& a_samples, std::size_t n_max) {
    double C = 1.0;  // the quotient tends to 1 as a/n -> 0
    for (const auto& a : a_samples)
        for (std::size_t n = 1; n <= n_max; ++n) {
            const cplx x = -I * a / double(n);
            if (std::abs(x) == 0.0) continue;
            C = std::max(C, std::abs(expm1_complex(x) / x));
        }
    return C;
}

std::vector<std::string> property_suite_names() {
    return {"kummer", "conjugation", "T_positive", "lemma_1f1", "theta_modulus", "hb_margin",
            "fbound", "lemma_or",    "derform",    "zm_symmetry", "oracle_equivalence", "verblunsky"};
}

std::vector<SuiteResult> run_property_suites(const std::string& selector) {
    const std::map<std::string, SuiteResult (*)()> table{
        {"kummer", suite_kummer},           {"conjugation", suite_conjugation},
        {"T_positive", suite_T_positive},   {"lemma_1f1", suite_lemma_1f1},
        {"theta_modulus", suite_theta_modulus}, {"hb_margin", suite_hb_margin},
        {"fbound", suite_fbound},           {"lemma_or", suite_lemma_or},
        {"derform", suite_derform},         {"zm_symmetry", suite_zm_symmetry},
        {"oracle_equivalence", suite_oracle_equivalence}, {"verblunsky", suite_verblunsky}};
    std::vector<std::string> names;
    if (selector == "all" || selector.empty()) {
        names = property_suite_names();
    } else {
        std::istringstream is(selector);
        std::string item;
        while (std::getline(is, item, ',')) {
            if (!table.count(item)) throw std::invalid_argument("unknown property suite '" + item + "'");
            names.push_back(item);
        }
    }
    std::vector<SuiteResult> out;
    for (const auto& n : names) out.push_back(table.at(n)());
    return out;
}

}  // namespace polykern
