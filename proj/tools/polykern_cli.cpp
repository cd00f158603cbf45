#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "polykern/harness.hpp"

using namespace polykern;

namespace {

struct Common {
    std::string config_path;
    std::string out_path;
    int precision_bits = 0;
    std::vector<std::size_t> n_list;
    bool quiet = false;
};

void add_common(CLI::App* cmd, Common& c, bool needs_config) {
    auto* opt = cmd->add_option("--config", c.config_path, "key = value study description");
    if (needs_config) opt->required()->check(CLI::ExistingFile);
    cmd->add_option("--out", c.out_path, "CSV output path (overrides the config)");
    cmd->add_option("--precision-bits", c.precision_bits, "53 or 113");
    cmd->add_option("--n", c.n_list, "comma-separated degrees (overrides n_list)")->delimiter(',');
    cmd->add_flag("--quiet", c.quiet, "suppress the summary on stdout");
}

StudyConfig resolve(const Common& c) {
    StudyConfig cfg = load_config(c.config_path);
    if (!c.out_path.empty()) cfg.output_path = c.out_path;
    if (c.precision_bits > 0) cfg.precision_bits = c.precision_bits;
    if (!c.n_list.empty()) cfg.n_list = c.n_list;
    cfg.validate();
    return cfg;
}

template <class Writer>
void emit(const StudyConfig& cfg, Writer&& write) {
    if (cfg.output_path.empty() || cfg.output_path == "-") {
        write(std::cout);
        return;
    }
    std::ofstream f(cfg.output_path);
    if (!f) throw std::runtime_error("cannot write '" + cfg.output_path + "'");
    write(f);
}

int convergence(const Common& c, bool lemniscate) {
    const StudyConfig cfg = resolve(c);
    const auto rows = lemniscate ? run_lemniscate_study(cfg) : run_circle_study(cfg);
    emit(cfg, [&](std::ostream& o) { write_csv(o, rows); });
    if (!c.quiet && !cfg.output_path.empty()) {
        for (const auto& [n, err] : max_error_by_n(rows))
            std::cerr << "n=" << n << "  max |ratio - limit| = " << std::setprecision(6) << err << '\n';
    }
    return 0;
}

int christoffel_cmd(const Common& c) {
    const StudyConfig cfg = resolve(c);
    const auto rows = run_christoffel_study(cfg);
    emit(cfg, [&](std::ostream& o) { write_christoffel_csv(o, rows); });
    return 0;
}

int props(const std::string& selector, bool quiet) {
    bool ok = true;
    for (const auto& r : run_property_suites(selector)) {
        ok = ok && r.passed;
        if (!quiet || !r.passed)
            std::cout << (r.passed ? "PASS " : "FAIL ") << std::left << std::setw(20) << r.name << ' ' << r.detail
                      << '\n';
    }
    return ok ? 0 : 1;
}

// Small cross-checks of every closed form against its brute-force oracle.
int oracle_check(const Common& c) {
    std::ostringstream log;
    bool ok = true;
    auto report = [&](const std::string& name, double err, double tol) {
        const bool pass = err <= tol;
        ok = ok && pass;
        log << (pass ? "PASS " : "FAIL ") << std::left << std::setw(34) << name << " err " << std::setprecision(3)
            << err << " (tol " << tol << ")\n";
    };
    const int N = c.n_list.empty() ? 40 : int(c.n_list.back());

    for (const auto& p : std::vector<HuaPickrellParams>{{1.0, 0.5}, {-0.3, 0.7}}) {
        const auto moms = trig_moments(p.weight(), std::size_t(N));
        const auto basis = monic_from_moments(moms, std::size_t(N));
        double e_coef = 0, e_alpha = 0, e_ker = 0, e_chr = 0;
        for (int n = 0; n <= N; ++n) {
            const auto cf = hp_monic_coefficients(std::size_t(n), p);
            for (int j = 0; j <= n; ++j) e_coef = std::max(e_coef, double(abs(cf[std::size_t(j)] - basis.monic[std::size_t(n)][std::size_t(j)])));
        }
        for (int k = 0; k < N; ++k) e_alpha = std::max(e_alpha, double(abs(basis.vc.alpha[std::size_t(k)] - hp_verblunsky(std::size_t(k), p))));
        const cplx z = std::polar(1.0, 0.05), w = std::polar(1.0, -0.08);
        const cplx a = hp_kernel(std::size_t(N), z, w, p).value, b = kernel_direct(basis.vc, std::size_t(N), z, w).value;
        e_ker = std::abs(a - b) / std::abs(b);
        e_chr = std::abs(christoffel(basis.vc, std::size_t(N), 1.0) / christoffel_oracle(moms, std::size_t(N), 1.0) - 1.0);
        const std::string tag = "(g=" + std::to_string(p.gamma).substr(0, 4) + ",t=" + std::to_string(p.tau).substr(0, 3) + ") ";
        report(tag + "monic coefficients", e_coef, 1e-8);
        report(tag + "verblunsky", e_alpha, 1e-10);
        report(tag + "kernel", e_ker, 1e-10);
        report(tag + "christoffel", e_chr, 1e-8);
    }
    for (int m : {2, 3}) {
        const LemniscateParams p{std::pow(0.6, 1.0 / m), m};
        const std::size_t deg = std::size_t(10 * m);
        const auto oracle = gram_schmidt_oracle(deg, p);
        double e_top = 0, e_kappa = 0;
        for (std::size_t k = 0; k * std::size_t(m) + std::size_t(m) - 1 <= deg; ++k) {
            const std::size_t n = k * std::size_t(m) + std::size_t(m) - 1;
            for (std::size_t i = 0; i < k; ++i) e_top = std::max(e_top, std::abs(oracle.wcoef[n][i]));
            e_kappa = std::max(e_kappa, std::abs(oracle.kappa_sq(n) / kappa_asymptotic(n, p).kappa_sq - 1.0));
        }
        report("m=" + std::to_string(m) + " top-class polynomials", e_top, 1e-8);
        report("m=" + std::to_string(m) + " kappa^2 exact degrees", e_kappa, 1e-8);
    }
    if (!c.quiet || !ok) std::cout << log.str();
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reproducing kernels for Hua-Pickrell circle weights and lemniscate area measure"};
    app.require_subcommand(1);

    Common circle, lem, chr, orc;
    add_common(app.add_subcommand("circle-study", "universality ratios on the unit circle"), circle, true);
    add_common(app.add_subcommand("lemniscate-study", "universality ratios on a lemniscate"), lem, true);
    add_common(app.add_subcommand("christoffel-study", "scaled Christoffel functions against their limits"), chr, true);
    add_common(app.add_subcommand("oracle-check", "closed forms against brute-force oracles"), orc, false);

    std::string selector = "all";
    bool props_quiet = false;
    auto* pr = app.add_subcommand("props", "property suites");
    pr->add_option("suites", selector, "'all' or a comma list of suite names");
    pr->add_flag("--quiet", props_quiet, "print failures only");

    CLI11_PARSE(app, argc, argv);
    try {
        if (app.got_subcommand("circle-study")) return convergence(circle, false);
        if (app.got_subcommand("lemniscate-study")) return convergence(lem, true);
        if (app.got_subcommand("christoffel-study")) return christoffel_cmd(chr);
        if (app.got_subcommand("oracle-check")) return oracle_check(orc);
        if (app.got_subcommand("props")) return props(selector, props_quiet);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
