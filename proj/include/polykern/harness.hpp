#pragma once

// Experiment driver: universality and Christoffel studies for both settings,
// the property-suite runner, config parsing and CSV output.

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "polykern/lemniscate.hpp"
#include "polykern/model_circle.hpp"
#include "polykern/opuc.hpp"

namespace polykern {

enum class Setting { circle_model, circle_perturbed, lemniscate };

std::string to_string(Setting s);
Setting setting_from_string(const std::string& s);

struct GridPoint {
    cplx a, b;
};

/// {0, +-1, +-2, i, -i, 1+i} x the same set.
std::vector<GridPoint> default_grid();

struct StudyConfig {
    Setting setting = Setting::circle_model;
    // circle
    double gamma = 0.0;
    double tau = 0.0;
    std::string g_spec = "const:1";
    // lemniscate
    double r = 0.0;
    int m = 2;
    double t = 0.0;
    int j = 0;
    double density = 1.0;

    std::vector<std::size_t> n_list;
    std::vector<GridPoint> grid = default_grid();
    int precision_bits = 113;
    std::string output_path;

    void validate() const;
    HuaPickrellParams hp() const { return {gamma, tau}; }
    LemniscateParams lemniscate() const { return {r, m}; }
    CircleWeight circle_weight() const;
};

/// Parses "1.5", "-2i", "1+2i", "0.3-0.5i", "i".
cplx parse_complex(const std::string& text);

/// "const:c" | "trig:a0,a1,...|b1,b2,..." | "table:s0,s1,...".
SmoothFactor parse_g_spec(const std::string& text);

/// Key-value text: one "key = value" per line, '#' comments. Keys mirror the
/// StudyConfig fields; "grid" takes "a:b" pairs separated by ';' or "default".
StudyConfig parse_config(std::istream& in);
StudyConfig load_config(const std::string& path);

struct ConvergenceRow {
    std::size_t n = 0;
    cplx a, b;
    cplx ratio;
    cplx limit;
    double abs_err = 0.0;
};

std::vector<ConvergenceRow> run_circle_study(const StudyConfig& cfg);
std::vector<ConvergenceRow> run_lemniscate_study(const StudyConfig& cfg);
/// Same, reusing a basis of degree at least max(n_list).
std::vector<ConvergenceRow> run_lemniscate_study(const StudyConfig& cfg, const LemniscateBasis& basis);

/// Largest abs_err per n, in n_list order.
std::vector<std::pair<std::size_t, double>> max_error_by_n(const std::vector<ConvergenceRow>& rows);

struct ChristoffelRow {
    std::size_t n = 0;
    cplx a;
    double scaled = 0.0;  ///< n^{2g+1} lambda_n (circle) or n^2 lambda_n (lemniscate)
    double target = 0.0;
};

/// Circle: points e^{ia/n} for each grid a (the a of each grid pair).
/// Lemniscate: the boundary point z0 only.
std::vector<ChristoffelRow> run_christoffel_study(const StudyConfig& cfg);
std::vector<ChristoffelRow> run_christoffel_study(const StudyConfig& cfg, const LemniscateBasis& basis);

void write_csv(std::ostream& out, const std::vector<ConvergenceRow>& rows);
void write_christoffel_csv(std::ostream& out, const std::vector<ChristoffelRow>& rows);

struct SuiteResult {
    std::string name;
    bool passed = false;
    double worst_margin = 0.0;  ///< signed: negative means violated
    std::string detail;
};

/// Suite names: kummer, conjugation, T_positive, lemma_1f1, theta_modulus,
/// hb_margin, fbound, lemma_or, derform, zm_symmetry, oracle_equivalence,
/// verblunsky. Selector "all" or a comma list of names.
std::vector<SuiteResult> run_property_suites(const std::string& selector = "all");
std::vector<std::string> property_suite_names();

/// |alpha_k| < 1 and kappa nondecreasing.
SuiteResult check_verblunsky(const VerblunskyCoefficients& vc);

/// sup over the sampled a and n = 1..n_max of |(e^{-ia/n} - 1) / (-ia/n)|.
double lemma_or_constant(const std::vector<cplx>& a_samples, std::size_t n_max);

}  // namespace polykern
