#include <cmath>
#include <sstream>

#include "doctest.h"
#include "polykern/harness.hpp"
#include "polykern/hyperfun.hpp"

using namespace polykern;

namespace {

StudyConfig from_text(const std::string& s) {
    std::istringstream in(s);
    return parse_config(in);
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    for (std::string f; std::getline(ss, f, sep);) out.push_back(f);
    return out;
}

}  // namespace

TEST_CASE("complex literals") {
    CHECK(parse_complex("1.5") == cplx(1.5, 0.0));
    CHECK(parse_complex("-2i") == cplx(0.0, -2.0));
    CHECK(parse_complex("1+2i") == cplx(1.0, 2.0));
    CHECK(parse_complex("0.3-0.5i") == cplx(0.3, -0.5));
    CHECK(parse_complex("i") == cplx(0.0, 1.0));
    CHECK(parse_complex("-i") == cplx(0.0, -1.0));
    CHECK(parse_complex(" 1e-3+1e2i ") == cplx(1e-3, 100.0));
    CHECK_THROWS_AS(parse_complex(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_complex("1+x"), std::invalid_argument);
}

TEST_CASE("smooth factor specs") {
    CHECK(parse_g_spec("const:2.5")(1.0) == doctest::Approx(2.5));
    const auto g = parse_g_spec("trig:2,1|0.5");
    CHECK(g(M_PI / 2) == doctest::Approx(2.5));
    CHECK(parse_g_spec("table:1,1,1,1").kind() == SmoothFactor::Kind::tabulated);
    CHECK_THROWS_AS(parse_g_spec("poly:1,2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_g_spec("2+cos"), std::invalid_argument);
}

TEST_CASE("config parsing") {
    const auto cfg = from_text(
        "# model run\n"
        "setting = circle_model\n"
        "gamma = 0.5   # exponent\n"
        "tau = -0.7\n"
        "n_list = 10, 20, 40\n"
        "grid = 0:0; 1+i:-2\n"
        "precision_bits = 53\n"
        "output = out.csv\n");
    CHECK(cfg.setting == Setting::circle_model);
    CHECK(cfg.gamma == 0.5);
    CHECK(cfg.tau == -0.7);
    CHECK(cfg.n_list == std::vector<std::size_t>{10, 20, 40});
    REQUIRE(cfg.grid.size() == 2);
    CHECK(cfg.grid[1].a == cplx(1.0, 1.0));
    CHECK(cfg.grid[1].b == cplx(-2.0, 0.0));
    CHECK(cfg.precision_bits == 53);
    CHECK(cfg.output_path == "out.csv");
    CHECK_NOTHROW(cfg.validate());

    const auto lem = from_text("setting = lemniscate\nrho = 0.6\nm = 3\nt = pi/3\nj = 2\nn_list = 30\n");
    CHECK(std::pow(lem.r, 3) == doctest::Approx(0.6));
    CHECK(lem.t == doctest::Approx(M_PI / 3));
    CHECK(lem.grid.size() == default_grid().size());
    CHECK_NOTHROW(lem.validate());

    CHECK(default_grid().size() == 64);
    CHECK(to_string(setting_from_string("circle_perturbed")) == "circle_perturbed");
}

TEST_CASE("config errors") {
    CHECK_THROWS_AS(from_text("gamma 0.5\n"), std::invalid_argument);
    CHECK_THROWS_AS(from_text("colour = red\n"), std::invalid_argument);
    CHECK_THROWS_AS(from_text("gamma = half\n"), std::invalid_argument);
    CHECK_THROWS_AS(from_text("setting = torus\n"), std::invalid_argument);
    CHECK_THROWS_AS(from_text("m = 2.5\n"), std::invalid_argument);
    CHECK_THROWS_AS(from_text("n_list = 10,5\n").validate(), std::invalid_argument);
    CHECK_THROWS_AS(from_text("n_list = 0,5\n").validate(), std::invalid_argument);
    CHECK_THROWS_AS(from_text("n_list = 5\ngamma = -0.5\n").validate(), DomainError);
    CHECK_THROWS_AS(from_text("setting = lemniscate\nr = 0.7\nm = 2\nj = 2\nn_list = 5\n").validate(),
                    std::invalid_argument);
    CHECK_THROWS_AS(from_text("setting = lemniscate\nr = 1.5\nn_list = 5\n").validate(), DomainError);
    CHECK_THROWS_AS(load_config("/nonexistent/config.txt"), std::runtime_error);

    StudyConfig cfg;
    cfg.n_list = {10};
    cfg.grid.clear();
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("circle study in the flat case") {
    StudyConfig cfg;
    cfg.n_list = {50, 500};
    cfg.grid = {{0.0, 0.0}, {1.0, 2.0}, {cplx(0.0, 1.0), cplx(1.0, 1.0)}};
    const auto rows = run_circle_study(cfg);
    REQUIRE(rows.size() == 6);
    for (const auto& r : rows) {
        // K_n(e^{ia/n}, e^{ib/n}) / (n+1) is a finite geometric sum
        const double nn = double(r.n);
        const cplx q = std::exp(cplx(0.0, 1.0) * (r.a - std::conj(r.b)) / nn);
        const cplx exact = std::abs(q - 1.0) < 1e-15 ? cplx(1.0) : (1.0 - std::pow(q, nn + 1)) / ((1.0 - q) * (nn + 1));
        CHECK(std::abs(r.ratio - exact) < 1e-12);
        CHECK(r.abs_err == doctest::Approx(std::abs(r.ratio - r.limit)));
    }
    CHECK(std::abs(rows[0].ratio - 1.0) < 1e-14);
    const auto by_n = max_error_by_n(rows);
    REQUIRE(by_n.size() == 2);
    CHECK(by_n[1].second < by_n[0].second);
}

TEST_CASE("circle study for a perturbed weight") {
    StudyConfig cfg = from_text("setting = circle_perturbed\ngamma = 0.5\ntau = 0.3\ng = trig:2,1\nn_list = 40, 160\ngrid = 1:-1; 0:2\n");
    const auto rows = run_circle_study(cfg);
    const auto by_n = max_error_by_n(rows);
    CHECK(by_n[1].second < by_n[0].second);
    CHECK(by_n[1].second < 0.05);
}

TEST_CASE("Christoffel study") {
    StudyConfig cfg;
    cfg.gamma = 1.0;
    cfg.n_list = {10, 100};
    cfg.grid = {{0.0, 0.0}, {0.0, 1.0}, {1.0, 0.0}};
    const auto rows = run_christoffel_study(cfg);
    REQUIRE(rows.size() == 4);  // distinct a only
    for (const auto& r : rows) {
        if (r.a != cplx(0.0)) continue;
        // n^3 lambda_n(1) = n^3 n! / (4)_n
        const double nn = double(r.n);
        CHECK(r.scaled == doctest::Approx(nn * nn * nn / rising_factorial(4.0, r.n) * std::tgamma(nn + 1)));
        CHECK(r.target == doctest::Approx(6.0));
    }
}

TEST_CASE("lemniscate studies on a disk") {
    // m = 1: the region is a disk and lambda_n(z0) = 2 pi r^2 / ((n+1)(n+2)) on its boundary
    const auto cfg = from_text("setting = lemniscate\nr = 0.5\nm = 1\nt = 1.0\ndensity = 2\nn_list = 10, 40\ngrid = 0:0; 1:i\n");
    const auto basis = build_mu0_basis(40, cfg.lemniscate());
    const auto chr = run_christoffel_study(cfg, basis);
    REQUIRE(chr.size() == 2);
    for (const auto& r : chr) {
        const double nn = double(r.n);
        CHECK(r.scaled == doctest::Approx(nn * nn * 2.0 * 2 * M_PI * 0.25 / ((nn + 1) * (nn + 2))));
        CHECK(r.target == doctest::Approx(2.0 * 2 * M_PI * 0.25));
    }
    const auto rows = run_lemniscate_study(cfg, basis);
    REQUIRE(rows.size() == 4);
    CHECK(std::abs(rows[0].ratio - 1.0) < 1e-13);
    CHECK(std::abs(rows[0].limit - 1.0) < 1e-15);
    CHECK(rows[3].abs_err < rows[1].abs_err);

    auto small = cfg;
    small.n_list = {10, 80};
    CHECK_THROWS_AS(run_lemniscate_study(small, basis), std::invalid_argument);
    CHECK_THROWS_AS(run_circle_study(cfg), std::invalid_argument);
}

TEST_CASE("CSV output") {
    StudyConfig cfg;
    cfg.gamma = 0.5;
    cfg.tau = 0.7;
    cfg.n_list = {30, 60};
    cfg.grid = {{1.0, cplx(0.0, 1.0)}, {-2.0, 1.0}};
    const auto rows = run_circle_study(cfg);
    std::ostringstream a, b;
    write_csv(a, rows);
    write_csv(b, run_circle_study(cfg));
    CHECK(a.str() == b.str());

    std::istringstream in(a.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "n,re_a,im_a,re_b,im_b,re_ratio,im_ratio,re_limit,im_limit,abs_err");
    std::size_t count = 0;
    while (std::getline(in, line)) {
        const auto f = split(line, ',');
        REQUIRE(f.size() == 10);
        const cplx ratio(std::stod(f[5]), std::stod(f[6])), limit(std::stod(f[7]), std::stod(f[8]));
        // 17 significant digits round-trip binary64
        CHECK(ratio == rows[count].ratio);
        CHECK(std::stod(f[9]) == rows[count].abs_err);
        CHECK(std::abs(std::abs(ratio - limit) - std::stod(f[9])) < 1e-15);
        ++count;
    }
    CHECK(count == rows.size());

    std::ostringstream c;
    write_christoffel_csv(c, {{10, 0.0, 3.0, 2.0}});
    CHECK(c.str().rfind("n,re_a,im_a,scaled,target,rel_dev\n", 0) == 0);
    CHECK(split(split(c.str(), '\n')[1], ',')[5] == "0.5");
}

TEST_CASE("property suites") {
    const auto names = property_suite_names();
    CHECK(names.size() == 12);
    const auto res = run_property_suites("kummer,verblunsky");
    REQUIRE(res.size() == 2);
    for (const auto& r : res) CHECK_MESSAGE(r.passed, r.name << ": " << r.detail);
    CHECK_THROWS_AS(run_property_suites("nonsense"), std::invalid_argument);

    // a sequence with |alpha| >= 1 must be flagged
    VerblunskyCoefficients bad;
    bad.alpha = {xcplx(xreal(0.5)), xcplx(xreal(1.2))};
    bad.kappa = {xreal(1), xreal(1.1), xreal(1.0)};
    const auto neg = check_verblunsky(bad);
    CHECK_FALSE(neg.passed);
    CHECK(neg.worst_margin < 0.0);

    std::vector<xcplx> alpha;
    for (std::size_t k = 0; k < 20; ++k) alpha.push_back(hp_verblunsky(k, {0.5, 0.7}));
    CHECK(check_verblunsky(verblunsky_from_alpha(alpha)).passed);
}

TEST_CASE("lemma constant") {
    // |(e^x - 1)/x| for x = -ia/n; at a = 0 the ratio is 1
    CHECK(lemma_or_constant({0.0}, 5) == doctest::Approx(1.0));
    const double c = lemma_or_constant({cplx(0.0, 2.0)}, 1);
    CHECK(c == doctest::Approx((std::exp(2.0) - 1.0) / 2.0));
    CHECK(lemma_or_constant({cplx(3.0, 1.0), cplx(-1.0, 0.5)}, 50) >= 1.0);
}
