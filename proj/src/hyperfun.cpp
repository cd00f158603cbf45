#include "polykern/hyperfun.hpp"

#include <array>

#include <boost/math/special_functions/bernoulli.hpp>

namespace polykern {

namespace {

// Lanczos coefficients, g = 7, n = 9.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

cplx lanczos(cplx z) {
    // z here is the shifted argument, Re z >= 1/2
    z -= 1.0;
    cplx x = kLanczos[0];
    for (std::size_t i = 1; i < kLanczos.size(); ++i) x += kLanczos[i] / (z + double(i));
    const cplx t = z + kLanczosG + 0.5;
    return std::sqrt(2.0 * M_PI) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

}  // namespace

cplx gamma_complex(cplx z) {
    if (is_nonpositive_integer(z)) throw PoleError("gamma_complex: pole at nonpositive integer");
    if (z.real() < 0.5) {
        // Reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z)
        return M_PI / (std::sin(M_PI * z) * lanczos(1.0 - z));
    }
    return lanczos(z);
}

xreal log_abs_gamma(const xcplx& z) {
    using boost::multiprecision::log;
    if (!(z.real() > 0)) throw DomainError("log_abs_gamma: needs Re z > 0");
    // log Gamma(z) = log Gamma(z + M) - sum_{j<M} log(z + j), with |z + M| >= 40
    xcplx w = z;
    xreal shift = 0;
    while (abs(w) < 40) {
        shift += log(abs(w));
        w += xreal(1);
    }
    const xreal half_log_2pi = log(2 * pi_v<xreal>()) / 2;
    const xcplx lw = std::log(w);
    xcplx s = (w - xreal(0.5)) * lw - w;
    const xcplx w2 = w * w;
    xcplx wp = w;
    for (int k = 1; k <= 16; ++k) {
        const xreal b = boost::math::bernoulli_b2n<xreal>(k);
        s += b / (xreal(2 * k) * xreal(2 * k - 1) * wp);
        wp *= w2;
    }
    return s.real() + half_log_2pi - shift;
}

}  // namespace polykern
