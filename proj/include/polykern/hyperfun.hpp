#pragma once

// Complex-argument special functions: rising factorial, gamma, the confluent
// hypergeometric 1F1 and the terminating Gauss 2F1.

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <string>

#include "polykern/numeric.hpp"

namespace polykern {

/// Result of a series evaluation.
template <class T>
struct SeriesValue {
    std::complex<T> value;
    std::size_t terms_used = 0;
    /// Estimated magnitude of the discarded tail; 0 for terminating series.
    double truncation_bound = 0.0;
};

template <class T>
constexpr double default_series_tol() {
    return is_extended_v<T> ? 1e-32 : 1e-14;
}

struct SeriesOptions {
    double tol = 0.0;  ///< 0 selects the per-precision default
    std::size_t max_terms = 1'000'000;
    bool allow_kummer = true;
};

/// (v)_n = v (v+1) ... (v+n-1), with (v)_0 = 1.
template <class T>
std::complex<T> rising_factorial(const std::complex<T>& v, std::size_t n) {
    std::complex<T> p(1);
    for (std::size_t k = 0; k < n; ++k) p *= v + T(k);
    return p;
}

inline double rising_factorial(double v, std::size_t n) {
    double p = 1.0;
    for (std::size_t k = 0; k < n; ++k) p *= v + double(k);
    return p;
}

/// True when z is (numerically exactly) a nonpositive integer.
template <class T>
bool is_nonpositive_integer(const std::complex<T>& z) {
    using std::floor;
    return z.imag() == T(0) && z.real() <= T(0) && floor(z.real()) == z.real();
}

/// Gamma function for complex argument; Lanczos approximation with reflection
/// for Re z < 1/2. Throws PoleError at nonpositive integers.
cplx gamma_complex(cplx z);

/// log |Gamma(z)| in extended precision for Re z > 0 (shifted Stirling series).
xreal log_abs_gamma(const xcplx& z);

namespace detail {

template <class T>
SeriesValue<T> hyp1f1_series(const std::complex<T>& a, const std::complex<T>& b,
                             const std::complex<T>& z, double tol,
                             std::size_t max_terms) {
    using std::abs;
    const bool terminates = is_nonpositive_integer(a);
    CompensatedSum<std::complex<T>> sum;
    std::complex<T> term(1);
    sum.add(term);
    std::size_t small_run = 0;
    for (std::size_t k = 0; k < max_terms; ++k) {
        const T kk(static_cast<double>(k));
        const std::complex<T> ratio = (a + kk) * z / ((b + kk) * (kk + T(1)));
        term *= ratio;
        sum.add(term);
        if (terminates && term == std::complex<T>(0)) {
            return {sum.value(), k + 2, 0.0};
        }
        const T partial = abs(sum.value());
        if (abs(term) < T(tol) * partial)
            ++small_run;
        else
            small_run = 0;
        // The ratio guard keeps the rule from firing on the rising part of
        // the series when |z| is large compared with k.
        const T next_ratio =
            abs((a + kk + T(1)) * z / ((b + kk + T(1)) * (kk + T(2))));
        if (small_run >= 3 && next_ratio < T(0.5)) {
            const T tail = abs(term) * next_ratio / (T(1) - next_ratio);
            return {sum.value(), k + 2, static_cast<double>(tail)};
        }
    }
    throw NonconvergenceError("hyp1f1: series did not meet the stopping rule within " +
                              std::to_string(max_terms) + " terms");
}

}  // namespace detail

/// Confluent hypergeometric function 1F1(a; b; z) by its power series.
/// For Re z < 0 the Kummer transform e^z 1F1(b-a; b; -z) is used: its terms
/// cancel less by a factor e^{Re z}.
template <class T>
SeriesValue<T> hyp1f1(const std::complex<T>& a, const std::complex<T>& b,
                      const std::complex<T>& z, SeriesOptions opts = {}) {
    if (is_nonpositive_integer(b))
        throw PoleError("hyp1f1: b is a nonpositive integer");
    const double tol = opts.tol > 0 ? opts.tol : default_series_tol<T>();
    if (!(tol > 0)) throw DomainError("hyp1f1: tol must be positive");
    using std::abs;
    using std::exp;
    if (opts.allow_kummer && z.real() < T(0) && !is_nonpositive_integer(a)) {
        auto inner = detail::hyp1f1_series(b - a, b, -z, tol, opts.max_terms);
        const std::complex<T> f = exp(z);
        inner.value *= f;
        inner.truncation_bound *= static_cast<double>(abs(f));
        return inner;
    }
    return detail::hyp1f1_series(a, b, z, tol, opts.max_terms);
}

/// Convenience overload returning only the value, binary64.
inline cplx hyp1f1(cplx a, cplx b, cplx z) { return hyp1f1<double>(a, b, z).value; }

/// Terminating Gauss series 2F1(-n, b; c; z) = sum_{k<=n} (-n)_k (b)_k z^k / ((c)_k k!),
/// accumulated in a fixed order with compensation.
template <class T>
std::complex<T> hyp2f1_terminating(std::size_t n, const std::complex<T>& b,
                                   const std::complex<T>& c, const std::complex<T>& z) {
    if (is_nonpositive_integer(c)) {
        using std::abs;
        if (abs(c.real()) <= T(static_cast<double>(n)) - T(1))
            throw PoleError("hyp2f1_terminating: (c)_k vanishes inside the summation range");
    }
    CompensatedSum<std::complex<T>> sum;
    std::complex<T> term(1);
    sum.add(term);
    for (std::size_t k = 0; k < n; ++k) {
        const T kk(static_cast<double>(k));
        term *= (kk - T(static_cast<double>(n))) * (b + kk) * z / ((c + kk) * (kk + T(1)));
        sum.add(term);
    }
    return sum.value();
}

inline cplx hyp2f1_terminating(std::size_t n, cplx b, cplx c, cplx z) {
    return hyp2f1_terminating<double>(n, b, c, z);
}

/// e^t - 1 without cancellation for small |t|.
template <class T>
std::complex<T> expm1_complex(const std::complex<T>& t) {
    using std::cos;
    using std::exp;
    using std::expm1;
    using std::sin;
    const T x = t.real(), y = t.imag();
    const T s = sin(y / T(2));
    return {expm1(x) * cos(y) - T(2) * s * s, exp(x) * sin(y)};
}

}  // namespace polykern
