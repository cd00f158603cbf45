#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <type_traits>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/float128.hpp>

namespace polykern {

using cplx = std::complex<double>;
using xreal = boost::multiprecision::float128;
using xcplx = std::complex<xreal>;

/// Working precision of a computation, as significand bits.
enum class Precision : int { binary64 = 53, extended = 113 };

inline int bits(Precision p) { return static_cast<int>(p); }

/// Maps a requested bit count onto the nearest supported precision.
inline Precision precision_from_bits(int b) {
    return b > 53 ? Precision::extended : Precision::binary64;
}

template <class T>
constexpr bool is_extended_v = std::is_same_v<T, xreal>;

template <class T>
inline double to_double(const T& x) {
    return static_cast<double>(x);
}

template <class T>
inline cplx to_double(const std::complex<T>& z) {
    return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}

template <class T>
inline std::complex<T> widen(const cplx& z) {
    return {T(z.real()), T(z.imag())};
}

template <class T>
inline T pi_v() {
    return boost::math::constants::pi<T>();
}

// Error taxonomy. All derive from std::runtime_error or std::domain_error so
// callers can catch broadly.

struct PoleError : std::domain_error {
    using std::domain_error::domain_error;
};

struct NonconvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised when a Gram/Toeplitz factorization meets a nonpositive pivot.
struct IndefiniteMatrixError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConditioningError : std::domain_error {
    using std::domain_error::domain_error;
};

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

struct BelowThresholdError : std::out_of_range {
    using std::out_of_range::out_of_range;
};

/// Neumaier-compensated accumulator.
template <class V>
class CompensatedSum {
public:
    void add(const V& x) {
        using std::abs;
        V t = sum_ + x;
        if (abs(sum_) >= abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    V value() const { return sum_ + comp_; }

private:
    V sum_{};
    V comp_{};
};

template <class R>
class CompensatedSum<std::complex<R>> {
public:
    void add(const std::complex<R>& x) {
        re_.add(x.real());
        im_.add(x.imag());
    }
    std::complex<R> value() const { return {re_.value(), im_.value()}; }

private:
    CompensatedSum<R> re_, im_;
};

}  // namespace polykern
