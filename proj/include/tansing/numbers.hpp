// Coefficient fields for the exact core.
//
// Every symbolic computation in this library is generic over one of two
// coefficient fields:
//
//   Rational — arbitrary-precision rationals (GMP), always exact, always
//              canonical (lowest terms, positive denominator).
//   Real     — arbitrary-precision binary floats (MPFR) with run-time
//              precision, for inputs whose parameters are irrational.
//
// Precision for Real is configured explicitly through PrecisionScope or
// set_real_digits(); nothing in this library silently changes it.
#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "tansing/errors.hpp"

namespace tansing {

namespace mp = boost::multiprecision;

using Rational = mp::number<mp::gmp_rational, mp::et_off>;
using Integer = mp::number<mp::gmp_int, mp::et_off>;
using Real = mp::number<mp::mpfr_float_backend<0>, mp::et_off>;

inline void set_real_digits(unsigned digits) { Real::default_precision(digits); }
inline unsigned real_digits() { return Real::default_precision(); }

namespace detail {
// the documented default: 50 decimal digits unless configured otherwise
// (per thread; spawned threads set their own or hold a PrecisionScope)
inline const bool real_precision_bootstrap = [] {
    Real::default_precision(50);
    return true;
}();
} // namespace detail

// Pins the Real working precision for the lifetime of a computation.
class PrecisionScope {
public:
    explicit PrecisionScope(unsigned digits) : saved_(Real::default_precision()) {
        Real::default_precision(digits);
    }
    ~PrecisionScope() { Real::default_precision(saved_); }
    PrecisionScope(const PrecisionScope&) = delete;
    PrecisionScope& operator=(const PrecisionScope&) = delete;

private:
    unsigned saved_;
};

template <class F>
struct FieldTraits;

template <>
struct FieldTraits<Rational> {
    static constexpr bool is_exact = true;
    static Rational from_rational(const Rational& q) { return q; }
    // Exact field: zero means zero.
    static bool is_zero(const Rational& x) { return x.is_zero(); }
    static double to_double(const Rational& x) { return x.template convert_to<double>(); }
    static std::string str(const Rational& x) { return x.str(); }
};

template <>
struct FieldTraits<Real> {
    static constexpr bool is_exact = false;
    static Real from_rational(const Rational& q) { return Real(q); }
    // Verdict-level zero test: relative to the working precision with a
    // 15-digit guard band, so representation noise never flips a verdict.
    static bool is_zero(const Real& x) {
        const long digits = static_cast<long>(real_digits());
        const long guard = digits > 16 ? digits - 15 : 1;
        return abs(x) <= pow(Real(10), -guard);
    }
    static double to_double(const Real& x) { return x.template convert_to<double>(); }
    static std::string str(const Real& x) { return x.str(); }
};

template <class F>
F from_rational(const Rational& q) {
    return FieldTraits<F>::from_rational(q);
}

template <class F>
bool field_is_zero(const F& x) {
    return FieldTraits<F>::is_zero(x);
}

// sign as −1/0/+1, using the field's zero test
template <class F>
int field_sign(const F& x) {
    if (field_is_zero(x)) return 0;
    return x < 0 ? -1 : 1;
}

inline double to_double(const Rational& x) { return x.template convert_to<double>(); }
inline double to_double(const Real& x) { return x.template convert_to<double>(); }

// Exact factorials and binomials as Rational (small arguments only; the
// recursion never needs more than a few dozen).
inline Rational factorial(int n) {
    if (n < 0) throw InternalError("factorial of negative argument");
    static thread_local std::vector<Rational> table{Rational(1)};
    while (static_cast<int>(table.size()) <= n)
        table.push_back(table.back() * Rational(static_cast<int>(table.size())));
    return table[static_cast<std::size_t>(n)];
}

inline Rational binomial(int n, int k) {
    if (k < 0 || k > n) return Rational(0);
    return factorial(n) / (factorial(k) * factorial(n - k));
}

// (-1)^n as int
inline int parity_sign(int n) { return (n % 2 == 0) ? 1 : -1; }

// num/den in canonical form (the raw two-argument Rational constructor
// reads the denominator as unsigned; this one accepts any sign)
inline Rational make_rational(const Integer& num, const Integer& den) {
    if (den.is_zero()) throw UsageError("rational with zero denominator");
    return Rational(num) / Rational(den);
}

// integer power of a field element, exponent >= 0
template <class F>
F field_pow(const F& x, int e) {
    if (e < 0) throw InternalError("field_pow: negative exponent");
    F r(1);
    F base = x;
    while (e > 0) {
        if (e & 1) r = r * base;
        base = base * base;
        e >>= 1;
    }
    return r;
}

} // namespace tansing
