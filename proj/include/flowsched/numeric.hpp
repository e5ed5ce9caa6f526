#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace flowsched {

using BigInt = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;
// 80 decimal digits (~266 bits). Only used where exact rationals are impossible.
using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<80>,
                                           boost::multiprecision::et_off>;

/// Relative tolerance (2^-64) for comparisons that involve irrational values.
/// Two values whose difference is within this fraction of their magnitude
/// compare equal.
const Real& comparison_margin();

/// Parses "3", "-1/4" or "0.25" into an exact rational.
Rational parse_rational(std::string_view text);

/// "a" for integers, otherwise "a/b" in lowest terms.
std::string to_string(const Rational& value);
std::string to_decimal(const Rational& value, int digits = 6);
std::string to_decimal(const Real& value, int digits = 6);

/// Floor of a rational as a 64-bit integer; throws std::overflow_error if it does not fit.
std::int64_t floor_to_int64(const Rational& value);

/// Floor of a real value, snapping up when the value lies within the comparison
/// margin below an integer.
std::int64_t certified_floor(const Real& value);

/// The exponent p = num/den of a weighted p-norm objective.
class Exponent {
public:
    Exponent() = default;
    Exponent(int num, int den = 1);

    /// Accepts "2", "1/2" or a terminating decimal such as "0.5".
    static Exponent parse(std::string_view text);

    int num() const { return num_; }
    int den() const { return den_; }
    bool is_integer() const { return den_ == 1; }
    Rational rational() const { return Rational(num_, den_); }
    Real real() const;
    std::string str() const;

    friend bool operator==(const Exponent&, const Exponent&) = default;

private:
    int num_ = 1;
    int den_ = 1;
};

/// x^p for x >= 0, evaluated in high precision.
Real real_pow(const Real& x, const Exponent& p);

/// A non-negative objective value. Exact whenever every contributing term is
/// rational (integer exponents); otherwise carried as a high-precision real and
/// compared with comparison_margin().
class Cost {
public:
    Cost() = default;
    explicit Cost(Rational value) : value_(std::move(value)) {}
    explicit Cost(const Real& approx) : exact_(false), approx_(approx) {}

    /// weight * x^p.
    static Cost power(const Rational& x, const Exponent& p, const Rational& weight = Rational(1));

    bool exact() const { return exact_; }
    /// Throws std::logic_error for inexact values.
    const Rational& rational() const;
    Real real() const;

    Cost& operator+=(const Cost& other);
    friend Cost operator+(Cost a, const Cost& b) { return a += b; }
    Cost scaled(const Rational& factor) const;

    /// p-th root of the value, i.e. the p-norm when the value is a sum of w*F^p.
    Real root(const Exponent& p) const;

    /// Exact "a/b" text when exact, otherwise a 30-digit decimal.
    std::string str() const;
    std::string decimal(int digits = 6) const;

    /// Three-way comparison; exact when both sides are exact.
    friend int compare(const Cost& a, const Cost& b);
    friend bool operator<(const Cost& a, const Cost& b) { return compare(a, b) < 0; }
    friend bool operator<=(const Cost& a, const Cost& b) { return compare(a, b) <= 0; }
    friend bool operator>(const Cost& a, const Cost& b) { return compare(a, b) > 0; }
    friend bool operator>=(const Cost& a, const Cost& b) { return compare(a, b) >= 0; }
    friend bool operator==(const Cost& a, const Cost& b) { return compare(a, b) == 0; }

private:
    bool exact_ = true;
    Rational value_{0};
    Real approx_{0};
};

/// Certified three-way comparison of two reals using comparison_margin().
int compare_real(const Real& a, const Real& b);

} // namespace flowsched
