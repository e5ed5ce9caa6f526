#include "flowsched/numeric.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace flowsched {

namespace {

Real to_real(const Rational& value)
{
    return Real(boost::multiprecision::numerator(value)) /
           Real(boost::multiprecision::denominator(value));
}

BigInt parse_integer(std::string_view text, std::string_view whole)
{
    if (text.empty())
        throw std::invalid_argument("malformed number '" + std::string(whole) + "'");
    for (char c : text)
        if (c < '0' || c > '9')
            throw std::invalid_argument("malformed number '" + std::string(whole) + "'");
    return BigInt(std::string(text));
}

} // namespace

const Real& comparison_margin()
{
    static const Real margin = boost::multiprecision::ldexp(Real(1), -64);
    return margin;
}

Rational parse_rational(std::string_view text)
{
    const std::string_view whole = text;
    bool negative = false;
    if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }
    Rational result;
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        BigInt num = parse_integer(text.substr(0, slash), whole);
        BigInt den = parse_integer(text.substr(slash + 1), whole);
        if (den == 0)
            throw std::invalid_argument("zero denominator in '" + std::string(whole) + "'");
        result = Rational(num, den);
    } else if (auto dot = text.find('.'); dot != std::string_view::npos) {
        std::string_view int_part = text.substr(0, dot);
        std::string_view frac_part = text.substr(dot + 1);
        if (int_part.empty() && frac_part.empty())
            throw std::invalid_argument("malformed number '" + std::string(whole) + "'");
        BigInt int_value = int_part.empty() ? BigInt(0) : parse_integer(int_part, whole);
        BigInt frac_value = frac_part.empty() ? BigInt(0) : parse_integer(frac_part, whole);
        BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(frac_part.size()));
        result = Rational(int_value * scale + frac_value, scale);
    } else {
        result = Rational(parse_integer(text, whole));
    }
    return negative ? Rational(-result) : result;
}

std::string to_string(const Rational& value)
{
    const BigInt num = boost::multiprecision::numerator(value);
    const BigInt den = boost::multiprecision::denominator(value);
    if (den == 1)
        return num.str();
    return num.str() + "/" + den.str();
}

std::string to_decimal(const Rational& value, int digits)
{
    const BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(digits));
    const Rational scaled = value * scale;
    BigInt num = boost::multiprecision::numerator(scaled);
    const BigInt den = boost::multiprecision::denominator(scaled);
    const bool negative = num < 0;
    if (negative)
        num = -num;
    // round half away from zero
    BigInt rounded = (2 * num + den) / (2 * den);
    std::string text = rounded.str();
    if (digits > 0) {
        if (text.size() <= static_cast<std::size_t>(digits))
            text.insert(0, static_cast<std::size_t>(digits) + 1 - text.size(), '0');
        text.insert(text.size() - static_cast<std::size_t>(digits), ".");
    }
    return (negative && rounded != 0 ? "-" : "") + text;
}

std::string to_decimal(const Real& value, int digits)
{
    return value.str(digits, std::ios_base::fixed);
}

std::int64_t floor_to_int64(const Rational& value)
{
    const BigInt num = boost::multiprecision::numerator(value);
    const BigInt den = boost::multiprecision::denominator(value);
    BigInt q = num / den;
    if (num < 0 && q * den != num)
        q -= 1;
    if (q > std::numeric_limits<std::int64_t>::max() || q < std::numeric_limits<std::int64_t>::min())
        throw std::overflow_error("value does not fit in 64 bits");
    return q.convert_to<std::int64_t>();
}

std::int64_t certified_floor(const Real& value)
{
    Real down = boost::multiprecision::floor(value);
    const Real up = down + 1;
    const Real magnitude = boost::multiprecision::abs(value);
    const Real scale = magnitude > 1 ? magnitude : Real(1);
    if (up - value <= comparison_margin() * scale)
        down = up;
    if (down > Real(std::numeric_limits<std::int64_t>::max()))
        throw std::overflow_error("value does not fit in 64 bits");
    return down.convert_to<std::int64_t>();
}

int compare_real(const Real& a, const Real& b)
{
    const Real diff = a - b;
    const Real abs_a = boost::multiprecision::abs(a);
    const Real abs_b = boost::multiprecision::abs(b);
    const Real scale = std::max({Real(1), abs_a, abs_b});
    if (boost::multiprecision::abs(diff) <= comparison_margin() * scale)
        return 0;
    return diff < 0 ? -1 : 1;
}

Exponent::Exponent(int num, int den)
{
    if (num <= 0 || den <= 0)
        throw std::invalid_argument("exponent must be a positive rational");
    const int g = std::gcd(num, den);
    num_ = num / g;
    den_ = den / g;
}

Exponent Exponent::parse(std::string_view text)
{
    const Rational value = parse_rational(text);
    const BigInt num = boost::multiprecision::numerator(value);
    const BigInt den = boost::multiprecision::denominator(value);
    if (num <= 0)
        throw std::invalid_argument("exponent must be positive, got '" + std::string(text) + "'");
    if (num > 1'000'000 || den > 1'000'000)
        throw std::invalid_argument("exponent '" + std::string(text) + "' has too large a numerator or denominator");
    return Exponent(num.convert_to<int>(), den.convert_to<int>());
}

Real Exponent::real() const
{
    return Real(num_) / Real(den_);
}

std::string Exponent::str() const
{
    return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
}

Real real_pow(const Real& x, const Exponent& p)
{
    if (x == 0)
        return Real(0);
    if (p.is_integer())
        return boost::multiprecision::pow(x, p.num());
    return boost::multiprecision::pow(x, p.real());
}

Cost Cost::power(const Rational& x, const Exponent& p, const Rational& weight)
{
    if (x < 0)
        throw std::invalid_argument("cannot raise a negative flow time to a power");
    if (p.is_integer()) {
        const auto k = static_cast<unsigned>(p.num());
        const BigInt num = boost::multiprecision::pow(BigInt(boost::multiprecision::numerator(x)), k);
        const BigInt den = boost::multiprecision::pow(BigInt(boost::multiprecision::denominator(x)), k);
        return Cost(Rational(num, den) * weight);
    }
    return Cost(Real(to_real(weight) * real_pow(to_real(x), p)));
}

const Rational& Cost::rational() const
{
    if (!exact_)
        throw std::logic_error("cost has no exact rational value");
    return value_;
}

Real Cost::real() const
{
    return exact_ ? to_real(value_) : approx_;
}

Cost& Cost::operator+=(const Cost& other)
{
    if (exact_ && other.exact_) {
        value_ += other.value_;
    } else {
        approx_ = real() + other.real();
        exact_ = false;
    }
    return *this;
}

Cost Cost::scaled(const Rational& factor) const
{
    if (exact_)
        return Cost(Rational(value_ * factor));
    return Cost(Real(approx_ * to_real(factor)));
}

Real Cost::root(const Exponent& p) const
{
    const Real value = real();
    if (value == 0)
        return value;
    if (p.num() == 1)
        return boost::multiprecision::pow(value, p.den());
    return boost::multiprecision::pow(value, Real(p.den()) / Real(p.num()));
}

std::string Cost::str() const
{
    return exact_ ? to_string(value_) : to_decimal(approx_, 30);
}

std::string Cost::decimal(int digits) const
{
    return exact_ ? to_decimal(value_, digits) : to_decimal(approx_, digits);
}

int compare(const Cost& a, const Cost& b)
{
    if (a.exact_ && b.exact_)
        return a.value_ < b.value_ ? -1 : (b.value_ < a.value_ ? 1 : 0);
    return compare_real(a.real(), b.real());
}

} // namespace flowsched
