#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>

namespace metasynth {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int rat_num(const Rat& q) { return boost::multiprecision::numerator(q); }
inline Int rat_den(const Rat& q) { return boost::multiprecision::denominator(q); }

/// n/d as an exact rational; handles negative d (the cpp_rational
/// two-argument constructor requires a positive denominator).
inline Rat make_rat(const Int& n, const Int& d)
{
    if (d == 0)
        throw std::domain_error("make_rat: zero denominator");
    if (d < 0)
        return Rat(-n, -d);
    return Rat(n, d);
}

/// Floor of an exact rational.
inline Int rat_floor(const Rat& q)
{
    Int n = rat_num(q), d = rat_den(q);
    Int quo = n / d;
    if (n < 0 && n % d != 0)
        quo -= 1;
    return quo;
}

inline Int rat_ceil(const Rat& q)
{
    return -rat_floor(-q);
}

/// Nearest integer; exact halves round toward the smaller integer.
inline Int rat_round_half_down(const Rat& q)
{
    Int fl = rat_floor(q);
    Rat frac = q - Rat(fl);
    if (frac > Rat(1, 2))
        return fl + 1;
    return fl;
}

/// Nearest integer; exact halves round away from zero toward +inf (classic round).
inline Int rat_round(const Rat& q)
{
    Int fl = rat_floor(q);
    Rat frac = q - Rat(fl);
    if (frac >= Rat(1, 2))
        return fl + 1;
    return fl;
}

inline Int int_gcd(Int a, Int b)
{
    return boost::multiprecision::gcd(a, b);
}

inline Int int_abs(const Int& a) { return a < 0 ? Int(-a) : a; }

/// Floor of the integer square root; n must be nonnegative.
inline Int isqrt(const Int& n)
{
    if (n < 0)
        throw std::domain_error("isqrt: negative argument");
    return boost::multiprecision::sqrt(n);
}

inline Int int_pow(Int base, unsigned exp)
{
    Int r = 1;
    while (exp > 0) {
        if (exp & 1u)
            r *= base;
        base *= base;
        exp >>= 1u;
    }
    return r;
}

inline Int pow3(unsigned k) { return int_pow(Int(3), k); }

/// Number of bits in |n|; bit_length(0) == 0.
inline unsigned bit_length(const Int& n)
{
    if (n == 0)
        return 0;
    return static_cast<unsigned>(boost::multiprecision::msb(int_abs(n))) + 1;
}

/// Smallest c with 2^c >= q, for positive rational q (exact ceil(log2)).
inline long ceil_log2(const Rat& q)
{
    if (q <= 0)
        throw std::domain_error("ceil_log2: nonpositive argument");
    Int n = rat_num(q), d = rat_den(q);
    long c = static_cast<long>(bit_length(n)) - static_cast<long>(bit_length(d));
    auto pow2 = [](long e) {
        if (e >= 0)
            return Rat(int_pow(2, static_cast<unsigned>(e)));
        return Rat(1, int_pow(2, static_cast<unsigned>(-e)));
    };
    while (pow2(c) < q)
        ++c;
    while (c > 0 && pow2(c - 1) >= q)
        --c;
    while (c <= 0 && pow2(c - 1) >= q)
        --c;
    return c;
}

/// Parse a decimal string ("-12.375", "0.5e-3" not supported) into an exact rational.
inline Rat rat_from_decimal(const std::string& s)
{
    if (s.empty())
        throw std::invalid_argument("empty decimal string");
    size_t i = 0;
    bool neg = false;
    if (s[i] == '+' || s[i] == '-') {
        neg = (s[i] == '-');
        ++i;
    }
    Int num = 0;
    Int den = 1;
    bool seen_digit = false, seen_dot = false;
    for (; i < s.size(); ++i) {
        char c = s[i];
        if (c == '.') {
            if (seen_dot)
                throw std::invalid_argument("malformed decimal: " + s);
            seen_dot = true;
        } else if (c >= '0' && c <= '9') {
            num = num * 10 + (c - '0');
            if (seen_dot)
                den *= 10;
            seen_digit = true;
        } else {
            throw std::invalid_argument("malformed decimal: " + s);
        }
    }
    if (!seen_digit)
        throw std::invalid_argument("malformed decimal: " + s);
    Rat r(num, den);
    return neg ? Rat(-r) : r;
}

/// Parse "num/den" or a plain decimal into an exact rational.
inline Rat rat_from_string(const std::string& s)
{
    auto slash = s.find('/');
    if (slash == std::string::npos)
        return rat_from_decimal(s);
    Rat num = rat_from_decimal(s.substr(0, slash));
    Rat den = rat_from_decimal(s.substr(slash + 1));
    if (den == 0)
        throw std::invalid_argument("zero denominator: " + s);
    return num / den;
}

} // namespace metasynth
