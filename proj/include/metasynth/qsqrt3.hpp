#pragma once

#include <array>
#include <ostream>
#include <stdexcept>

#include "metasynth/bigint.hpp"
#include "metasynth/eisenstein.hpp"
#include "metasynth/interval.hpp"

namespace metasynth {

/**
 * Element a + b*sqrt(3) of the real quadratic field Q[sqrt(3)], with exact
 * rational components. Ordered field: sign, comparisons and floor are exact.
 */
struct QSqrt3 {
    Rat a{0};
    Rat b{0};

    QSqrt3() = default;
    /* implicit */ QSqrt3(Rat a_) : a(std::move(a_)) {}
    QSqrt3(Rat a_, Rat b_) : a(std::move(a_)), b(std::move(b_)) {}

    bool operator==(const QSqrt3& o) const { return a == o.a && b == o.b; }
    bool operator!=(const QSqrt3& o) const { return !(*this == o); }

    bool is_zero() const { return a == 0 && b == 0; }
    bool is_rational() const { return b == 0; }

    QSqrt3 operator+(const QSqrt3& o) const { return {a + o.a, b + o.b}; }
    QSqrt3 operator-(const QSqrt3& o) const { return {a - o.a, b - o.b}; }
    QSqrt3 operator-() const { return {-a, -b}; }
    QSqrt3 operator*(const QSqrt3& o) const
    {
        return {a * o.a + Rat(3) * b * o.b, a * o.b + b * o.a};
    }

    QSqrt3 inverse() const
    {
        Rat d = a * a - Rat(3) * b * b;
        if (d == 0)
            throw std::domain_error("QSqrt3: zero has no inverse");
        return {a / d, -b / d};
    }

    QSqrt3 operator/(const QSqrt3& o) const { return *this * o.inverse(); }

    /// Exact sign of a + b*sqrt(3).
    int sign() const
    {
        int sa = a == 0 ? 0 : (a > 0 ? 1 : -1);
        int sb = b == 0 ? 0 : (b > 0 ? 1 : -1);
        if (sb == 0)
            return sa;
        if (sa == 0)
            return sb;
        if (sa == sb)
            return sa;
        // opposite signs: compare a^2 with 3 b^2
        Rat aa = a * a, bb3 = Rat(3) * b * b;
        if (aa == bb3)
            return 0; // impossible for nonzero b with rational a, kept for safety
        return (aa > bb3) ? sa : sb;
    }

    bool operator<(const QSqrt3& o) const { return (*this - o).sign() < 0; }
    bool operator<=(const QSqrt3& o) const { return (*this - o).sign() <= 0; }
    bool operator>(const QSqrt3& o) const { return (*this - o).sign() > 0; }
    bool operator>=(const QSqrt3& o) const { return (*this - o).sign() >= 0; }

    /// Exact floor, via an interval estimate certified by exact sign checks.
    Int floor() const
    {
        if (b == 0)
            return rat_floor(a);
        Interval v = eval(96);
        Int m = rat_floor(v.lower_rational());
        // certify m <= x < m+1, adjusting if the estimate was off
        while ((*this - QSqrt3(Rat(m))).sign() < 0)
            m -= 1;
        while ((*this - QSqrt3(Rat(m + 1))).sign() >= 0)
            m += 1;
        return m;
    }

    /// Nearest integer, halves toward -inf on the lower side (deterministic).
    Int round_nearest() const
    {
        QSqrt3 shifted = *this + QSqrt3(Rat(1, 2));
        Int f = shifted.floor();
        // exact half: floor(x + 1/2) already implements round-half-up
        return f;
    }

    Interval eval(mpfr_prec_t prec) const
    {
        Interval r = Interval::from_rational(a, prec);
        if (b != 0)
            r += Interval::from_rational(b, prec) * sqrt_int_interval(3, prec);
        return r;
    }

    friend std::ostream& operator<<(std::ostream& os, const QSqrt3& x)
    {
        return os << x.a << "+" << x.b << "*sqrt3";
    }
};

using Vec4Q3 = std::array<QSqrt3, 4>;
using Vec2Q3 = std::array<QSqrt3, 2>;

inline QSqrt3 dot(const Vec4Q3& x, const Vec4Q3& y)
{
    QSqrt3 s;
    for (int i = 0; i < 4; ++i)
        s = s + x[i] * y[i];
    return s;
}

inline QSqrt3 dot(const Vec2Q3& x, const Vec2Q3& y)
{
    return x[0] * y[0] + x[1] * y[1];
}

/**
 * Euclidean embedding of an Eisenstein pair (u, v) as a 4-vector:
 * u = a1 + a2 w maps to (a1 - a2/2, a2 sqrt(3)/2) and likewise v.
 * The squared Euclidean length equals norm(u) + norm(v) exactly.
 */
inline Vec4Q3 embed_eisenstein_pair(const Eisenstein& u, const Eisenstein& v)
{
    auto half = [](const Int& n) { return Rat(n, 2); };
    return {QSqrt3(Rat(u.a) - half(u.b)), QSqrt3(Rat(0), half(u.b)),
            QSqrt3(Rat(v.a) - half(v.b)), QSqrt3(Rat(0), half(v.b))};
}

/**
 * Grid-coordinate change: iota maps the integer grid Z^4 onto the Eisenstein
 * embedding (iota(e1)=e1, iota(e2)=(-1/2, sqrt3/2, 0, 0), same on the second
 * plane); iota_inverse sends the Eisenstein grid back onto Z^4.
 */
inline const std::array<Vec4Q3, 4>& iota_columns()
{
    static const std::array<Vec4Q3, 4> cols = {
        Vec4Q3{QSqrt3(Rat(1)), QSqrt3(), QSqrt3(), QSqrt3()},
        Vec4Q3{QSqrt3(Rat(-1, 2)), QSqrt3(Rat(0), Rat(1, 2)), QSqrt3(), QSqrt3()},
        Vec4Q3{QSqrt3(), QSqrt3(), QSqrt3(Rat(1)), QSqrt3()},
        Vec4Q3{QSqrt3(), QSqrt3(), QSqrt3(Rat(-1, 2)), QSqrt3(Rat(0), Rat(1, 2))},
    };
    return cols;
}

inline const std::array<Vec4Q3, 4>& iota_inverse_columns()
{
    // per 2x2 block: [[1, -1/2],[0, sqrt3/2]]^-1 = [[1, 1/sqrt3],[0, 2/sqrt3]]
    //              = [[1, sqrt3/3],[0, 2 sqrt3/3]]
    static const std::array<Vec4Q3, 4> cols = {
        Vec4Q3{QSqrt3(Rat(1)), QSqrt3(), QSqrt3(), QSqrt3()},
        Vec4Q3{QSqrt3(Rat(0), Rat(1, 3)), QSqrt3(Rat(0), Rat(2, 3)), QSqrt3(), QSqrt3()},
        Vec4Q3{QSqrt3(), QSqrt3(), QSqrt3(Rat(1)), QSqrt3()},
        Vec4Q3{QSqrt3(), QSqrt3(), QSqrt3(Rat(0), Rat(1, 3)), QSqrt3(Rat(0), Rat(2, 3))},
    };
    return cols;
}

inline Vec4Q3 apply_columns(const std::array<Vec4Q3, 4>& cols, const Vec4Q3& x)
{
    Vec4Q3 r{QSqrt3(), QSqrt3(), QSqrt3(), QSqrt3()};
    for (int j = 0; j < 4; ++j)
        for (int i = 0; i < 4; ++i)
            r[i] = r[i] + cols[j][i] * x[j];
    return r;
}

} // namespace metasynth
