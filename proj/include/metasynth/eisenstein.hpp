#pragma once

#include <array>
#include <ostream>
#include <stdexcept>
#include <utility>

#include "metasynth/bigint.hpp"

namespace metasynth {

/**
 * Eisenstein integer a + b*w where w = exp(2*pi*i/3), so w^2 = -1 - w.
 * The norm form is a^2 - a*b + b^2 >= 0, multiplicative, zero only at 0.
 */
struct Eisenstein {
    Int a{0}; // coefficient of 1
    Int b{0}; // coefficient of w

    Eisenstein() = default;
    Eisenstein(Int a_, Int b_) : a(std::move(a_)), b(std::move(b_)) {}
    explicit Eisenstein(long v) : a(v), b(0) {}

    bool operator==(const Eisenstein& o) const { return a == o.a && b == o.b; }
    bool operator!=(const Eisenstein& o) const { return !(*this == o); }

    bool is_zero() const { return a == 0 && b == 0; }

    Eisenstein operator+(const Eisenstein& o) const { return {a + o.a, b + o.b}; }
    Eisenstein operator-(const Eisenstein& o) const { return {a - o.a, b - o.b}; }
    Eisenstein operator-() const { return {-a, -b}; }

    Eisenstein operator*(const Eisenstein& o) const
    {
        // (a + b w)(c + d w) = ac + (ad + bc) w + bd w^2,  w^2 = -1 - w
        Int bd = b * o.b;
        return {a * o.a - bd, a * o.b + b * o.a - bd};
    }

    Eisenstein conj() const { return {a - b, -b}; }

    Int norm() const { return a * a - a * b + b * b; }

    /// The six units: 1, 1+w, w, -1, -1-w, -w (successive multiplications by 1+w).
    static const std::array<Eisenstein, 6>& units()
    {
        static const std::array<Eisenstein, 6> u = {
            Eisenstein{Int(1), Int(0)},  Eisenstein{Int(1), Int(1)},  Eisenstein{Int(0), Int(1)},
            Eisenstein{Int(-1), Int(0)}, Eisenstein{Int(-1), Int(-1)}, Eisenstein{Int(0), Int(-1)},
        };
        return u;
    }

    /**
     * Canonical representative among the six associates: the one with
     * a > 0 and b >= 0, ties broken by smallest b. Zero maps to zero.
     */
    Eisenstein canonical_associate() const
    {
        if (is_zero())
            return *this;
        bool found = false;
        Eisenstein best;
        for (const auto& u : units()) {
            Eisenstein c = *this * u;
            if (c.a > 0 && c.b >= 0) {
                if (!found || c.b < best.b) {
                    best = c;
                    found = true;
                }
            }
        }
        if (!found)
            throw std::logic_error("canonical_associate: no associate in the canonical sector");
        return best;
    }

    friend std::ostream& operator<<(std::ostream& os, const Eisenstein& z)
    {
        os << z.a;
        if (z.b >= 0)
            os << "+" << z.b << "w";
        else
            os << z.b << "w";
        return os;
    }
};

/**
 * Euclidean division: x = q*y + r with norm(r) < norm(y).
 * q is the componentwise nearest-integer rounding of the exact field
 * quotient x * conj(y) / norm(y).
 */
inline std::pair<Eisenstein, Eisenstein> euclid_div(const Eisenstein& x, const Eisenstein& y)
{
    if (y.is_zero())
        throw std::domain_error("euclid_div: division by zero");
    Eisenstein p = x * y.conj();
    Int n = y.norm();
    Eisenstein q(rat_round_half_down(Rat(p.a, n)), rat_round_half_down(Rat(p.b, n)));
    Eisenstein r = x - y * q;
    return {q, r};
}

/// Greatest common divisor, returned as the canonical associate.
inline Eisenstein eis_gcd(Eisenstein x, Eisenstein y)
{
    if (x.is_zero() && y.is_zero())
        throw std::domain_error("gcd(0, 0) is undefined");
    while (!y.is_zero()) {
        Eisenstein r = euclid_div(x, y).second;
        x = y;
        y = r;
    }
    return x.canonical_associate();
}

} // namespace metasynth
