#pragma once

#include <mpfr.h>

#include <string>
#include <utility>

#include "metasynth/bigint.hpp"

namespace metasynth {

/// Thrown when an interval comparison stays indeterminate after the
/// allowed precision escalations.
struct PrecisionError : std::runtime_error {
    explicit PrecisionError(const std::string& what) : std::runtime_error(what) {}
};

/// Closed interval [lo, hi] with MPFR endpoints and outward rounding.
/// Every operation produces an enclosure of the exact result at the
/// precision of the operands (widened to the max of the two).
class Interval {
  public:
    Interval() { init(64); mpfr_set_zero(lo_, 1); mpfr_set_zero(hi_, 1); }

    explicit Interval(mpfr_prec_t prec) { init(prec); mpfr_set_zero(lo_, 1); mpfr_set_zero(hi_, 1); }

    Interval(const Interval& o)
    {
        init(mpfr_get_prec(o.lo_));
        mpfr_set(lo_, o.lo_, MPFR_RNDD);
        mpfr_set(hi_, o.hi_, MPFR_RNDU);
    }

    Interval(Interval&& o) noexcept
    {
        lo_[0] = o.lo_[0];
        hi_[0] = o.hi_[0];
        o.moved_ = true;
    }

    Interval& operator=(Interval o) noexcept
    {
        swap(*this, o);
        return *this;
    }

    ~Interval()
    {
        if (!moved_) {
            mpfr_clear(lo_);
            mpfr_clear(hi_);
        }
    }

    friend void swap(Interval& a, Interval& b) noexcept
    {
        std::swap(a.lo_[0], b.lo_[0]);
        std::swap(a.hi_[0], b.hi_[0]);
        std::swap(a.moved_, b.moved_);
    }

    static Interval from_int(long v, mpfr_prec_t prec)
    {
        Interval r(prec);
        mpfr_set_si(r.lo_, v, MPFR_RNDD);
        mpfr_set_si(r.hi_, v, MPFR_RNDU);
        return r;
    }

    static Interval from_bigint(const Int& v, mpfr_prec_t prec);
    static Interval from_rational(const Rat& q, mpfr_prec_t prec);

    /// Exact dyadic endpoints as rationals (MPFR values are dyadic).
    Rat lower_rational() const;
    Rat upper_rational() const;

    mpfr_prec_t precision() const { return mpfr_get_prec(lo_); }
    const mpfr_t& lo() const { return lo_; }
    const mpfr_t& hi() const { return hi_; }
    // raw endpoint access for constant builders
    mpfr_ptr lo_raw() { return lo_; }
    mpfr_ptr hi_raw() { return hi_; }

    bool contains_zero() const { return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0; }
    bool is_certainly_positive() const { return mpfr_sgn(lo_) > 0; }
    bool is_certainly_negative() const { return mpfr_sgn(hi_) < 0; }

    Interval operator-() const
    {
        Interval r(precision());
        mpfr_neg(r.lo_, hi_, MPFR_RNDD);
        mpfr_neg(r.hi_, lo_, MPFR_RNDU);
        return r;
    }

    friend Interval operator+(const Interval& a, const Interval& b)
    {
        Interval r(join_prec(a, b));
        mpfr_add(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
        mpfr_add(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
        return r;
    }

    friend Interval operator-(const Interval& a, const Interval& b)
    {
        Interval r(join_prec(a, b));
        mpfr_sub(r.lo_, a.lo_, b.hi_, MPFR_RNDD);
        mpfr_sub(r.hi_, a.hi_, b.lo_, MPFR_RNDU);
        return r;
    }

    friend Interval operator*(const Interval& a, const Interval& b);
    friend Interval operator/(const Interval& a, const Interval& b);

    Interval& operator+=(const Interval& o) { *this = *this + o; return *this; }
    Interval& operator-=(const Interval& o) { *this = *this - o; return *this; }
    Interval& operator*=(const Interval& o) { *this = *this * o; return *this; }

    /// Square root of a nonnegative enclosure; lower endpoint clamped to 0.
    Interval sqrt() const;
    Interval square() const;
    Interval abs() const;
    /// log base 3 of a certainly-positive enclosure.
    Interval log3() const;

    /// True iff every point of *this is < every point of o.
    bool certainly_less(const Interval& o) const { return mpfr_cmp(hi_, o.lo_) < 0; }
    bool certainly_greater(const Interval& o) const { return o.certainly_less(*this); }
    bool overlaps(const Interval& o) const
    {
        return !certainly_less(o) && !o.certainly_less(*this);
    }

    double mid_double() const
    {
        mpfr_t m;
        mpfr_init2(m, 64);
        mpfr_add(m, lo_, hi_, MPFR_RNDN);
        mpfr_div_ui(m, m, 2, MPFR_RNDN);
        double d = mpfr_get_d(m, MPFR_RNDN);
        mpfr_clear(m);
        return d;
    }

    /// Midpoint rendered in fixed decimal notation (deterministic).
    std::string mid_decimal(int digits) const;

    /// Total-order comparison key on the midpoint at this precision.
    int compare_midpoints(const Interval& o) const;

    Rat width_rational() const { return upper_rational() - lower_rational(); }

  private:
    static mpfr_prec_t join_prec(const Interval& a, const Interval& b)
    {
        return std::max(a.precision(), b.precision());
    }

    void init(mpfr_prec_t prec)
    {
        mpfr_init2(lo_, prec);
        mpfr_init2(hi_, prec);
    }

    mpfr_t lo_, hi_;
    bool moved_ = false;
};

// Constants, freshly computed at each requested precision.
Interval sqrt_int_interval(unsigned n, mpfr_prec_t prec);      // sqrt(n)
Interval sqrt3_pow_interval(long k, mpfr_prec_t prec);         // sqrt(3)^k, k may be negative
Interval cos_pi_frac_interval(const Rat& frac, mpfr_prec_t prec); // cos(pi * frac)
Interval sin_pi_frac_interval(const Rat& frac, mpfr_prec_t prec); // sin(pi * frac)
Interval pow3_interval(const Rat& exponent, mpfr_prec_t prec);    // 3^exponent

} // namespace metasynth
