#include "metasynth/interval.hpp"

#include <gmp.h>

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <vector>

namespace metasynth {

namespace {

void set_from_bigint(mpfr_t out, const Int& v, mpfr_rnd_t rnd)
{
    mpz_t z;
    mpz_init(z);
    mpz_set_str(z, v.str().c_str(), 10);
    mpfr_set_z(out, z, rnd);
    mpz_clear(z);
}

Int bigint_from_mpz(const mpz_t z)
{
    char* s = mpz_get_str(nullptr, 10, z);
    Int r(s);
    void (*freefunc)(void*, size_t);
    mp_get_memory_functions(nullptr, nullptr, &freefunc);
    freefunc(s, std::strlen(s) + 1);
    return r;
}

Rat rational_from_mpfr(const mpfr_t x)
{
    if (mpfr_zero_p(x))
        return Rat(0);
    if (!mpfr_number_p(x))
        throw PrecisionError("non-finite interval endpoint");
    mpz_t m;
    mpz_init(m);
    mpfr_exp_t e = mpfr_get_z_2exp(m, x);
    Int mant = bigint_from_mpz(m);
    mpz_clear(m);
    if (e >= 0)
        return Rat(mant * int_pow(2, static_cast<unsigned>(e)));
    return Rat(mant, int_pow(2, static_cast<unsigned>(-e)));
}

} // namespace

Interval Interval::from_bigint(const Int& v, mpfr_prec_t prec)
{
    Interval r(prec);
    set_from_bigint(r.lo_, v, MPFR_RNDD);
    set_from_bigint(r.hi_, v, MPFR_RNDU);
    return r;
}

Interval Interval::from_rational(const Rat& q, mpfr_prec_t prec)
{
    Interval num = from_bigint(rat_num(q), prec);
    Interval den = from_bigint(rat_den(q), prec);
    return num / den;
}

Rat Interval::lower_rational() const { return rational_from_mpfr(lo_); }
Rat Interval::upper_rational() const { return rational_from_mpfr(hi_); }

Interval operator*(const Interval& a, const Interval& b)
{
    Interval r(Interval::join_prec(a, b));
    mpfr_t c[4];
    for (auto& x : c)
        mpfr_init2(x, r.precision());
    mpfr_mul(c[0], a.lo_, b.lo_, MPFR_RNDD);
    mpfr_mul(c[1], a.lo_, b.hi_, MPFR_RNDD);
    mpfr_mul(c[2], a.hi_, b.lo_, MPFR_RNDD);
    mpfr_mul(c[3], a.hi_, b.hi_, MPFR_RNDD);
    mpfr_set(r.lo_, c[0], MPFR_RNDD);
    for (int i = 1; i < 4; ++i)
        mpfr_min(r.lo_, r.lo_, c[i], MPFR_RNDD);
    mpfr_mul(c[0], a.lo_, b.lo_, MPFR_RNDU);
    mpfr_mul(c[1], a.lo_, b.hi_, MPFR_RNDU);
    mpfr_mul(c[2], a.hi_, b.lo_, MPFR_RNDU);
    mpfr_mul(c[3], a.hi_, b.hi_, MPFR_RNDU);
    mpfr_set(r.hi_, c[0], MPFR_RNDU);
    for (int i = 1; i < 4; ++i)
        mpfr_max(r.hi_, r.hi_, c[i], MPFR_RNDU);
    for (auto& x : c)
        mpfr_clear(x);
    return r;
}

Interval operator/(const Interval& a, const Interval& b)
{
    if (b.contains_zero())
        throw PrecisionError("interval division by an enclosure of zero");
    Interval r(Interval::join_prec(a, b));
    mpfr_t c[4];
    for (auto& x : c)
        mpfr_init2(x, r.precision());
    mpfr_div(c[0], a.lo_, b.lo_, MPFR_RNDD);
    mpfr_div(c[1], a.lo_, b.hi_, MPFR_RNDD);
    mpfr_div(c[2], a.hi_, b.lo_, MPFR_RNDD);
    mpfr_div(c[3], a.hi_, b.hi_, MPFR_RNDD);
    mpfr_set(r.lo_, c[0], MPFR_RNDD);
    for (int i = 1; i < 4; ++i)
        mpfr_min(r.lo_, r.lo_, c[i], MPFR_RNDD);
    mpfr_div(c[0], a.lo_, b.lo_, MPFR_RNDU);
    mpfr_div(c[1], a.lo_, b.hi_, MPFR_RNDU);
    mpfr_div(c[2], a.hi_, b.lo_, MPFR_RNDU);
    mpfr_div(c[3], a.hi_, b.hi_, MPFR_RNDU);
    mpfr_set(r.hi_, c[0], MPFR_RNDU);
    for (int i = 1; i < 4; ++i)
        mpfr_max(r.hi_, r.hi_, c[i], MPFR_RNDU);
    for (auto& x : c)
        mpfr_clear(x);
    return r;
}

Interval Interval::sqrt() const
{
    if (mpfr_sgn(hi_) < 0)
        throw PrecisionError("sqrt of a certainly-negative interval");
    Interval r(precision());
    if (mpfr_sgn(lo_) <= 0)
        mpfr_set_zero(r.lo_, 1);
    else
        mpfr_sqrt(r.lo_, lo_, MPFR_RNDD);
    mpfr_sqrt(r.hi_, hi_, MPFR_RNDU);
    return r;
}

Interval Interval::square() const
{
    Interval r = (*this) * (*this);
    if (contains_zero() && mpfr_sgn(r.lo_) < 0)
        mpfr_set_zero(r.lo_, 1);
    return r;
}

Interval Interval::abs() const
{
    Interval r(precision());
    if (mpfr_sgn(lo_) >= 0)
        return *this;
    if (mpfr_sgn(hi_) <= 0)
        return -*this;
    mpfr_set_zero(r.lo_, 1);
    mpfr_neg(r.hi_, lo_, MPFR_RNDU);
    mpfr_max(r.hi_, r.hi_, hi_, MPFR_RNDU);
    return r;
}

Interval Interval::log3() const
{
    if (!is_certainly_positive())
        throw PrecisionError("log3 of a non-positive enclosure");
    Interval r(precision());
    mpfr_t l3lo, l3hi;
    mpfr_init2(l3lo, precision());
    mpfr_init2(l3hi, precision());
    mpfr_set_ui(l3lo, 3, MPFR_RNDN);
    mpfr_log(l3hi, l3lo, MPFR_RNDU);
    mpfr_log(l3lo, l3lo, MPFR_RNDD);
    mpfr_t t;
    mpfr_init2(t, precision());
    // log(x)/log(3), monotone; sign of log(x) decides which log3 bound divides
    mpfr_log(t, lo_, MPFR_RNDD);
    if (mpfr_sgn(t) >= 0)
        mpfr_div(r.lo_, t, l3hi, MPFR_RNDD);
    else
        mpfr_div(r.lo_, t, l3lo, MPFR_RNDD);
    mpfr_log(t, hi_, MPFR_RNDU);
    if (mpfr_sgn(t) >= 0)
        mpfr_div(r.hi_, t, l3lo, MPFR_RNDU);
    else
        mpfr_div(r.hi_, t, l3hi, MPFR_RNDU);
    mpfr_clear(t);
    mpfr_clear(l3lo);
    mpfr_clear(l3hi);
    return r;
}

std::string Interval::mid_decimal(int digits) const
{
    mpfr_t m;
    mpfr_init2(m, precision());
    mpfr_add(m, lo_, hi_, MPFR_RNDN);
    mpfr_div_ui(m, m, 2, MPFR_RNDN);
    char buf[512];
    mpfr_snprintf(buf, sizeof buf, "%.*Rf", digits, m);
    mpfr_clear(m);
    return std::string(buf);
}

int Interval::compare_midpoints(const Interval& o) const
{
    mpfr_t a, b;
    mpfr_init2(a, std::max(precision(), o.precision()) + 2);
    mpfr_init2(b, std::max(precision(), o.precision()) + 2);
    mpfr_add(a, lo_, hi_, MPFR_RNDN);
    mpfr_add(b, o.lo_, o.hi_, MPFR_RNDN);
    int c = mpfr_cmp(a, b);
    mpfr_clear(a);
    mpfr_clear(b);
    return c;
}

Interval sqrt_int_interval(unsigned n, mpfr_prec_t prec)
{
    Interval r(prec);
    mpfr_sqrt_ui(r.lo_raw(), n, MPFR_RNDD);
    mpfr_sqrt_ui(r.hi_raw(), n, MPFR_RNDU);
    return r;
}

Interval sqrt3_pow_interval(long k, mpfr_prec_t prec)
{
    long half = k >= 0 ? k / 2 : -((-k + 1) / 2);
    long rem = k - 2 * half; // 0 or 1
    Int p = half >= 0 ? pow3(static_cast<unsigned>(half)) : Int(1);
    Interval base = half >= 0 ? Interval::from_bigint(p, prec)
                              : Interval::from_rational(Rat(1, pow3(static_cast<unsigned>(-half))), prec);
    if (rem == 0)
        return base;
    return base * sqrt_int_interval(3, prec);
}

namespace {

Interval pi_interval(mpfr_prec_t prec)
{
    Interval r(prec);
    mpfr_const_pi(r.lo_raw(), MPFR_RNDD);
    mpfr_const_pi(r.hi_raw(), MPFR_RNDU);
    return r;
}

/// Monotone-safe trig enclosure: evaluate cos/sin at both endpoints with both
/// roundings and take min/max. Valid only while the argument interval stays
/// inside a monotone branch, which holds for the tiny widths produced here;
/// widen the result by one ulp bracket via directed rounding anyway.
Interval trig_enclosure(const Interval& arg, bool is_cos, mpfr_prec_t prec)
{
    mpfr_t vals[4];
    for (auto& v : vals)
        mpfr_init2(v, prec);
    auto eval = [&](const mpfr_t& x, mpfr_rnd_t rnd, mpfr_t out) {
        if (is_cos)
            mpfr_cos(out, x, rnd);
        else
            mpfr_sin(out, x, rnd);
    };
    eval(arg.lo(), MPFR_RNDD, vals[0]);
    eval(arg.hi(), MPFR_RNDD, vals[1]);
    eval(arg.lo(), MPFR_RNDU, vals[2]);
    eval(arg.hi(), MPFR_RNDU, vals[3]);
    Interval r(prec);
    mpfr_min(r.lo_raw(), vals[0], vals[1], MPFR_RNDD);
    mpfr_max(r.hi_raw(), vals[2], vals[3], MPFR_RNDU);
    for (auto& v : vals)
        mpfr_clear(v);
    return r;
}

} // namespace

Interval cos_pi_frac_interval(const Rat& frac, mpfr_prec_t prec)
{
    Interval arg = pi_interval(prec + 16) * Interval::from_rational(frac, prec + 16);
    return trig_enclosure(arg, true, prec);
}

Interval sin_pi_frac_interval(const Rat& frac, mpfr_prec_t prec)
{
    Interval arg = pi_interval(prec + 16) * Interval::from_rational(frac, prec + 16);
    return trig_enclosure(arg, false, prec);
}

Interval pow3_interval(const Rat& exponent, mpfr_prec_t prec)
{
    // integer exponents are exact powers
    if (rat_den(exponent) == 1) {
        Int e = rat_num(exponent);
        if (e >= 0)
            return Interval::from_bigint(int_pow(3, static_cast<unsigned>(e)), prec);
        return Interval::from_rational(Rat(1, int_pow(3, static_cast<unsigned>(-e))), prec);
    }
    // 3^x monotone increasing: bound via endpoint exponents
    Interval ex = Interval::from_rational(exponent, prec + 16);
    Interval r(prec);
    mpfr_t three;
    mpfr_init2(three, prec + 16);
    mpfr_set_ui(three, 3, MPFR_RNDN);
    mpfr_pow(r.lo_raw(), three, ex.lo(), MPFR_RNDD);
    mpfr_pow(r.hi_raw(), three, ex.hi(), MPFR_RNDU);
    mpfr_clear(three);
    return r;
}

} // namespace metasynth
