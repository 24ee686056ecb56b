#include "metasynth/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace metasynth {

namespace {

using Vec4I = std::array<Interval, 4>;

Interval dot_ii(const Vec4I& x, const Vec4I& y)
{
    Interval s = x[0] * y[0];
    for (int i = 1; i < 4; ++i)
        s += x[i] * y[i];
    return s;
}

Vec4I eval_p(const std::array<ExactReal, 4>& p, mpfr_prec_t prec)
{
    return {p[0].eval(prec), p[1].eval(prec), p[2].eval(prec), p[3].eval(prec)};
}

/// Exact dyadic rational nearest to the interval midpoint with denominator D.
Rat round_to_denominator(const Interval& v, const Int& D)
{
    Rat mid = (v.lower_rational() + v.upper_rational()) / 2;
    return make_rat(rat_round(mid * Rat(D)), D);
}

Rat ceil_to_denominator(const Rat& v, const Int& D)
{
    return make_rat(rat_ceil(v * Rat(D)), D);
}

} // namespace

bool TwoLevelState::is_normalized(mpfr_prec_t prec) const
{
    Interval n = re0.eval(prec).square() + im0.eval(prec).square() +
                 re1.eval(prec).square() + im1.eval(prec).square();
    Interval diff = (n - Interval::from_int(1, prec)).abs();
    Rat threshold = make_rat(Int(256), Int(1) << static_cast<unsigned>(prec));
    return diff.upper_rational() < threshold;
}

std::array<ExactReal, 4> embed(const TwoLevelState& s)
{
    return {s.re0, s.im0, s.re1, s.im1};
}

Meniscus meniscus_around(const TwoLevelState& s, const ExactReal& epsilon)
{
    Interval e = epsilon.eval(96);
    if (!e.is_certainly_positive())
        throw std::invalid_argument("meniscus: epsilon must be positive");
    if (!e.certainly_less(sqrt_int_interval(2, 96)))
        throw std::invalid_argument("meniscus: epsilon must be below sqrt(2)");
    return Meniscus{embed(s), epsilon};
}

mpfr_prec_t working_precision(const ExactReal& epsilon)
{
    Interval e = epsilon.eval(96);
    if (!e.is_certainly_positive())
        throw std::invalid_argument("working_precision: epsilon must be positive");
    long ex = mpfr_get_exp(e.lo()); // eps_lo in [2^(ex-1), 2^ex)
    long log2_inv = ex >= 1 ? 0 : 1 - ex;
    return static_cast<mpfr_prec_t>(4 * log2_inv + 128);
}

Interval grid_projection(const std::array<ExactReal, 4>& p, const Candidate& y, mpfr_prec_t prec)
{
    Vec4Q3 q = embed_eisenstein_pair(y.u, y.v);
    // group the rational and sqrt(3) parts to keep the enclosure tight
    Interval rational_part(prec), sqrt3_part(prec);
    for (int i = 0; i < 4; ++i) {
        Interval pi = p[i].eval(prec);
        if (q[i].a != 0)
            rational_part += pi * Interval::from_rational(q[i].a, prec);
        if (q[i].b != 0)
            sqrt3_part += pi * Interval::from_rational(q[i].b, prec);
    }
    return rational_part + sqrt3_part * sqrt_int_interval(3, prec);
}

Interval distance(const TwoLevelState& s, const Candidate& y, mpfr_prec_t prec)
{
    if (y.levels != s.levels)
        throw std::invalid_argument("distance: candidate levels do not match the state");
    Interval proj = grid_projection(embed(s), y, prec);
    Interval scale = sqrt3_pow_interval(y.k, prec);
    Interval inner = proj / scale;
    Interval two = Interval::from_int(2, prec);
    return ((Interval::from_int(1, prec) - inner) * two).sqrt();
}

bool in_meniscus(const IntVec& a, const Meniscus& m, int k, mpfr_prec_t prec)
{
    Candidate c = Candidate::from_coeffs(a, k);
    if (!c.inside_ball())
        return false;
    for (int attempt = 0; attempt < 4; ++attempt) {
        mpfr_prec_t p = prec << attempt;
        Interval proj = grid_projection(m.p, c, p);
        Interval eps = m.epsilon.eval(p);
        Interval one = Interval::from_int(1, p);
        Interval bound = (one - eps.square() / Interval::from_int(2, p)) * sqrt3_pow_interval(k, p);
        if (bound.certainly_less(proj))
            return true;
        if (proj.certainly_less(bound))
            return false;
        // overlapping enclosures: escalate and retry
    }
    throw PrecisionError("in_meniscus: comparison indeterminate after precision escalation");
}

RationalPolytope enclosing_polytope(const Meniscus& m, int k, mpfr_prec_t prec)
{
    Vec4I p = eval_p(m.p, prec);
    Interval eps = m.epsilon.eval(prec);
    Interval one = Interval::from_int(1, prec);
    Interval two = Interval::from_int(2, prec);
    Interval lower_frac = one - eps.square() / two; // 1 - eps^2/2
    if (!lower_frac.is_certainly_positive())
        throw std::invalid_argument("enclosing_polytope: epsilon too large (1 - eps^2/2 <= 0)");

    // normalize p so the frame is built against a certified unit vector
    Interval pnorm = dot_ii(p, p).sqrt();
    Vec4I phat;
    for (int i = 0; i < 4; ++i)
        phat[i] = p[i] / pnorm;

    // frame q1..q3: Gram-Schmidt over the axes, skipping the dominant one
    int skip = 0;
    double best = 0;
    for (int i = 0; i < 4; ++i) {
        double v = std::abs(phat[i].mid_double());
        if (v > best) {
            best = v;
            skip = i;
        }
    }
    std::array<Vec4I, 3> frame;
    int idx = 0;
    for (int axis = 0; axis < 4; ++axis) {
        if (axis == skip)
            continue;
        Vec4I v;
        for (int i = 0; i < 4; ++i)
            v[i] = Interval::from_int(axis == i ? 1 : 0, prec);
        Interval c = dot_ii(v, phat);
        for (int i = 0; i < 4; ++i)
            v[i] -= c * phat[i];
        for (int j = 0; j < idx; ++j) {
            Interval cj = dot_ii(v, frame[j]);
            for (int i = 0; i < 4; ++i)
                v[i] -= cj * frame[j][i];
        }
        Interval nrm = dot_ii(v, v).sqrt();
        if (!nrm.is_certainly_positive())
            throw PrecisionError("enclosing_polytope: frame construction lost independence");
        for (int i = 0; i < 4; ++i)
            v[i] = v[i] / nrm;
        frame[idx++] = v;
    }

    Interval scale = sqrt3_pow_interval(k, prec); // sqrt(3)^k
    // slab along p: t_lo < <q, phat> <= sqrt3^k with t_lo = (1-eps^2/2) sqrt3^k / |p|
    Interval t_lo = lower_frac * scale / pnorm;
    // lateral half-width: sqrt(3^k - t_lo^2), valid since <q,phat> > t_lo
    Interval h = (scale.square() - t_lo.square()).sqrt();

    // outward-rounding denominator: fine enough for the slab thickness
    long ex = mpfr_get_exp(eps.lo());
    long log2_inv_eps = ex >= 1 ? 0 : 1 - ex;
    unsigned dd = static_cast<unsigned>(std::min<long>(static_cast<long>(prec), 2 * log2_inv_eps + 32));
    Int D = Int(1) << dd;

    // reach bound: |y| = |grid coords| <= sqrt(2) * sqrt(3)^k
    Rat reach = ceil_to_denominator((sqrt_int_interval(2, prec) * scale).upper_rational(), D);

    RationalPolytope P(4);
    auto add_halfspace = [&](const Vec4I& normal, const Interval& bound) {
        // pull back through the grid map: row m with m_i = <normal, iota column i>
        Vec4I mrow;
        mrow[0] = normal[0];
        mrow[2] = normal[2];
        Interval half = Interval::from_rational(Rat(1, 2), prec);
        Interval s32 = sqrt_int_interval(3, prec) * half;
        mrow[1] = -normal[0] * half + normal[1] * s32;
        mrow[3] = -normal[2] * half + normal[3] * s32;
        RatVec a(4);
        Rat shift(0);
        for (int i = 0; i < 4; ++i) {
            a[i] = round_to_denominator(mrow[i], D);
            Rat err = std::max(Rat(a[i] - mrow[i].lower_rational()),
                               Rat(mrow[i].upper_rational() - a[i]));
            if (err < 0)
                err = -err;
            shift += err * reach;
        }
        Rat b = ceil_to_denominator(bound.upper_rational() + shift, D);
        P.add_constraint(a, b);
    };

    add_halfspace(phat, scale);
    Vec4I neg;
    for (int i = 0; i < 4; ++i)
        neg[i] = -phat[i];
    add_halfspace(neg, -t_lo);
    for (const auto& q : frame) {
        add_halfspace(q, h);
        Vec4I nq;
        for (int i = 0; i < 4; ++i)
            nq[i] = -q[i];
        add_halfspace(nq, h);
    }
    // explicit grid-coordinate box, keeps the polytope bounded under any rounding
    for (int i = 0; i < 4; ++i) {
        RatVec a(4, Rat(0));
        a[i] = 1;
        P.add_constraint(a, reach);
        a[i] = -1;
        P.add_constraint(a, reach);
    }
    return P;
}

RatMatrix ScaledLatticeBasis::gram()
{
    const auto& g = generators();
    RatMatrix G(4, RatVec(4));
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            QSqrt3 d = dot(g[i], g[j]);
            if (d.b != 0)
                throw std::logic_error("generator gram matrix must be rational");
            G[i][j] = d.a;
        }
    return G;
}

Vec4Q3 ScaledLatticeBasis::embed_coeffs(const IntVec& a) const
{
    const auto& g = generators();
    Vec4Q3 r{QSqrt3(), QSqrt3(), QSqrt3(), QSqrt3()};
    for (int j = 0; j < 4; ++j)
        for (int i = 0; i < 4; ++i)
            r[i] = r[i] + g[j][i] * QSqrt3(Rat(a[j]));
    return r;
}

} // namespace metasynth
