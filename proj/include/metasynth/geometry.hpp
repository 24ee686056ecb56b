#pragma once

#include <array>
#include <utility>

#include "metasynth/eisenstein.hpp"
#include "metasynth/exact_real.hpp"
#include "metasynth/lll.hpp"
#include "metasynth/polytope.hpp"
#include "metasynth/qsqrt3.hpp"

namespace metasynth {

/**
 * Two-level unitary state x0|i> + x1|j> of a qutrit, with exact-expression
 * amplitudes so any precision can be re-derived on demand. `levels` names
 * the occupied basis levels (i, j); the third level is where the synthesized
 * w component lives.
 */
struct TwoLevelState {
    ExactReal re0, im0, re1, im1;
    std::pair<int, int> levels{0, 1};

    /// | |x0|^2 + |x1|^2 - 1 | < 2^(-prec+8), by interval arithmetic.
    bool is_normalized(mpfr_prec_t prec) const;
};

/// Real 4-space image r[x] = (Re x0, Im x0, Re x1, Im x1).
std::array<ExactReal, 4> embed(const TwoLevelState& s);

/// The convex cap { q : |q| <= 1, <q,p> > 1 - eps^2/2 } around p = r[x].
struct Meniscus {
    std::array<ExactReal, 4> p;
    ExactReal epsilon;
};

Meniscus meniscus_around(const TwoLevelState& s, const ExactReal& epsilon);

/// Working precision for a target precision eps: ceil(4 log2(1/eps)) + 128.
mpfr_prec_t working_precision(const ExactReal& epsilon);

/**
 * A lattice point at level k: u = a1 + a2 w and v = a3 + a4 w over the
 * state's two occupied levels, normalized by sqrt(3)^k.
 */
struct Candidate {
    Eisenstein u, v;
    int k = 0;
    std::pair<int, int> levels{0, 1};

    static Candidate from_coeffs(const IntVec& a, int k, std::pair<int, int> levels = {0, 1})
    {
        return Candidate{Eisenstein(a[0], a[1]), Eisenstein(a[2], a[3]), k, levels};
    }

    IntVec coeffs() const { return {u.a, u.b, v.a, v.b}; }

    /// norm(u) + norm(v) <= 3^k, the closed-ball membership, exactly.
    bool inside_ball() const
    {
        return u.norm() + v.norm() <= pow3(static_cast<unsigned>(k));
    }
};

/**
 * dist(x, y) = sqrt(2 (1 - Re<x|y>)) with y = (u,v)/sqrt(3)^k on the
 * state's levels. The third amplitude never enters the formula.
 * Throws std::invalid_argument on a level mismatch.
 */
Interval distance(const TwoLevelState& s, const Candidate& y, mpfr_prec_t prec);

/// Exact inner product <r[s], emb(u,v)> as an interval (unnormalized).
Interval grid_projection(const std::array<ExactReal, 4>& p, const Candidate& y, mpfr_prec_t prec);

/**
 * Strict meniscus membership of the unscaled lattice point (a1..a4) against
 * the sqrt(3)^k-scaled meniscus: exact integer ball test plus the interval
 * test <q,p> > (1 - eps^2/2) sqrt(3)^k, escalating precision up to three
 * doublings; a still-indeterminate comparison raises PrecisionError.
 */
bool in_meniscus(const IntVec& a, const Meniscus& m, int k, mpfr_prec_t prec);

/**
 * Rational enclosing prism of the scaled meniscus in grid coordinates:
 * a box in the orthonormal frame (p, q1, q2, q3) with extent
 * [(1-eps^2/2) sqrt3^k, sqrt3^k] along p and half-width
 * sqrt3^k sqrt(eps^2 - eps^4/4) in the orthogonal directions, pulled back
 * through the grid map and rounded outward, so every lattice point of the
 * scaled meniscus lies inside.
 */
RationalPolytope enclosing_polytope(const Meniscus& m, int k, mpfr_prec_t prec);

/**
 * The scaled Eisenstein lattice at level k: integer combinations of the
 * four generator columns reproduce every embedded pair (u, v), with the
 * overall scale sqrt(3)^(-k) tracked symbolically.
 */
struct ScaledLatticeBasis {
    int k = 0;

    /// Unscaled generator vectors (columns); multiply by sqrt(3)^(-k).
    static const std::array<Vec4Q3, 4>& generators() { return iota_columns(); }

    /// Exact Gram matrix of the unscaled generators (entries rational here).
    static RatMatrix gram();

    Vec4Q3 embed_coeffs(const IntVec& a) const;
};

} // namespace metasynth
