#pragma once

#include <array>

#include "metasynth/interval.hpp"
#include "metasynth/qsqrt3.hpp"

namespace metasynth {

/**
 * Closest vector in a rank-2 lattice with exact Q[sqrt3] basis vectors,
 * against a high-precision target point given in the same frame.
 * Lagrange-Gauss reduces the basis exactly, rounds the target coordinates,
 * then inspects the neighboring coefficient pairs and returns the true
 * closest point (interval comparisons escalate; residual ties break
 * lexicographically). Throws std::invalid_argument on a degenerate basis.
 */
std::array<Int, 2> cvp_2d(const std::array<Vec2Q3, 2>& basis,
                          const std::array<Interval, 2>& target, mpfr_prec_t prec);

} // namespace metasynth
