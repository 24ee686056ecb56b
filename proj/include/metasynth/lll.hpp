#pragma once

#include <vector>

#include "metasynth/bigint.hpp"

namespace metasynth {

using RatMatrix = std::vector<std::vector<Rat>>;
using IntMatrix = std::vector<std::vector<Int>>;

struct LllResult {
    RatMatrix basis;      // reduced basis vectors, as rows
    IntMatrix transform;  // unimodular U with reduced[i] = sum_j U[i][j] * input[j]
};

/**
 * Exact LLL on the Gram matrix of a basis: returns the unimodular transform
 * U such that U * B is delta-LLL-reduced, where gram = B * B^T (any exact
 * positive-definite symmetric matrix works, so arbitrary inner products are
 * supported). Throws on rank deficiency.
 */
IntMatrix lll_gram(RatMatrix gram, const Rat& delta = Rat(3, 4));

/// LLL-reduce basis rows under the standard inner product, with transform.
LllResult lll_reduce(const RatMatrix& basis, const Rat& delta = Rat(3, 4));

/// Determinant of a small integer matrix (n <= 4), exact.
Int int_det(const IntMatrix& m);

} // namespace metasynth
