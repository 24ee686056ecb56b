#pragma once

#include <array>
#include <vector>

#include "metasynth/interval.hpp"

namespace metasynth {

struct CInterval {
    Interval re, im;

    CInterval() = default;
    CInterval(Interval r, Interval i) : re(std::move(r)), im(std::move(i)) {}

    static CInterval zero(mpfr_prec_t p) { return {Interval(p), Interval(p)}; }
    static CInterval one(mpfr_prec_t p) { return {Interval::from_int(1, p), Interval(p)}; }

    CInterval conj() const { return {re, -im}; }
    Interval norm2() const { return re.square() + im.square(); }

    CInterval operator+(const CInterval& o) const { return {re + o.re, im + o.im}; }
    CInterval operator-(const CInterval& o) const { return {re - o.re, im - o.im}; }
    CInterval operator*(const CInterval& o) const
    {
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }
    CInterval operator*(const Interval& s) const { return {re * s, im * s}; }
    CInterval operator-() const { return {-re, -im}; }
};

using Matrix3c = std::array<std::array<CInterval, 3>, 3>;

/// Householder reflection I - 2|u><u| about a unit vector supported on two
/// basis levels.
struct TwoLevelReflection {
    int level_lo = 0, level_hi = 1;
    CInterval amp_lo, amp_hi;
};

struct HouseholderDecomposition {
    std::vector<TwoLevelReflection> reflections; // at most 6
    std::array<CInterval, 3> diagonal;           // residual phases
};

/**
 * QR-style elimination of a 3x3 unitary by two-level Householder
 * reflections: the product of the returned reflections (in order) times the
 * residual diagonal reproduces U within 2^(-prec/2). Diagonal entries equal
 * to -1 are emitted as basis reflections. Throws std::invalid_argument when
 * the input is not unitary within tolerance.
 */
HouseholderDecomposition decompose_su3(const Matrix3c& U, mpfr_prec_t prec);

/// Product of the decomposition factors, for verification.
Matrix3c reconstruct(const HouseholderDecomposition& d, mpfr_prec_t prec);

Matrix3c matmul(const Matrix3c& a, const Matrix3c& b);
Matrix3c identity3(mpfr_prec_t prec);

} // namespace metasynth
