#include "metasynth/householder.hpp"

#include <stdexcept>

namespace metasynth {

namespace {

CInterval div(const CInterval& a, const Interval& s) { return {a.re / s, a.im / s}; }

Rat magnitude_upper(const CInterval& z)
{
    return z.norm2().sqrt().upper_rational();
}

/// Apply R = I - 2 u u^dag (u supported on rows i < j) to A from the left.
void apply_reflection(Matrix3c& A, int i, int j, const CInterval& ui, const CInterval& uj)
{
    Interval two = Interval::from_int(2, ui.re.precision());
    for (int c = 0; c < 3; ++c) {
        CInterval dot = ui.conj() * A[i][c] + uj.conj() * A[j][c];
        CInterval shift_i = ui * dot * two;
        CInterval shift_j = uj * dot * two;
        A[i][c] = A[i][c] - shift_i;
        A[j][c] = A[j][c] - shift_j;
    }
}

/**
 * Reflection on levels (i, j) with x = (A[i][col], A[j][col]) mapped to
 * (e^{i arg x_i} |x|, 0): u = (x - y)/|x - y|. Returns false when the j
 * component is already negligible.
 */
bool eliminate(Matrix3c& A, int i, int j, int col, std::vector<TwoLevelReflection>& out,
               mpfr_prec_t prec, const Rat& negligible)
{
    CInterval xi = A[i][col], xj = A[j][col];
    if (magnitude_upper(xj) < negligible)
        return false;
    Interval len = (xi.norm2() + xj.norm2()).sqrt();
    // phase of x_i, or 1 when x_i is too small to divide by
    CInterval phase = CInterval::one(prec);
    Interval xi_len = xi.norm2().sqrt();
    if (xi_len.lower_rational() > negligible)
        phase = div(xi, xi_len);
    CInterval yi = phase * len;
    CInterval di = xi - yi;
    CInterval dj = xj;
    Interval dlen = (di.norm2() + dj.norm2()).sqrt();
    if (!dlen.is_certainly_positive())
        return false;
    CInterval ui = div(di, dlen), uj = div(dj, dlen);
    apply_reflection(A, i, j, ui, uj);
    out.push_back(TwoLevelReflection{i, j, ui, uj});
    return true;
}

} // namespace

Matrix3c identity3(mpfr_prec_t prec)
{
    Matrix3c m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            m[i][j] = i == j ? CInterval::one(prec) : CInterval::zero(prec);
    return m;
}

Matrix3c matmul(const Matrix3c& a, const Matrix3c& b)
{
    mpfr_prec_t prec = a[0][0].re.precision();
    Matrix3c r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            CInterval s = CInterval::zero(prec);
            for (int k = 0; k < 3; ++k)
                s = s + a[i][k] * b[k][j];
            r[i][j] = s;
        }
    return r;
}

HouseholderDecomposition decompose_su3(const Matrix3c& U, mpfr_prec_t prec)
{
    // unitarity within tolerance: U^dag U close to I
    Rat tol = make_rat(Int(1), Int(1) << static_cast<unsigned>(prec / 4));
    Matrix3c Udag;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            Udag[i][j] = U[j][i].conj();
    Matrix3c gram = matmul(Udag, U);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            CInterval expect = i == j ? CInterval::one(prec) : CInterval::zero(prec);
            if (magnitude_upper(gram[i][j] - expect) > tol)
                throw std::invalid_argument("decompose_su3: input is not unitary within tolerance");
        }

    Rat negligible = make_rat(Int(1), Int(1) << static_cast<unsigned>(prec / 2));
    Matrix3c A = U;
    HouseholderDecomposition d;
    eliminate(A, 1, 2, 0, d.reflections, prec, negligible); // zero A[2][0] into A[1][0]
    eliminate(A, 0, 1, 0, d.reflections, prec, negligible); // zero A[1][0] into A[0][0]
    eliminate(A, 1, 2, 1, d.reflections, prec, negligible); // zero A[2][1] into A[1][1]

    for (int i = 0; i < 3; ++i)
        d.diagonal[i] = A[i][i];

    // a residual phase of -1 is itself a two-level-free reflection about |i>
    for (int i = 0; i < 3; ++i) {
        CInterval plus_one = d.diagonal[i] + CInterval::one(prec);
        if (magnitude_upper(plus_one) < negligible) {
            TwoLevelReflection r;
            r.level_lo = i;
            r.level_hi = (i + 1) % 3;
            r.amp_lo = CInterval::one(prec);
            r.amp_hi = CInterval::zero(prec);
            d.reflections.push_back(r);
            d.diagonal[i] = CInterval::one(prec);
        }
    }
    if (d.reflections.size() > 6)
        throw std::logic_error("decompose_su3: more than six reflections produced");
    return d;
}

Matrix3c reconstruct(const HouseholderDecomposition& d, mpfr_prec_t prec)
{
    Matrix3c acc = identity3(prec);
    for (const auto& r : d.reflections) {
        Matrix3c R = identity3(prec);
        Interval two = Interval::from_int(2, prec);
        R[r.level_lo][r.level_lo] = CInterval::one(prec) - r.amp_lo * r.amp_lo.conj() * two;
        R[r.level_hi][r.level_hi] = CInterval::one(prec) - r.amp_hi * r.amp_hi.conj() * two;
        R[r.level_lo][r.level_hi] = -(r.amp_lo * r.amp_hi.conj() * two);
        R[r.level_hi][r.level_lo] = -(r.amp_hi * r.amp_lo.conj() * two);
        acc = matmul(acc, R);
    }
    Matrix3c D = identity3(prec);
    for (int i = 0; i < 3; ++i)
        D[i][i] = d.diagonal[i];
    return matmul(acc, D);
}

} // namespace metasynth
