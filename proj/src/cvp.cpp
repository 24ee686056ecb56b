#include "metasynth/cvp.hpp"

#include <stdexcept>
#include <vector>

namespace metasynth {

namespace {

struct Reduced {
    std::array<Vec2Q3, 2> b;
    std::array<std::array<Int, 2>, 2> transform; // reduced[i] = sum_j U[i][j] input[j]
};

Reduced gauss_reduce(std::array<Vec2Q3, 2> b)
{
    Reduced r;
    r.transform = {{{Int(1), Int(0)}, {Int(0), Int(1)}}};
    QSqrt3 det = b[0][0] * b[1][1] - b[0][1] * b[1][0];
    if (det.is_zero() || dot(b[0], b[0]).is_zero())
        throw std::invalid_argument("cvp_2d: degenerate basis");
    for (;;) {
        if (dot(b[0], b[0]) > dot(b[1], b[1])) {
            std::swap(b[0], b[1]);
            std::swap(r.transform[0], r.transform[1]);
        }
        QSqrt3 mu = dot(b[0], b[1]) / dot(b[0], b[0]);
        Int m = mu.round_nearest();
        if (m == 0)
            break;
        for (int c = 0; c < 2; ++c) {
            b[1][c] = b[1][c] - QSqrt3(Rat(m)) * b[0][c];
            r.transform[1][c] -= m * r.transform[0][c];
        }
    }
    r.b = b;
    return r;
}

} // namespace

std::array<Int, 2> cvp_2d(const std::array<Vec2Q3, 2>& basis,
                          const std::array<Interval, 2>& target, mpfr_prec_t prec)
{
    Reduced red = gauss_reduce(basis);

    // exact gram of the reduced basis and its inverse
    QSqrt3 g00 = dot(red.b[0], red.b[0]);
    QSqrt3 g01 = dot(red.b[0], red.b[1]);
    QSqrt3 g11 = dot(red.b[1], red.b[1]);
    QSqrt3 det = g00 * g11 - g01 * g01;
    if (det.sign() <= 0)
        throw std::invalid_argument("cvp_2d: degenerate basis");

    // d_i = <target, b_i> as intervals
    auto dots = [&](mpfr_prec_t p) {
        std::array<Interval, 2> d{Interval(p), Interval(p)};
        for (int i = 0; i < 2; ++i)
            for (int c = 0; c < 2; ++c)
                d[i] += target[c] * red.b[i][c].eval(p);
        return d;
    };
    std::array<Interval, 2> d = dots(prec);

    // real-valued coefficients: G^-1 d, rounded at the midpoint
    Interval idet = Interval::from_int(1, prec) / det.eval(prec);
    Interval c0 = (g11.eval(prec) * d[0] - g01.eval(prec) * d[1]) * idet;
    Interval c1 = (g00.eval(prec) * d[1] - g01.eval(prec) * d[0]) * idet;
    auto round_mid = [](const Interval& v) {
        return rat_round((v.lower_rational() + v.upper_rational()) / 2);
    };
    Int r0 = round_mid(c0), r1 = round_mid(c1);

    // candidate objective: |c . b - t|^2 = c^T G c - 2 c . d + const
    struct Entry {
        Int i, j;
        QSqrt3 exact; // c^T G c
    };
    std::vector<Entry> entries;
    for (long di = -2; di <= 2; ++di)
        for (long dj = -2; dj <= 2; ++dj) {
            Int i = r0 + di, j = r1 + dj;
            QSqrt3 qi{Rat(i)};
            QSqrt3 qj{Rat(j)};
            QSqrt3 quad = qi * qi * g00 + QSqrt3(Rat(2)) * qi * qj * g01 + qj * qj * g11;
            entries.push_back(Entry{i, j, quad});
        }

    auto objective = [&](const Entry& e, const std::array<Interval, 2>& dd, mpfr_prec_t p) {
        Interval lin = Interval::from_bigint(e.i, p) * dd[0] + Interval::from_bigint(e.j, p) * dd[1];
        return e.exact.eval(p) - lin * Interval::from_int(2, p);
    };

    size_t best = 0;
    for (size_t k = 1; k < entries.size(); ++k) {
        bool decided = false;
        for (int attempt = 0; attempt < 4 && !decided; ++attempt) {
            mpfr_prec_t p = prec << attempt;
            std::array<Interval, 2> dd = attempt == 0 ? d : dots(p);
            Interval ok = objective(entries[k], dd, p);
            Interval ob = objective(entries[best], dd, p);
            if (ok.certainly_less(ob)) {
                best = k;
                decided = true;
            } else if (ob.certainly_less(ok)) {
                decided = true;
            }
        }
        if (!decided) {
            // numerically tied: lexicographically smaller coefficient pair wins
            if (std::make_pair(entries[k].i, entries[k].j) <
                std::make_pair(entries[best].i, entries[best].j))
                best = k;
        }
    }

    // map reduced-basis coefficients back onto the input basis
    const Entry& e = entries[best];
    std::array<Int, 2> out;
    for (int j = 0; j < 2; ++j)
        out[j] = e.i * red.transform[0][j] + e.j * red.transform[1][j];
    return out;
}

} // namespace metasynth
