#include "metasynth/lll.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace metasynth {

namespace {

/// Gram-Schmidt data (squared norms B[i] and coefficients mu[i][j]) computed
/// from a Gram matrix under the current transform.
struct Gso {
    std::vector<Rat> B;
    RatMatrix mu;
};

Rat inner(const RatMatrix& G, const IntMatrix& U, int i, int j)
{
    int n = static_cast<int>(G.size());
    Rat s = 0;
    for (int a = 0; a < n; ++a) {
        if (U[i][a] == 0)
            continue;
        Rat partial = 0;
        for (int b = 0; b < n; ++b) {
            if (U[j][b] == 0)
                continue;
            partial += Rat(U[j][b]) * G[a][b];
        }
        s += Rat(U[i][a]) * partial;
    }
    return s;
}

Gso compute_gso(const RatMatrix& G, const IntMatrix& U)
{
    int n = static_cast<int>(G.size());
    Gso g;
    g.B.assign(n, Rat(0));
    g.mu.assign(n, std::vector<Rat>(n, Rat(0)));
    // standard recurrences using only pairwise inner products
    RatMatrix ip(n, std::vector<Rat>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j)
            ip[i][j] = ip[j][i] = inner(G, U, i, j);
    for (int i = 0; i < n; ++i) {
        Rat Bi = ip[i][i];
        for (int j = 0; j < i; ++j) {
            Rat proj = ip[i][j];
            for (int k = 0; k < j; ++k)
                proj -= g.mu[i][k] * g.mu[j][k] * g.B[k];
            if (g.B[j] == 0)
                throw std::invalid_argument("lll: rank-deficient basis");
            g.mu[i][j] = proj / g.B[j];
            Bi -= g.mu[i][j] * g.mu[i][j] * g.B[j];
        }
        if (Bi <= 0)
            throw std::invalid_argument("lll: rank-deficient basis");
        g.B[i] = Bi;
    }
    return g;
}

} // namespace

IntMatrix lll_gram(RatMatrix gram, const Rat& delta)
{
    int n = static_cast<int>(gram.size());
    if (n == 0)
        return {};
    if (delta <= Rat(1, 4) || delta > 1)
        throw std::invalid_argument("lll: delta must lie in (1/4, 1]");
    IntMatrix U(n, std::vector<Int>(n, Int(0)));
    for (int i = 0; i < n; ++i)
        U[i][i] = 1;

    Gso g = compute_gso(gram, U);
    int k = 1;
    while (k < n) {
        // size-reduce row k against rows k-1..0
        for (int j = k - 1; j >= 0; --j) {
            Int r = rat_round_half_down(g.mu[k][j]);
            if (r != 0) {
                for (int c = 0; c < n; ++c)
                    U[k][c] -= r * U[j][c];
                g = compute_gso(gram, U);
            }
        }
        // Lovasz condition
        if (g.B[k] >= (delta - g.mu[k][k - 1] * g.mu[k][k - 1]) * g.B[k - 1]) {
            ++k;
        } else {
            std::swap(U[k], U[k - 1]);
            g = compute_gso(gram, U);
            k = std::max(k - 1, 1);
        }
    }
    return U;
}

LllResult lll_reduce(const RatMatrix& basis, const Rat& delta)
{
    int n = static_cast<int>(basis.size());
    LllResult out;
    if (n == 0)
        return out;
    int m = static_cast<int>(basis[0].size());
    RatMatrix gram(n, std::vector<Rat>(n, Rat(0)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int c = 0; c < m; ++c)
                gram[i][j] += basis[i][c] * basis[j][c];
    out.transform = lll_gram(std::move(gram), delta);
    out.basis.assign(n, std::vector<Rat>(m, Rat(0)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (out.transform[i][j] == 0)
                continue;
            for (int c = 0; c < m; ++c)
                out.basis[i][c] += Rat(out.transform[i][j]) * basis[j][c];
        }
    return out;
}

Int int_det(const IntMatrix& m)
{
    int n = static_cast<int>(m.size());
    if (n == 0)
        return 1;
    if (n == 1)
        return m[0][0];
    Int det = 0;
    // Laplace expansion along the first row; n <= 4 in this project
    for (int j = 0; j < n; ++j) {
        if (m[0][j] == 0)
            continue;
        IntMatrix minor(n - 1, std::vector<Int>(n - 1));
        for (int r = 1; r < n; ++r) {
            int cc = 0;
            for (int c = 0; c < n; ++c) {
                if (c == j)
                    continue;
                minor[r - 1][cc++] = m[r][c];
            }
        }
        Int term = m[0][j] * int_det(minor);
        det += (j % 2 == 0) ? term : Int(-term);
    }
    return det;
}

} // namespace metasynth
