#include <doctest.h>

#include <cstdint>
#include <set>

#include "metasynth/enumerate.hpp"
#include "metasynth/lll.hpp"
#include "metasynth/polytope.hpp"

using namespace metasynth;

namespace {

struct Rng {
    std::uint64_t s;
    explicit Rng(std::uint64_t seed) : s(seed) {}
    std::uint64_t next()
    {
        s += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = s;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    long range(long lo, long hi) { return lo + static_cast<long>(next() % static_cast<std::uint64_t>(hi - lo + 1)); }
};

RationalPolytope box(const std::vector<std::pair<Rat, Rat>>& bounds)
{
    int n = static_cast<int>(bounds.size());
    RationalPolytope P(n);
    for (int j = 0; j < n; ++j) {
        RatVec lo(n, Rat(0)), hi(n, Rat(0));
        hi[j] = 1;
        lo[j] = -1;
        P.add_constraint(hi, bounds[j].second);
        P.add_constraint(lo, Rat(-bounds[j].first));
    }
    return P;
}

/// Random bounded polytope: a box plus a few random cutting half-planes
/// through it. Kept within +/- width/2 so brute force stays affordable.
RationalPolytope random_polytope(Rng& rng, int dim, long width)
{
    std::vector<std::pair<Rat, Rat>> bounds;
    for (int j = 0; j < dim; ++j) {
        Rat lo(rng.range(-width, 0), rng.range(1, 3));
        Rat len(rng.range(1, width), 1);
        bounds.emplace_back(lo, lo + len);
    }
    RationalPolytope P = box(bounds);
    int cuts = static_cast<int>(rng.range(0, 3));
    for (int c = 0; c < cuts; ++c) {
        RatVec a(dim);
        bool all_zero = true;
        for (int j = 0; j < dim; ++j) {
            a[j] = Rat(rng.range(-5, 5), rng.range(1, 2));
            if (a[j] != 0)
                all_zero = false;
        }
        if (all_zero)
            continue;
        // offset chosen so the cut passes near the box center
        Rat b(0);
        for (int j = 0; j < dim; ++j)
            b += a[j] * (bounds[j].first + bounds[j].second) / 2;
        b += Rat(rng.range(-width, width), 4);
        P.add_constraint(a, b);
    }
    return P;
}

} // namespace

TEST_CASE("lp and width_along on boxes")
{
    auto cube = box({{0, 1}, {0, 1}, {0, 1}, {0, 1}});
    RatVec e1{1, 0, 0, 0};
    auto w = width_along(cube, e1);
    REQUIRE(w.feasible);
    CHECK(w.min_value == 0);
    CHECK(w.max_value == 1);

    RatVec diag{1, 1, 1, 1};
    auto wd = width_along(cube, diag);
    CHECK(wd.min_value == 0);
    CHECK(wd.max_value == 4);

    // infeasible polytope reports the distinguished empty result
    RationalPolytope empty(2);
    empty.add_constraint({Rat(1), Rat(0)}, Rat(0));
    empty.add_constraint({Rat(-1), Rat(0)}, Rat(-1)); // x >= 1 and x <= 0
    CHECK_FALSE(width_along(empty, {Rat(1), Rat(0)}).feasible);
}

TEST_CASE("lp matches brute-force vertex optimum on random 2d polytopes")
{
    Rng rng(101);
    for (int iter = 0; iter < 60; ++iter) {
        auto P = random_polytope(rng, 2, 12);
        RatVec d{Rat(rng.range(-3, 3)), Rat(rng.range(-3, 3))};
        if (d[0] == 0 && d[1] == 0)
            continue;
        auto w = width_along(P, d);
        // oracle: scan all pairwise constraint intersections
        bool any = false;
        Rat best_min, best_max;
        const auto& rows = P.rows();
        for (size_t i = 0; i < rows.size(); ++i)
            for (size_t j = i + 1; j < rows.size(); ++j) {
                Rat det = Rat(rows[i].a[0]) * Rat(rows[j].a[1]) - Rat(rows[i].a[1]) * Rat(rows[j].a[0]);
                if (det == 0)
                    continue;
                Rat x = (Rat(rows[i].b) * Rat(rows[j].a[1]) - Rat(rows[i].a[1]) * Rat(rows[j].b)) / det;
                Rat y = (Rat(rows[i].a[0]) * Rat(rows[j].b) - Rat(rows[i].b) * Rat(rows[j].a[0])) / det;
                if (!P.contains_rat({x, y}))
                    continue;
                Rat v = d[0] * x + d[1] * y;
                if (!any) {
                    best_min = best_max = v;
                    any = true;
                } else {
                    best_min = std::min(best_min, v);
                    best_max = std::max(best_max, v);
                }
            }
        REQUIRE(w.feasible == any);
        if (any) {
            CHECK(w.min_value == best_min);
            CHECK(w.max_value == best_max);
        }
    }
}

TEST_CASE("lll: identity stays put, unimodular transform, shortest vectors")
{
    RatMatrix id{{1, 0}, {0, 1}};
    auto r = lll_reduce(id);
    CHECK(r.basis == id);
    CHECK(int_det(r.transform) != 0);

    // scaled (1,0), (0.99, 0.01): reduced first vector no longer than the shortest input
    RatMatrix skew{{100, 0}, {99, 1}};
    auto s = lll_reduce(skew);
    CHECK(int_abs(int_det(s.transform)) == 1);
    auto norm2 = [](const RatVec& v) {
        Rat n = 0;
        for (const auto& c : v)
            n += c * c;
        return n;
    };
    // exhaustive shortest vector in the lattice, coefficients in [-120, 120]
    Rat shortest;
    bool first = true;
    for (long a = -120; a <= 120; ++a)
        for (long b = -5; b <= 5; ++b) {
            if (a == 0 && b == 0)
                continue;
            RatVec v{Rat(100 * a + 99 * b), Rat(b)};
            Rat n = norm2(v);
            if (first || n < shortest) {
                shortest = n;
                first = false;
            }
        }
    CHECK(norm2(s.basis[0]) == shortest);

    // random unimodular scramble of diag(1,1,1,1000)
    RatMatrix d4{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1000}};
    RatMatrix scrambled = d4;
    Rng rng(7);
    for (int step = 0; step < 12; ++step) {
        int i = static_cast<int>(rng.range(0, 3)), j = static_cast<int>(rng.range(0, 3));
        if (i == j)
            continue;
        long c = rng.range(-3, 3);
        for (int col = 0; col < 4; ++col)
            scrambled[i][col] += Rat(c) * scrambled[j][col];
    }
    auto t = lll_reduce(scrambled);
    CHECK(int_abs(int_det(t.transform)) == 1);
    CHECK(norm2(t.basis[0]) == 1);
    CHECK(norm2(t.basis[1]) == 1);
    CHECK(norm2(t.basis[2]) == 1);
    CHECK(norm2(t.basis[3]) <= Rat(2 * 1000 * 1000));

    RatMatrix deficient{{1, 2}, {2, 4}};
    CHECK_THROWS_AS(lll_reduce(deficient), std::invalid_argument);
}

TEST_CASE("em_feasible on boxes and the rational-approximation slab")
{
    CHECK(em_feasible(box({{Rat(1, 10), Rat(9, 10)},
                           {Rat(1, 10), Rat(9, 10)},
                           {Rat(1, 10), Rat(9, 10)},
                           {Rat(1, 10), Rat(9, 10)}})));
    CHECK_FALSE(em_feasible(box({{Rat(-1, 2), Rat(1, 2)},
                                 {Rat(-1, 2), Rat(1, 2)},
                                 {Rat(-1, 2), Rat(1, 2)},
                                 {Rat(-1, 2), Rat(1, 2)}})));

    // thin slab 0.3 <= x + y*(665857/470832) <= 0.300001, |x|,|y| <= 10^3
    RationalPolytope slab(2);
    Rat alpha(665857, 470832);
    slab.add_constraint({Rat(1), alpha}, Rat(300001, 1000000));
    slab.add_constraint({Rat(-1), Rat(-alpha)}, Rat(-3, 10));
    slab.add_constraint({Rat(1), Rat(0)}, Rat(1000));
    slab.add_constraint({Rat(-1), Rat(0)}, Rat(1000));
    slab.add_constraint({Rat(0), Rat(1)}, Rat(1000));
    slab.add_constraint({Rat(0), Rat(-1)}, Rat(1000));

    // oracle: scan y, solve the strict x-window exactly
    bool brute_has_point = false;
    for (long y = -1000; y <= 1000 && !brute_has_point; ++y) {
        Rat lo = Rat(3, 10) - alpha * y;
        Rat hi = Rat(300001, 1000000) - alpha * y;
        Int xlo = rat_floor(lo) + 1;              // x > lo
        Int xhi = rat_ceil(hi) - 1;               // x < hi
        if (Rat(xlo) == lo)
            xlo += 0; // strictness already enforced by +1
        for (Int x = xlo; x <= xhi; ++x) {
            if (int_abs(x) < 1000 && int_abs(Int(y)) < 1000 && Rat(x) > lo && Rat(x) < hi)
                brute_has_point = true;
        }
    }
    CHECK(em_feasible(slab) == !brute_has_point);
}

TEST_CASE("ip_enumerate spec examples")
{
    // square [-1.5, 1.5]^2 has 9 integer points
    auto sq = box({{Rat(-3, 2), Rat(3, 2)}, {Rat(-3, 2), Rat(3, 2)}});
    auto r = ip_enumerate(2, sq);
    CHECK(r.points.size() == 9);

    // a polytope with no integer points short-circuits with zero bisections
    auto hole = box({{Rat(1, 10), Rat(9, 10)}, {Rat(1, 10), Rat(9, 10)}, {Rat(1, 10), Rat(9, 10)}});
    auto e = ip_enumerate(3, hole);
    CHECK(e.points.empty());
    CHECK(e.stats.bisection_count == 0);

    // unit cube, corners inclusive: 16 points in 4-D
    auto cube = box({{0, 1}, {0, 1}, {0, 1}, {0, 1}});
    auto c = brute_force_enumerate(cube, 1000);
    CHECK(c.size() == 16);
    auto ci = ip_enumerate(4, cube);
    CHECK(ci.points == c);

    CHECK_THROWS(brute_force_enumerate(box({{0, 100}, {0, 100}}), 50));
}

TEST_CASE("differential: ip_enumerate equals brute force; em matches interior")
{
    Rng rng(2024);
    int checked = 0;
    long long prop1_checked = 0;
    while (checked < 60) {
        int dim = static_cast<int>(rng.range(2, 4));
        long width = dim == 2 ? 20 : (dim == 3 ? 10 : 6);
        auto P = random_polytope(rng, dim, width);
        ++checked;

        auto bf = brute_force_enumerate(P, 2'000'000);
        auto ip = ip_enumerate(dim, P);
        REQUIRE(ip.points == bf);
        CHECK_FALSE(ip.truncated);

        std::vector<IntVec> strict;
        for (const auto& pt : bf)
            if (P.contains_int_strict(pt))
                strict.push_back(pt);
        CHECK(em_feasible(P) == strict.empty());

        // instrumented bisection bound, vacuous at m = 0
        long long m = static_cast<long long>(ip.points.size());
        if (m >= 1 && ip.stats.bisection_count > 0) {
            Rat W = ip.stats.max_branch_width;
            long lw = ceil_log2(W);
            CHECK(ip.stats.bisection_count <= m * (lw + 1));
            ++prop1_checked;
        }

        // optimized saved-point variant returns the same set
        if (checked % 7 == 0) {
            EnumOptions opt;
            opt.saved_point_bisection = true;
            auto alt = ip_enumerate(dim, P, opt);
            CHECK(alt.points == bf);
        }
    }
    CHECK(prop1_checked > 5);
}

TEST_CASE("point cap truncates deterministically")
{
    auto big = box({{0, 30}, {0, 30}});
    EnumOptions opts;
    opts.point_cap = 50;
    auto r = ip_enumerate(2, big, opts);
    CHECK(r.truncated);
    CHECK(r.points.size() >= 50);
    auto r2 = ip_enumerate(2, big, opts);
    CHECK(r.points == r2.points);
}

TEST_CASE("polytope json round-trips")
{
    auto P = box({{Rat(-3, 2), Rat(3, 2)}, {Rat(1, 7), Rat(22, 7)}});
    auto text = P.to_json();
    auto Q = RationalPolytope::from_json(text);
    CHECK(Q.to_json() == text);
    auto bp = brute_force_enumerate(P, 10000);
    auto bq = brute_force_enumerate(Q, 10000);
    CHECK(bp == bq);
}
