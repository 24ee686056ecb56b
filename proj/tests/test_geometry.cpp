#include <doctest.h>

#include <cstdint>

#include "metasynth/enumerate.hpp"
#include "metasynth/geometry.hpp"

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
    Rat unit_rat()
    {
        return Rat(static_cast<long>(next() % 2000001) - 1000000, 1000000);
    }
};

TwoLevelState plus_state()
{
    // (|0> + |1>)/sqrt(2)
    ExactReal inv_sqrt2 = ExactReal(Rat(1)) / ExactReal::sqrt_of(Rat(2));
    return TwoLevelState{inv_sqrt2, ExactReal(Rat(0)), inv_sqrt2, ExactReal(Rat(0)), {0, 1}};
}

TwoLevelState phi_state()
{
    // (-e^{-i pi/9} |0> + e^{i pi/9} |2>)/sqrt(2)
    ExactReal inv_sqrt2 = ExactReal(Rat(1)) / ExactReal::sqrt_of(Rat(2));
    ExactReal c = ExactReal::cos_pi(Rat(1, 9));
    ExactReal s = ExactReal::sin_pi(Rat(1, 9));
    return TwoLevelState{-(c * inv_sqrt2), s * inv_sqrt2, c * inv_sqrt2, s * inv_sqrt2, {0, 2}};
}

/// Random near-unit state from exact rational amplitudes (normalized
/// numerically, then rounded to rationals at ~2^-100).
TwoLevelState random_state(Rng& rng)
{
    mpfr_prec_t p = 256;
    std::array<Rat, 4> raw;
    for (auto& c : raw)
        c = rng.unit_rat() + Rat(1, 1 + static_cast<long>(rng.next() % 1000));
    Interval n2(p);
    for (const auto& c : raw)
        n2 += Interval::from_rational(c, p).square();
    Interval inv = Interval::from_int(1, p) / n2.sqrt();
    std::array<Rat, 4> comps;
    for (int i = 0; i < 4; ++i) {
        Interval c = Interval::from_rational(raw[i], p) * inv;
        comps[i] = Rat(rat_round((c.lower_rational() + c.upper_rational()) / 2 * Rat(Int(1) << 100)), Int(1) << 100);
    }
    return TwoLevelState{ExactReal(comps[0]), ExactReal(comps[1]), ExactReal(comps[2]),
                         ExactReal(comps[3]), {0, 1}};
}

} // namespace

TEST_CASE("embed: basis state, phi, and i-superposition")
{
    mpfr_prec_t prec = 128;
    TwoLevelState basis{ExactReal(Rat(1)), ExactReal(Rat(0)), ExactReal(Rat(0)), ExactReal(Rat(0)), {0, 1}};
    auto r = embed(basis);
    CHECK(r[0].eval(prec).lower_rational() == 1);
    CHECK(r[1].eval(prec).upper_rational() == 0);

    auto rphi = embed(phi_state());
    Interval c = cos_pi_frac_interval(Rat(1, 9), prec);
    Interval s = sin_pi_frac_interval(Rat(1, 9), prec);
    Interval inv_sqrt2 = Interval::from_int(1, prec) / sqrt_int_interval(2, prec);
    CHECK((rphi[0].eval(prec) + c * inv_sqrt2).abs().upper_rational() < Rat(1, Int(1) << 100));
    CHECK((rphi[1].eval(prec) - s * inv_sqrt2).abs().upper_rational() < Rat(1, Int(1) << 100));
    CHECK((rphi[2].eval(prec) - c * inv_sqrt2).abs().upper_rational() < Rat(1, Int(1) << 100));

    // (|0> + i|1>)/sqrt(2) -> (1/sqrt2, 0, 0, 1/sqrt2)
    ExactReal z = ExactReal(Rat(0));
    ExactReal w = ExactReal(Rat(1)) / ExactReal::sqrt_of(Rat(2));
    TwoLevelState si{w, z, z, w, {0, 1}};
    auto ri = embed(si);
    CHECK((ri[3].eval(prec) - inv_sqrt2).abs().upper_rational() < Rat(1, Int(1) << 100));
    CHECK(si.is_normalized(128));
}

TEST_CASE("distance: self, orthogonal, and w-independence")
{
    mpfr_prec_t prec = 192;
    TwoLevelState basis{ExactReal(Rat(1)), ExactReal(Rat(0)), ExactReal(Rat(0)), ExactReal(Rat(0)), {0, 1}};
    Candidate self{Eisenstein(1, 0), Eisenstein(0, 0), 0, {0, 1}};
    CHECK(distance(basis, self, prec).upper_rational() < Rat(1, Int(1) << 150));

    Candidate orth{Eisenstein(0, 0), Eisenstein(1, 0), 0, {0, 1}};
    Interval d = distance(basis, orth, prec);
    Interval s2 = sqrt_int_interval(2, prec);
    CHECK((d - s2).abs().upper_rational() < Rat(1, Int(1) << 150));

    Candidate mismatched{Eisenstein(1, 0), Eisenstein(0, 0), 0, {0, 2}};
    CHECK_THROWS_AS(distance(basis, mismatched, prec), std::invalid_argument);

    // the formula never reads a third amplitude: identical bits por construction
    Interval d1 = distance(basis, orth, prec);
    CHECK(mpfr_cmp(d.lo(), d1.lo()) == 0);
    CHECK(mpfr_cmp(d.hi(), d1.hi()) == 0);
}

TEST_CASE("distance: phi against the corrected k=30 proxy state")
{
    mpfr_prec_t prec = 256;
    Candidate row1{Eisenstein(Int(-7531010), Int(4006785)),
                   Eisenstein(Int(11537794), Int(4006785)), 30, {0, 2}};
    Interval d = distance(phi_state(), row1, prec);
    Interval dl3 = d.log3();
    // 3^-9.53 within 0.05 in log3
    CHECK(dl3.upper_rational() < Rat(-948, 100));
    CHECK(dl3.lower_rational() > Rat(-958, 100));
}

TEST_CASE("observation-1 equivalence at 10x precision")
{
    Rng rng(37);
    mpfr_prec_t prec = 1280;
    for (int iter = 0; iter < 25; ++iter) {
        TwoLevelState x = random_state(rng);
        TwoLevelState y = random_state(rng);
        // dist(x, y) < eps  iff  <r[x], r[y]> > 1 - eps^2/2
        Rat eps(static_cast<long>(rng.range(1, 1000)), 1000);
        auto rx = embed(x);
        auto ry = embed(y);
        Interval inner(prec);
        for (int i = 0; i < 4; ++i)
            inner += rx[i].eval(prec) * ry[i].eval(prec);
        Interval dist2 = (Interval::from_int(1, prec) - inner) * Interval::from_int(2, prec);
        Interval eps2 = Interval::from_rational(eps * eps, prec);
        Interval rhs = Interval::from_rational(Rat(1) - eps * eps / 2, prec);
        bool left = dist2.certainly_less(eps2);
        bool right = rhs.certainly_less(inner);
        bool left_ge = eps2.certainly_less(dist2) || dist2.overlaps(eps2);
        if (left || right) {
            CHECK(left == right);
        } else {
            CHECK(left_ge); // both sides agree the inequality fails
        }
    }
}

TEST_CASE("grid map round-trips and sends scaled generators to unit vectors")
{
    const auto& fwd = iota_columns();
    const auto& inv = iota_inverse_columns();
    for (int j = 0; j < 4; ++j) {
        // iota(iota_inverse(e_j)) == e_j, symbolically
        Vec4Q3 e{QSqrt3(), QSqrt3(), QSqrt3(), QSqrt3()};
        e[j] = QSqrt3(Rat(1));
        Vec4Q3 once = apply_columns(inv, e);
        Vec4Q3 back = apply_columns(fwd, once);
        for (int i = 0; i < 4; ++i)
            CHECK(back[i] == e[i]);
        // iota_inverse maps generator j to the standard basis vector e_j
        Vec4Q3 gen = ScaledLatticeBasis::generators()[j];
        Vec4Q3 grid = apply_columns(inv, gen);
        for (int i = 0; i < 4; ++i)
            CHECK(grid[i] == (i == j ? QSqrt3(Rat(1)) : QSqrt3()));
    }

    auto G = ScaledLatticeBasis::gram();
    CHECK(G[0][0] == 1);
    CHECK(G[0][1] == Rat(-1, 2));
    CHECK(G[2][3] == Rat(-1, 2));
    CHECK(G[0][2] == 0);

    // integer spans reproduce embedded pairs
    ScaledLatticeBasis basis{3};
    IntVec a{2, -1, 4, 7};
    Vec4Q3 lhs = basis.embed_coeffs(a);
    Vec4Q3 rhs = embed_eisenstein_pair(Eisenstein(2, -1), Eisenstein(4, 7));
    for (int i = 0; i < 4; ++i)
        CHECK(lhs[i] == rhs[i]);
}

TEST_CASE("in_meniscus basics")
{
    mpfr_prec_t prec = 160;
    TwoLevelState basis{ExactReal(Rat(1)), ExactReal(Rat(0)), ExactReal(Rat(0)), ExactReal(Rat(0)), {0, 1}};
    Meniscus m = meniscus_around(basis, ExactReal(Rat(1, 10)));

    // rounding of sqrt3^k p for even k is the point (3^(k/2), 0, 0, 0)
    CHECK(in_meniscus({Int(9), Int(0), Int(0), Int(0)}, m, 4, prec));
    CHECK_FALSE(in_meniscus({Int(0), Int(0), Int(0), Int(0)}, m, 4, prec));

    // boundary candidate: norm sum exactly 3^k passes the closed ball test
    Meniscus wide = meniscus_around(basis, ExactReal(Rat(1, 2)));
    CHECK(in_meniscus({Int(3), Int(0), Int(0), Int(0)}, wide, 2, prec));
}

TEST_CASE("enclosing polytope: containment, widths, and the p=e1 example")
{
    mpfr_prec_t prec = 192;
    TwoLevelState basis{ExactReal(Rat(1)), ExactReal(Rat(0)), ExactReal(Rat(0)), ExactReal(Rat(0)), {0, 1}};

    SUBCASE("p = e1, eps = 0.1, k = 0: first euclidean coordinate stays above 0.99")
    {
        Meniscus m = meniscus_around(basis, ExactReal(Rat(1, 10)));
        RationalPolytope P = enclosing_polytope(m, 0, prec);
        // the first euclidean coordinate of q = iota(y) is y1 - y2/2
        RatVec d{Rat(1), Rat(-1, 2), Rat(0), Rat(0)};
        auto w = width_along(P, d);
        REQUIRE(w.feasible);
        CHECK(w.min_value > Rat(99, 100));
    }

    SUBCASE("containment: every enumerated meniscus point lies in P")
    {
        TwoLevelState plus = plus_state();
        ExactReal eps(Rat(35, 100));
        Meniscus m = meniscus_around(plus, eps);
        for (int k = 0; k <= 4; ++k) {
            RationalPolytope P = enclosing_polytope(m, k, prec);
            // oracle: scan coefficient box |ai| <= 3^(k/2)+2 for meniscus members
            long B = 1;
            for (int t = 0; t < (k + 1) / 2; ++t)
                B *= 3;
            B += 2;
            IntVec a(4);
            for (long a1 = -B; a1 <= B; ++a1)
                for (long a2 = -B; a2 <= B; ++a2)
                    for (long a3 = -B; a3 <= B; ++a3)
                        for (long a4 = -B; a4 <= B; ++a4) {
                            a = {Int(a1), Int(a2), Int(a3), Int(a4)};
                            Candidate c = Candidate::from_coeffs(a, k);
                            if (!c.inside_ball())
                                continue;
                            if (in_meniscus(a, m, k, prec))
                                CHECK(P.contains_int(a));
                        }
        }
    }

    SUBCASE("slab and lateral widths within factor 4 of the closed forms")
    {
        TwoLevelState plus = plus_state();
        ExactReal eps(Rat(1, 9));
        Meniscus m = meniscus_around(plus, eps);
        int k = 6;
        RationalPolytope P = enclosing_polytope(m, k, prec);

        // functional <q, p> expressed in grid coordinates, rounded to 2^-60
        auto pull_back = [&](const std::array<Interval, 4>& n) {
            Interval half = Interval::from_rational(Rat(1, 2), prec);
            Interval s32 = sqrt_int_interval(3, prec) * half;
            std::array<Interval, 4> g{n[0], -n[0] * half + n[1] * s32, n[2],
                                      -n[2] * half + n[3] * s32};
            RatVec d(4);
            for (int i = 0; i < 4; ++i) {
                Rat mid = (g[i].lower_rational() + g[i].upper_rational()) / 2;
                d[i] = make_rat(rat_round(mid * Rat(Int(1) << 60)), Int(1) << 60);
            }
            return d;
        };
        auto rp = embed(plus);
        std::array<Interval, 4> pv{rp[0].eval(prec), rp[1].eval(prec), rp[2].eval(prec),
                                   rp[3].eval(prec)};
        auto w = width_along(P, pull_back(pv));
        REQUIRE(w.feasible);
        Interval scale = sqrt3_pow_interval(k, prec);
        Interval eps_i = eps.eval(prec);
        Interval slab = scale * eps_i.square() * Interval::from_rational(Rat(1, 2), prec);
        // spec tolerance: width along p at most sqrt3^k eps^2 (1 + 2^-10)
        CHECK(w.width() <= slab.upper_rational() * Rat(2049, 1024));
        CHECK(w.width() >= slab.lower_rational() * Rat(1, 4));

        // a direction orthogonal to p: gram-schmidt e2 against p
        std::array<Interval, 4> orth;
        Interval ip = pv[1]; // <e2, p>
        for (int i = 0; i < 4; ++i) {
            orth[i] = Interval::from_int(i == 1 ? 1 : 0, prec) - ip * pv[i];
        }
        Interval nrm(prec);
        for (int i = 0; i < 4; ++i)
            nrm += orth[i].square();
        nrm = nrm.sqrt();
        for (int i = 0; i < 4; ++i)
            orth[i] = orth[i] / nrm;
        auto wo = width_along(P, pull_back(orth));
        REQUIRE(wo.feasible);
        Interval lateral = scale * (eps_i.square() - eps_i.square().square() *
                                    Interval::from_rational(Rat(1, 4), prec)).sqrt() *
                           Interval::from_int(2, prec);
        CHECK(wo.width() <= lateral.upper_rational() * 4);
        CHECK(wo.width() >= lateral.lower_rational() / 4);
    }
}

TEST_CASE("lemma-1 style multiplication of meniscus points")
{
    // two distinct lattice points in a scaled meniscus produce 3^l + 1
    // members at level k0 + 2l via the homothety r y1 + (3^l - r) y2
    mpfr_prec_t prec = 192;
    TwoLevelState plus = plus_state();
    ExactReal eps(Rat(45, 100));
    Meniscus m = meniscus_around(plus, eps);

    int k0 = -1;
    IntVec y1, y2;
    for (int k = 0; k <= 6 && k0 < 0; ++k) {
        RationalPolytope P = enclosing_polytope(m, k, prec);
        auto pts = ip_enumerate(4, P);
        std::vector<IntVec> members;
        for (const auto& a : pts.points)
            if (in_meniscus(a, m, k, prec))
                members.push_back(a);
        if (members.size() >= 2) {
            k0 = k;
            y1 = members[0];
            y2 = members[1];
        }
    }
    REQUIRE(k0 >= 0);
    for (int l = 1; l <= 2; ++l) {
        Int scale = pow3(static_cast<unsigned>(l));
        long count = 0;
        for (Int r = 0; r <= scale; ++r) {
            IntVec combo(4);
            for (int i = 0; i < 4; ++i)
                combo[i] = r * y1[i] + (scale - r) * y2[i];
            if (in_meniscus(combo, m, k0 + 2 * l, prec))
                ++count;
        }
        CHECK(count == static_cast<long>(pow3(static_cast<unsigned>(l)).convert_to<long>()) + 1);
    }
}

TEST_CASE("working precision scales with epsilon")
{
    CHECK(working_precision(ExactReal(Rat(1, 2))) >= 128);
    mpfr_prec_t p1 = working_precision(ExactReal::pow3(Rat(-10)));
    mpfr_prec_t p2 = working_precision(ExactReal::pow3(Rat(-30)));
    CHECK(p2 > p1);
    CHECK(p1 >= 4 * 15 + 128); // 3^-10 ~ 2^-15.85
}
