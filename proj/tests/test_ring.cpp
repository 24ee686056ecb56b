#include <doctest.h>

#include <cstdint>
#include <set>
#include <vector>

#include "metasynth/eisenstein.hpp"
#include "metasynth/norm_solver.hpp"
#include "metasynth/numtheory.hpp"

using namespace metasynth;

namespace {

// deterministic small PRNG for property tests
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

} // namespace

TEST_CASE("eisenstein ring basics")
{
    Eisenstein x(2, 1);
    CHECK(x.conj() == Eisenstein(1, -1));
    CHECK(Eisenstein(1, 2).norm() == 3);
    CHECK((Eisenstein(1, 2) * Eisenstein(1, 2)) == Eisenstein(-3, 0));

    // x * conj(x) == norm(x) * 1
    Rng rng(7);
    for (int i = 0; i < 200; ++i) {
        Eisenstein a(rng.range(-50, 50), rng.range(-50, 50));
        Eisenstein p = a * a.conj();
        CHECK(p.a == a.norm());
        CHECK(p.b == 0);
    }
}

TEST_CASE("norm is multiplicative and positive definite")
{
    Rng rng(11);
    for (int i = 0; i < 500; ++i) {
        Eisenstein a(rng.range(-1000, 1000), rng.range(-1000, 1000));
        Eisenstein b(rng.range(-1000, 1000), rng.range(-1000, 1000));
        CHECK((a * b).norm() == a.norm() * b.norm());
        CHECK(a.norm() >= 0);
        if (a.norm() == 0)
            CHECK(a.is_zero());
    }
}

TEST_CASE("exactly six units")
{
    int unit_count = 0;
    for (long a = -2; a <= 2; ++a)
        for (long b = -2; b <= 2; ++b)
            if (Eisenstein(a, b).norm() == 1)
                ++unit_count;
    CHECK(unit_count == 6);
}

TEST_CASE("euclid_div spec examples and Euclidean property")
{
    auto [q, r] = euclid_div(Eisenstein(3, 0), Eisenstein(1, 2));
    CHECK(q == Eisenstein(-1, -2));
    CHECK(r.is_zero());

    auto [q0, r0] = euclid_div(Eisenstein(0, 0), Eisenstein(5, 1));
    CHECK(q0.is_zero());
    CHECK(r0.is_zero());

    CHECK_THROWS_AS(euclid_div(Eisenstein(1, 0), Eisenstein(0, 0)), std::domain_error);

    Rng rng(13);
    for (int i = 0; i < 500; ++i) {
        Eisenstein x(rng.range(-100000, 100000), rng.range(-100000, 100000));
        Eisenstein y(rng.range(-300, 300), rng.range(-300, 300));
        if (y.is_zero())
            continue;
        auto [qq, rr] = euclid_div(x, y);
        CHECK(x == qq * y + rr);
        CHECK(rr.norm() < y.norm());
    }
}

TEST_CASE("canonical associate is unique and stable")
{
    Rng rng(17);
    for (int i = 0; i < 300; ++i) {
        Eisenstein a(rng.range(-40, 40), rng.range(-40, 40));
        if (a.is_zero())
            continue;
        Eisenstein c = a.canonical_associate();
        CHECK(c.a > 0);
        CHECK(c.b >= 0);
        // all associates share the same canonical representative
        for (const auto& u : Eisenstein::units())
            CHECK((a * u).canonical_associate() == c);
    }
    CHECK(Eisenstein(0, 1).canonical_associate() == Eisenstein(1, 0));
    CHECK(Eisenstein(1, -2).canonical_associate() == Eisenstein(3, 1));
}

TEST_CASE("gcd spec examples")
{
    CHECK(eis_gcd(Eisenstein(7, 0), Eisenstein(3, 1)) == Eisenstein(3, 1));
    CHECK(eis_gcd(Eisenstein(2, 0), Eisenstein(3, 0)) == Eisenstein(1, 0));
    Eisenstein x(14, 5);
    CHECK(eis_gcd(x, Eisenstein(0, 0)) == x.canonical_associate());
    CHECK_THROWS_AS(eis_gcd(Eisenstein(0, 0), Eisenstein(0, 0)), std::domain_error);

    // g divides both arguments
    Rng rng(19);
    for (int i = 0; i < 200; ++i) {
        Eisenstein a(rng.range(-200, 200), rng.range(-200, 200));
        Eisenstein b(rng.range(-200, 200), rng.range(-200, 200));
        if (a.is_zero() && b.is_zero())
            continue;
        Eisenstein g = eis_gcd(a, b);
        if (!a.is_zero())
            CHECK(euclid_div(a, g).second.is_zero());
        if (!b.is_zero())
            CHECK(euclid_div(b, g).second.is_zero());
    }
}

TEST_CASE("miller-rabin has no false negatives below 10^6")
{
    // sieve of Eratosthenes as the independent oracle
    const int N = 1'000'000;
    std::vector<bool> composite(N, false);
    for (int p = 2; p * p < N; ++p)
        if (!composite[p])
            for (int q = p * p; q < N; q += p)
                composite[q] = true;
    long long primes = 0;
    for (int n = 2; n < N; ++n) {
        if (!composite[n]) {
            ++primes;
            REQUIRE(is_prime(Int(n)));
        }
    }
    CHECK(primes == 78498);
    // and spot-check no false positives on a few composites
    for (int n : {4, 1729, 341, 561, 999999}) // includes Carmichael numbers
        CHECK_FALSE(is_prime(Int(n)));
}

TEST_CASE("sqrt_mod spec examples")
{
    auto r = sqrt_mod(Int(-3), Int(7));
    REQUIRE(r.has_value());
    CHECK((*r == 2 || *r == 5));
    CHECK((*r * *r) % 7 == Int(4)); // -3 mod 7

    CHECK(sqrt_mod(Int(0), Int(11)) == Int(0));
    CHECK_THROWS_AS(sqrt_mod(Int(2), Int(15)), std::domain_error);

    // -3 is a non-residue for q = 2 (mod 3); verified exhaustively for small q
    for (int q : {2, 5, 11, 17, 23, 29, 41}) {
        bool residue = false;
        for (int x = 0; x < q; ++x)
            if ((x * x) % q == ((-3) % q + q) % q)
                residue = true;
        auto s = sqrt_mod(Int(-3), Int(q));
        CHECK(s.has_value() == residue);
        if (q > 3)
            CHECK_FALSE(s.has_value());
    }
}

TEST_CASE("factor: small cases and roundtrip")
{
    WorkBudget budget;
    auto f = factor(Int(12), budget);
    REQUIRE(f.complete());
    REQUIRE(f.factorization.factors.size() == 2);
    CHECK(f.factorization.factors[0].prime == 2);
    CHECK(f.factorization.factors[0].exponent == 2);
    CHECK(f.factorization.factors[1].prime == 3);
    CHECK(f.factorization.factors[1].exponent == 1);
    CHECK(f.factorization.product() == 12);

    CHECK(factor(Int(1), budget).factorization.factors.empty());
    CHECK_THROWS_AS(factor(Int(0), budget), std::domain_error);

    Rng rng(23);
    for (int i = 0; i < 30; ++i) {
        // product of two random 32-bit primes
        auto next_prime = [&](Int start) {
            Int p = start | 1;
            while (!is_prime(p))
                p += 2;
            return p;
        };
        Int p = next_prime(Int(rng.next() % 0xFFFFFFFFu | 0x80000000u));
        Int q = next_prime(Int(rng.next() % 0xFFFFFFFFu | 0x80000000u));
        WorkBudget b2{10'000'000, 0};
        auto g = factor(p * q, b2, 42);
        REQUIRE(g.complete());
        CHECK(g.factorization.product() == p * q);
        std::set<Int> expect{p, q};
        std::set<Int> got;
        for (const auto& pp : g.factorization.factors)
            got.insert(pp.prime);
        CHECK(got == expect);
    }
}

TEST_CASE("factor: paper row-1 shifted residual has even exponents at primes 2 mod 3")
{
    // 3^30 - norm(-7531010 + 4006784 w) - norm(11537794 + 4006784 w), states shifted by +4
    Eisenstein u(Int(-7531010) + 4, Int(4006784));
    Eisenstein v(Int(11537794) + 4, Int(4006784));
    Int n = pow3(30) - u.norm() - v.norm();
    REQUIRE(n > 0);
    WorkBudget budget;
    auto f = factor(n, budget, 1);
    REQUIRE(f.complete());
    CHECK(f.factorization.product() == n);
    for (const auto& pp : f.factorization.factors)
        if (pp.residue_mod_3 == 2)
            CHECK(pp.exponent % 2 == 0);
}

TEST_CASE("norm solver: trivial and spec examples")
{
    auto z = solve_norm_equation(Int(0));
    CHECK(z.status == NormStatus::Solved);
    CHECK(z.w.is_zero());

    auto one = solve_norm_equation(Int(1));
    CHECK(one.status == NormStatus::Solved);
    CHECK(one.w.norm() == 1);

    auto seven = solve_norm_equation(Int(7));
    REQUIRE(seven.status == NormStatus::Solved);
    CHECK(seven.w.norm() == 7);

    CHECK(solve_norm_equation(Int(2)).status == NormStatus::Unsolvable);
    CHECK(solve_norm_equation(Int(6)).status == NormStatus::Unsolvable);
}

TEST_CASE("norm solver agrees with brute force up to 10^4")
{
    // oracle: attainable norms are a^2 - a b + b^2 over all small pairs
    const long N = 10'000;
    std::vector<bool> attain(N + 1, false);
    const long bound = 120; // a^2 - ab + b^2 >= (a^2+b^2)/2 - covers all norms <= 10^4
    for (long a = -bound; a <= bound; ++a)
        for (long b = -bound; b <= bound; ++b) {
            long n = a * a - a * b + b * b;
            if (n <= N)
                attain[static_cast<size_t>(n)] = true;
        }
    for (long n = 0; n <= N; ++n) {
        auto out = solve_norm_equation(Int(n));
        REQUIRE(out.status != NormStatus::Unknown);
        bool solved = out.status == NormStatus::Solved;
        REQUIRE_MESSAGE(solved == attain[static_cast<size_t>(n)], "n = ", n);
        if (solved)
            CHECK(out.w.norm() == n);
    }
}

TEST_CASE("norm solver roundtrip on random elements")
{
    Rng rng(29);
    for (int i = 0; i < 200; ++i) {
        Eisenstein w(rng.range(-500000, 500000), rng.range(-500000, 500000));
        Int n = w.norm();
        auto out = solve_norm_equation(n, {.budget = 10'000'000, .seed = 5});
        REQUIRE(out.status == NormStatus::Solved);
        CHECK(out.w.norm() == n);
    }
}

TEST_CASE("classify thresholds")
{
    CHECK(classify(pow3(5)).reason == EasyReason::PowerOfThree);
    CHECK(classify(pow3(5)).easy);

    // 3 * p for a 40-bit prime
    Int p = (Int(1) << 40) + 15; // 1099511627791 is prime
    REQUIRE(is_prime(p));
    auto c = classify(3 * p);
    CHECK(c.easy);
    CHECK(c.reason == EasyReason::PrimeCofactor);

    CHECK(classify(Int(999'983) * 27).reason == EasyReason::SmallCofactor);

    // product of two 80-bit primes is not easy
    auto next_prime = [](Int start) {
        Int q = start | 1;
        while (!is_prime(q))
            q += 2;
        return q;
    };
    Int p1 = next_prime(Int(1) << 80);
    Int p2 = next_prime((Int(1) << 80) + 100000);
    auto h = classify(p1 * p2);
    CHECK_FALSE(h.easy);
}

TEST_CASE("k_feasible: examples and ball precondition")
{
    auto ok = k_feasible(Eisenstein(1, 0), Eisenstein(1, 0), 1);
    REQUIRE(ok.status == NormStatus::Solved);
    CHECK(ok.w.norm() == 1);

    CHECK(k_feasible(Eisenstein(1, 0), Eisenstein(0, 0), 1).status == NormStatus::Unsolvable);

    CHECK_THROWS_AS(k_feasible(Eisenstein(5, 0), Eisenstein(0, 0), 1), OutsideBallError);

    // Table 1 row 1 shifted state is 30-feasible (corrected omega coefficient)
    Eisenstein u(Int(-7531010) + 4, Int(4006785));
    Eisenstein v(Int(11537794) + 4, Int(4006785));
    auto t = k_feasible(u, v, 30);
    REQUIRE(t.status == NormStatus::Solved);
    CHECK(u.norm() + v.norm() + t.w.norm() == pow3(30));
}

TEST_CASE("easy instances never exhaust the budget")
{
    Rng rng(31);
    for (int i = 0; i < 50; ++i) {
        Int n = pow3(static_cast<unsigned>(rng.range(0, 8))) * Int(rng.range(1, 999'999));
        auto c = classify(n);
        if (!c.easy)
            continue;
        auto out = solve_norm_equation(n, {.budget = 2'000'000, .seed = 3});
        CHECK(out.status != NormStatus::Unknown);
    }
}
