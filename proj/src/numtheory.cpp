#include "metasynth/numtheory.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

namespace metasynth {

namespace {

using boost::multiprecision::powm;

/// splitmix64, the usual stateless PRNG for deterministic reseeding.
std::uint64_t splitmix64(std::uint64_t& state)
{
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Uniform-ish value in [lo, hi] assembled from 64-bit chunks; only used to
/// seed rho walks, so mild modulo bias is irrelevant.
Int random_in_range(std::uint64_t& state, const Int& lo, const Int& hi)
{
    Int span = hi - lo + 1;
    unsigned bits = bit_length(span);
    Int v = 0;
    for (unsigned got = 0; got < bits + 64; got += 64)
        v = (v << 64) | Int(splitmix64(state));
    return lo + v % span;
}

bool miller_rabin_witness(const Int& n, const Int& a, const Int& d, unsigned r)
{
    Int x = powm(a % n, d, n);
    if (x == 1 || x == n - 1)
        return true;
    for (unsigned i = 1; i < r; ++i) {
        x = (x * x) % n;
        if (x == n - 1)
            return true;
    }
    return false;
}

} // namespace

bool is_prime(const Int& n, WorkBudget* budget)
{
    if (n < 2)
        return false;
    for (int p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n == p)
            return true;
        if (n % p == 0)
            return false;
    }
    Int d = n - 1;
    unsigned r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    // exact below 3.317e24 with the first twelve prime bases
    static const std::array<int, 12> fixed_bases = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    if (budget)
        budget->charge(1);
    for (int a : fixed_bases) {
        if (!miller_rabin_witness(n, Int(a), d, r))
            return false;
    }
    static const Int deterministic_limit("3317044064679887385961981");
    if (n < deterministic_limit)
        return true;
    // above the deterministic range: 20 extra witnesses derived from n
    std::uint64_t state = 0x6d657461u; // fixed tag; witnesses depend only on n
    state ^= (n % Int("18446744073709551557")).convert_to<std::uint64_t>();
    for (int i = 0; i < 20; ++i) {
        Int a = random_in_range(state, Int(2), n - 2);
        if (!miller_rabin_witness(n, a, d, r))
            return false;
    }
    return true;
}

std::optional<Int> sqrt_mod(const Int& a_in, const Int& p)
{
    if (!is_prime(p))
        throw std::domain_error("sqrt_mod: modulus is not prime");
    Int a = a_in % p;
    if (a < 0)
        a += p;
    if (a == 0)
        return Int(0);
    if (p == 2)
        return a;
    // Euler criterion
    if (powm(a, (p - 1) / 2, p) != 1)
        return std::nullopt;
    if (p % 4 == 3)
        return powm(a, (p + 1) / 4, p);
    // Tonelli-Shanks
    Int q = p - 1;
    unsigned s = 0;
    while ((q & 1) == 0) {
        q >>= 1;
        ++s;
    }
    Int z = 2;
    while (powm(z, (p - 1) / 2, p) != p - 1)
        ++z;
    Int m = s;
    Int c = powm(z, q, p);
    Int t = powm(a, q, p);
    Int x = powm(a, (q + 1) / 2, p);
    while (t != 1) {
        Int t2i = t;
        Int i = 0;
        while (t2i != 1) {
            t2i = (t2i * t2i) % p;
            ++i;
            if (i == m)
                return std::nullopt;
        }
        Int b = c;
        for (Int j = 0; j < m - i - 1; ++j)
            b = (b * b) % p;
        m = i;
        c = (b * b) % p;
        t = (t * c) % p;
        x = (x * b) % p;
    }
    return x;
}

namespace {

/// Brent's cycle variant of Pollard rho. Returns a nontrivial factor or
/// nullopt when the budget dies; n must be odd, composite, > 1.
std::optional<Int> pollard_brent(const Int& n, WorkBudget& budget, std::uint64_t& state)
{
    while (true) {
        Int y = random_in_range(state, Int(1), n - 1);
        Int c = random_in_range(state, Int(1), n - 1);
        Int m = 128;
        Int g = 1, r = 1, q = 1, x = 0, ys = y;
        while (g == 1) {
            x = y;
            for (Int i = 0; i < r; ++i) {
                if (!budget.charge(1))
                    return std::nullopt;
                y = (y * y + c) % n;
            }
            Int k = 0;
            while (k < r && g == 1) {
                ys = y;
                Int steps = std::min(m, Int(r - k));
                for (Int i = 0; i < steps; ++i) {
                    if (!budget.charge(1))
                        return std::nullopt;
                    y = (y * y + c) % n;
                    q = (q * int_abs(x - y)) % n;
                }
                g = int_gcd(q, n);
                k += m;
            }
            r <<= 1;
        }
        if (g == n) {
            // backtrack step by step
            g = 1;
            y = ys;
            while (g == 1) {
                if (!budget.charge(1))
                    return std::nullopt;
                y = (y * y + c) % n;
                g = int_gcd(int_abs(x - y), n);
            }
        }
        if (g != n)
            return g;
        // unlucky walk; reseed and retry
    }
}

/// n = b^e with e >= 2? Returns (b, e) for the largest such e.
std::optional<std::pair<Int, unsigned>> perfect_power(const Int& n)
{
    if (n < 4)
        return std::nullopt;
    unsigned maxe = bit_length(n);
    for (unsigned e = maxe; e >= 2; --e) {
        // integer e-th root by Newton on bit-length estimate
        Int lo = 1, hi = Int(1) << (bit_length(n) / e + 1);
        while (lo < hi) {
            Int mid = (lo + hi + 1) / 2;
            if (int_pow(mid, e) <= n)
                lo = mid;
            else
                hi = mid - 1;
        }
        if (int_pow(lo, e) == n)
            return std::make_pair(lo, e);
    }
    return std::nullopt;
}

void push_factor(std::vector<PrimePower>& out, const Int& p, unsigned e)
{
    for (auto& f : out) {
        if (f.prime == p) {
            f.exponent += e;
            return;
        }
    }
    out.push_back(PrimePower{p, e, static_cast<int>(p % 3)});
}

} // namespace

FactorOutcome factor(const Int& n_in, WorkBudget& budget, std::uint64_t seed)
{
    if (n_in < 1)
        throw std::domain_error("factor: argument must be >= 1");
    FactorOutcome out;
    Int n = n_in;
    if (n == 1)
        return out;

    for (int p = 2; p < 10'000; p = (p == 2 ? 3 : p + 2)) {
        if (Int(p) * p > n)
            break;
        unsigned e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e)
            push_factor(out.factorization.factors, Int(p), e);
    }
    if (n == 1) {
        std::sort(out.factorization.factors.begin(), out.factorization.factors.end(),
                  [](const PrimePower& x, const PrimePower& y) { return x.prime < y.prime; });
        return out;
    }

    std::vector<std::pair<Int, unsigned>> stack{{n, 1}};
    while (!stack.empty()) {
        auto [m, mult] = stack.back();
        stack.pop_back();
        if (m == 1)
            continue;
        if (is_prime(m, &budget)) {
            push_factor(out.factorization.factors, m, mult);
            continue;
        }
        if (auto pp = perfect_power(m)) {
            stack.emplace_back(pp->first, mult * pp->second);
            continue;
        }
        if (budget.exhausted()) {
            out.unresolved = int_pow(m, mult);
            break;
        }
        std::uint64_t state = seed ^ 0x9e3779b97f4a7c15ULL;
        state ^= static_cast<std::uint64_t>((m % Int("18446744073709551557")).convert_to<std::uint64_t>());
        auto g = pollard_brent(m, budget, state);
        if (!g) {
            out.unresolved = int_pow(m, mult);
            break;
        }
        stack.emplace_back(*g, mult);
        stack.emplace_back(m / *g, mult);
    }
    // leftover stack entries after exhaustion fold into the unresolved cofactor
    for (const auto& [m, mult] : stack) {
        Int rest = int_pow(m, mult);
        out.unresolved = out.unresolved ? Int(*out.unresolved * rest) : rest;
    }
    std::sort(out.factorization.factors.begin(), out.factorization.factors.end(),
              [](const PrimePower& x, const PrimePower& y) { return x.prime < y.prime; });
    return out;
}

} // namespace metasynth
