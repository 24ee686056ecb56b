#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "metasynth/bigint.hpp"

namespace metasynth {

/**
 * Deterministic work meter shared across a solver instance. One unit is one
 * Pollard-rho iteration or one Miller-Rabin invocation, which makes runs
 * reproducible independent of wall clock.
 */
struct WorkBudget {
    long long limit = 10'000'000;
    long long spent = 0;

    bool charge(long long units)
    {
        spent += units;
        return spent <= limit;
    }
    bool exhausted() const { return spent > limit; }
};

/// Deterministic Miller-Rabin: exact for n < 3.3*10^24 via a fixed witness
/// set, extended with witnesses derived from n above that range.
bool is_prime(const Int& n, WorkBudget* budget = nullptr);

/// Tonelli-Shanks square root of a modulo an odd prime p; nullopt when a is
/// a non-residue. Throws std::domain_error when p is not prime.
std::optional<Int> sqrt_mod(const Int& a, const Int& p);

struct PrimePower {
    Int prime;
    unsigned exponent;
    int residue_mod_3; // prime mod 3 in {0, 1, 2}
};

struct Factorization {
    std::vector<PrimePower> factors; // sorted by prime, ascending

    Int product() const
    {
        Int r = 1;
        for (const auto& f : factors)
            r *= int_pow(f.prime, f.exponent);
        return r;
    }
};

/**
 * Outcome of budgeted factoring: `complete()` when every cofactor was
 * resolved; otherwise `unresolved` holds the single composite cofactor that
 * remained when the budget ran out, and `factors` the part already split.
 */
struct FactorOutcome {
    Factorization factorization;
    std::optional<Int> unresolved;

    bool complete() const { return !unresolved.has_value(); }
};

/**
 * Factor n >= 1: trial division to 10^4, then Brent-cycle Pollard rho with
 * deterministic reseeding derived from (seed, n). Work is charged against
 * the budget; exhaustion yields a partial factorization.
 */
FactorOutcome factor(const Int& n, WorkBudget& budget, std::uint64_t seed = 0);

} // namespace metasynth
