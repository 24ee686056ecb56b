#pragma once

#include <optional>

#include "metasynth/eisenstein.hpp"
#include "metasynth/numtheory.hpp"

namespace metasynth {

enum class NormStatus { Solved, Unsolvable, Unknown };

/**
 * Result of the norm-equation oracle for |w|^2 = n over Z[w3].
 * Solved carries w with norm(w) = n exactly. Unsolvable is only reported
 * together with a complete factorization witness. Unknown means the
 * factoring budget ran out; the instance can be retried with a larger one.
 */
struct NormOutcome {
    NormStatus status = NormStatus::Unknown;
    Eisenstein w;
    long long work_spent = 0;
    std::optional<Factorization> witness;
};

enum class EasyReason { PowerOfThree, PrimeCofactor, SmallCofactor, Other };

/// Whether deciding solvability of |w|^2 = n is cheap: n = 3^a * m with
/// m = 1, m prime, or m below the small-cofactor threshold.
struct InstanceClass {
    bool easy = false;
    EasyReason reason = EasyReason::Other;
};

struct NormSolverConfig {
    long long budget = 10'000'000;  // rho iterations + Miller-Rabin calls per instance
    std::uint64_t seed = 0;
    Int small_cofactor_bound = Int(1'000'000);
};

InstanceClass classify(const Int& n, const NormSolverConfig& cfg = {});

/// Decide and constructively solve |w|^2 = n.
NormOutcome solve_norm_equation(const Int& n, const NormSolverConfig& cfg = {});

/// Thrown by k_feasible when norm(u) + norm(v) > 3^k.
struct OutsideBallError : std::domain_error {
    OutsideBallError() : std::domain_error("candidate lies outside the closed ball: norm(u)+norm(v) > 3^k") {}
};

/// Feasibility of the pair (u, v) at level k: solve |w|^2 = 3^k - |u|^2 - |v|^2.
NormOutcome k_feasible(const Eisenstein& u, const Eisenstein& v, int k,
                       const NormSolverConfig& cfg = {});

} // namespace metasynth
