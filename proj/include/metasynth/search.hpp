#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "metasynth/enumerate.hpp"
#include "metasynth/geometry.hpp"
#include "metasynth/norm_solver.hpp"

namespace metasynth {

enum class SearchMode { FirstFeasible, MinKAllCandidates };

struct SearchConfig {
    double lambda = 0.1;                  // exception threshold exponent, in (0, 3/4]
    SearchMode mode = SearchMode::FirstFeasible;
    long long norm_budget = 10'000'000;   // per norm-equation instance
    std::uint64_t seed = 0;
    mpfr_prec_t precision_bits = 0;       // 0 derives from epsilon
    std::optional<int> k_max;             // overrides the hard level cap
    int threads = 1;
};

/// A norm-equation instance whose factoring budget ran out; retryable.
struct UnknownInstance {
    Eisenstein u, v;
    int k = 0;
    Int residual;
};

struct ApproxResult {
    Eisenstein u, v, w;
    int k = 0;
    Interval dist;
    int r_count_bound = 0;                // k + 1
    std::array<int, 3> depth_range{};     // {2k-1, 2k, 2k+1}
    std::pair<int, int> levels{0, 1};
    long long candidates_inspected = 0;
    std::vector<UnknownInstance> unknown_instances;
    bool exception_sampled = false;       // produced by sampling an oversized candidate set
    long long norm_work = 0;
    EnumStats enum_stats;
};

/// Raised (as a value) when a candidate set exceeds eps^-lambda and no
/// sampled candidate was feasible.
struct SearchExceptionReport {
    int k_at_exception = 0;
    Interval count_threshold;             // eps^-lambda
    long long candidate_count = 0;
    bool count_is_lower_bound = false;    // enumeration was truncated at the cap
    long long candidates_inspected = 0;
    std::vector<UnknownInstance> unknown_instances;
};

/// Level cap reached with norm-equation instances still unresolved.
struct BudgetExhaustedReport {
    int k_reached = 0;
    long long candidates_inspected = 0;
    std::vector<UnknownInstance> unknown_instances;
};

using SearchOutcome = std::variant<ApproxResult, SearchExceptionReport, BudgetExhaustedReport>;

/**
 * Iterative search for a feasible lattice point: for k = 0, 1, ... enumerate
 * the scaled-meniscus candidates, bail out with an exception report when the
 * set exceeds eps^-lambda (FirstFeasible first samples up to 64k candidates
 * in projection order), test candidates for k-feasibility easy-first, and
 * return the first success (FirstFeasible) or the smallest-distance feasible
 * candidate at the minimal k (MinKAllCandidates). Beyond the hard cap
 * ceil(4 log3(1/eps)) + 16 the meniscus is thick enough that rounding
 * sqrt(3)^k p and perturbing locally replaces full enumeration.
 */
SearchOutcome approximate_state(const TwoLevelState& target, const ExactReal& epsilon,
                                const SearchConfig& cfg = {});

/// Candidates sorted by decreasing projection onto r[target] (best
/// precision first), ties by lexicographic coefficients.
std::vector<Candidate> candidate_order(std::vector<Candidate> candidates,
                                       const TwoLevelState& target, mpfr_prec_t prec);

struct ReflectionBudgetReport {
    ApproxResult state_result;
    int reflection_r_count_bound = 0;     // 2 (k+1) + 1
};

/// State preparation cost lifted to the Householder reflection about the
/// target: R-count at most twice the preparation cost plus one.
std::variant<ReflectionBudgetReport, SearchExceptionReport, BudgetExhaustedReport>
reflection_budget(const TwoLevelState& target, const ExactReal& epsilon,
                  const SearchConfig& cfg = {});

} // namespace metasynth
