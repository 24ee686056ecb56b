#pragma once

#include <optional>

#include "metasynth/lll.hpp"
#include "metasynth/polytope.hpp"

namespace metasynth {

struct EnumStats {
    long long bisection_count = 0;   // three-way splits at the top dimension only
    long long oracle_calls = 0;      // feasibility-oracle invocations
    int max_recursion_depth = 0;
    Rat max_branch_width = 0;        // largest exact width along a branching direction used

    void merge(const EnumStats& o)
    {
        bisection_count += o.bisection_count;
        oracle_calls += o.oracle_calls;
        max_recursion_depth = std::max(max_recursion_depth, o.max_recursion_depth);
        if (o.max_branch_width > max_branch_width)
            max_branch_width = o.max_branch_width;
    }
};

struct EnumOptions {
    std::optional<std::size_t> point_cap; // stop collecting beyond this many points
    bool saved_point_bisection = false;   // cut at a witnessed level instead of the median
};

struct EnumResult {
    std::vector<IntVec> points; // sorted lexicographically, deduplicated
    EnumStats stats;
    bool truncated = false;     // point_cap hit; points is a subset
};

/**
 * Feasibility oracle: true iff P contains no integer point satisfying the
 * strict versions of all constraints. Implemented Lenstra-style: branch
 * along a flat direction (axial or one found by LLL on the vertex-sample
 * covariance to round the body), substitute the hyperplane lattice, recurse
 * in one dimension fewer.
 */
bool em_feasible(const RationalPolytope& P);

/// Witness variant: an integer point strictly inside P, if one exists.
std::optional<IntVec> find_strict_interior_point(const RationalPolytope& P);

/**
 * Exactly the integer points of P (closed constraints), by recursive
 * subdivision: 1-D iteration at the base, feasibility-oracle early exit,
 * flat-direction descent, otherwise a three-way split at the integer level
 * nearest the median of the projection.
 */
EnumResult ip_enumerate(int n, const RationalPolytope& P, const EnumOptions& opts = {});

/// Differential-testing oracle: scan of the integer bounding box with exact
/// constraint checks. Throws when the box holds more than `cap` points.
std::vector<IntVec> brute_force_enumerate(const RationalPolytope& P, std::size_t cap);

} // namespace metasynth
