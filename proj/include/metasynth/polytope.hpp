#pragma once

#include <optional>
#include <string>
#include <vector>

#include "metasynth/bigint.hpp"

namespace metasynth {

using RatVec = std::vector<Rat>;
using IntVec = std::vector<Int>;

/**
 * H-representation polytope { x : a_i . x <= b_i } with exact rational data,
 * stored with integer-cleared rows (each row scaled to integer coefficients
 * with content 1). Dimension is at most 4 throughout this project.
 */
class RationalPolytope {
  public:
    struct Row {
        IntVec a;
        Int b;
    };

    RationalPolytope() = default;
    explicit RationalPolytope(int dim) : dim_(dim) {}

    int dimension() const { return dim_; }
    const std::vector<Row>& rows() const { return rows_; }
    bool empty_rows() const { return rows_.empty(); }

    void add_constraint(const RatVec& a, const Rat& b);
    void add_constraint_int(IntVec a, Int b);

    /// Exact satisfaction of all constraints at an integer point.
    bool contains_int(const IntVec& x) const;
    /// Strict satisfaction of all constraints at an integer point.
    bool contains_int_strict(const IntVec& x) const;
    bool contains_rat(const RatVec& x) const;

    /// Throws std::runtime_error if the feasible region is unbounded
    /// (checked by LP along +/- each axis).
    void verify_bounded() const;

    std::string to_json() const;
    static RationalPolytope from_json(const std::string& text);

  private:
    int dim_ = 0;
    std::vector<Row> rows_;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    Rat value;      // optimal objective value when status == Optimal
    RatVec point;   // an optimal point
};

/// Exact-rational simplex (Bland's rule, two phases) over free variables:
/// optimize c.x subject to the polytope rows.
LpResult lp_optimize(const RationalPolytope& P, const RatVec& objective, bool maximize);

struct WidthResult {
    bool feasible = false;
    Rat min_value;
    Rat max_value;
    RatVec argmin;
    RatVec argmax;

    Rat width() const { return max_value - min_value; }
};

/// Exact extent of the linear functional d over P; `feasible == false` is the
/// distinguished Empty result for infeasible polytopes.
WidthResult width_along(const RationalPolytope& P, const RatVec& d);

} // namespace metasynth
