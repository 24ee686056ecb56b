#include "metasynth/polytope.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace metasynth {

void RationalPolytope::add_constraint(const RatVec& a, const Rat& b)
{
    if (static_cast<int>(a.size()) != dim_)
        throw std::invalid_argument("constraint dimension mismatch");
    Int lcm = rat_den(b);
    for (const auto& c : a)
        lcm = lcm / int_gcd(lcm, rat_den(c)) * rat_den(c);
    IntVec ia(dim_);
    for (int i = 0; i < dim_; ++i)
        ia[i] = rat_num(a[i]) * (lcm / rat_den(a[i]));
    Int ib = rat_num(b) * (lcm / rat_den(b));
    add_constraint_int(std::move(ia), std::move(ib));
}

void RationalPolytope::add_constraint_int(IntVec a, Int b)
{
    if (static_cast<int>(a.size()) != dim_)
        throw std::invalid_argument("constraint dimension mismatch");
    Int g = int_abs(b);
    for (const auto& c : a)
        g = int_gcd(g, int_abs(c));
    if (g > 1) {
        for (auto& c : a)
            c /= g;
        b /= g;
    }
    rows_.push_back(Row{std::move(a), std::move(b)});
}

bool RationalPolytope::contains_int(const IntVec& x) const
{
    for (const auto& r : rows_) {
        Int s = 0;
        for (int i = 0; i < dim_; ++i)
            s += r.a[i] * x[i];
        if (s > r.b)
            return false;
    }
    return true;
}

bool RationalPolytope::contains_int_strict(const IntVec& x) const
{
    for (const auto& r : rows_) {
        Int s = 0;
        for (int i = 0; i < dim_; ++i)
            s += r.a[i] * x[i];
        if (s >= r.b)
            return false;
    }
    return true;
}

bool RationalPolytope::contains_rat(const RatVec& x) const
{
    for (const auto& r : rows_) {
        Rat s = 0;
        for (int i = 0; i < dim_; ++i)
            s += Rat(r.a[i]) * x[i];
        if (s > Rat(r.b))
            return false;
    }
    return true;
}

void RationalPolytope::verify_bounded() const
{
    for (int i = 0; i < dim_; ++i) {
        RatVec d(dim_, Rat(0));
        d[i] = 1;
        for (bool maximize : {false, true}) {
            LpResult r = lp_optimize(*this, d, maximize);
            if (r.status == LpStatus::Unbounded)
                throw std::runtime_error("polytope is unbounded along axis " + std::to_string(i));
            if (r.status == LpStatus::Infeasible)
                return; // empty region is bounded
        }
    }
}

std::string RationalPolytope::to_json() const
{
    nlohmann::ordered_json j;
    j["dimension"] = dim_;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& r : rows_) {
        nlohmann::ordered_json row;
        nlohmann::ordered_json a = nlohmann::ordered_json::array();
        for (const auto& c : r.a)
            a.push_back(c.str() + "/1");
        row["a"] = a;
        row["b"] = r.b.str() + "/1";
        rows.push_back(row);
    }
    j["rows"] = rows;
    return j.dump(2);
}

RationalPolytope RationalPolytope::from_json(const std::string& text)
{
    auto j = nlohmann::json::parse(text);
    RationalPolytope P(j.at("dimension").get<int>());
    for (const auto& row : j.at("rows")) {
        RatVec a;
        for (const auto& c : row.at("a"))
            a.push_back(rat_from_string(c.get<std::string>()));
        Rat b = rat_from_string(row.at("b").get<std::string>());
        P.add_constraint(a, b);
    }
    return P;
}

namespace {

/**
 * Dense exact simplex, maximizing form. Free variables are split x = u - v
 * (2n columns), one slack per row, artificials appended for rows whose
 * right-hand side starts negative. Bland's rule (first improving column,
 * smallest basic index on ratio ties) guarantees termination on exact
 * rationals.
 */
class SimplexTableau {
  public:
    SimplexTableau(const RationalPolytope& P, const RatVec& c, bool maximize)
        : n_(P.dimension()), m_(static_cast<int>(P.rows().size()))
    {
        ncols_ = 2 * n_ + m_;
        rows_.assign(m_, RatVec(ncols_ + 1, Rat(0)));
        basis_.assign(m_, -1);
        std::vector<int> needs_artificial;
        for (int i = 0; i < m_; ++i) {
            const auto& r = P.rows()[i];
            for (int j = 0; j < n_; ++j) {
                rows_[i][j] = Rat(r.a[j]);
                rows_[i][n_ + j] = Rat(-r.a[j]);
            }
            rows_[i][2 * n_ + i] = 1;
            rows_[i][ncols_] = Rat(r.b);
            if (rows_[i][ncols_] < 0) {
                for (auto& e : rows_[i])
                    e = -e;
                needs_artificial.push_back(i);
            } else {
                basis_[i] = 2 * n_ + i;
            }
        }
        costs_.assign(ncols_ + 1, Rat(0));
        for (int j = 0; j < n_; ++j) {
            Rat cj = maximize ? c[j] : Rat(-c[j]);
            costs_[j] = cj;
            costs_[n_ + j] = -cj;
        }
        artificial_rows_ = std::move(needs_artificial);
    }

    LpStatus solve()
    {
        if (!artificial_rows_.empty() && !phase_one())
            return LpStatus::Infeasible;
        obj_ = costs_;
        price_out_basis();
        return run_simplex();
    }

    Rat objective_value(bool maximize) const
    {
        Rat v = -obj_[obj_.size() - 1];
        return maximize ? v : Rat(-v);
    }

    RatVec primal_point() const
    {
        RatVec x(n_, Rat(0));
        for (int i = 0; i < m_; ++i) {
            int b = basis_[i];
            if (b < 0)
                continue;
            const Rat& val = rows_[i].back();
            if (b < n_)
                x[b] += val;
            else if (b < 2 * n_)
                x[b - n_] -= val;
        }
        return x;
    }

  private:
    bool phase_one()
    {
        int base_cols = ncols_;
        int k = 0;
        for (int i : artificial_rows_) {
            for (auto& row : rows_)
                row.insert(row.end() - 1, Rat(0));
            rows_[i][base_cols + k] = 1;
            basis_[i] = base_cols + k;
            ++k;
        }
        ncols_ = base_cols + k;
        // maximize -(sum of artificials); price out the basic artificials
        obj_.assign(ncols_ + 1, Rat(0));
        for (int j = base_cols; j < ncols_; ++j)
            obj_[j] = -1;
        for (int i : artificial_rows_)
            for (int j = 0; j <= ncols_; ++j)
                obj_[j] += rows_[i][j];
        run_simplex();
        if (obj_[ncols_] != 0)
            return false; // positive residual infeasibility
        // drive surviving artificial basics out, then drop their columns
        for (int i = 0; i < m_; ++i) {
            if (basis_[i] >= base_cols) {
                int col = -1;
                for (int j = 0; j < base_cols; ++j) {
                    if (rows_[i][j] != 0) {
                        col = j;
                        break;
                    }
                }
                if (col >= 0)
                    pivot(i, col);
                else
                    basis_[i] = -1; // redundant all-zero row
            }
        }
        for (auto& row : rows_)
            row.erase(row.begin() + base_cols, row.end() - 1);
        ncols_ = base_cols;
        return true;
    }

    void price_out_basis()
    {
        obj_.resize(ncols_ + 1, Rat(0));
        for (int i = 0; i < m_; ++i) {
            int b = basis_[i];
            if (b < 0)
                continue;
            Rat coef = obj_[b];
            if (coef != 0)
                for (int j = 0; j <= ncols_; ++j)
                    obj_[j] -= coef * rows_[i][j];
        }
    }

    LpStatus run_simplex()
    {
        for (;;) {
            int enter = -1;
            for (int j = 0; j < ncols_; ++j) {
                if (obj_[j] > 0) {
                    enter = j;
                    break;
                }
            }
            if (enter < 0)
                return LpStatus::Optimal;
            int leave = -1;
            Rat best_ratio;
            for (int i = 0; i < m_; ++i) {
                if (rows_[i][enter] > 0) {
                    Rat ratio = rows_[i][ncols_] / rows_[i][enter];
                    if (leave < 0 || ratio < best_ratio ||
                        (ratio == best_ratio && basis_[i] < basis_[leave])) {
                        leave = i;
                        best_ratio = ratio;
                    }
                }
            }
            if (leave < 0)
                return LpStatus::Unbounded;
            pivot(leave, enter);
        }
    }

    void pivot(int r, int c)
    {
        Rat inv = rows_[r][c];
        for (auto& e : rows_[r])
            e /= inv;
        for (int i = 0; i < m_; ++i) {
            if (i == r)
                continue;
            const Rat f = rows_[i][c];
            if (f == 0)
                continue;
            for (size_t j = 0; j < rows_[i].size(); ++j)
                rows_[i][j] -= f * rows_[r][j];
        }
        const Rat f = obj_[c];
        if (f != 0)
            for (size_t j = 0; j < obj_.size(); ++j)
                obj_[j] -= f * rows_[r][j];
        basis_[r] = c;
    }

    int n_, m_, ncols_ = 0;
    std::vector<RatVec> rows_;
    RatVec costs_, obj_;
    std::vector<int> basis_;
    std::vector<int> artificial_rows_;
};

} // namespace

LpResult lp_optimize(const RationalPolytope& P, const RatVec& objective, bool maximize)
{
    if (static_cast<int>(objective.size()) != P.dimension())
        throw std::invalid_argument("objective dimension mismatch");
    if (P.dimension() == 0)
        return {LpStatus::Optimal, Rat(0), {}};
    SimplexTableau t(P, objective, maximize);
    LpStatus st = t.solve();
    LpResult r;
    r.status = st;
    if (st == LpStatus::Optimal) {
        r.value = t.objective_value(maximize);
        r.point = t.primal_point();
    }
    return r;
}

WidthResult width_along(const RationalPolytope& P, const RatVec& d)
{
    WidthResult w;
    LpResult lo = lp_optimize(P, d, false);
    if (lo.status == LpStatus::Infeasible)
        return w;
    if (lo.status == LpStatus::Unbounded)
        throw std::runtime_error("width_along: polytope unbounded in -d");
    LpResult hi = lp_optimize(P, d, true);
    if (hi.status == LpStatus::Unbounded)
        throw std::runtime_error("width_along: polytope unbounded in +d");
    w.feasible = true;
    w.min_value = lo.value;
    w.max_value = hi.value;
    w.argmin = lo.point;
    w.argmax = hi.point;
    return w;
}

} // namespace metasynth
