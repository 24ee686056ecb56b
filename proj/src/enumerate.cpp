#include "metasynth/enumerate.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>

namespace metasynth {

namespace {

struct ConstraintRow {
    IntVec a;
    Int b;
    bool strict;
};

/// orig = origin + cols * y, cols laid out column-major (cols[j] is column j).
struct AffineMap {
    IntVec origin;
    std::vector<IntVec> cols;

    IntVec apply(const IntVec& y) const
    {
        IntVec x = origin;
        for (size_t j = 0; j < cols.size(); ++j)
            for (size_t i = 0; i < x.size(); ++i)
                x[i] += cols[j][i] * y[j];
        return x;
    }

    static AffineMap identity(int n)
    {
        AffineMap m;
        m.origin.assign(n, Int(0));
        m.cols.assign(n, IntVec(n, Int(0)));
        for (int i = 0; i < n; ++i)
            m.cols[i][i] = 1;
        return m;
    }
};

struct LinSystem {
    int n = 0;
    std::vector<ConstraintRow> rows;
    AffineMap map;
    std::optional<IntVec> thin_hint; // flat-direction candidate inherited from the parent
};

RationalPolytope closed_relaxation(const LinSystem& sys)
{
    RationalPolytope P(sys.n);
    for (const auto& r : sys.rows)
        P.add_constraint_int(r.a, r.b);
    return P;
}

Int content(const IntVec& v)
{
    Int g = 0;
    for (const auto& c : v)
        g = int_gcd(g, int_abs(c));
    return g;
}

std::tuple<Int, Int, Int> ext_gcd(Int a, Int b)
{
    Int old_r = a, r = b;
    Int old_s = 1, s = 0;
    Int old_t = 0, t = 1;
    while (r != 0) {
        Int q = old_r / r;
        Int tmp = old_r - q * r;
        old_r = r;
        r = tmp;
        tmp = old_s - q * s;
        old_s = s;
        s = tmp;
        tmp = old_t - q * t;
        old_t = t;
        t = tmp;
    }
    if (old_r < 0) {
        old_r = -old_r;
        old_s = -old_s;
        old_t = -old_t;
    }
    return {old_r, old_s, old_t};
}

/**
 * For a primitive integer direction d, produce w with d.w = 1 and an
 * integer basis of the hyperplane lattice { x : d.x = 0 }, via unimodular
 * column operations on the identity.
 */
std::pair<IntVec, std::vector<IntVec>> unimodular_completion(const IntVec& d)
{
    int n = static_cast<int>(d.size());
    std::vector<IntVec> cols(n, IntVec(n, Int(0)));
    for (int i = 0; i < n; ++i)
        cols[i][i] = 1;
    IntVec g = d;
    for (int i = 1; i < n; ++i) {
        if (g[i] == 0)
            continue;
        if (g[0] == 0) {
            std::swap(g[0], g[i]);
            std::swap(cols[0], cols[i]);
            continue;
        }
        auto [gg, s, t] = ext_gcd(g[0], g[i]);
        Int u0 = g[0] / gg, ui = g[i] / gg;
        IntVec new0(n), newi(n);
        for (int r = 0; r < n; ++r) {
            new0[r] = s * cols[0][r] + t * cols[i][r];
            newi[r] = -ui * cols[0][r] + u0 * cols[i][r];
        }
        cols[0] = std::move(new0);
        cols[i] = std::move(newi);
        g[0] = gg;
        g[i] = 0;
    }
    if (g[0] == -1) {
        for (auto& c : cols[0])
            c = -c;
        g[0] = 1;
    }
    if (g[0] != 1)
        throw std::logic_error("unimodular_completion: direction was not primitive");
    std::vector<IntVec> kernel(cols.begin() + 1, cols.end());
    return {cols[0], kernel};
}

/// Restrict the system to the hyperplane d.x = z (d primitive), eliminating
/// one variable; inequalities and their strictness carry over exactly.
LinSystem slice(const LinSystem& sys, const IntVec& d, const Int& z)
{
    auto [w, kernel] = unimodular_completion(d);
    LinSystem out;
    out.n = sys.n - 1;
    out.rows.reserve(sys.rows.size());
    for (const auto& r : sys.rows) {
        Int aw = 0;
        for (int i = 0; i < sys.n; ++i)
            aw += r.a[i] * w[i];
        ConstraintRow nr;
        nr.strict = r.strict;
        nr.b = r.b - z * aw;
        nr.a.assign(out.n, Int(0));
        for (int j = 0; j < out.n; ++j)
            for (int i = 0; i < sys.n; ++i)
                nr.a[j] += r.a[i] * kernel[j][i];
        out.rows.push_back(std::move(nr));
    }
    out.map.origin = sys.map.origin;
    for (size_t i = 0; i < out.map.origin.size(); ++i)
        for (int j = 0; j < sys.n; ++j)
            out.map.origin[i] += sys.map.cols[j][i] * (z * w[j]);
    out.map.cols.assign(out.n, IntVec(sys.map.origin.size(), Int(0)));
    for (int c = 0; c < out.n; ++c)
        for (size_t i = 0; i < out.map.origin.size(); ++i)
            for (int j = 0; j < sys.n; ++j)
                out.map.cols[c][i] += sys.map.cols[j][i] * kernel[c][j];
    if (sys.thin_hint) {
        IntVec h(out.n, Int(0));
        for (int j = 0; j < out.n; ++j)
            for (int i = 0; i < sys.n; ++i)
                h[j] += (*sys.thin_hint)[i] * kernel[j][i];
        Int g = content(h);
        if (g > 1)
            for (auto& c : h)
                c /= g;
        if (g != 0)
            out.thin_hint = std::move(h);
    }
    return out;
}

LinSystem with_extra_row(const LinSystem& sys, IntVec a, Int b)
{
    LinSystem out = sys;
    out.rows.push_back(ConstraintRow{std::move(a), std::move(b), false});
    return out;
}

struct DirectionChoice {
    IntVec d;
    Rat lo, hi;
    bool feasible = true;
};

RatVec to_ratvec(const IntVec& v)
{
    RatVec r(v.size());
    for (size_t i = 0; i < v.size(); ++i)
        r[i] = Rat(v[i]);
    return r;
}

/**
 * Pick the branching direction. Axial minimum width first; when every axial
 * width exceeds twice the width of the shortest LLL direction of the
 * vertex-sample covariance (the body is thin off-axis), take that one.
 */
DirectionChoice choose_direction(const LinSystem& sys)
{
    RationalPolytope P = closed_relaxation(sys);
    DirectionChoice best;
    std::vector<RatVec> sample;
    bool have_axial = false;
    Rat best_width;
    for (int j = 0; j < sys.n; ++j) {
        IntVec d(sys.n, Int(0));
        d[j] = 1;
        WidthResult w = width_along(P, to_ratvec(d));
        if (!w.feasible) {
            best.feasible = false;
            return best;
        }
        sample.push_back(w.argmin);
        sample.push_back(w.argmax);
        Rat width = w.width();
        if (!have_axial || width < best_width) {
            best = DirectionChoice{std::move(d), w.min_value, w.max_value, true};
            best_width = width;
            have_axial = true;
        }
    }
    if (best_width <= 1)
        return best;

    std::vector<IntVec> candidates;
    if (sys.thin_hint)
        candidates.push_back(*sys.thin_hint);
    if (sys.n >= 2) {
        RatVec center(sys.n, Rat(0));
        for (const auto& v : sample)
            for (int i = 0; i < sys.n; ++i)
                center[i] += v[i];
        for (auto& c : center)
            c /= Rat(static_cast<long>(sample.size()));
        RatMatrix cov(sys.n, RatVec(sys.n, Rat(0)));
        for (const auto& v : sample)
            for (int i = 0; i < sys.n; ++i)
                for (int j = 0; j < sys.n; ++j)
                    cov[i][j] += (v[i] - center[i]) * (v[j] - center[j]);
        Rat tr = 0;
        for (int i = 0; i < sys.n; ++i)
            tr += cov[i][i];
        Rat reg = (tr == 0 ? Rat(1) : tr) / Rat(Int(1) << 80);
        for (int i = 0; i < sys.n; ++i)
            cov[i][i] += reg;
        IntMatrix U = lll_gram(cov);
        candidates.push_back(U[0]);
    }
    for (auto& cand : candidates) {
        Int g = content(cand);
        if (g == 0)
            continue;
        if (g > 1)
            for (auto& c : cand)
                c /= g;
        WidthResult w = width_along(P, to_ratvec(cand));
        if (!w.feasible)
            continue;
        Rat width = w.width();
        if (best_width > 2 * width) {
            best = DirectionChoice{cand, w.min_value, w.max_value, true};
            best_width = width;
        }
    }
    return best;
}

/// 1-D base case: the exact integer interval cut out by the rows.
/// Returns false for an empty interval; throws if unbounded.
bool interval_1d(const LinSystem& sys, Int& lo, Int& hi)
{
    bool has_lo = false, has_hi = false;
    Int ilo = 0, ihi = 0;
    for (const auto& r : sys.rows) {
        const Int& a = r.a[0];
        if (a == 0) {
            if (r.strict ? (r.b <= 0) : (r.b < 0))
                return false;
            continue;
        }
        Rat bound = make_rat(r.b, a);
        if (a > 0) {
            Int ib = r.strict ? Int(rat_ceil(bound) - 1) : rat_floor(bound);
            if (!has_hi || ib < ihi) {
                ihi = ib;
                has_hi = true;
            }
        } else {
            Int ib = r.strict ? Int(rat_floor(bound) + 1) : rat_ceil(bound);
            if (!has_lo || ib > ilo) {
                ilo = ib;
                has_lo = true;
            }
        }
    }
    if (!has_lo || !has_hi)
        throw std::runtime_error("enumeration: 1-D system is unbounded");
    lo = ilo;
    hi = ihi;
    return lo <= hi;
}

/**
 * Lenstra-style existence search: an integer point of the system (through
 * the system's affine map) or nullopt. Levels along the chosen direction
 * are visited center-outward so witnesses in fat bodies surface quickly.
 */
std::optional<IntVec> find_integer_point(const LinSystem& sys)
{
    if (sys.n == 1) {
        Int lo, hi;
        if (!interval_1d(sys, lo, hi))
            return std::nullopt;
        return sys.map.apply(IntVec{lo});
    }
    DirectionChoice dc = choose_direction(sys);
    if (!dc.feasible)
        return std::nullopt;
    Int zlo = rat_ceil(dc.lo), zhi = rat_floor(dc.hi);
    if (zlo > zhi)
        return std::nullopt;
    Int zmid = rat_round_half_down((dc.lo + dc.hi) / 2);
    if (zmid < zlo)
        zmid = zlo;
    if (zmid > zhi)
        zmid = zhi;
    for (Int offset = 0;; ++offset) {
        bool visited = false;
        for (int sgn : {+1, -1}) {
            if (offset == 0 && sgn < 0)
                continue;
            Int z = zmid + sgn * offset;
            if (z < zlo || z > zhi)
                continue;
            visited = true;
            if (auto pt = find_integer_point(slice(sys, dc.d, z)))
                return pt;
        }
        if (!visited && zmid + offset > zhi && zmid - offset < zlo)
            return std::nullopt;
    }
}

struct EnumDriver {
    EnumOptions opts;
    std::vector<IntVec> points;
    EnumStats stats;
    bool truncated = false;
    int top_n = 0;

    bool capped() const { return opts.point_cap && points.size() > *opts.point_cap; }

    void emit(IntVec point)
    {
        if (capped()) {
            truncated = true;
            return;
        }
        points.push_back(std::move(point));
    }

    void run(const LinSystem& sys, int depth)
    {
        stats.max_recursion_depth = std::max(stats.max_recursion_depth, depth);
        if (truncated || capped()) {
            truncated = true;
            return;
        }
        if (sys.n == 1) {
            Int lo, hi;
            if (!interval_1d(sys, lo, hi))
                return;
            for (Int z = lo; z <= hi; ++z) {
                emit(sys.map.apply(IntVec{z}));
                if (truncated)
                    return;
            }
            return;
        }
        // feasibility-oracle early exit on the closed system
        stats.oracle_calls += 1;
        LinSystem probe = sys;
        probe.map = AffineMap::identity(sys.n);
        auto witness = find_integer_point(probe);
        if (!witness)
            return;
        DirectionChoice dc = choose_direction(sys);
        if (!dc.feasible)
            return;
        Rat width = dc.hi - dc.lo;
        if (width <= 1) {
            // flat: at most two integer levels fit the closed range
            for (Int z = rat_ceil(dc.lo); z <= rat_floor(dc.hi); ++z)
                run(slice(sys, dc.d, z), depth + 1);
            return;
        }
        Int z;
        if (opts.saved_point_bisection) {
            // cut at a level known to hold a point, so every bisection
            // follows a saved-out slice
            Int wz = 0;
            for (int i = 0; i < sys.n; ++i)
                wz += dc.d[i] * (*witness)[i];
            z = wz;
        } else {
            z = rat_round_half_down((dc.lo + dc.hi) / 2);
        }
        if (Rat(z) < dc.lo || Rat(z) > dc.hi)
            z = rat_round_half_down((dc.lo + dc.hi) / 2);
        if (sys.n == top_n) {
            stats.bisection_count += 1;
            if (width > stats.max_branch_width)
                stats.max_branch_width = width;
        }
        run(with_extra_row(sys, dc.d, Int(z - 1)), depth + 1);
        run(slice(sys, dc.d, z), depth + 1);
        IntVec neg(dc.d.size());
        for (size_t i = 0; i < dc.d.size(); ++i)
            neg[i] = -dc.d[i];
        run(with_extra_row(sys, std::move(neg), Int(-(z + 1))), depth + 1);
    }
};

LinSystem system_from_polytope(const RationalPolytope& P, bool strict)
{
    LinSystem sys;
    sys.n = P.dimension();
    for (const auto& r : P.rows())
        sys.rows.push_back(ConstraintRow{r.a, r.b, strict});
    sys.map = AffineMap::identity(sys.n);
    return sys;
}

} // namespace

bool em_feasible(const RationalPolytope& P)
{
    return !find_strict_interior_point(P).has_value();
}

std::optional<IntVec> find_strict_interior_point(const RationalPolytope& P)
{
    if (P.dimension() < 1)
        throw std::invalid_argument("em_feasible: dimension must be at least 1");
    return find_integer_point(system_from_polytope(P, true));
}

EnumResult ip_enumerate(int n, const RationalPolytope& P, const EnumOptions& opts)
{
    if (n != P.dimension() || n < 1 || n > 4)
        throw std::invalid_argument("ip_enumerate: dimension must match P and lie in 1..4");
    P.verify_bounded();
    EnumDriver driver;
    driver.opts = opts;
    driver.top_n = n;
    driver.run(system_from_polytope(P, false), 0);
    std::sort(driver.points.begin(), driver.points.end());
    driver.points.erase(std::unique(driver.points.begin(), driver.points.end()),
                        driver.points.end());
    EnumResult out;
    out.points = std::move(driver.points);
    out.stats = driver.stats;
    out.truncated = driver.truncated;
    return out;
}

std::vector<IntVec> brute_force_enumerate(const RationalPolytope& P, std::size_t cap)
{
    int n = P.dimension();
    std::vector<std::pair<Int, Int>> box;
    Int count = 1;
    for (int j = 0; j < n; ++j) {
        RatVec d(n, Rat(0));
        d[j] = 1;
        WidthResult w = width_along(P, d);
        if (!w.feasible)
            return {};
        Int lo = rat_ceil(w.min_value), hi = rat_floor(w.max_value);
        if (lo > hi)
            return {};
        box.emplace_back(lo, hi);
        count *= hi - lo + 1;
    }
    if (count > Int(static_cast<unsigned long long>(cap)))
        throw std::runtime_error("brute_force_enumerate: bounding box exceeds cap");
    std::vector<IntVec> out;
    IntVec x(n);
    for (int j = 0; j < n; ++j)
        x[j] = box[j].first;
    for (;;) {
        if (P.contains_int(x))
            out.push_back(x);
        int j = 0;
        while (j < n) {
            if (x[j] < box[j].second) {
                ++x[j];
                break;
            }
            x[j] = box[j].first;
            ++j;
        }
        if (j == n)
            break;
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace metasynth
