#include "metasynth/p9.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <stdexcept>

#include "metasynth/cvp.hpp"

namespace metasynth {

namespace {

/// Exact plane functionals of an embedded coefficient vector y = emb(a):
/// X = -y_1 + y_3 and Y = y_2 + y_4 in euclidean coordinates.
Vec2Q3 project_embedded(const Vec4Q3& y)
{
    return {y[2] - y[0], y[1] + y[3]};
}

/// Basis of a rank-2 lattice from a finite generating set, by iterated
/// coordinate reduction; all arithmetic exact in Q[sqrt3].
std::array<Vec2Q3, 2> lattice_basis_from_generators(std::vector<Vec2Q3> gens)
{
    // pick two independent generators to start
    std::array<Vec2Q3, 2> basis{};
    bool have_first = false, have_second = false;
    for (const auto& g : gens) {
        if (g[0].is_zero() && g[1].is_zero())
            continue;
        if (!have_first) {
            basis[0] = g;
            have_first = true;
            continue;
        }
        QSqrt3 det = basis[0][0] * g[1] - basis[0][1] * g[0];
        if (!det.is_zero()) {
            basis[1] = g;
            have_second = true;
            break;
        }
    }
    if (!have_first || !have_second)
        throw std::logic_error("projected lattice is not rank 2");

    for (int pass = 0; pass < 64; ++pass) {
        bool changed = false;
        for (const auto& g : gens) {
            QSqrt3 det = basis[0][0] * basis[1][1] - basis[0][1] * basis[1][0];
            // coordinates of g in the current basis
            QSqrt3 alpha = (g[0] * basis[1][1] - g[1] * basis[1][0]) / det;
            QSqrt3 beta = (basis[0][0] * g[1] - basis[0][1] * g[0]) / det;
            bool a_int = alpha.is_rational() && rat_den(alpha.a) == 1;
            bool b_int = beta.is_rational() && rat_den(beta.a) == 1;
            if (a_int && b_int)
                continue;
            Int ra = alpha.round_nearest(), rb = beta.round_nearest();
            Vec2Q3 r{g[0] - QSqrt3(Rat(ra)) * basis[0][0] - QSqrt3(Rat(rb)) * basis[1][0],
                     g[1] - QSqrt3(Rat(ra)) * basis[0][1] - QSqrt3(Rat(rb)) * basis[1][1]};
            if (r[0].is_zero() && r[1].is_zero())
                continue;
            // swap the residual in for the longer basis vector
            QSqrt3 n0 = dot(basis[0], basis[0]);
            QSqrt3 n1 = dot(basis[1], basis[1]);
            int replace = (n0 > n1) ? 0 : 1;
            Vec2Q3 trial = basis[replace];
            basis[replace] = r;
            QSqrt3 ndet = basis[0][0] * basis[1][1] - basis[0][1] * basis[1][0];
            if (ndet.is_zero())
                basis[replace] = trial; // keep rank; the other slot absorbs it next pass
            else
                changed = true;
        }
        if (!changed)
            break;
    }

    // final Lagrange-Gauss reduction
    for (;;) {
        if (dot(basis[0], basis[0]) > dot(basis[1], basis[1]))
            std::swap(basis[0], basis[1]);
        QSqrt3 mu = dot(basis[0], basis[1]) / dot(basis[0], basis[0]);
        Int m = mu.round_nearest();
        if (m == 0)
            break;
        for (int c = 0; c < 2; ++c)
            basis[1][c] = basis[1][c] - QSqrt3(Rat(m)) * basis[0][c];
    }
    return basis;
}

/// Membership of the exact plane point (X, Y) in the strict scaled strip:
/// hex-norm ball (exact integers) and projection above (1 - eps^2/2) sqrt3^k.
bool in_strip(const Int& m, const Int& n, const ExactReal& epsilon, int k, mpfr_prec_t prec)
{
    // ball: (X^2 + Y^2)/2 <= 3^k  <=>  m^2 + mn + n^2 <= 2*3^k
    if (m * m + m * n + n * n > 2 * pow3(static_cast<unsigned>(k)))
        return false;
    for (int attempt = 0; attempt < 4; ++attempt) {
        mpfr_prec_t p = prec << attempt;
        Interval c = cos_pi_frac_interval(Rat(1, 9), p);
        Interval s = sin_pi_frac_interval(Rat(1, 9), p);
        Interval X = Interval::from_bigint(m, p) + Interval::from_bigint(n, p) / Interval::from_int(2, p);
        Interval Y = Interval::from_bigint(n, p) * sqrt_int_interval(3, p) / Interval::from_int(2, p);
        Interval proj = (c * X + s * Y) / sqrt_int_interval(2, p);
        Interval eps = epsilon.eval(p);
        Interval bound = (Interval::from_int(1, p) - eps.square() / Interval::from_int(2, p)) *
                         sqrt3_pow_interval(k, p);
        if (bound.certainly_less(proj))
            return true;
        if (proj.certainly_less(bound))
            return false;
    }
    throw PrecisionError("p9 strip membership indeterminate after escalation");
}

/// Enclosing 2-D polytope of the strip in hex coordinates (m, n).
RationalPolytope strip_polytope(const ExactReal& epsilon, int k, mpfr_prec_t prec)
{
    Interval c = cos_pi_frac_interval(Rat(1, 9), prec);
    Interval s = sin_pi_frac_interval(Rat(1, 9), prec);
    Interval s3 = sqrt_int_interval(3, prec);
    Interval s2 = sqrt_int_interval(2, prec);
    Interval half = Interval::from_rational(Rat(1, 2), prec);
    Interval eps = epsilon.eval(prec);
    Interval scale = sqrt3_pow_interval(k, prec);

    // f(m, n) = (c X + s Y)/sqrt2 with X = m + n/2, Y = n sqrt3/2
    std::array<Interval, 2> frow{c / s2, (c * half + s * s3 * half) / s2};
    // lateral t(m, n) = (-s X + c Y)/sqrt2
    std::array<Interval, 2> trow{-s / s2, (-s * half + c * s3 * half) / s2};

    Interval lower = (Interval::from_int(1, prec) - eps.square() / Interval::from_int(2, prec)) * scale;
    Interval lateral = (scale.square() - lower.square()).sqrt();

    long ex = mpfr_get_exp(eps.lo());
    long log2_inv_eps = ex >= 1 ? 0 : 1 - ex;
    unsigned dd = static_cast<unsigned>(std::min<long>(static_cast<long>(prec), 2 * log2_inv_eps + 32));
    Int D = Int(1) << dd;
    Rat reach = make_rat(rat_ceil((scale * Interval::from_int(3, prec)).upper_rational() * Rat(D)), D);

    RationalPolytope P(2);
    auto add_halfspace = [&](const std::array<Interval, 2>& row, const Interval& bound) {
        RatVec a(2);
        Rat shift(0);
        for (int i = 0; i < 2; ++i) {
            Rat mid = (row[i].lower_rational() + row[i].upper_rational()) / 2;
            a[i] = make_rat(rat_round(mid * Rat(D)), D);
            Rat err = std::max(Rat(a[i] - row[i].lower_rational()),
                               Rat(row[i].upper_rational() - a[i]));
            if (err < 0)
                err = -err;
            shift += err * reach;
        }
        Rat b = make_rat(rat_ceil((bound.upper_rational() + shift) * Rat(D)), D);
        P.add_constraint(a, b);
    };
    add_halfspace(frow, scale);
    add_halfspace({-frow[0], -frow[1]}, -lower);
    add_halfspace(trow, lateral);
    add_halfspace({-trow[0], -trow[1]}, lateral);
    for (int i = 0; i < 2; ++i) {
        RatVec a(2, Rat(0));
        a[i] = 1;
        P.add_constraint(a, reach);
        a[i] = -1;
        P.add_constraint(a, reach);
    }
    return P;
}

/// Canonical 4-D preimage of the hex point (m, n): start from
/// (-m, n, 0, 0) and pull the kernel component back by exact rounding
/// against the orthogonal shift pair.
IntVec canonical_lift(const Int& m, const Int& n)
{
    IntVec a{-m, n, Int(0), Int(0)};
    // kernel coordinates: t1 = <emb a, emb d1>/2, t2 = <emb a, emb d2>/6
    // <emb a, emb d1> = (a1 - a2/2) + (a3 - a4/2); <emb a, emb d2> = 3(a4 - a2)/2
    Rat t1 = (Rat(a[0]) - Rat(a[1], 2) + Rat(a[2]) - Rat(a[3], 2)) / 2;
    Rat t2 = Rat(a[3] - a[1], 4);
    Int r1 = rat_round(t1), r2 = rat_round(t2);
    const IntVec& d1 = PlaneFrame::shift_d1();
    const IntVec& d2 = PlaneFrame::shift_d2();
    for (int i = 0; i < 4; ++i)
        a[i] -= r1 * d1[i] + r2 * d2[i];
    return a;
}

} // namespace

const IntVec& PlaneFrame::shift_d1()
{
    static const IntVec d{Int(1), Int(0), Int(1), Int(0)};
    return d;
}

const IntVec& PlaneFrame::shift_d2()
{
    static const IntVec d{Int(-1), Int(-2), Int(1), Int(2)};
    return d;
}

Vec2Q3 PlaneFrame::project_coeffs(const IntVec& a)
{
    ScaledLatticeBasis basis{0};
    return project_embedded(basis.embed_coeffs(a));
}

TwoLevelState phi_state()
{
    ExactReal inv_sqrt2 = ExactReal(Rat(1)) / ExactReal::sqrt_of(Rat(2));
    ExactReal c = ExactReal::cos_pi(Rat(1, 9));
    ExactReal s = ExactReal::sin_pi(Rat(1, 9));
    return TwoLevelState{-(c * inv_sqrt2), s * inv_sqrt2, c * inv_sqrt2, s * inv_sqrt2, {0, 2}};
}

std::array<Vec2Q3, 2> projected_lattice_basis()
{
    std::vector<Vec2Q3> gens;
    for (const auto& g : ScaledLatticeBasis::generators())
        gens.push_back(project_embedded(g));
    return lattice_basis_from_generators(std::move(gens));
}

Interval phi_distance(const Candidate& y, mpfr_prec_t prec)
{
    if (y.levels != std::make_pair(0, 2))
        throw std::invalid_argument("phi_distance: candidate must live on levels (0, 2)");
    Vec2Q3 xy = PlaneFrame::project_coeffs(y.coeffs());
    Interval c = cos_pi_frac_interval(Rat(1, 9), prec);
    Interval s = sin_pi_frac_interval(Rat(1, 9), prec);
    Interval proj = (c * xy[0].eval(prec) + s * xy[1].eval(prec)) / sqrt_int_interval(2, prec);
    Interval inner = proj / sqrt3_pow_interval(y.k, prec);
    return ((Interval::from_int(1, prec) - inner) * Interval::from_int(2, prec)).sqrt();
}

std::variant<ApproxResult, BudgetExhaustedReport> approximate_phi(const ExactReal& epsilon,
                                                                  const SearchConfig& cfg,
                                                                  P9Stats* stats)
{
    mpfr_prec_t prec = cfg.precision_bits ? cfg.precision_bits : working_precision(epsilon);
    Interval e160 = epsilon.eval(160);
    if (!e160.is_certainly_positive() || !e160.certainly_less(sqrt_int_interval(2, 160)))
        throw std::invalid_argument("approximate_phi: epsilon must lie in (0, sqrt 2)");

    Interval el3 = e160.log3();
    long log3_inv = std::max(0L, rat_ceil(-el3.lower_rational()).convert_to<long>());
    int k_cap = cfg.k_max ? *cfg.k_max : static_cast<int>(4 * log3_inv + 16);

    NormSolverConfig ncfg{cfg.norm_budget, cfg.seed, Int(1'000'000)};
    std::vector<UnknownInstance> unknowns;
    long long inspected = 0;
    auto basis = projected_lattice_basis();

    // exact hex coordinates (m, n) of a plane lattice point given in the
    // sqrt(2)-scaled frame: X = m + n/2 rational, Y = n sqrt(3)/2
    auto hex_of = [](const Vec2Q3& q) -> std::pair<Int, Int> {
        Rat nr = q[1].b * 2;
        Rat mr = q[0].a - nr / 2;
        if (q[0].b != 0 || q[1].a != 0 || rat_den(nr) != 1 || rat_den(mr) != 1)
            throw std::logic_error("plane lattice point with non-hex coordinates");
        return {rat_num(mr), rat_num(nr)};
    };

    for (int k = 0; k <= k_cap; ++k) {
        // candidate plane points: the closest-vector probe first, then the
        // full strip in decreasing projection order
        std::vector<std::pair<Int, Int>> hex;
        {
            Interval scale = sqrt3_pow_interval(k, prec);
            Interval c = cos_pi_frac_interval(Rat(1, 9), prec);
            Interval sI = sin_pi_frac_interval(Rat(1, 9), prec);
            Interval s2 = sqrt_int_interval(2, prec);
            std::array<Interval, 2> target{scale * s2 * c, scale * s2 * sI};
            auto coeffs = cvp_2d(basis, target, prec);
            Vec2Q3 pt{QSqrt3(Rat(coeffs[0])) * basis[0][0] + QSqrt3(Rat(coeffs[1])) * basis[1][0],
                      QSqrt3(Rat(coeffs[0])) * basis[0][1] + QSqrt3(Rat(coeffs[1])) * basis[1][1]};
            hex.push_back(hex_of(pt));
        }
        RationalPolytope strip = strip_polytope(epsilon, k, prec);
        EnumOptions opts;
        opts.point_cap = 4096;
        EnumResult pts = ip_enumerate(2, strip, opts);

        struct Keyed {
            Interval proj;
            Int m, n;
        };
        std::vector<Keyed> members;
        {
            Interval c = cos_pi_frac_interval(Rat(1, 9), prec + 64);
            Interval sI = sin_pi_frac_interval(Rat(1, 9), prec + 64);
            for (const auto& a : pts.points)
                if (in_strip(a[0], a[1], epsilon, k, prec)) {
                    Interval X = Interval::from_bigint(a[0], prec + 64) +
                                 Interval::from_bigint(a[1], prec + 64) /
                                     Interval::from_int(2, prec + 64);
                    Interval Y = Interval::from_bigint(a[1], prec + 64) *
                                 sqrt_int_interval(3, prec + 64) / Interval::from_int(2, prec + 64);
                    members.push_back(Keyed{c * X + sI * Y, a[0], a[1]});
                }
        }
        std::sort(members.begin(), members.end(), [](const Keyed& x, const Keyed& y) {
            int c = x.proj.compare_midpoints(y.proj);
            if (c != 0)
                return c > 0;
            return std::make_pair(x.m, x.n) < std::make_pair(y.m, y.n);
        });
        for (const auto& mem : members)
            if (std::find(hex.begin(), hex.end(), std::make_pair(mem.m, mem.n)) == hex.end())
                hex.emplace_back(mem.m, mem.n);
        if (stats)
            stats->strip_candidates += static_cast<long long>(members.size());

        bool had_viable = false;
        for (const auto& [m, n] : hex) {
            // the 2-D residual must keep the distance within epsilon
            if (!in_strip(m, n, epsilon, k, prec))
                continue;
            had_viable = true;
            IntVec lift = canonical_lift(m, n);
            const IntVec& d1 = PlaneFrame::shift_d1();
            const IntVec& d2 = PlaneFrame::shift_d2();
            long long pair_cap = 64LL * std::max(k, 1);
            long long pairs = 0;
            for (long ring = 0; pairs < pair_cap; ++ring) {
                for (long k1 = -ring; k1 <= ring && pairs < pair_cap; ++k1) {
                    long rem = ring - std::labs(k1);
                    std::array<long, 2> k2s{-rem, rem};
                    int k2_count = rem == 0 ? 1 : 2;
                    for (int t = 0; t < k2_count && pairs < pair_cap; ++t) {
                        long k2 = k2s[t];
                        ++pairs;
                        if (stats)
                            stats->shift_pairs_inspected += 1;
                        IntVec a(4);
                        for (int i = 0; i < 4; ++i)
                            a[i] = lift[i] + k1 * d1[i] + k2 * d2[i];
                        Candidate cand = Candidate::from_coeffs(a, k, {0, 2});
                        if (!cand.inside_ball())
                            continue;
                        ++inspected;
                        NormOutcome out = k_feasible(cand.u, cand.v, k, ncfg);
                        if (out.status == NormStatus::Solved) {
                            ApproxResult r;
                            r.u = cand.u;
                            r.v = cand.v;
                            r.w = out.w;
                            r.k = k;
                            r.levels = {0, 2};
                            if (r.u.norm() + r.v.norm() + r.w.norm() !=
                                pow3(static_cast<unsigned>(k)))
                                throw std::logic_error(
                                    "approximate_phi: resource identity violated");
                            r.dist = phi_distance(cand, prec);
                            Interval d2x = phi_distance(cand, 2 * prec);
                            Interval e2x = epsilon.eval(2 * prec);
                            if (e2x.certainly_less(d2x))
                                throw std::logic_error(
                                    "approximate_phi: distance exceeds epsilon");
                            r.r_count_bound = k + 1;
                            r.depth_range = {2 * k - 1, 2 * k, 2 * k + 1};
                            r.candidates_inspected = inspected;
                            r.unknown_instances = unknowns;
                            return r;
                        }
                        if (out.status == NormStatus::Unknown)
                            unknowns.push_back(UnknownInstance{
                                cand.u, cand.v, k,
                                Int(pow3(static_cast<unsigned>(k)) - cand.u.norm() -
                                    cand.v.norm())});
                    }
                }
            }
        }
        if (had_viable && stats)
            stats->shift_cap_exhausted_at.push_back(k);
    }
    BudgetExhaustedReport rep;
    rep.k_reached = k_cap;
    rep.candidates_inspected = inspected;
    rep.unknown_instances = unknowns;
    return rep;
}

std::variant<P9EmulationReport, BudgetExhaustedReport> p9_emulation_report(const ExactReal& epsilon,
                                                                           const SearchConfig& cfg)
{
    auto out = approximate_phi(epsilon, cfg);
    if (std::holds_alternative<BudgetExhaustedReport>(out))
        return std::get<BudgetExhaustedReport>(out);
    P9EmulationReport rep;
    rep.state_result = std::get<ApproxResult>(out);
    rep.c_phi_r_count_bound = rep.state_result.k + 1;
    rep.r_phi_r_count_bound = 2 * (rep.state_result.k + 1) + 1;
    rep.mu_note =
        "mu is prepared offline as the image of H|0> under the approximated ninth-root phase "
        "gate, so the injected magic state inherits the fidelity of this approximation";
    return rep;
}

namespace {

const char* kTable1Json = R"json({
  "rows": [
    {
      "k": 30,
      "u": ["-7531010", "4006785"],
      "v": ["11537794", "4006785"],
      "eps_log3": "-9.53",
      "residual": "1.41",
      "shift": "4"
    },
    {
      "k": 60,
      "u": ["-108058642873108", "57496802915208"],
      "v": ["165555445788316", "57496802915208"],
      "eps_log3": "-19.973",
      "residual": "0.08",
      "shift": "3"
    },
    {
      "k": 90,
      "u": ["-1550523416973111862994", "825016278023092749328"],
      "v": ["2375539694996204612322", "825016278023092749328"],
      "eps_log3": "-29.527",
      "residual": "1.42",
      "shift": "27"
    }
  ]
}
)json";

} // namespace

std::string table1_fixtures_json() { return kTable1Json; }

const std::vector<Table1Row>& table1_fixtures()
{
    static const std::vector<Table1Row> rows = [] {
        auto j = nlohmann::json::parse(kTable1Json);
        std::vector<Table1Row> out;
        for (const auto& r : j.at("rows")) {
            Table1Row row;
            row.k = r.at("k").get<int>();
            row.u = Eisenstein(Int(r.at("u")[0].get<std::string>()),
                               Int(r.at("u")[1].get<std::string>()));
            row.v = Eisenstein(Int(r.at("v")[0].get<std::string>()),
                               Int(r.at("v")[1].get<std::string>()));
            row.eps_log3 = rat_from_decimal(r.at("eps_log3").get<std::string>());
            row.residual = rat_from_decimal(r.at("residual").get<std::string>());
            row.shift = Int(r.at("shift").get<std::string>());
            out.push_back(std::move(row));
        }
        return out;
    }();
    return rows;
}

} // namespace metasynth
