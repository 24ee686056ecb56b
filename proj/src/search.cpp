#include "metasynth/search.hpp"

#include <algorithm>
#include <future>
#include <stdexcept>

namespace metasynth {

namespace {

struct OrderKey {
    Interval proj;
    IntVec coeffs;
};

bool key_before(const OrderKey& a, const OrderKey& b)
{
    int c = a.proj.compare_midpoints(b.proj);
    if (c != 0)
        return c > 0; // larger projection first
    return a.coeffs < b.coeffs;
}

long ceil_log3_inverse(const ExactReal& epsilon)
{
    Interval e = epsilon.eval(160);
    Interval l = e.log3();
    Rat hi = -l.lower_rational();
    Int c = rat_ceil(hi);
    long v = c.convert_to<long>();
    return v < 0 ? 0 : v;
}

struct FeasibilityScan {
    std::optional<std::pair<size_t, Eisenstein>> first_solved;
    std::vector<std::pair<size_t, Eisenstein>> all_solved;
    std::vector<UnknownInstance> unknowns;
    long long inspected = 0;
    long long work = 0;
};

/**
 * Test candidates in the given order; easy norm-equation instances first,
 * then the budgeted hard ones. Per-candidate solves may run on a thread
 * pool; successes are merged by candidate position, so the outcome is
 * schedule-independent.
 */
FeasibilityScan scan_candidates(const std::vector<Candidate>& ordered, int k,
                                const SearchConfig& cfg, bool stop_at_first)
{
    NormSolverConfig ncfg{cfg.norm_budget, cfg.seed, Int(1'000'000)};
    std::vector<size_t> easy, hard;
    Int three_k = pow3(static_cast<unsigned>(k));
    for (size_t i = 0; i < ordered.size(); ++i) {
        Int residual = three_k - ordered[i].u.norm() - ordered[i].v.norm();
        if (residual < 0)
            continue;
        (classify(residual, ncfg).easy ? easy : hard).push_back(i);
    }
    std::vector<size_t> sequence = easy;
    sequence.insert(sequence.end(), hard.begin(), hard.end());

    FeasibilityScan out;
    int workers = std::max(1, cfg.threads);
    for (size_t base = 0; base < sequence.size(); base += static_cast<size_t>(workers)) {
        size_t batch = std::min(sequence.size() - base, static_cast<size_t>(workers));
        std::vector<std::future<NormOutcome>> futures;
        for (size_t t = 0; t < batch; ++t) {
            const Candidate& cand = ordered[sequence[base + t]];
            futures.push_back(std::async(batch == 1 ? std::launch::deferred : std::launch::async,
                                         [&cand, k, &ncfg] { return k_feasible(cand.u, cand.v, k, ncfg); }));
        }
        for (size_t t = 0; t < batch; ++t) {
            size_t idx = sequence[base + t];
            const Candidate& cand = ordered[idx];
            NormOutcome res = futures[t].get();
            out.inspected += 1;
            out.work += res.work_spent;
            if (res.status == NormStatus::Solved) {
                if (!out.first_solved)
                    out.first_solved = {idx, res.w};
                out.all_solved.emplace_back(idx, res.w);
            } else if (res.status == NormStatus::Unknown) {
                out.unknowns.push_back(UnknownInstance{
                    cand.u, cand.v, k, Int(three_k - cand.u.norm() - cand.v.norm())});
            }
        }
        if (stop_at_first && out.first_solved)
            break;
    }
    return out;
}

ApproxResult assemble(const TwoLevelState& target, const Candidate& cand, const Eisenstein& w,
                      mpfr_prec_t prec, const ExactReal& epsilon)
{
    ApproxResult r;
    r.u = cand.u;
    r.v = cand.v;
    r.w = w;
    r.k = cand.k;
    r.levels = cand.levels;
    if (r.u.norm() + r.v.norm() + r.w.norm() != pow3(static_cast<unsigned>(r.k)))
        throw std::logic_error("approximate_state: resource identity violated");
    r.dist = distance(target, cand, prec);
    // soundness re-verified at twice the working precision, escalating
    bool verified = false;
    for (int attempt = 1; attempt <= 3; ++attempt) {
        mpfr_prec_t p = prec * (1 << attempt);
        Interval d = distance(target, cand, p);
        Interval e = epsilon.eval(p);
        if (d.certainly_less(e)) {
            verified = true;
            break;
        }
        if (e.certainly_less(d))
            throw std::logic_error("approximate_state: verified distance exceeds epsilon");
    }
    if (!verified)
        throw PrecisionError("approximate_state: distance verification indeterminate");
    r.r_count_bound = r.k + 1;
    r.depth_range = {2 * r.k - 1, 2 * r.k, 2 * r.k + 1};
    return r;
}

/// Hexagonal rounding of sqrt(3)^k p, one complex plane at a time.
IntVec round_to_lattice(const std::array<ExactReal, 4>& p, int k, mpfr_prec_t prec)
{
    Interval scale = sqrt3_pow_interval(k, prec);
    auto mid = [](const Interval& v) {
        return (v.lower_rational() + v.upper_rational()) / 2;
    };
    IntVec a(4);
    Interval s3 = sqrt_int_interval(3, prec);
    for (int plane = 0; plane < 2; ++plane) {
        Interval re = p[2 * plane].eval(prec) * scale;
        Interval im = p[2 * plane + 1].eval(prec) * scale;
        // x = a1 + a2 w: Im = a2 sqrt3/2, Re = a1 - a2/2
        Interval a2i = im * Interval::from_int(2, prec) / s3;
        Int a2 = rat_round(mid(a2i));
        Interval a1i = re + Interval::from_bigint(a2, prec) / Interval::from_int(2, prec);
        Int a1 = rat_round(mid(a1i));
        a[2 * plane] = a1;
        a[2 * plane + 1] = a2;
    }
    return a;
}

} // namespace

std::vector<Candidate> candidate_order(std::vector<Candidate> candidates,
                                       const TwoLevelState& target, mpfr_prec_t prec)
{
    auto p = embed(target);
    std::vector<std::pair<OrderKey, Candidate>> keyed;
    keyed.reserve(candidates.size());
    for (auto& c : candidates)
        keyed.emplace_back(OrderKey{grid_projection(p, c, prec + 64), c.coeffs()}, std::move(c));
    std::sort(keyed.begin(), keyed.end(),
              [](const auto& a, const auto& b) { return key_before(a.first, b.first); });
    std::vector<Candidate> out;
    out.reserve(keyed.size());
    for (auto& kv : keyed)
        out.push_back(std::move(kv.second));
    return out;
}

SearchOutcome approximate_state(const TwoLevelState& target, const ExactReal& epsilon,
                                const SearchConfig& cfg)
{
    if (!(cfg.lambda > 0.0 && cfg.lambda <= 0.75))
        throw std::invalid_argument("approximate_state: lambda must lie in (0, 3/4]");
    mpfr_prec_t prec = cfg.precision_bits ? cfg.precision_bits : working_precision(epsilon);
    if (!target.is_normalized(prec))
        throw std::invalid_argument("approximate_state: target state is not normalized");
    Meniscus m = meniscus_around(target, epsilon);

    // exception threshold eps^-lambda
    Interval eps_i = epsilon.eval(160);
    Interval lam(160);
    {
        // lambda as an exact rational from its double representation
        Rat lr(static_cast<long long>(cfg.lambda * (1LL << 40)), Int(1) << 40);
        Interval l3 = eps_i.log3();
        Interval expo = -(l3 * Interval::from_rational(lr, 160));
        lam = pow3_interval(((expo.lower_rational() + expo.upper_rational()) / 2), 160);
    }
    Rat threshold_hi = lam.upper_rational();

    long log3_inv = ceil_log3_inverse(epsilon);
    int k_cap = cfg.k_max ? *cfg.k_max : static_cast<int>(4 * log3_inv + 16);

    std::vector<UnknownInstance> unknowns;
    long long inspected_total = 0;
    long long norm_work = 0;
    EnumStats enum_total;

    for (int k = 0; k <= k_cap; ++k) {
        RationalPolytope P = enclosing_polytope(m, k, prec);
        EnumOptions opts;
        long long sample_limit = 64LL * std::max(k, 1);
        Rat cap_r = 8 * (std::max(threshold_hi, Rat(sample_limit))) + 64;
        opts.point_cap = static_cast<size_t>(rat_ceil(cap_r).convert_to<long long>());
        EnumResult enumd = ip_enumerate(4, P, opts);
        enum_total.merge(enumd.stats);

        std::vector<Candidate> members;
        for (const auto& a : enumd.points)
            if (in_meniscus(a, m, k, prec))
                members.push_back(Candidate::from_coeffs(a, k, target.levels));
        if (members.empty())
            continue;

        long long count = static_cast<long long>(members.size());
        bool oversized = enumd.truncated || Rat(count) > threshold_hi;
        members = candidate_order(std::move(members), target, prec);

        if (oversized && cfg.mode == SearchMode::MinKAllCandidates) {
            SearchExceptionReport rep;
            rep.k_at_exception = k;
            rep.count_threshold = lam;
            rep.candidate_count = count;
            rep.count_is_lower_bound = enumd.truncated;
            rep.candidates_inspected = inspected_total;
            rep.unknown_instances = unknowns;
            return rep;
        }
        if (oversized && count > sample_limit)
            members.resize(static_cast<size_t>(sample_limit));

        bool stop_at_first = cfg.mode == SearchMode::FirstFeasible;
        FeasibilityScan scan = scan_candidates(members, k, cfg, stop_at_first);
        inspected_total += scan.inspected;
        norm_work += scan.work;
        unknowns.insert(unknowns.end(), scan.unknowns.begin(), scan.unknowns.end());

        if (cfg.mode == SearchMode::FirstFeasible) {
            if (scan.first_solved) {
                ApproxResult r = assemble(target, members[scan.first_solved->first],
                                          scan.first_solved->second, prec, epsilon);
                r.candidates_inspected = inspected_total;
                r.unknown_instances = unknowns;
                r.exception_sampled = oversized;
                r.norm_work = norm_work;
                r.enum_stats = enum_total;
                return r;
            }
            if (oversized) {
                SearchExceptionReport rep;
                rep.k_at_exception = k;
                rep.count_threshold = lam;
                rep.candidate_count = count;
                rep.count_is_lower_bound = enumd.truncated;
                rep.candidates_inspected = inspected_total;
                rep.unknown_instances = unknowns;
                return rep;
            }
        } else if (!scan.all_solved.empty()) {
            // smallest distance among the feasible candidates; exact ties
            // fall back to the candidate-order position
            auto closer = [&](size_t ca, size_t cb) {
                for (int attempt = 0; attempt < 3; ++attempt) {
                    mpfr_prec_t p = prec << attempt;
                    Interval da = distance(target, members[ca], p);
                    Interval db = distance(target, members[cb], p);
                    if (da.certainly_less(db))
                        return true;
                    if (db.certainly_less(da))
                        return false;
                }
                return ca < cb;
            };
            size_t best = 0;
            for (size_t i = 1; i < scan.all_solved.size(); ++i)
                if (closer(scan.all_solved[i].first, scan.all_solved[best].first))
                    best = i;
            ApproxResult r = assemble(target, members[scan.all_solved[best].first],
                                      scan.all_solved[best].second, prec, epsilon);
            r.candidates_inspected = inspected_total;
            r.unknown_instances = unknowns;
            r.norm_work = norm_work;
            r.enum_stats = enum_total;
            return r;
        }
    }

    // beyond the cap the meniscus is thicker than the lattice spacing:
    // round sqrt(3)^k p and try nearby perturbations instead of enumerating
    auto p = embed(target);
    for (int k = k_cap + 1; k <= k_cap + 64; ++k) {
        IntVec center = round_to_lattice(p, k, prec);
        std::vector<Candidate> nearby;
        IntVec a(4);
        for (long d0 = -1; d0 <= 1; ++d0)
            for (long d1 = -1; d1 <= 1; ++d1)
                for (long d2 = -1; d2 <= 1; ++d2)
                    for (long d3 = -1; d3 <= 1; ++d3) {
                        a = {center[0] + d0, center[1] + d1, center[2] + d2, center[3] + d3};
                        Candidate c = Candidate::from_coeffs(a, k, target.levels);
                        if (c.inside_ball() && in_meniscus(a, m, k, prec))
                            nearby.push_back(std::move(c));
                    }
        if (nearby.empty())
            continue;
        nearby = candidate_order(std::move(nearby), target, prec);
        FeasibilityScan scan = scan_candidates(nearby, k, cfg, true);
        inspected_total += scan.inspected;
        norm_work += scan.work;
        unknowns.insert(unknowns.end(), scan.unknowns.begin(), scan.unknowns.end());
        if (scan.first_solved) {
            ApproxResult r = assemble(target, nearby[scan.first_solved->first],
                                      scan.first_solved->second, prec, epsilon);
            r.candidates_inspected = inspected_total;
            r.unknown_instances = unknowns;
            r.norm_work = norm_work;
            r.enum_stats = enum_total;
            return r;
        }
    }

    BudgetExhaustedReport rep;
    rep.k_reached = k_cap;
    rep.candidates_inspected = inspected_total;
    rep.unknown_instances = unknowns;
    return rep;
}

std::variant<ReflectionBudgetReport, SearchExceptionReport, BudgetExhaustedReport>
reflection_budget(const TwoLevelState& target, const ExactReal& epsilon, const SearchConfig& cfg)
{
    SearchOutcome out = approximate_state(target, epsilon, cfg);
    if (std::holds_alternative<ApproxResult>(out)) {
        ApproxResult r = std::get<ApproxResult>(out);
        int bound = 2 * (r.k + 1) + 1;
        return ReflectionBudgetReport{std::move(r), bound};
    }
    if (std::holds_alternative<SearchExceptionReport>(out))
        return std::get<SearchExceptionReport>(out);
    return std::get<BudgetExhaustedReport>(out);
}

} // namespace metasynth
