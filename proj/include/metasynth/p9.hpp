#pragma once

#include <string>

#include "metasynth/search.hpp"

namespace metasynth {

/**
 * Geometry of the plane P orthogonal to the rank-2 sublattice spanned by
 * the feasibility shifts d1 = v1+v3 and d2 = -v1-2v2+v3+2v4. The magic
 * state generator phi = (-e^{-i pi/9}|0> + e^{i pi/9}|2>)/sqrt(2) embeds
 * inside P, so shifting a candidate by the d's never changes its precision.
 *
 * Plane coordinates are carried in the sqrt(2)-scaled frame
 * (X, Y) = sqrt(2) * (<y,p1>, <y,p2>) with p1 = (-1,0,1,0)/sqrt(2) and
 * p2 = (0,1,0,1)/sqrt(2); there X and Y of every lattice point are exact
 * elements of Q[sqrt3].
 */
struct PlaneFrame {
    static const IntVec& shift_d1(); // (1, 0, 1, 0) in generator coefficients
    static const IntVec& shift_d2(); // (-1, -2, 1, 2)

    /// (X, Y) of the embedded coefficient vector, exact.
    static Vec2Q3 project_coeffs(const IntVec& a);
};

/// The qutrit state phi on levels (0, 2).
TwoLevelState phi_state();

/**
 * Reduced basis of the true projection of the Eisenstein lattice onto the
 * plane, computed from the generator projections (it is twice as dense as
 * the rectangular sublattice spanned by the frame vectors alone).
 * Coordinates in the sqrt(2)-scaled frame.
 */
std::array<Vec2Q3, 2> projected_lattice_basis();

struct P9Stats {
    std::vector<int> shift_cap_exhausted_at; // levels k abandoned after 64k pairs
    long long shift_pairs_inspected = 0;
    long long strip_candidates = 0;
};

/**
 * Approximate phi by ascending level k: enumerate the projected-lattice
 * points in the 2-D meniscus strip, take them in decreasing-projection
 * order, lift each to the canonical 4-D preimage, and walk feasibility
 * shifts k1 d1 + k2 d2 (ordered by |k1|+|k2|, then lexicographically) until
 * the norm equation solves; at most 64k pairs per candidate level.
 */
std::variant<ApproxResult, BudgetExhaustedReport> approximate_phi(const ExactReal& epsilon,
                                                                  const SearchConfig& cfg = {},
                                                                  P9Stats* stats = nullptr);

/// Distance of a levels-(0,2) candidate to phi through its exact plane
/// coordinates; kernel shifts leave every bit of the result unchanged.
Interval phi_distance(const Candidate& y, mpfr_prec_t prec);

struct P9EmulationReport {
    ApproxResult state_result;
    int c_phi_r_count_bound = 0;      // k + 1
    int r_phi_r_count_bound = 0;      // 2 (k+1) + 1
    std::string mu_note;
};

/**
 * Resource report for emulating the ninth-root phase gate: the reflection
 * about phi costs at most twice the preparation circuit plus one R gate,
 * and the injected magic state mu inherits the fidelity of the offline
 * preparation as the gate image of H|0>.
 */
std::variant<P9EmulationReport, BudgetExhaustedReport> p9_emulation_report(
    const ExactReal& epsilon, const SearchConfig& cfg = {});

struct Table1Row {
    int k = 0;
    Eisenstein u, v;       // amplitudes on |0> and |2>
    Rat eps_log3;          // reported precision exponent, base 3
    Rat residual;          // k + 3 log3(eps)
    Int shift;             // s' = s + shift (|0> + |2>)
};

/// The three reference proxy states for phi (k = 30, 60, 90), exact.
const std::vector<Table1Row>& table1_fixtures();

/// The same rows as the machine-readable JSON shipped with the project.
std::string table1_fixtures_json();

} // namespace metasynth
