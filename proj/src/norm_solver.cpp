#include "metasynth/norm_solver.hpp"

namespace metasynth {

InstanceClass classify(const Int& n, const NormSolverConfig& cfg)
{
    if (n < 0)
        throw std::domain_error("classify: negative argument");
    Int m = n;
    while (m > 0 && m % 3 == 0)
        m /= 3;
    if (m <= 1)
        return {true, EasyReason::PowerOfThree};
    if (m < cfg.small_cofactor_bound)
        return {true, EasyReason::SmallCofactor};
    if (is_prime(m))
        return {true, EasyReason::PrimeCofactor};
    return {false, EasyReason::Other};
}

namespace {

/// Prime element above a rational prime p = 1 (mod 3), found by splitting
/// with x^2 = -3 (mod p): p = pi * conj(pi) up to units, norm(pi) = p.
Eisenstein split_prime(const Int& p)
{
    auto x = sqrt_mod(Int(-3), p);
    if (!x)
        throw std::logic_error("split_prime: -3 is a residue for every prime p = 1 mod 3");
    // sqrt(-3) corresponds to 1 + 2w, so p splits through gcd(p, x - (1+2w))
    Eisenstein pi = eis_gcd(Eisenstein(*x - 1, Int(-2)), Eisenstein(p, Int(0)));
    if (pi.norm() != p)
        throw std::logic_error("split_prime: gcd did not produce a prime of norm p");
    return pi;
}

Eisenstein eis_pow(Eisenstein base, unsigned e)
{
    Eisenstein r(Int(1), Int(0));
    while (e > 0) {
        if (e & 1u)
            r = r * base;
        base = base * base;
        e >>= 1u;
    }
    return r;
}

} // namespace

NormOutcome solve_norm_equation(const Int& n, const NormSolverConfig& cfg)
{
    if (n < 0)
        throw std::domain_error("solve_norm_equation: negative right-hand side");
    NormOutcome out;
    if (n == 0) {
        out.status = NormStatus::Solved;
        out.w = Eisenstein(Int(0), Int(0));
        return out;
    }
    WorkBudget budget{cfg.budget, 0};
    FactorOutcome fo = factor(n, budget, cfg.seed);
    out.work_spent = budget.spent;
    if (!fo.complete()) {
        out.status = NormStatus::Unknown;
        return out;
    }

    for (const auto& f : fo.factorization.factors) {
        if (f.residue_mod_3 == 2 && (f.exponent & 1u)) {
            out.status = NormStatus::Unsolvable;
            out.witness = fo.factorization;
            return out;
        }
    }

    // constructive assembly: 3 = norm(1+2w); split primes p = 1 (mod 3);
    // inert primes q = 2 (mod 3) enter as q^(e/2) with norm q^e
    Eisenstein w(Int(1), Int(0));
    for (const auto& f : fo.factorization.factors) {
        if (f.prime == 3) {
            w = w * eis_pow(Eisenstein(Int(1), Int(2)), f.exponent);
        } else if (f.residue_mod_3 == 1) {
            w = w * eis_pow(split_prime(f.prime), f.exponent);
        } else {
            w = w * Eisenstein(int_pow(f.prime, f.exponent / 2), Int(0));
        }
    }
    if (w.norm() != n)
        throw std::logic_error("solve_norm_equation: constructed element has wrong norm");
    out.status = NormStatus::Solved;
    out.w = w;
    out.witness = fo.factorization;
    return out;
}

NormOutcome k_feasible(const Eisenstein& u, const Eisenstein& v, int k, const NormSolverConfig& cfg)
{
    if (k < 0)
        throw std::domain_error("k_feasible: negative level");
    Int residual = pow3(static_cast<unsigned>(k)) - u.norm() - v.norm();
    if (residual < 0)
        throw OutsideBallError{};
    return solve_norm_equation(residual, cfg);
}

} // namespace metasynth
