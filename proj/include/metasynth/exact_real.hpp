#pragma once

#include <memory>
#include <string>
#include <vector>

#include "metasynth/bigint.hpp"
#include "metasynth/interval.hpp"

namespace metasynth {

/// Exact symbolic real: rationals, sqrt of rationals, cos/sin of rational
/// multiples of pi, rational powers of 3, closed under +, -, *, /.
/// Values are re-evaluated from scratch at any requested precision, so
/// precision escalation never sees stale constants.
class ExactReal {
  public:
    ExactReal() : kind_(Kind::Rational), q_(0) {}
    /* implicit */ ExactReal(const Rat& q) : kind_(Kind::Rational), q_(q) {}
    /* implicit */ ExactReal(long v) : kind_(Kind::Rational), q_(v) {}

    static ExactReal rational(const Rat& q) { return ExactReal(q); }
    static ExactReal sqrt_of(const Rat& q);       // sqrt(q), q >= 0
    static ExactReal cos_pi(const Rat& frac);     // cos(pi*frac)
    static ExactReal sin_pi(const Rat& frac);     // sin(pi*frac)
    static ExactReal pow3(const Rat& exponent);   // 3^exponent

    ExactReal operator+(const ExactReal& o) const { return binary(Kind::Sum, *this, o); }
    ExactReal operator-(const ExactReal& o) const;
    ExactReal operator*(const ExactReal& o) const { return binary(Kind::Product, *this, o); }
    ExactReal operator/(const ExactReal& o) const { return binary(Kind::Quotient, *this, o); }
    ExactReal operator-() const;

    bool is_rational() const { return kind_ == Kind::Rational; }
    const Rat& rational_value() const { return q_; }

    Interval eval(mpfr_prec_t prec) const;

    std::string to_string() const;

    /// Parse an amplitude expression: decimals, rationals, sqrt(n),
    /// cos(pi/9)-style trig factors, products/quotients/sums, unary minus.
    static ExactReal parse(const std::string& text);

    /// Parse a precision value: plain decimal or "3^-9.53" power notation.
    static ExactReal parse_epsilon(const std::string& text);

  private:
    enum class Kind { Rational, SqrtRat, CosPi, SinPi, Pow3, Sum, Difference, Product, Quotient, Negate };

    static ExactReal binary(Kind k, const ExactReal& a, const ExactReal& b);

    Kind kind_;
    Rat q_; // payload for leaf kinds
    std::vector<ExactReal> kids_;
};

} // namespace metasynth
