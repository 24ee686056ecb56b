#include "metasynth/exact_real.hpp"

#include <cctype>
#include <cstring>
#include <sstream>
#include <stdexcept>

namespace metasynth {

ExactReal ExactReal::sqrt_of(const Rat& q)
{
    if (q < 0)
        throw std::domain_error("sqrt_of: negative radicand");
    ExactReal r;
    r.kind_ = Kind::SqrtRat;
    r.q_ = q;
    return r;
}

ExactReal ExactReal::cos_pi(const Rat& frac)
{
    ExactReal r;
    r.kind_ = Kind::CosPi;
    r.q_ = frac;
    return r;
}

ExactReal ExactReal::sin_pi(const Rat& frac)
{
    ExactReal r;
    r.kind_ = Kind::SinPi;
    r.q_ = frac;
    return r;
}

ExactReal ExactReal::pow3(const Rat& exponent)
{
    ExactReal r;
    r.kind_ = Kind::Pow3;
    r.q_ = exponent;
    return r;
}

ExactReal ExactReal::binary(Kind k, const ExactReal& a, const ExactReal& b)
{
    ExactReal r;
    r.kind_ = k;
    r.kids_ = {a, b};
    return r;
}

ExactReal ExactReal::operator-(const ExactReal& o) const
{
    return binary(Kind::Difference, *this, o);
}

ExactReal ExactReal::operator-() const
{
    ExactReal r;
    r.kind_ = Kind::Negate;
    r.kids_ = {*this};
    return r;
}

Interval ExactReal::eval(mpfr_prec_t prec) const
{
    switch (kind_) {
    case Kind::Rational:
        return Interval::from_rational(q_, prec);
    case Kind::SqrtRat:
        return Interval::from_rational(q_, prec).sqrt();
    case Kind::CosPi:
        return cos_pi_frac_interval(q_, prec);
    case Kind::SinPi:
        return sin_pi_frac_interval(q_, prec);
    case Kind::Pow3:
        return pow3_interval(q_, prec);
    case Kind::Sum:
        return kids_[0].eval(prec) + kids_[1].eval(prec);
    case Kind::Difference:
        return kids_[0].eval(prec) - kids_[1].eval(prec);
    case Kind::Product:
        return kids_[0].eval(prec) * kids_[1].eval(prec);
    case Kind::Quotient:
        return kids_[0].eval(prec) / kids_[1].eval(prec);
    case Kind::Negate:
        return -kids_[0].eval(prec);
    }
    throw std::logic_error("unreachable");
}

std::string ExactReal::to_string() const
{
    std::ostringstream os;
    switch (kind_) {
    case Kind::Rational:
        os << q_;
        break;
    case Kind::SqrtRat:
        os << "sqrt(" << q_ << ")";
        break;
    case Kind::CosPi:
        os << "cos(pi*" << q_ << ")";
        break;
    case Kind::SinPi:
        os << "sin(pi*" << q_ << ")";
        break;
    case Kind::Pow3:
        os << "3^(" << q_ << ")";
        break;
    case Kind::Sum:
        os << "(" << kids_[0].to_string() << " + " << kids_[1].to_string() << ")";
        break;
    case Kind::Difference:
        os << "(" << kids_[0].to_string() << " - " << kids_[1].to_string() << ")";
        break;
    case Kind::Product:
        os << "(" << kids_[0].to_string() << " * " << kids_[1].to_string() << ")";
        break;
    case Kind::Quotient:
        os << "(" << kids_[0].to_string() << " / " << kids_[1].to_string() << ")";
        break;
    case Kind::Negate:
        os << "-" << kids_[0].to_string();
        break;
    }
    return os.str();
}

namespace {

/// Recursive-descent parser for amplitude expressions.
///   expr    := term (('+'|'-') term)*
///   term    := factor (('*'|'/') factor)*
///   factor  := '-' factor | '(' expr ')' | func | number
///   func    := ('cos'|'sin') '(' pifrac ')' | 'sqrt' '(' expr-rational ')'
///   pifrac  := ['-'] [number '*'] 'pi' ['/' number] | ['-'] 'pi' '*' number
class Parser {
  public:
    explicit Parser(const std::string& s) : s_(s) {}

    ExactReal parse()
    {
        ExactReal e = expr();
        skip_ws();
        if (pos_ != s_.size())
            throw std::invalid_argument("trailing characters in expression: " + s_);
        return e;
    }

  private:
    ExactReal expr()
    {
        ExactReal e = term();
        for (;;) {
            skip_ws();
            if (accept('+'))
                e = e + term();
            else if (accept('-'))
                e = e - term();
            else
                return e;
        }
    }

    ExactReal term()
    {
        ExactReal e = factor();
        for (;;) {
            skip_ws();
            if (accept('*'))
                e = e * factor();
            else if (accept('/'))
                e = e / factor();
            else
                return e;
        }
    }

    ExactReal factor()
    {
        skip_ws();
        if (accept('-'))
            return -factor();
        if (accept('(')) {
            ExactReal e = expr();
            expect(')');
            return e;
        }
        if (match_word("cos"))
            return trig(true);
        if (match_word("sin"))
            return trig(false);
        if (match_word("sqrt")) {
            expect('(');
            ExactReal inner = expr();
            expect(')');
            if (!inner.is_rational())
                throw std::invalid_argument("sqrt argument must be rational");
            return ExactReal::sqrt_of(inner.rational_value());
        }
        if (match_word("pi"))
            throw std::invalid_argument("bare pi outside cos/sin is not supported");
        return ExactReal(number());
    }

    ExactReal trig(bool is_cos)
    {
        expect('(');
        Rat frac = pi_fraction();
        expect(')');
        return is_cos ? ExactReal::cos_pi(frac) : ExactReal::sin_pi(frac);
    }

    Rat pi_fraction()
    {
        skip_ws();
        bool neg = accept('-');
        Rat coeff(1);
        bool have_pi = false;
        if (match_word("pi")) {
            have_pi = true;
        } else {
            coeff = number();
            skip_ws();
            if (accept('*')) {
                if (!match_word("pi"))
                    throw std::invalid_argument("expected pi in trig argument");
                have_pi = true;
            }
        }
        if (have_pi) {
            skip_ws();
            if (accept('*'))
                coeff *= number();
        }
        skip_ws();
        if (accept('/')) {
            Rat d = number();
            if (d == 0)
                throw std::invalid_argument("division by zero in trig argument");
            coeff /= d;
        }
        if (!have_pi)
            throw std::invalid_argument("trig argument must be a rational multiple of pi");
        return neg ? Rat(-coeff) : coeff;
    }

    Rat number()
    {
        skip_ws();
        size_t start = pos_;
        while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.'))
            ++pos_;
        if (start == pos_)
            throw std::invalid_argument("expected a number at position " + std::to_string(start) + " in: " + s_);
        return rat_from_decimal(s_.substr(start, pos_ - start));
    }

    bool match_word(const char* w)
    {
        skip_ws();
        size_t len = std::strlen(w);
        if (s_.compare(pos_, len, w) == 0) {
            pos_ += len;
            return true;
        }
        return false;
    }

    void skip_ws()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
    }

    bool accept(char c)
    {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c)
    {
        if (!accept(c))
            throw std::invalid_argument(std::string("expected '") + c + "' in: " + s_);
    }

    const std::string& s_;
    size_t pos_ = 0;
};

} // namespace

ExactReal ExactReal::parse(const std::string& text)
{
    return Parser(text).parse();
}

ExactReal ExactReal::parse_epsilon(const std::string& text)
{
    auto caret = text.find('^');
    if (caret != std::string::npos) {
        std::string base = text.substr(0, caret);
        if (base != "3")
            throw std::invalid_argument("only base-3 power notation is supported: " + text);
        Rat e = rat_from_decimal(text.substr(caret + 1));
        return ExactReal::pow3(e);
    }
    return ExactReal(rat_from_decimal(text));
}

} // namespace metasynth
