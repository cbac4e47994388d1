#pragma once

// Recursive-descent reader for integrands.
//
//   Integrand := Product ('+' Product)*
//   Product   := (Coeff '*'?)? Factor ('*'? Factor)*  |  Coeff
//   Coeff     := ('+'|'-')? RationalLiteral
//   Factor    := Base ('^' SignedInt)?
//   Base      := Var | '(' Linear ')'
//   Linear    := ('+'|'-')? Term (('+'|'-') Term)*
//   Term      := RationalLiteral | (RationalLiteral '*')? Var
//   Var       := 'x' PositiveInt
//
// Whitespace is ignored. Every rendered Expr reads back to itself.

#include <cctype>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "ctid/ct.hpp"
#include "ctid/error.hpp"
#include "ctid/linform.hpp"
#include "ctid/scalar.hpp"

namespace ctid {

namespace parse_detail {

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Expr integrand() {
        Expr sum = product();
        while (skip(), peek() == '+') {
            ++pos_;
            sum = sum + product();
        }
        skip();
        if (!at_end()) fail("unexpected character '" + std::string(1, peek()) + "'");
        return sum;
    }

    std::vector<VarId> var_list() {
        std::vector<VarId> vars;
        skip();
        if (at_end()) return vars;
        vars.push_back(var());
        while (skip(), peek() == ',') {
            ++pos_;
            skip();
            vars.push_back(var());
        }
        skip();
        if (!at_end()) fail("',' expected");
        return vars;
    }

private:
    [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

    void skip() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return at_end() ? '\0' : text_[pos_]; }
    bool is_digit() const { return std::isdigit(static_cast<unsigned char>(peek())) != 0; }

    Integer digits() {
        skip();
        std::size_t start = pos_;
        while (is_digit()) ++pos_;
        if (start == pos_) fail("digit expected");
        return Integer(std::string(text_.substr(start, pos_ - start)));
    }

    Rational rational_literal() {
        Integer num = digits();
        Integer den = 1;
        skip();
        if (peek() == '/') {
            ++pos_;
            den = digits();
            if (den == 0) fail("zero denominator");
        }
        return make_rational(num, den);
    }

    VarId var() {
        skip();
        if (peek() != 'x') fail("variable expected");
        ++pos_;
        if (!is_digit()) fail("variable index expected");
        Integer index = digits();
        if (index < 1 || index > std::numeric_limits<std::uint32_t>::max()) fail("variable index out of range");
        return VarId{static_cast<std::uint32_t>(index.get_ui())};
    }

    Expr product() {
        skip();
        Rational coeff = 1;
        bool any = false;
        if (peek() == '-' || peek() == '+' || is_digit()) {
            bool negative = peek() == '-';
            if (!is_digit()) ++pos_;
            coeff = rational_literal();
            if (negative) coeff = -coeff;
            any = true;
            skip();
            if (peek() == '*') ++pos_;
        }
        Expr e = Expr::constant(coeff);
        while (skip(), peek() == 'x' || peek() == '(') {
            e = e * factor();
            any = true;
            skip();
            if (peek() == '*') {
                ++pos_;
                skip();
                if (peek() != 'x' && peek() != '(') fail("factor expected");
            }
        }
        if (!any) fail("factor expected");
        return e;
    }

    Expr factor() {
        skip();
        std::pair<Rational, LinearForm> base;
        if (peek() == '(') {
            ++pos_;
            AffineForm form = linear();
            skip();
            if (peek() != ')') fail("linear form expected");
            ++pos_;
            if (form.constant == 0 && std::all_of(form.coeffs.begin(), form.coeffs.end(),
                                                  [](const auto& kv) { return kv.second == 0; })) {
                fail("zero linear form");
            }
            base = make_form(form);
        } else {
            base = {Rational(1), LinearForm::variable(var())};
        }
        std::int64_t exp = 1;
        skip();
        if (peek() == '^') {
            ++pos_;
            skip();
            bool negative = false;
            if (peek() == '-' || peek() == '+') {
                negative = peek() == '-';
                ++pos_;
            }
            Integer mag = digits();
            if (!mag.fits_slong_p()) fail("exponent out of range");
            exp = negative ? -mag.get_si() : mag.get_si();
        }
        return Expr::power(base.first, std::move(base.second), exp);
    }

    AffineForm linear() {
        AffineForm sum;
        skip();
        bool negative = false;
        if (peek() == '-' || peek() == '+') {
            negative = peek() == '-';
            ++pos_;
        }
        while (true) {
            AffineForm t = term();
            sum = negative ? sum - t : sum + t;
            skip();
            if (peek() == '+' || peek() == '-') {
                negative = peek() == '-';
                ++pos_;
                continue;
            }
            if (peek() == ')') return sum;
            fail("linear form expected");
        }
    }

    AffineForm term() {
        skip();
        if (peek() == 'x') return x(var().index);
        if (!is_digit()) fail("linear form expected");
        Rational c = rational_literal();
        skip();
        if (peek() == '*') {
            ++pos_;
            skip();
            if (peek() != 'x') fail("linear form expected");
            return c * x(var().index);
        }
        return AffineForm{c, {}};
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace parse_detail

/// Parses an integrand into its canonical Expr.
inline Expr parse_integrand(std::string_view text) { return parse_detail::Parser(text).integrand(); }

/// Parses `x1,x2,...` into a CT order.
inline CtOrder parse_order(std::string_view text) { return CtOrder(parse_detail::Parser(text).var_list()); }

}  // namespace ctid
