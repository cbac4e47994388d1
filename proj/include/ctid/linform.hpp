#pragma once

// Sums of scalar * prod(linear form)^integer: the closed class every
// constant-term computation lives in. Multiplication, differentiation and
// restriction to a coordinate hyperplane all map the class to itself.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ctid/error.hpp"
#include "ctid/scalar.hpp"

namespace ctid {

/// 1-based variable index: VarId{3} is x3.
struct VarId {
    std::uint32_t index = 1;

    friend auto operator<=>(const VarId&, const VarId&) = default;
};

inline std::string to_string(VarId v) { return "x" + std::to_string(v.index); }

using Point = std::map<VarId, Rational>;

namespace detail {

inline std::strong_ordering cmp(const Integer& a, const Integer& b) {
    int c = ::cmp(a, b);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw DomainError("exponent overflow");
    return r;
}

}  // namespace detail

/// Affine form c0 + sum c_i x_i with integer entries in canonical normal form:
/// gcd of all entries is 1 and the first nonzero of (c0, c_1, c_2, ...) is positive.
class LinearForm {
public:
    using Entry = std::pair<std::uint32_t, Integer>;

    /// Canonicalizes an integer form; returns (scale, form) with scale * form equal
    /// to the input. Entries need not be sorted; duplicates are summed.
    static std::pair<Integer, LinearForm> canonical(Integer constant, std::vector<Entry> coeffs) {
        std::sort(coeffs.begin(), coeffs.end(),
                  [](const Entry& x, const Entry& y) { return x.first < y.first; });
        std::vector<Entry> merged;
        merged.reserve(coeffs.size());
        for (auto& e : coeffs) {
            if (!merged.empty() && merged.back().first == e.first) {
                merged.back().second += e.second;
            } else {
                merged.push_back(std::move(e));
            }
        }
        std::erase_if(merged, [](const Entry& e) { return e.second == 0; });

        Integer g = abs(constant);
        for (const auto& e : merged) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), e.second.get_mpz_t());
        if (g == 0) throw PreconditionError("linear form with all entries zero");

        int lead = constant != 0 ? sgn(constant) : sgn(merged.front().second);
        Integer scale = lead < 0 ? Integer(-g) : g;
        LinearForm form;
        form.constant_ = constant;
        mpz_divexact(form.constant_.get_mpz_t(), form.constant_.get_mpz_t(), scale.get_mpz_t());
        for (auto& e : merged) {
            mpz_divexact(e.second.get_mpz_t(), e.second.get_mpz_t(), scale.get_mpz_t());
        }
        form.coeffs_ = std::move(merged);
        return {std::move(scale), std::move(form)};
    }

    /// The pure form x_v.
    static LinearForm variable(VarId v) {
        LinearForm f;
        f.constant_ = 0;
        f.coeffs_.emplace_back(v.index, Integer(1));
        return f;
    }

    const Integer& constant() const noexcept { return constant_; }
    const std::vector<Entry>& coeffs() const noexcept { return coeffs_; }

    /// Coefficient of x_v (zero when absent).
    Integer coeff(VarId v) const {
        auto it = std::lower_bound(coeffs_.begin(), coeffs_.end(), v.index,
                                   [](const Entry& e, std::uint32_t i) { return e.first < i; });
        return (it != coeffs_.end() && it->first == v.index) ? it->second : Integer(0);
    }
    bool contains(VarId v) const {
        return std::any_of(coeffs_.begin(), coeffs_.end(),
                           [&](const Entry& e) { return e.first == v.index; });
    }
    bool is_constant() const noexcept { return coeffs_.empty(); }
    bool is_pure(VarId v) const {
        return constant_ == 0 && coeffs_.size() == 1 && coeffs_.front().first == v.index;
    }

    /// Restriction to x_v = 0, re-canonicalized. The result may be the constant form 1.
    std::pair<Integer, LinearForm> restrict_zero(VarId v) const {
        std::vector<Entry> rest;
        rest.reserve(coeffs_.size());
        for (const auto& e : coeffs_) {
            if (e.first != v.index) rest.push_back(e);
        }
        return canonical(constant_, std::move(rest));
    }

    Rational eval(const Point& point) const {
        Rational value(constant_);
        for (const auto& [index, c] : coeffs_) {
            auto it = point.find(VarId{index});
            if (it == point.end()) {
                throw PreconditionError("evaluation point lacks " + to_string(VarId{index}));
            }
            value += c * it->second;
        }
        return value;
    }

    /// Lexicographic on the dense vector (constant, coeff of x1, coeff of x2, ...).
    friend std::strong_ordering operator<=>(const LinearForm& a, const LinearForm& b) {
        if (auto c = detail::cmp(a.constant_, b.constant_); c != 0) return c;
        auto ia = a.coeffs_.begin();
        auto ib = b.coeffs_.begin();
        while (ia != a.coeffs_.end() || ib != b.coeffs_.end()) {
            if (ib == b.coeffs_.end() || (ia != a.coeffs_.end() && ia->first < ib->first)) {
                return sgn(ia->second) > 0 ? std::strong_ordering::greater : std::strong_ordering::less;
            }
            if (ia == a.coeffs_.end() || ib->first < ia->first) {
                return sgn(ib->second) > 0 ? std::strong_ordering::less : std::strong_ordering::greater;
            }
            if (auto c = detail::cmp(ia->second, ib->second); c != 0) return c;
            ++ia;
            ++ib;
        }
        return std::strong_ordering::equal;
    }
    friend bool operator==(const LinearForm& a, const LinearForm& b) {
        return a.constant_ == b.constant_ && a.coeffs_ == b.coeffs_;
    }

private:
    Integer constant_ = 1;
    std::vector<Entry> coeffs_;
};

/// `(1 - x1 - x2)`, `(x1)`, `(2*x1 + 3*x3)`.
inline std::string to_string(const LinearForm& f) {
    std::string out = "(";
    bool first = true;
    auto put = [&](const Integer& c, const std::string& var) {
        Integer mag = abs(c);
        if (first) {
            if (c < 0) out += "-";
        } else {
            out += c < 0 ? " - " : " + ";
        }
        if (var.empty()) {
            out += mag.get_str();
        } else {
            if (mag != 1) out += mag.get_str() + "*";
            out += var;
        }
        first = false;
    };
    if (f.constant() != 0) put(f.constant(), "");
    for (const auto& [index, c] : f.coeffs()) put(c, to_string(VarId{index}));
    return out + ")";
}

/// Un-normalized affine form with rational entries; a convenience for building
/// integrands as `1 - x(1) - x(2)`.
struct AffineForm {
    Rational constant = 0;
    std::map<VarId, Rational> coeffs;

    friend AffineForm operator+(AffineForm a, const AffineForm& b) {
        a.constant += b.constant;
        for (const auto& [v, c] : b.coeffs) a.coeffs[v] += c;
        return a;
    }
    friend AffineForm operator-(const AffineForm& a) {
        AffineForm r = a;
        r.constant = -r.constant;
        for (auto& [v, c] : r.coeffs) c = -c;
        return r;
    }
    friend AffineForm operator-(const AffineForm& a, const AffineForm& b) { return a + (-b); }
    friend AffineForm operator*(const Rational& s, AffineForm a) {
        a.constant *= s;
        for (auto& [v, c] : a.coeffs) c *= s;
        return a;
    }
    friend AffineForm operator+(const Rational& s, const AffineForm& a) { return AffineForm{s, {}} + a; }
    friend AffineForm operator-(const Rational& s, const AffineForm& a) { return AffineForm{s, {}} - a; }
    friend AffineForm operator+(long s, const AffineForm& a) { return Rational(s) + a; }
    friend AffineForm operator-(long s, const AffineForm& a) { return Rational(s) - a; }
    friend AffineForm operator+(const AffineForm& a, long s) { return a + AffineForm{Rational(s), {}}; }
    friend AffineForm operator-(const AffineForm& a, long s) { return a - AffineForm{Rational(s), {}}; }
};

inline AffineForm x(std::uint32_t index) { return AffineForm{0, {{VarId{index}, Rational(1)}}}; }

/// Splits an affine form with rational entries into (scale, canonical form).
inline std::pair<Rational, LinearForm> make_form(const Rational& constant,
                                                 const std::map<VarId, Rational>& coeffs) {
    Integer lcm = constant.get_den();
    for (const auto& [v, c] : coeffs) {
        mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.get_den().get_mpz_t());
    }
    auto scaled = [&](const Rational& q) {
        Integer r = q.get_num() * lcm;
        mpz_divexact(r.get_mpz_t(), r.get_mpz_t(), q.get_den().get_mpz_t());
        return r;
    };
    std::vector<LinearForm::Entry> entries;
    for (const auto& [v, c] : coeffs) {
        if (c != 0) entries.emplace_back(v.index, scaled(c));
    }
    auto [scale, form] = LinearForm::canonical(scaled(constant), std::move(entries));
    return {make_rational(scale, lcm), std::move(form)};
}

inline std::pair<Rational, LinearForm> make_form(const AffineForm& a) { return make_form(a.constant, a.coeffs); }

struct Factor {
    LinearForm form;
    std::int64_t exp = 0;

    friend std::strong_ordering operator<=>(const Factor& a, const Factor& b) {
        if (auto c = a.form <=> b.form; c != 0) return c;
        return a.exp <=> b.exp;
    }
    friend bool operator==(const Factor&, const Factor&) = default;
};

using FactorList = std::vector<Factor>;

/// coeff * prod form^exp with forms strictly increasing and exponents nonzero.
struct FactoredTerm {
    Rational coeff;
    FactorList factors;

    friend bool operator==(const FactoredTerm&, const FactoredTerm&) = default;
};

namespace detail {

/// Sorts by form, merges repeated forms and drops zero exponents.
inline void normalize_factors(FactorList& factors) {
    std::sort(factors.begin(), factors.end(),
              [](const Factor& a, const Factor& b) { return (a.form <=> b.form) < 0; });
    FactorList out;
    out.reserve(factors.size());
    for (auto& f : factors) {
        if (!out.empty() && out.back().form == f.form) {
            out.back().exp = checked_add(out.back().exp, f.exp);
        } else {
            out.push_back(std::move(f));
        }
    }
    std::erase_if(out, [](const Factor& f) { return f.exp == 0; });
    factors = std::move(out);
}

/// Product of two already-normalized factor lists.
inline FactorList merge_factors(const FactorList& a, const FactorList& b) {
    FactorList out;
    out.reserve(a.size() + b.size());
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        auto c = ia->form <=> ib->form;
        if (c < 0) {
            out.push_back(*ia++);
        } else if (c > 0) {
            out.push_back(*ib++);
        } else {
            std::int64_t e = checked_add(ia->exp, ib->exp);
            if (e != 0) out.push_back(Factor{ia->form, e});
            ++ia;
            ++ib;
        }
    }
    out.insert(out.end(), ia, a.end());
    out.insert(out.end(), ib, b.end());
    return out;
}

}  // namespace detail

/// A formal sum of factored terms, like terms merged, zero terms dropped,
/// ordered by factor list. The empty sum is 0.
class Expr {
public:
    Expr() = default;

    static Expr constant(const Rational& value) {
        Expr e;
        if (value != 0) e.terms_.push_back(FactoredTerm{value, {}});
        return e;
    }
    static Expr one() { return constant(Rational(1)); }

    /// Canonical form of an arbitrary list of (possibly unsorted, unmerged) terms.
    static Expr from_terms(std::vector<FactoredTerm> raw) {
        for (auto& t : raw) detail::normalize_factors(t.factors);
        return merge_normalized(std::move(raw));
    }

    /// `form^exp` for an arbitrary affine form; the content is moved into the coefficient.
    static Expr power(const AffineForm& affine, std::int64_t exp) {
        auto [scale, form] = make_form(affine);
        return power(scale, std::move(form), exp);
    }
    static Expr power(const Rational& scale, LinearForm form, std::int64_t exp) {
        Rational coeff = ctid::pow(scale, exp);
        if (form.is_constant() || exp == 0) return constant(coeff);
        FactoredTerm t{std::move(coeff), {}};
        t.factors.push_back(Factor{std::move(form), exp});
        Expr e;
        e.terms_.push_back(std::move(t));
        return e;
    }

    const std::vector<FactoredTerm>& terms() const noexcept { return terms_; }
    std::size_t size() const noexcept { return terms_.size(); }
    bool is_zero() const noexcept { return terms_.empty(); }
    bool is_constant() const noexcept {
        return terms_.empty() || (terms_.size() == 1 && terms_.front().factors.empty());
    }
    Rational constant_value() const {
        if (!is_constant()) throw ContractError("expression is not constant");
        return terms_.empty() ? Rational(0) : terms_.front().coeff;
    }

    /// Variables occurring in any factor, in index order.
    std::set<VarId> variables() const {
        std::set<VarId> vars;
        for (const auto& t : terms_) {
            for (const auto& f : t.factors) {
                for (const auto& [index, c] : f.form.coeffs()) vars.insert(VarId{index});
            }
        }
        return vars;
    }

    friend Expr operator+(const Expr& a, const Expr& b) {
        std::vector<FactoredTerm> raw = a.terms_;
        raw.insert(raw.end(), b.terms_.begin(), b.terms_.end());
        return merge_normalized(std::move(raw));
    }
    friend Expr operator*(const Rational& s, const Expr& e) {
        if (s == 0) return Expr{};
        Expr r = e;
        for (auto& t : r.terms_) t.coeff *= s;
        return r;
    }
    friend Expr operator-(const Expr& a, const Expr& b) { return a + Rational(-1) * b; }
    friend Expr operator*(const Expr& a, const Expr& b) {
        std::vector<FactoredTerm> raw;
        raw.reserve(a.size() * b.size());
        for (const auto& ta : a.terms_) {
            for (const auto& tb : b.terms_) {
                raw.push_back(FactoredTerm{ta.coeff * tb.coeff, detail::merge_factors(ta.factors, tb.factors)});
            }
        }
        return merge_normalized(std::move(raw));
    }
    friend bool operator==(const Expr&, const Expr&) = default;

private:
    /// Terms must already have normalized factor lists.
    static Expr merge_normalized(std::vector<FactoredTerm> raw) {
        std::sort(raw.begin(), raw.end(), [](const FactoredTerm& a, const FactoredTerm& b) {
            return std::lexicographical_compare_three_way(a.factors.begin(), a.factors.end(),
                                                          b.factors.begin(), b.factors.end()) < 0;
        });
        Expr e;
        e.terms_.reserve(raw.size());
        for (auto& t : raw) {
            if (!e.terms_.empty() && e.terms_.back().factors == t.factors) {
                e.terms_.back().coeff += t.coeff;
            } else {
                if (!e.terms_.empty() && e.terms_.back().coeff == 0) e.terms_.pop_back();
                e.terms_.push_back(std::move(t));
            }
        }
        if (!e.terms_.empty() && e.terms_.back().coeff == 0) e.terms_.pop_back();
        return e;
    }

    std::vector<FactoredTerm> terms_;
};

inline Expr expr_mul(const Expr& a, const Expr& b) { return a * b; }

/// Partial derivative with respect to v, by the product rule over factors.
inline Expr differentiate(const Expr& e, VarId v) {
    std::vector<FactoredTerm> raw;
    for (const auto& t : e.terms()) {
        for (std::size_t k = 0; k < t.factors.size(); ++k) {
            const Factor& f = t.factors[k];
            Integer slope = f.form.coeff(v);
            if (slope == 0) continue;
            FactoredTerm d{t.coeff * f.exp * slope, t.factors};
            if (--d.factors[k].exp == 0) d.factors.erase(d.factors.begin() + static_cast<std::ptrdiff_t>(k));
            raw.push_back(std::move(d));
        }
    }
    return Expr::from_terms(std::move(raw));
}

/// Sets x_v = 0. No factor may be the pure form x_v.
inline Expr substitute_zero(const Expr& e, VarId v) {
    std::vector<FactoredTerm> raw;
    raw.reserve(e.size());
    for (const auto& t : e.terms()) {
        FactoredTerm r{t.coeff, {}};
        r.factors.reserve(t.factors.size());
        for (const auto& f : t.factors) {
            if (!f.form.contains(v)) {
                r.factors.push_back(f);
                continue;
            }
            if (f.form.is_pure(v)) {
                throw ContractError("substitute_zero: factor " + to_string(f.form) + " vanishes at " +
                                    to_string(v) + " = 0");
            }
            auto [scale, form] = f.form.restrict_zero(v);
            r.coeff *= ctid::pow(Rational(scale), f.exp);
            if (!form.is_constant()) r.factors.push_back(Factor{std::move(form), f.exp});
        }
        raw.push_back(std::move(r));
    }
    return Expr::from_terms(std::move(raw));
}

/// Exact value at a rational point covering every variable of e.
inline Rational eval_at(const Expr& e, const Point& point) {
    Rational total = 0;
    for (const auto& t : e.terms()) {
        Rational value = t.coeff;
        for (const auto& f : t.factors) {
            Rational base = f.form.eval(point);
            if (base == 0 && f.exp < 0) {
                throw PoleError("factor " + to_string(f.form) + " vanishes at the evaluation point");
            }
            value *= ctid::pow(base, f.exp);
        }
        total += value;
    }
    return total;
}

/// `coeff * (form)^exp * ...` per term, joined by ` + `; `0` for the empty sum.
inline std::string to_string(const Expr& e) {
    if (e.is_zero()) return "0";
    std::string out;
    for (const auto& t : e.terms()) {
        if (!out.empty()) out += " + ";
        out += to_string(t.coeff);
        for (const auto& f : t.factors) out += " * " + to_string(f.form) + "^" + std::to_string(f.exp);
    }
    return out;
}

inline std::ostream& operator<<(std::ostream& os, const Expr& e) { return os << to_string(e); }
inline std::ostream& operator<<(std::ostream& os, const LinearForm& f) { return os << to_string(f); }

}  // namespace ctid
