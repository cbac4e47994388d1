#pragma once

// Constant-term extraction. CT_v takes the coefficient of v^0 in the Laurent
// expansion at v = 0 with every surviving variable treated as a nonzero
// parameter, so (x_j - x_i)^-1 with i < j expands in nonnegative powers of x_i
// when the order is x_1 first.

#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "ctid/error.hpp"
#include "ctid/linform.hpp"
#include "ctid/scalar.hpp"

namespace ctid {

/// Variables to eliminate, innermost (applied first) at the front.
class CtOrder {
public:
    CtOrder() = default;
    explicit CtOrder(std::vector<VarId> vars) : vars_(std::move(vars)) {
        std::set<VarId> seen;
        for (VarId v : vars_) {
            if (!seen.insert(v).second) throw PreconditionError("duplicate variable " + to_string(v) + " in CT order");
        }
    }
    /// x_1, x_2, ..., x_n.
    static CtOrder natural(std::uint32_t n) {
        std::vector<VarId> vars;
        for (std::uint32_t i = 1; i <= n; ++i) vars.push_back(VarId{i});
        return CtOrder(std::move(vars));
    }

    const std::vector<VarId>& vars() const noexcept { return vars_; }
    friend bool operator==(const CtOrder&, const CtOrder&) = default;

private:
    std::vector<VarId> vars_;
};

/// CT_v of a single expression.
///
/// Per term, the pure factor v^p is split off. What remains is analytic at
/// v = 0, so the term contributes nothing for p > 0, its restriction for
/// p = 0, and its m-th Taylor coefficient (1/m!) d^m/dv^m |_{v=0} for p = -m.
inline Expr ct_once(const Expr& e, VarId v) {
    const LinearForm pure = LinearForm::variable(v);
    std::vector<FactoredTerm> accumulated;
    for (const auto& t : e.terms()) {
        FactoredTerm rest{t.coeff, {}};
        std::int64_t pole = 0;
        bool has_v = false;
        for (const auto& f : t.factors) {
            if (f.form == pure) {
                pole = f.exp;
            } else {
                has_v = has_v || f.form.contains(v);
                rest.factors.push_back(f);
            }
        }
        if (pole > 0) continue;
        if (!has_v) {
            // Absent variable: only the m = 0 coefficient of a v-free product survives.
            if (pole == 0) accumulated.push_back(std::move(rest));
            continue;
        }
        Expr h = Expr::from_terms({std::move(rest)});
        const auto order = static_cast<unsigned long>(-pole);
        for (unsigned long k = 0; k < order; ++k) h = differentiate(h, v);
        Expr taylor = substitute_zero(h, v);
        Rational inv_fact = make_rational(1, factorial(order));
        for (const auto& term : taylor.terms()) {
            accumulated.push_back(FactoredTerm{term.coeff * inv_fact, term.factors});
        }
    }
    return Expr::from_terms(std::move(accumulated));
}

struct CtStats {
    std::size_t peak_terms = 0;
};

/// Called after each elimination step with (input, variable, output).
using CtStepHook = std::function<void(const Expr&, VarId, const Expr&)>;

/// Folds ct_once over the order, innermost first; the result may still contain variables.
inline Expr ct_fold(Expr e, const CtOrder& order, CtStats* stats = nullptr, const CtStepHook& hook = {}) {
    std::size_t peak = e.size();
    for (VarId v : order.vars()) {
        Expr next = ct_once(e, v);
        if (hook) hook(e, v, next);
        e = std::move(next);
        peak = std::max(peak, e.size());
    }
    if (stats) stats->peak_terms = std::max(stats->peak_terms, peak);
    return e;
}

/// Iterated constant term; the fold must eliminate every variable.
inline PiScalar ct_iterated(const Expr& e, const CtOrder& order, CtStats* stats = nullptr,
                            const CtStepHook& hook = {}) {
    Expr result = ct_fold(e, order, stats, hook);
    if (!result.is_constant()) {
        std::string vars;
        for (VarId v : result.variables()) vars += (vars.empty() ? "" : ",") + to_string(v);
        throw ContractError("iterated constant term leaves variables " + vars + " uneliminated");
    }
    return PiScalar(result.constant_value(), 0);
}

struct Integrand {
    Expr expr;
    CtOrder order;
};

namespace detail {

inline std::int64_t twice_c_exponent(const HalfInt& c) {
    if (c.sign() <= 0) throw PreconditionError("c must be a positive half-integer");
    if (!c.twice().fits_slong_p()) throw PreconditionError("c too large");
    return c.twice().get_si();
}

inline std::int64_t small_int(const Integer& v, const char* what) {
    if (!v.fits_slong_p()) throw PreconditionError(std::string(what) + " too large");
    return v.get_si();
}

}  // namespace detail

/// prod x_i^-1 (1-x_i)^-2 prod_{i<j} (x_j - x_i)^-1 (1 - x_j - x_i)^-1.
inline Integrand build_mm(std::uint32_t n) {
    if (n == 0) throw PreconditionError("build_mm: n must be positive");
    Expr e = Expr::one();
    for (std::uint32_t i = 1; i <= n; ++i) {
        e = e * Expr::power(x(i), -1) * Expr::power(1 - x(i), -2);
    }
    for (std::uint32_t j = 1; j <= n; ++j) {
        for (std::uint32_t i = 1; i < j; ++i) {
            e = e * Expr::power(x(j) - x(i), -1) * Expr::power(1 - x(j) - x(i), -1);
        }
    }
    return {std::move(e), CtOrder::natural(n)};
}

/// prod x_i^-(a-1) (1-x_i)^-a prod_{i<j} (x_j - x_i)^-2c (1 - x_j - x_i)^-2c.
inline Integrand build_fact(std::uint32_t n, const Integer& a, const HalfInt& c) {
    if (n == 0) throw PreconditionError("build_fact: n must be positive");
    if (a < 1) throw PreconditionError("build_fact: a must be a positive integer");
    const std::int64_t a_exp = detail::small_int(a, "a");
    const std::int64_t cross = detail::twice_c_exponent(c);
    Expr e = Expr::one();
    for (std::uint32_t i = 1; i <= n; ++i) {
        e = e * Expr::power(x(i), -(a_exp - 1)) * Expr::power(1 - x(i), -a_exp);
    }
    for (std::uint32_t j = 1; j <= n; ++j) {
        for (std::uint32_t i = 1; i < j; ++i) {
            e = e * Expr::power(x(j) - x(i), -cross) * Expr::power(1 - x(j) - x(i), -cross);
        }
    }
    return {std::move(e), CtOrder::natural(n)};
}

/// prod (1-x_i)^-a x_i^-b prod_{i<j} (x_j - x_i)^-2c.
inline Integrand build_morris(std::uint32_t n, const Integer& a, const Integer& b, const HalfInt& c) {
    if (n == 0) throw PreconditionError("build_morris: n must be positive");
    const std::int64_t a_exp = detail::small_int(a, "a");
    const std::int64_t b_exp = detail::small_int(b, "b");
    const std::int64_t cross = detail::twice_c_exponent(c);
    Expr e = Expr::one();
    for (std::uint32_t i = 1; i <= n; ++i) {
        e = e * Expr::power(1 - x(i), -a_exp) * Expr::power(x(i), -b_exp);
    }
    for (std::uint32_t j = 1; j <= n; ++j) {
        for (std::uint32_t i = 1; i < j; ++i) e = e * Expr::power(x(j) - x(i), -cross);
    }
    return {std::move(e), CtOrder::natural(n)};
}

}  // namespace ctid
