#pragma once

// Random generators and independent reference computations shared by the
// test suites. Nothing here calls into the differentiation path of ct_once.

#include <cstdint>
#include <random>
#include <vector>

#include "ctid/ctid.hpp"

namespace ctid::testing {

struct ExprGen {
    std::mt19937_64 rng;
    std::uint32_t max_vars = 3;
    int max_factors = 4;
    int min_exp = -3;
    int max_exp = 3;

    explicit ExprGen(std::uint64_t seed) : rng(seed) {}

    int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

    /// Random nonzero affine form with small integer entries.
    AffineForm form(std::uint32_t vars) {
        while (true) {
            AffineForm f;
            f.constant = uniform(-2, 2);
            for (std::uint32_t i = 1; i <= vars; ++i) {
                if (uniform(0, 2) == 0) continue;
                int c = uniform(-2, 2);
                if (c != 0) f.coeffs[VarId{i}] = c;
            }
            if (f.constant != 0 || !f.coeffs.empty()) return f;
        }
    }

    /// coeff * product of up to max_factors random forms; `avoid_pure` excludes pure powers of it.
    Expr term(std::uint32_t vars, std::optional<VarId> avoid_pure = std::nullopt) {
        Expr e = Expr::constant(make_rational(uniform(1, 9) * (uniform(0, 1) ? 1 : -1), uniform(1, 5)));
        int factors = uniform(1, max_factors);
        for (int k = 0; k < factors; ++k) {
            AffineForm f = form(vars);
            if (avoid_pure) {
                auto [scale, canon] = make_form(f);
                if (canon.is_pure(*avoid_pure)) continue;
            }
            int exp = 0;
            while (exp == 0) exp = uniform(min_exp, max_exp);
            e = e * Expr::power(f, exp);
        }
        return e;
    }

    /// Sum of 1..max_terms random terms.
    Expr expr(std::uint32_t vars, int max_terms = 2) {
        Expr e;
        int n = uniform(1, max_terms);
        for (int k = 0; k < n; ++k) e = e + term(vars);
        return e;
    }

    Point point(std::uint32_t vars) {
        Point p;
        for (std::uint32_t i = 1; i <= vars; ++i) p[VarId{i}] = make_rational(uniform(-9, 9), uniform(1, 7));
        return p;
    }

    Rational rational() { return make_rational(uniform(-20, 20), uniform(1, 9)); }
};

/// Catalan numbers by counting Dyck paths of semilength k.
inline Integer catalan_by_enumeration(unsigned k) {
    Integer count = 0;
    const unsigned len = 2 * k;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << len); ++mask) {
        int height = 0;
        bool ok = true;
        for (unsigned i = 0; i < len && ok; ++i) {
            height += (mask >> i) & 1 ? 1 : -1;
            ok = height >= 0;
        }
        if (ok && height == 0) ++count;
    }
    return count;
}

inline Integer binomial(unsigned long n, unsigned long k) {
    Integer r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

/// d/dv of e at p via the logarithmic derivative of each term, i.e. without differentiate().
inline Rational derivative_by_log(const Expr& e, VarId v, const Point& p) {
    Rational total = 0;
    for (const auto& t : e.terms()) {
        Expr single = Expr::from_terms({t});
        Rational value = eval_at(single, p);
        Rational log_deriv = 0;
        for (const auto& f : t.factors) {
            Rational slope(f.form.coeff(v));
            if (slope == 0) continue;
            Rational base = f.form.eval(p);
            if (base == 0) throw PoleError("form vanishes at sample point");
            log_deriv += f.exp * slope / base;
        }
        total += value * log_deriv;
    }
    return total;
}

}  // namespace ctid::testing
