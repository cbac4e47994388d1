#pragma once

// Independent check for ct_once: specialize every variable except v to a
// rational point and read the v^0 Laurent coefficient of the resulting
// univariate function with truncated power-series arithmetic.

#include <cstdint>
#include <random>
#include <vector>

#include "ctid/ct.hpp"
#include "ctid/error.hpp"
#include "ctid/linform.hpp"
#include "ctid/scalar.hpp"

namespace ctid {

namespace oracle_detail {

using Series = std::vector<Rational>;  // coefficients of t^0 .. t^(N)

inline Series multiply(const Series& a, const Series& b, std::size_t len) {
    Series out(len, Rational(0));
    for (std::size_t i = 0; i < a.size() && i < len; ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size() && i + j < len; ++j) out[i + j] += a[i] * b[j];
    }
    return out;
}

/// 1/d as a power series; d[0] must be nonzero.
inline Series invert(const Series& d, std::size_t len) {
    Series inv(len, Rational(0));
    inv[0] = 1 / d[0];
    for (std::size_t k = 1; k < len; ++k) {
        Rational acc = 0;
        for (std::size_t j = 1; j <= k && j < d.size(); ++j) acc += d[j] * inv[k - j];
        inv[k] = -acc / d[0];
    }
    return inv;
}

}  // namespace oracle_detail

/// Laurent coefficient of v^0 of e after specializing all other variables to `point`.
/// Throws PoleError when some non-pure form has zero v-free part at the point.
inline Rational ct_oracle_specialized(const Expr& e, VarId v, const Point& point) {
    using namespace oracle_detail;
    Rational total = 0;
    for (const auto& t : e.terms()) {
        // t^shift * coeff * prod (alpha + beta t)^exp
        std::int64_t shift = 0;
        Rational scalar = t.coeff;
        std::vector<std::pair<Rational, Rational>> numer;  // (alpha, beta), repeated exp times
        std::vector<std::pair<Rational, Rational>> denom;
        for (const auto& f : t.factors) {
            Rational alpha(f.form.constant());
            Rational beta = 0;
            bool others = false;
            for (const auto& [index, c] : f.form.coeffs()) {
                if (index == v.index) {
                    beta = Rational(c);
                    continue;
                }
                others = true;
                auto it = point.find(VarId{index});
                if (it == point.end()) throw PreconditionError("oracle point lacks " + to_string(VarId{index}));
                alpha += c * it->second;
            }
            if (alpha == 0) {
                if (beta == 0 || others) {
                    throw PoleError("form " + to_string(f.form) + " has vanishing v-free part at the point");
                }
                // pure multiple of t
                shift += f.exp;
                scalar *= ctid::pow(beta, f.exp);
                continue;
            }
            if (beta == 0) {
                scalar *= ctid::pow(alpha, f.exp);
                continue;
            }
            auto& bucket = f.exp > 0 ? numer : denom;
            for (std::int64_t k = 0; k < (f.exp > 0 ? f.exp : -f.exp); ++k) bucket.emplace_back(alpha, beta);
        }
        if (shift > 0) continue;
        const auto want = static_cast<std::size_t>(-shift);
        const std::size_t len = want + 1;
        Series num{Rational(1)};
        for (const auto& [alpha, beta] : numer) num = multiply(num, Series{alpha, beta}, len);
        Series den{Rational(1)};
        for (const auto& [alpha, beta] : denom) den = multiply(den, Series{alpha, beta}, len);
        Series series = multiply(num, invert(den, len), len);
        total += scalar * series[want];
    }
    return total;
}

/// Draws points with small random rational coordinates for `vars`.
class PointSampler {
public:
    explicit PointSampler(std::uint64_t seed) : rng_(seed) {}

    Point sample(const std::set<VarId>& vars) {
        std::uniform_int_distribution<int> num(-9, 9);
        std::uniform_int_distribution<int> den(1, 7);
        Point p;
        for (VarId v : vars) p[v] = make_rational(num(rng_), den(rng_));
        return p;
    }

private:
    std::mt19937_64 rng_;
};

/// Compares eval_at(after, p) with the oracle on `before` at `points` random
/// pole-free points; throws OracleMismatch on disagreement.
inline void cross_check_step(const Expr& before, VarId v, const Expr& after, PointSampler& sampler,
                             int points = 3, int max_attempts = 200) {
    std::set<VarId> vars = before.variables();
    vars.erase(v);
    int done = 0;
    for (int attempt = 0; attempt < max_attempts && done < points; ++attempt) {
        Point p = sampler.sample(vars);
        Rational expected;
        Rational actual;
        try {
            expected = ct_oracle_specialized(before, v, p);
            actual = eval_at(after, p);
        } catch (const PoleError&) {
            continue;
        }
        if (expected != actual) {
            throw OracleMismatch("CT in " + to_string(v) + ": engine gives " + to_string(actual) +
                                 ", oracle gives " + to_string(expected));
        }
        ++done;
    }
    if (done < points) throw ContractError("oracle could not find pole-free sample points");
}

}  // namespace ctid
