#include <catch2/catch_amalgamated.hpp>

#include "ctid/ct.hpp"
#include "ctid/oracle.hpp"
#include "ctid/parse.hpp"
#include "support.hpp"

using namespace ctid;
using ctid::testing::ExprGen;

namespace {
const VarId x1{1}, x2{2}, x3{3};
HalfInt half(const char* s) { return HalfInt::parse(s); }
}  // namespace

TEST_CASE("ct_once examples", "[ct]") {
    // sum (k+1) x^k at k = 1
    CHECK(ct_once(Expr::power(x(1), -1) * Expr::power(1 - x(1), -2), x1) == Expr::constant(2));
    CHECK(ct_once(Expr::power(x(1), 2) * Expr::power(1 - x(1), -1), x1).is_zero());
    CHECK(ct_once(Expr::power(x(1) - x(2), -1), x1) == Rational(-1) * Expr::power(x(2), -1));
}

TEST_CASE("ct_iterated examples", "[ct]") {
    auto mm1 = build_mm(1);
    CHECK(ct_iterated(mm1.expr, mm1.order) == PiScalar(2));
    auto mm2 = build_mm(2);
    CHECK(ct_iterated(mm2.expr, mm2.order) == PiScalar(32));
    for (const char* c : {"1/2", "1", "5/2"}) {
        auto m = build_morris(1, 2, 1, half(c));
        CHECK(ct_iterated(m.expr, m.order) == PiScalar(2));
    }
}

TEST_CASE("ct_iterated needs a complete order", "[ct]") {
    auto mm2 = build_mm(2);
    CHECK_THROWS_AS(ct_iterated(mm2.expr, CtOrder({x1})), ContractError);
    CHECK_THROWS_AS(CtOrder({x1, x1}), PreconditionError);
}

TEST_CASE("CT order is honoured, not normalized", "[ct]") {
    // x1 first expands (x2 - x1)^-1 in x1/x2; x2 first expands it in x2/x1.
    Expr e = Expr::power(x(2) - x(1), -1) * Expr::power(1 - x(1), -1) * Expr::power(1 - x(2), -1);
    PiScalar forward = ct_iterated(e, CtOrder({x1, x2}));
    PiScalar reverse = ct_iterated(e, CtOrder({x2, x1}));
    CHECK(forward == PiScalar(1));
    CHECK(reverse == PiScalar(-1));
    CHECK_FALSE(forward == reverse);
}

TEST_CASE("build_mm", "[ct]") {
    CHECK(build_mm(1).expr == parse_integrand("x1^-1 * (1-x1)^-2"));
    CHECK(build_mm(1).order == CtOrder({x1}));
    CHECK(build_mm(2).expr ==
          parse_integrand("x1^-1 (1-x1)^-2 x2^-1 (1-x2)^-2 (x2-x1)^-1 (1-x2-x1)^-1"));
    CHECK(build_mm(2).order == CtOrder({x1, x2}));
    for (std::uint32_t n = 1; n <= 4; ++n) CHECK(build_mm(n).expr == build_fact(n, 2, half("1/2")).expr);
}

TEST_CASE("build_fact", "[ct]") {
    CHECK(build_fact(1, 3, half("1/2")).expr == parse_integrand("x1^-2 (1-x1)^-3"));
    CHECK(build_fact(2, 1, half("1/2")).expr ==
          parse_integrand("(1-x1)^-1 (1-x2)^-1 (x2-x1)^-1 (1-x2-x1)^-1"));
    CHECK(build_fact(2, 2, half("1")).expr ==
          parse_integrand("x1^-1 x2^-1 (1-x1)^-2 (1-x2)^-2 (x2-x1)^-2 (1-x2-x1)^-2"));
    CHECK_THROWS_AS(build_fact(2, 0, half("1/2")), PreconditionError);
    CHECK_THROWS_AS(build_fact(2, 2, half("0")), PreconditionError);
}

TEST_CASE("build_morris", "[ct]") {
    CHECK(build_morris(1, 2, 1, half("1/2")).expr == parse_integrand("x1^-1 (1-x1)^-2"));
    CHECK(build_morris(2, 1, 0, half("1")).expr == parse_integrand("(1-x1)^-1 (1-x2)^-1 (x2-x1)^-2"));
    CHECK(build_morris(2, 1, 1, half("1/2")).expr ==
          parse_integrand("(1-x1)^-1 (1-x2)^-1 x1^-1 x2^-1 (x2-x1)^-1"));
    CHECK_THROWS_AS(build_morris(2, 1, 1, half("-1/2")), PreconditionError);
}

TEST_CASE("oracle examples", "[ct][oracle]") {
    CHECK(ct_oracle_specialized(Expr::power(x(1) - x(2), -1), x1, {{x2, Rational(3)}}) == make_rational(-1, 3));
    CHECK(ct_oracle_specialized(Expr::power(x(1), -1) * Expr::power(1 - x(1), -2), x1, {}) == 2);
    CHECK_THROWS_AS(ct_oracle_specialized(Expr::power(1 - x(1) - x(2), -1), x1, {{x2, Rational(1)}}), PoleError);
}

TEST_CASE("ct_once is linear", "[ct][property]") {
    ExprGen gen(606);
    for (int i = 0; i < 60; ++i) {
        Expr a = gen.expr(3), b = gen.expr(3);
        Rational alpha = gen.rational(), beta = gen.rational();
        VarId v{static_cast<std::uint32_t>(gen.uniform(1, 3))};
        CHECK(ct_once(alpha * a + beta * b, v) == alpha * ct_once(a, v) + beta * ct_once(b, v));
    }
}

TEST_CASE("ct_once vanishes on positive pure powers times analytic products", "[ct][property]") {
    ExprGen gen(707);
    for (int i = 0; i < 80; ++i) {
        VarId v{static_cast<std::uint32_t>(gen.uniform(1, 3))};
        Expr analytic = gen.term(3, v);
        int k = gen.uniform(1, 4);
        CHECK(ct_once(Expr::power(x(v.index), k) * analytic, v).is_zero());
    }
}

TEST_CASE("ct_once leaves expressions without the variable alone", "[ct][property]") {
    ExprGen gen(808);
    for (int i = 0; i < 60; ++i) {
        Expr e = gen.expr(2);  // x1, x2 only
        CHECK(ct_once(e, x3) == e);
    }
}

TEST_CASE("ct_once agrees with the specialization oracle", "[ct][oracle][property]") {
    ExprGen gen(909);
    int expressions = 0;
    for (int i = 0; i < 150; ++i) {
        Expr e = gen.expr(3);
        VarId v{static_cast<std::uint32_t>(gen.uniform(1, 3))};
        Expr ct = ct_once(e, v);
        int points = 0;
        for (int attempt = 0; attempt < 50 && points < 3; ++attempt) {
            Point p = gen.point(3);
            p.erase(v);
            try {
                Rational expected = ct_oracle_specialized(e, v, p);
                CHECK(eval_at(ct, p) == expected);
                ++points;
            } catch (const PoleError&) {
            }
        }
        if (points == 3) ++expressions;
    }
    CHECK(expressions >= 100);
}

TEST_CASE("oracle hook passes on the built-in families", "[ct][oracle]") {
    PointSampler sampler(1);
    CtStepHook hook = [&](const Expr& before, VarId v, const Expr& after) {
        cross_check_step(before, v, after, sampler);
    };
    auto mm3 = build_mm(3);
    CHECK(ct_iterated(mm3.expr, mm3.order, nullptr, hook) == PiScalar(5120));
    auto f = build_fact(2, 2, half("3/2"));
    CHECK_NOTHROW(ct_iterated(f.expr, f.order, nullptr, hook));
}

TEST_CASE("peak term statistics", "[ct]") {
    auto mm3 = build_mm(3);
    CtStats stats;
    ct_iterated(mm3.expr, mm3.order, &stats);
    CHECK(stats.peak_terms >= 1);
}
