#include <catch2/catch_amalgamated.hpp>

#include "ctid/ct.hpp"
#include "ctid/parse.hpp"

using namespace ctid;

TEST_CASE("parse_integrand examples", "[parse]") {
    CHECK(parse_integrand("x1^-1 * (1-x1)^-2") == build_mm(1).expr);
    CHECK(parse_integrand("(x2-x1)^-1 (1-x2-x1)^-1") ==
          Expr::power(x(2) - x(1), -1) * Expr::power(1 - x(2) - x(1), -1));
    CHECK_THROWS_WITH(parse_integrand("(x1*x2)^-1"), Catch::Matchers::ContainsSubstring("linear form expected"));
}

TEST_CASE("parser grammar details", "[parse]") {
    CHECK(parse_integrand("  x1  ") == Expr::power(x(1), 1));
    CHECK(parse_integrand("(1/2*x1 - 3)^2") == Expr::power(make_rational(1, 2) * x(1) - 3, 2));
    CHECK(parse_integrand("(-x1 + 1)^+3") == Expr::power(1 - x(1), 3));
    CHECK(parse_integrand("3/4 * (x1)^-1") == make_rational(3, 4) * Expr::power(x(1), -1));
    CHECK(parse_integrand("-2") == Expr::constant(-2));
    CHECK(parse_integrand("(2)^3") == Expr::constant(8));
    CHECK(parse_integrand("x1 + -1 * x2") == Expr::power(x(1), 1) - Expr::power(x(2), 1));
    CHECK(parse_order("x1, x3,x2").vars() == std::vector<VarId>{{1}, {3}, {2}});
}

TEST_CASE("parser errors carry positions", "[parse]") {
    try {
        parse_integrand("x1 * (1 - x2");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.position() == 12);
    }
    CHECK_THROWS_AS(parse_integrand(""), ParseError);
    CHECK_THROWS_AS(parse_integrand("x0"), ParseError);
    CHECK_THROWS_AS(parse_integrand("(x1 - x1)^-1"), ParseError);
    CHECK_THROWS_AS(parse_integrand("(x1^2)"), ParseError);
    CHECK_THROWS_AS(parse_integrand("((x1))"), ParseError);
    CHECK_THROWS_AS(parse_integrand("x1 ^ 1.5"), ParseError);
    CHECK_THROWS_AS(parse_integrand("y1"), ParseError);
    CHECK_THROWS_AS(parse_integrand("x1 *"), ParseError);
    CHECK_THROWS_AS(parse_order("x1 x2"), ParseError);
}

TEST_CASE("builder outputs survive render and parse", "[parse][property]") {
    for (std::uint32_t n = 1; n <= 4; ++n) {
        for (const Expr& e : {build_mm(n).expr, build_fact(n, 3, HalfInt::parse("3/2")).expr,
                              build_morris(n, 2, 1, HalfInt::parse("1")).expr}) {
            CHECK(parse_integrand(to_string(e)) == e);
        }
    }
}
