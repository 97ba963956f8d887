#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hamsec/parse.hpp"

using namespace hamsec;

namespace {
const Chart full2(2, Ambient::Full);
}

TEST_CASE("basic terms") {
    Jet j = parse_polynomial("x^2 + y + p1", full2, 4);
    Mono x2;
    x2[full2.x_index()] = 2;
    CHECK(j.coeff(x2) == 1);
    Mono y;
    y[full2.y_index()] = 1;
    CHECK(j.coeff(y) == 1);
    Mono p1;
    p1[full2.p_index(1)] = 1;
    CHECK(j.coeff(p1) == 1);
    CHECK(j.coeffs().size() == 3);
}

TEST_CASE("rational coefficients and products") {
    Jet j = parse_polynomial("3/2*q1*p2 - q1^3", full2, 4);
    CHECK(j.coeffs().size() == 2);
    Mono m;
    m[full2.q_index(1)] = 1;
    m[full2.p_index(2)] = 1;
    CHECK(j.coeff(m) == Rat(3, 2));
    Mono q3;
    q3[full2.q_index(1)] = 3;
    CHECK(j.coeff(q3) == -1);
}

TEST_CASE("whitespace insensitivity and cancellation") {
    CHECK(parse_polynomial("  x\n+ y ", full2, 3) == parse_polynomial("x+y", full2, 3));
    CHECK(parse_polynomial("x - x", full2, 3).is_zero());
    CHECK(parse_polynomial("2/4", full2, 3).eval0() == Rat(1, 2));
}

TEST_CASE("parentheses and unary minus") {
    CHECK(parse_polynomial("-(x+y)^2", full2, 4) ==
          parse_polynomial("-x^2 - 2*x*y - y^2", full2, 4));
}

TEST_CASE("errors carry position") {
    try {
        parse_polynomial("x + zz", full2, 3);
        FAIL("expected parse_error");
    } catch (const parse_error& e) {
        CHECK(e.line == 1);
        CHECK(e.col == 5);
        CHECK(std::string(e.what()).find("zz") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_polynomial("q3", Chart(2, Ambient::Full), 3), parse_error);
    CHECK_THROWS_AS(parse_polynomial("x +", full2, 3), parse_error);
    CHECK_THROWS_AS(parse_polynomial("1/0", full2, 3), parse_error);
    CHECK_THROWS_AS(parse_polynomial("", full2, 3), parse_error);
    CHECK_THROWS_AS(parse_polynomial("x^5", full2, 3), parse_error);
    try {
        parse_polynomial("x +\n* y", full2, 3);
        FAIL("expected parse_error");
    } catch (const parse_error& e) {
        CHECK(e.line == 2);
        CHECK(e.col == 1);
    }
}

TEST_CASE("chart-dependent variables") {
    Chart red(2, Ambient::Reduced);
    CHECK_THROWS_AS(parse_polynomial("x", red, 3), parse_error);
    CHECK(parse_polynomial("p2*q2", red, 3).coeffs().size() == 1);
}
