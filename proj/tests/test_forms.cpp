#include "helpers.hpp"

#include <doctest.h>

using namespace prolong;
using testing_support::Chart;

TEST_CASE("wedge antisymmetry") {
    Chart c;
    CHECK(c.f("dx^dy") == -c.f("dy^dx"));
    CHECK(c.f("dx^dx").is_zero());
    CHECK(c.f("dx^dy").str() == "dx^dy");
}

TEST_CASE("theta1 component") {
    Chart c;
    Form th = c.f("(d S1 - P1*dx) ^ dy ^ dt");
    CHECK(th.coefficient({c.a("y"), c.a("t"), c.a("S1")}) == Expr(1));
    CHECK(th.coefficient({c.a("x"), c.a("y"), c.a("t")}) == -c.e("P1"));
    Value v = parse_value("(dS - P*dx) ^ dy ^ dt", c.ctx);
    CHECK(v.vec);
    CHECK(v.c[0].form == th);
}

TEST_CASE("exterior derivative examples") {
    Chart c;
    auto ch = chart_of(*c.tab);
    CHECK(exterior_derivative(c.f("S1*dx"), ch) == c.f("dS1^dx"));
    Form g1 = c.f("(dphi - alpha*dx)^dy^dt");
    CHECK(exterior_derivative(g1, ch) == c.f("-dalpha^dx^dy^dt"));
    Form dh = exterior_derivative(c.f("H"), ch);
    CHECK(dh == c.f("H_d{S1}*dS1 + H_d{S2}*dS2 + H_d{S3}*dS3"));
    CHECK(c.f("d(S1*P2)") == c.f("P2*dS1 + S1*dP2"));
}

TEST_CASE("form printing round trip") {
    Chart c;
    CHECK_THROWS(c.f("dx^dS2 + dy^dt^dS3"));
    Form g = c.f("(S1 - 2*P1)*dx^dS2");
    CHECK(c.f(g.str()) == g);
}
