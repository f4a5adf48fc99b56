#include "helpers.hpp"

#include <doctest.h>

using namespace prolong;
using testing_support::Chart;

TEST_CASE("zero and commutativity") {
    Chart c;
    CHECK(c.e("0").is_zero());
    CHECK(c.e("S1*P2 - P2*S1").is_zero());
    CHECK(c.e("0").str() == "0");
}

TEST_CASE("parameter involution") {
    Chart c;
    CHECK(c.e("k2*k2*S3") == c.e("S3"));
    CHECK(c.e("kappa*kappa") == c.e("k2"));
    CHECK(c.e("kappa^4") == Expr(1));
    CHECK(c.e("eps2^3") == c.e("eps2"));
}

TEST_CASE("binomial identity") {
    Chart c;
    CHECK(c.e("(S1+S2)^2 - S1^2 - 2*S1*S2 - S2^2").is_zero());
}

TEST_CASE("quotient mode") {
    Chart c;
    Ring r;
    r.quotient = true;
    r.rewrites.push_back({c.a("S3"), c.e("1 - k2*S1^2 - k2*S2^2")});
    CHECK(r.normalize(c.e("k2*S3^2 + S1^2 + S2^2")) == c.e("k2"));
    Expr e = c.e("S3^5*P1 + S3^3");
    CHECK(r.normalize(r.normalize(e)) == r.normalize(e));
    Vec3 S{c.e("S1"), c.e("S2"), c.e("S3")};
    CHECK(r.normalize(metric_dot(c.ctx.sigma, S, S) - c.e("k2")).is_zero());
}

TEST_CASE("print parse round trip") {
    Chart c;
    for (auto s : {"S1^2*P1 - 1/2*S2", "3*i*S1 + 2*S1 - i", "-k2*zeta*S3^3 + 7/3", "H_d{S1}_d{S2}*S1 + H"}) {
        Expr e = c.e(s);
        CHECK(c.e(e.str()) == e);
    }
    CHECK(c.e("(2 + 3*i)*S1").str() == "2*S1 + 3*i*S1");
}

TEST_CASE("parse errors") {
    Chart c;
    CHECK_THROWS_AS(c.e("S1 + "), ParseError);
    CHECK_THROWS_WITH_AS(c.e("S1 + foo"), doctest::Contains("foo"), ParseError);
    CHECK_THROWS_WITH_AS(c.e("S1 $ 2"), doctest::Contains("column 4"), ParseError);
}

TEST_CASE("differentiate") {
    Chart c;
    CHECK(differentiate(c.e("S1^2*S2"), c.a("S1")) == c.e("2*S1*S2"));
    CHECK(differentiate(c.e("H"), c.a("phi")).is_zero());
    CHECK(differentiate(differentiate(c.e("H"), c.a("S1")), c.a("S2")) ==
          differentiate(differentiate(c.e("H"), c.a("S2")), c.a("S1")));
    CHECK(differentiate(c.e("H^2"), c.a("S3")) == c.e("2*H*H_d{S3}"));
}

TEST_CASE("substitute") {
    Chart c;
    Bindings b;
    b.symbols[c.a("S1")] = Expr();
    CHECK(substitute(c.e("S1*P1 + S2"), b) == c.e("S2"));
    Bindings h;
    h.functions[c.tab->find_function("H")] = c.e("S1*P1 + S2^2*S3");
    CHECK(substitute(c.e("H_d{S1}"), h) == c.e("P1"));
    CHECK(substitute(c.e("H_d{S2}_d{S3}"), h) == c.e("2*S2"));
    Bindings cyc;
    cyc.symbols[c.a("S1")] = c.e("S2");
    cyc.symbols[c.a("S2")] = c.e("S1");
    CHECK_THROWS_WITH(substitute_fixpoint(c.e("S1"), cyc), doctest::Contains("cyclic"));
    CHECK(substitute(c.e("S1"), cyc) == c.e("S2"));
}

TEST_CASE("vectors") {
    Chart c;
    Vec3 e1{Expr(1), Expr(), Expr()}, e2{Expr(), Expr(1), Expr()}, e3{Expr(), Expr(), Expr(1)};
    CHECK(dot(e1, e2).is_zero());
    CHECK(cross(e1, e2) == e3);
    Vec3 S{c.e("S1"), c.e("S2"), c.e("S3")}, P{c.e("P1"), c.e("P2"), c.e("P3")};
    CHECK(metric_dot(c.ctx.sigma, S, S) == c.e("S1^2 + S2^2 + k2*S3^2"));
    CHECK(dot(S, cross(S, P)).is_zero());
    auto z = cross(S, S);
    CHECK((z[0].is_zero() && z[1].is_zero() && z[2].is_zero()));
}

TEST_CASE("units") {
    Chart c;
    CHECK(is_unit(c.e("kappa")));
    CHECK(unit_inverse(c.e("kappa")) * c.e("kappa") == Expr(1));
    CHECK(is_unit(c.e("-2*i*eps2")));
    CHECK(!is_unit(c.e("zeta")));
    CHECK(!is_unit(c.e("S1")));
}
