#include "doctest.h"

#include "prolongate/jet.hpp"

using namespace prolong;

TEST_CASE("raw pullback of dS1^dy") {
    auto p = load_problem("ishimori-compact");
    auto& T = *p.table;
    Form f = wedge(Form::covector(T.at("S1")), Form::covector(T.at("y")));
    Form pb = pullback_raw(f, T, p.independents);
    CHECK(pb.str() == parse_form("S1_x*dx^dy - S1_t*dy^dt", p.ctx).str());
}

TEST_CASE("contact generators pull back to zero") {
    auto p = load_problem("ishimori-compact");
    auto jet = build_jet(p, false);
    for (auto n : {"theta1_1", "theta1_3", "theta2_2", "gamma1", "gamma2"})
        CHECK(pullback_on_solutions(p.generator(n).form, jet, *p.table, p.ring).is_zero());
    for (auto n : {"theta3_1", "theta3_2", "theta3_3", "gamma3"})
        CHECK(pullback_on_solutions(p.generator(n).form, jet, *p.table, p.ring).is_zero());
    CHECK(jet.rules.size() == 12);
}

TEST_CASE("pullback residuals match the field equations") {
    for (auto name : {"ishimori-compact", "ishimori-noncompact", "ishimori-symbolic"}) {
        auto p = load_problem(name);
        auto jet = build_jet(p, false);
        auto recs = pullback_equivalence(p, jet);
        CHECK(recs.size() == 14);
        for (auto& r : recs) {
            INFO(name << " " << r.generator << ": " << r.residual.str() << " vs " << r.expected.str());
            CHECK(r.pass);
        }
    }
}

TEST_CASE("pullback is an algebra map") {
    auto p = load_problem("ishimori-compact");
    auto jet = build_jet(p, false);
    auto& T = *p.table;
    Form a = parse_form("S1*dP2 + alpha*dS3", p.ctx), b = parse_form("Q1*dx + mu*dphi", p.ctx);
    auto pb = [&](const Form& f) { return pullback_on_solutions(f, jet, T, p.ring); };
    CHECK(pb(wedge(a, b)) == pb(wedge(pb(a), pb(b))));
}

TEST_CASE("unit ratio") {
    auto p = load_problem("ishimori-symbolic");
    Expr a = parse_expr("k2*eps2*S1 - k2*P2", p.ctx), b = parse_expr("eps2*S1 - P2", p.ctx);
    auto u = unit_ratio(a, b);
    REQUIRE(u);
    CHECK(u->str() == "k2");
    CHECK_FALSE(unit_ratio(a, parse_expr("S1", p.ctx)));
}
