#include "helpers.hpp"

#include "prolongate/targets.hpp"

#include <doctest.h>

using namespace prolong;

namespace {

CollectResult reduced(const ProblemDefinition& p) {
    return collect_relations(substitute_fixpoint(p.closure[0].value, p.lemma).normalized(p.ring), p.ring);
}

}  // namespace

TEST_CASE("collection on a small residual") {
    testing_support::Chart c;
    Ring r;
    // S1*[X1,X2] + S2*[X1,X3] with no constraints: two independent relations
    auto cr = collect_relations(c.l("S1*[X1,X2] + S2*[X1,X3] + 2*S1*[X1,X2]"), r);
    REQUIRE(cr.relations.items.size() == 2);
    CHECK(cr.stable);
    CHECK(equal_up_to_unit(cr.relations.items[0].value, c.l("[X1,X2]")) != equal_up_to_unit(cr.relations.items[1].value, c.l("[X1,X2]")));
    CHECK(collect_relations(LieExpr(), r).relations.items.empty());
}

TEST_CASE("compact relations against the reference list") {
    auto p = load_problem("ishimori-compact");
    auto cr = reduced(p);
    CHECK(cr.stable);
    CHECK(cr.relations.items.size() == 12);
    auto want = load_relations(p.golden.at("relations"), p.ctx);
    CHECK(want.items.size() == 9);
    int unit = 0;
    for (auto& m : match_relations(want, cr.relations)) unit += !m.have.empty();
    CHECK(unit == 7);
    auto span = compare_spans(cr.relations, want);
    // every reference relation lies in the collected span; three collected ones do not lie in the reference span
    CHECK(span.outside_have.empty());
    CHECK(span.outside_want.size() == 3);
    CHECK(span.rank_union == span.rank_have);
}

TEST_CASE("realizations kill the collected relations") {
    for (auto name : {"ishimori-compact", "ishimori-noncompact", "ishimori-symbolic"}) {
        CAPTURE(name);
        auto p = load_problem(name);
        auto cr = reduced(p);
        for (auto key : {"sl2", "loop"}) {
            Morphism m = load_morphism(p.golden.at(key), p.ctx);
            CHECK(check_relations(cr.relations, m).pass);
            for (auto& sc : m.checks) {
                TargetElement d = apply_morphism(sc.source, m);
                for (auto& [k, v] : sc.expected) add_to(d, k, -v);
                CHECK(is_zero(d));
            }
        }
        Morphism bad = load_morphism(p.golden.at("loop").substr(0, p.golden.at("loop").size() - 10) + "loop-sabotage.morph", p.ctx);
        CHECK_FALSE(check_relations(cr.relations, bad).pass);
    }
}

TEST_CASE("loop spot identities") {
    auto p = load_problem("ishimori-compact");
    Morphism m = load_morphism(p.golden.at("loop"), p.ctx);
    CHECK(m.algebra.str(apply_morphism(parse_lie("[X1,X2]", p.ctx), m)) == "i*T(3,2)");
    auto q = load_problem("ishimori-noncompact");
    Morphism mq = load_morphism(q.golden.at("loop"), q.ctx);
    CHECK(mq.algebra.str(apply_morphism(parse_lie("[X1,X2]", q.ctx), mq)) == "-i*T(3,2)");
}

TEST_CASE("morphism file errors") {
    auto p = load_problem("ishimori-compact");
    CHECK_THROWS_WITH(parse_morphism("target: sl2\nX1 -> X1_sl2\n", p.ctx, "m"), doctest::Contains("no image for generator"));
    CHECK_THROWS_WITH(parse_morphism("X1 -> T(1,1)\n", p.ctx, "m"), doctest::Contains("missing 'target:'"));
    CHECK_THROWS_WITH(parse_morphism("target: loop\nX1 => T(1,1)\n", p.ctx, "m"), doctest::Contains("m:2:"));
}
