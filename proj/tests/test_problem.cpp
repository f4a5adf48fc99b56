#include "doctest.h"

#include "prolongate/problem.hpp"

using namespace prolong;

TEST_CASE("bundled problems load") {
    auto c = load_problem("ishimori-compact");
    CHECK(c.name == "ishimori-compact");
    CHECK(c.ideal.gens.size() == 14);
    CHECK(c.table->value("k2"));
    CHECK(c.pivots.size() == 12);
    CHECK(c.ring.quotient);
    auto n = load_problem("ishimori-noncompact");
    CHECK(n.table->value("k2")->re == -1);
    auto s = load_problem("ishimori-symbolic");
    CHECK_FALSE(s.table->value("k2"));
    for (auto& g : c.ideal.gens) CHECK(g.form.degree() == 3);
}

TEST_CASE("malformed generator line names the line") {
    std::string text = "[symbols]\nindependent: x y\nfibre: u\n[generators]\ng := du ^ dx\nh := du ^^ dx\n";
    try {
        load_problem_text(text, "bad.problem", ".");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).rfind("bad.problem:6:", 0) == 0);
    }
    CHECK_THROWS_AS(load_problem_text("[symbols]\nindependent: x\nfibre: u\n[generators]\ng := du\n", "p", "."), ParseError);
}

TEST_CASE("ishimori ideal is closed for both signs") {
    for (auto name : {"ishimori-compact", "ishimori-noncompact"}) {
        auto p = load_problem(name);
        auto recs = closedness_check(p.ideal, p.ring);
        REQUIRE(recs.size() == 14);
        for (auto& r : recs) {
            INFO(name << " " << r.generator << " " << r.reduction.remainder.str());
            CHECK(r.reduction.verdict == Verdict::member);
        }
    }
}
