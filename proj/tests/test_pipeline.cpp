#include "prolongate/pipeline.hpp"

#include <doctest.h>

using namespace prolong;

TEST_CASE("toy problem fails closure with a certificate of failure") {
    auto r = run("closure-check", "toy-nonclosed", {});
    CHECK_FALSE(r.pass);
    CHECK(r.exit_code() == 1);
    REQUIRE(r.records.size() == 1);
    CHECK(r.records[0]["verdict"] == "fail");
    CHECK(r.records[0].contains("remainder"));
    auto all = run("all", "toy-nonclosed", {});
    CHECK(all.stopped_at == "closure-check");
}

TEST_CASE("usage errors") {
    CHECK_THROWS_AS(run("frobnicate", "ishimori-compact", {}), std::invalid_argument);
    CHECK_THROWS_AS(run("verify-realization", "ishimori-compact", {}), std::invalid_argument);
    CHECK_THROWS_AS(run("closure-check", "no-such-problem", {}), ParseError);
    RunOptions o;
    o.route = "sideways";
    CHECK_THROWS_AS(run("collect-relations", "ishimori-compact", o), std::invalid_argument);
}

TEST_CASE("report layout") {
    RunOptions o;
    o.seed = 9;
    auto r = run("verify-realization loop", "ishimori-compact", o);
    CHECK(r.pass);
    std::string s = r.jsonl(false);
    CHECK(s.rfind("{\"record\":\"header\"", 0) == 0);
    CHECK(s.find("\"seed\":9") != std::string::npos);
    CHECK(s.find("timing_ms") == std::string::npos);
    CHECK(r.jsonl(true).find("timing_ms") != std::string::npos);
    CHECK(s == run("verify-realization loop", "ishimori-compact", o).jsonl(false));
}
