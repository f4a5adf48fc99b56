#include "helpers.hpp"

#include <doctest.h>

using namespace prolong;
using testing_support::Chart;

TEST_CASE("basic brackets") {
    Chart c;
    CHECK(c.l("[X1,X1]").is_zero());
    CHECK(c.l("[[X1,X2],X3] + [[X2,X3],X1] + [[X3,X1],X2]").is_zero());
    CHECK(c.l("[[X1,X2],X1]") == -c.l("[X1,[X1,X2]]"));
    CHECK(c.l("[[X1,X2],X1]").str() == "-[X1,[X1,X2]]");
    CHECK(c.l("[X2,X1]").str() == "-[X1,X2]");
}

TEST_CASE("Lyndon words and Witt counts") {
    Chart c;
    std::vector<Atom> gens;
    for (auto n : {"X1", "X2", "X3", "Y", "Z", "K"}) gens.push_back(c.a(n));
    CHECK(lyndon_words(gens, 1).size() == 6);
    CHECK(lyndon_words(gens, 2).size() == 15);
    CHECK(lyndon_words(gens, 3).size() == 70);
    for (auto& w : lyndon_words(gens, 3)) CHECK(is_lyndon(w));
    Word w{c.a("X1"), c.a("X1"), c.a("X2")};
    CHECK(bracketing_str(w) == "[X1,[X1,X2]]");
}

TEST_CASE("valued brackets") {
    Chart c;
    CHECK(c.l("[S1*X1, S2*X2]") == c.l("S1*S2*[X1,X2]"));
    CHECK(c.l("[dot(X,S) + Y, dot(X,S) + Y]").is_zero());
    CHECK(c.l("[X1,X2]*(S1 + S2) - S1*[X1,X2]") == c.l("S2*[X1,X2]"));
}

TEST_CASE("Lie substitution and derivatives") {
    Chart c;
    LieBindings b;
    b.functions[c.tab->find_function("Hl")] = c.l("dot(X, S) + Y");
    CHECK(substitute(c.l("Hl_d{S1}"), b) == c.l("X1"));
    CHECK(substitute(c.l("[Hl, Hl_d{S2}]"), b) == c.l("S1*[X1,X2] - S3*[X2,X3] + [Y,X2]"));
    CHECK(differentiate(c.l("S1*[Hl, X1]"), c.a("S1")) == c.l("[Hl, X1] + S1*[Hl_d{S1}, X1]"));
}

TEST_CASE("unit scalars") {
    Chart c;
    CHECK(equal_up_to_unit(c.l("2*k2*[X1,X2] + [Y,X3]"), c.l("[X1,X2] + 1/2*k2*[Y,X3]")));
    CHECK(!equal_up_to_unit(c.l("[X1,X2] + [Y,X3]"), c.l("[X1,X2] - [Y,X3]")));
    CHECK(make_monic(c.l("-i*[X1,X2] + [X3,Y]")) == c.l("[X1,X2] + i*[X3,Y]"));
}
