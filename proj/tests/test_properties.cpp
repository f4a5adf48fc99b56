#include "laws.hpp"

#include <doctest.h>

TEST_CASE("d of d vanishes") { CHECK(laws::dd() == 0); }
TEST_CASE("graded Leibniz rule") { CHECK(laws::leibniz() == 0); }
TEST_CASE("wedge is graded commutative and associative") { CHECK(laws::graded_commutative() == 0); }
TEST_CASE("Jacobi identity in the free Lie algebra") { CHECK(laws::jacobi_free() == 0); }
TEST_CASE("Jacobi identity in sl2") { CHECK(laws::jacobi_target(prolong::TargetKind::sl2) == 0); }
TEST_CASE("Jacobi identity in the loop algebra") { CHECK(laws::jacobi_target(prolong::TargetKind::loop) == 0); }
TEST_CASE("morphisms preserve brackets") {
    CHECK(laws::morphism("sl2") == 0);
    CHECK(laws::morphism("loop") == 0);
}

// the checks must be able to fail
TEST_CASE("law checks detect a broken identity") {
    using namespace prolong;
    testing_support::Chart c;
    laws::Gen g(c, 3);
    int hits = 0;
    for (int i = 0; i < 50; ++i) {
        Form a = g.form(1), b = g.form(1);
        hits += wedge(a, b) == wedge(b, a) && !wedge(a, b).is_zero();
    }
    CHECK(hits == 0);
}
