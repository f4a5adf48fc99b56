#include "helpers.hpp"

#include "prolongate/oracle.hpp"
#include "prolongate/prolongation.hpp"

#include <doctest.h>

using namespace prolong;

TEST_CASE("SplitMix64 reference stream") {
    SplitMix64 r(1234567);
    CHECK(r.next() == 6457827717110365317ull);
    CHECK(r.next() == 3203168211198807973ull);
    CHECK(r.next() == 9817491932198370423ull);
    SplitMix64 a(7), b(7);
    for (int i = 0; i < 100; ++i) {
        double u = a.uniform();
        CHECK(u == b.uniform());
        CHECK(u >= -1.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("trivial zero tests") {
    auto p = load_problem("ishimori-compact");
    Oracle o(p, {});
    auto zero = o.test("0", Expr());
    CHECK(zero.pass);
    CHECK(zero.n == 100);
    CHECK(zero.max_abs == 0.0);
    auto s1 = o.test("S1", parse_expr("S1", p.ctx));
    CHECK_FALSE(s1.pass);
    CHECK(s1.witness.find("point 0") == 0);
}

TEST_CASE("points respect the constraint set") {
    for (auto name : {"ishimori-compact", "ishimori-noncompact", "ishimori-symbolic"}) {
        auto p = load_problem(name);
        OracleOptions opt;
        opt.seed = 5;
        Oracle o(p, opt);
        // raw polynomials, no quotient normalization
        Expr sphere = parse_expr("S1^2 + S2^2", p.ctx) * parse_expr("k2", p.ctx) + parse_expr("S3^2 - 1", p.ctx);
        CHECK(o.test("sphere", sphere).pass);
        for (auto& rel : p.ring.relations) CHECK(o.test("relation", rel.poly).pass);
        auto a = o.point(17), b = o.point(17);
        CHECK(o.describe(a) == o.describe(b));
        CHECK(o.describe(a) != o.describe(o.point(18)));
    }
}

TEST_CASE("symbolic zero is numerically zero") {
    auto p = load_problem("ishimori-compact");
    Oracle o(p, {});
    Expr a = parse_expr("S3^2", p.ctx), b = p.ring.normalize(a);
    CHECK(o.test("rewrite", a - b).pass);
    // the raw difference is not a structural zero
    CHECK_FALSE((a - b).is_zero());
    LieExpr j = parse_lie("[X1,[X2,X3]] + [X2,[X3,X1]]", p.ctx), k = parse_lie("[X3,[X2,X1]]", p.ctx);
    CHECK(o.test("jacobi", j - k).pass);
    CHECK_FALSE(o.test("bracket", parse_lie("[X1,X2]", p.ctx)).pass);
}

TEST_CASE("numeric realizations") {
    auto p = load_problem("ishimori-noncompact");
    Oracle o(p, {});
    auto pt = o.point(0);
    for (auto key : {"sl2", "loop"}) {
        Morphism m = load_morphism(p.golden.at(key), p.ctx);
        auto img = numeric_images(m, o, pt, cplx(1.2, 0.3));
        for (auto& sc : m.checks) {
            double s = 0;
            CMatrix v = eval_in(sc.source, img, o, pt, s) - numeric_element(sc.expected, m.algebra, o, pt, cplx(1.2, 0.3));
            CHECK(v.cwiseAbs().maxCoeff() < 1e-12);
        }
    }
    Morphism bad = load_morphism(p.golden.at("loop"), p.ctx);
    bad.images[p.table->at("X2")] = bad.images[p.table->at("X1")];
    auto img = numeric_images(bad, o, pt, cplx(1.2, 0.3));
    double s = 0;
    CMatrix v = eval_in(bad.checks[0].source, img, o, pt, s) - numeric_element(bad.checks[0].expected, bad.algebra, o, pt, cplx(1.2, 0.3));
    CHECK(v.cwiseAbs().maxCoeff() > 1e-3);
}
