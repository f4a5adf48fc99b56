#pragma once
// Algebra laws over seeded random inputs; all comparisons are structural.
// Each law returns the number of failing cases.

#include "helpers.hpp"

#include "prolongate/oracle.hpp"

namespace laws {

using namespace prolong;
using testing_support::Chart;

constexpr int kCases = 200;

struct Gen {
    const Chart& c;
    SplitMix64 rng;
    std::vector<Expr> pool;
    std::vector<Atom> chart;

    Gen(const Chart& ch, std::uint64_t seed) : c(ch), rng(seed), chart(chart_of(*ch.tab)) {
        for (auto s : {"S1", "S2", "S3", "P1", "Q2", "phi", "alpha", "k2", "kappa", "eps2", "H", "H_d{S2}"}) pool.push_back(c.e(s));
    }

    int pick(int n) { return static_cast<int>(rng.next() % static_cast<std::uint64_t>(n)); }

    Coeff coeff() {
        long re = pick(7) - 3, im = pick(3) - 1;
        if (re == 0 && im == 0) re = 1;
        return Coeff(re, im);
    }

    Expr expr() {
        Expr e;
        for (int t = 0, n = 1 + pick(3); t < n; ++t) {
            Expr m = Expr(coeff());
            for (int k = 0, d = pick(3); k < d; ++k) m *= pool[pick(static_cast<int>(pool.size()))];
            e += m;
        }
        return e;
    }

    Form form(int p) {
        Form f(p);
        for (int t = 0, n = 1 + pick(3); t < n; ++t) {
            Form w = Form::scalar(expr());
            for (int k = 0; k < p; ++k) w = wedge(w, Form::covector(chart[pick(static_cast<int>(chart.size()))]));
            f += w;
        }
        return f;
    }

    LieExpr lie(const std::vector<Atom>& letters, int depth = 2) {
        LieExpr l;
        for (int t = 0, n = 1 + pick(2); t < n; ++t) {
            LieExpr w = LieExpr::letter(letters[pick(static_cast<int>(letters.size()))]);
            for (int k = 0, d = pick(depth + 1); k < d; ++k) {
                LieExpr x = LieExpr::letter(letters[pick(static_cast<int>(letters.size()))]);
                w = rng.coin() ? bracket(w, x) : bracket(x, w);
            }
            l += Expr(coeff()) * w;
        }
        return l;
    }
};

inline TargetElement target(Gen& g, TargetKind k) {
    TargetElement e;
    for (int t = 0, n = 1 + g.pick(3); t < n; ++t) {
        int a = 1 + g.pick(3), grade = k == TargetKind::sl2 ? 0 : g.pick(5) - 2;
        add_to(e, {a, grade}, Expr(g.coeff()) * (g.rng.coin() ? g.pool[g.pick(3)] : Expr(1)));
    }
    return e;
}

inline bool same(const TargetElement& a, const TargetElement& b) {
    TargetElement d = a;
    for (auto& [k, c] : b) add_to(d, k, -c);
    return is_zero(d);
}


inline int dd(int cases = kCases) {
    Chart c;
    Gen g(c, 11);
    int bad = 0;
    for (int i = 0; i < cases; ++i) {
        Form a = g.form(g.pick(3));
        bad += !exterior_derivative(exterior_derivative(a, g.chart), g.chart).is_zero();
    }
    return bad;
}

inline int leibniz(int cases = kCases) {
    Chart c;
    Gen g(c, 12);
    int bad = 0;
    for (int i = 0; i < cases; ++i) {
        int p = g.pick(3);
        Form a = g.form(p), b = g.form(g.pick(2));
        Form lhs = exterior_derivative(wedge(a, b), g.chart);
        Form rhs = wedge(exterior_derivative(a, g.chart), b);
        Form r2 = wedge(a, exterior_derivative(b, g.chart));
        if (p % 2) rhs -= r2;
        else rhs += r2;
        bad += !(lhs == rhs);
    }
    return bad;
}

inline int graded_commutative(int cases = kCases) {
    Chart c;
    Gen g(c, 13);
    int bad = 0;
    for (int i = 0; i < cases; ++i) {
        int p = g.pick(3), q = g.pick(3);
        Form a = g.form(p), b = g.form(q), e = g.form(1);
        Form ba = wedge(b, a);
        bad += !(wedge(a, b) == ((p * q) % 2 ? -ba : ba)) || !(wedge(wedge(a, b), e) == wedge(a, wedge(b, e)));
    }
    return bad;
}

inline int jacobi_free(int cases = kCases) {
    Chart c;
    Gen g(c, 14);
    Fn hl = c.tab->find_function("Hl");
    std::vector<Atom> letters = {c.a("X1"), c.a("X2"), c.a("X3"), c.a("Y"), hl->base(), hl->instance({1, 0, 0})};
    int bad = 0;
    for (int i = 0; i < cases; ++i) {
        LieExpr a = g.lie(letters), b = g.lie(letters), e = g.lie(letters, 1);
        bad += !(bracket(a, bracket(b, e)) + bracket(b, bracket(e, a)) + bracket(e, bracket(a, b))).is_zero() ||
               !(bracket(a, b) + bracket(b, a)).is_zero();
    }
    return bad;
}

inline int jacobi_target(TargetKind kind, int cases = kCases) {
    Chart c;
    Gen g(c, kind == TargetKind::sl2 ? 15 : 17);
    TargetAlgebra alg = kind == TargetKind::sl2 ? make_sl2(c.e("zeta"), c.e("k2")) : make_loop();
    int bad = 0;
    for (int i = 0; i < cases; ++i) {
        auto a = target(g, kind), b = target(g, kind), e = target(g, kind);
        TargetElement j = alg.bracket(a, alg.bracket(b, e));
        for (auto& [k, v] : alg.bracket(b, alg.bracket(e, a))) add_to(j, k, v);
        for (auto& [k, v] : alg.bracket(e, alg.bracket(a, b))) add_to(j, k, v);
        bad += !is_zero(j) || !same(alg.bracket(a, b), scale(Expr(-1), alg.bracket(b, a)));
    }
    return bad;
}

// apply(m, [a,b]) == [apply(m, a), apply(m, b)] for the bundled morphism files
inline int morphism(const std::string& key, int cases = kCases) {
    auto p = load_problem("ishimori-symbolic");
    std::vector<Atom> letters;
    for (auto n : {"X1", "X2", "X3", "Y", "Z", "K"}) letters.push_back(p.table->at(n));
    Chart c;
    Gen g(c, key == "sl2" ? 16 : 18);
    Morphism m = load_morphism(p.golden.at(key), p.ctx);
    int bad = 0;
    auto pick = [&]() {
        LieExpr l;
        for (int t = 0, n = 1 + g.pick(3); t < n; ++t) {
            LieExpr w = LieExpr::letter(letters[g.pick(6)]);
            for (int k = 0, d = g.pick(3); k < d; ++k) w = bracket(w, LieExpr::letter(letters[g.pick(6)]));
            l += Expr(g.coeff()) * w;
        }
        return l;
    };
    for (int i = 0; i < cases; ++i) {
        LieExpr a = pick(), b = pick();
        bad += !same(apply_morphism(bracket(a, b), m), m.algebra.bracket(apply_morphism(a, m), apply_morphism(b, m)));
    }
    return bad;
}

}  // namespace laws
