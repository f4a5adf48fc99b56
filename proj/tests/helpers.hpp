#pragma once

#include "prolongate/parse.hpp"

#include <memory>

namespace testing_support {

using namespace prolong;

// Small chart: x y t; S1..S3; P1..P3; phi alpha; parameters k2 (involutive), eps2, zeta, kappa.
struct Chart {
    std::shared_ptr<SymbolTable> tab = std::make_shared<SymbolTable>();
    ParseContext ctx;

    explicit Chart(bool kappa_symbolic = true) {
        for (auto n : {"x", "y", "t"}) tab->declare(n, Role::independent);
        for (int k = 1; k <= 3; ++k) tab->declare("S" + std::to_string(k), Role::fibre, k);
        tab->declare("phi", Role::fibre);
        for (int k = 1; k <= 3; ++k) tab->declare("P" + std::to_string(k), Role::jet, k);
        for (int k = 1; k <= 3; ++k) tab->declare("Q" + std::to_string(k), Role::jet, k);
        tab->declare("alpha", Role::jet);
        tab->declare("mu", Role::jet);
        Atom k2 = tab->declare("k2", Role::parameter);
        Atom e2 = tab->declare("eps2", Role::parameter);
        tab->declare("zeta", Role::parameter);
        Atom kap = tab->declare("kappa", Role::parameter);
        tab->set_square_rule(k2, Coeff(1));
        tab->set_square_rule(e2, Coeff(1));
        tab->set_square_rule(kap, Coeff(1), k2);
        (void)kappa_symbolic;
        tab->declare_vector("S", {"S1", "S2", "S3"});
        tab->declare_vector("P", {"P1", "P2", "P3"});
        tab->declare_vector("Q", {"Q1", "Q2", "Q3"});
        for (auto n : {"X1", "X2", "X3", "Y", "Z", "K"}) tab->declare(n, Role::lie_generator);
        tab->declare_vector("X", {"X1", "X2", "X3"});
        tab->declare_function("H", {tab->at("S1"), tab->at("S2"), tab->at("S3")}, false);
        tab->declare_function("Hl", {tab->at("S1"), tab->at("S2"), tab->at("S3")}, true);
        ctx.table = tab.get();
        ctx.sigma.diag = {Expr(1), Expr(1), Expr(tab->at("k2"))};
    }

    Expr e(const std::string& s) const { return parse_expr(s, ctx); }
    Form f(const std::string& s) const { return parse_form(s, ctx); }
    LieExpr l(const std::string& s) const { return parse_lie(s, ctx); }
    Atom a(const std::string& s) const { return tab->at(s); }
};

}  // namespace testing_support
