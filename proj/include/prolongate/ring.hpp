#pragma once

#include "prolongate/expr.hpp"

namespace prolong {

// var^2 -> replacement
struct RewriteRule {
    Atom var = nullptr;
    Expr replacement;
};

// Linear constraint relation poly = 0, solvable for `solve_for`.
struct LinearRelation {
    Atom solve_for = nullptr;
    Expr poly;
};

// Normalization context: parameter rules are intrinsic to Expr; the ring adds
// the optional quotient by the spin constraint.
struct Ring {
    bool quotient = false;
    std::vector<RewriteRule> rewrites;
    std::vector<LinearRelation> relations;

    Expr normalize(const Expr& e) const;
    // Generators of the constraint ideal (rewrites as var^2 - repl, then relations).
    std::vector<Expr> ideal() const;
};

}  // namespace prolong
