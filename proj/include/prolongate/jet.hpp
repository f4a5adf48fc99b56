#pragma once

#include "prolongate/problem.hpp"

#include <optional>

namespace prolong {

struct JetRule {
    Atom target = nullptr;
    Expr value;
    std::string source;  // generator or "cross-symmetry"
    bool pde = false;
};

// Substitution rules describing formal solutions: contact rules (S_x = P, ...),
// optional cross-derivative symmetries, and the PDE pivots.
struct FormalJet {
    std::vector<Atom> independents;
    std::vector<JetRule> rules;

    Bindings bindings(bool with_pde = true) const;
    Expr apply(const Expr& e, const Ring& ring, bool with_pde = true) const;
    const JetRule* rule_for(Atom target) const;
};

// dv -> v_x dx + v_y dy + v_t dt for every non-independent covector.
Form pullback_raw(const Form& f, SymbolTable& table, const std::vector<Atom>& independents);

Form pullback_on_solutions(const Form& f, const FormalJet& jet, SymbolTable& table, const Ring& ring,
                           bool with_pde = true);

// Coefficient of the top base form dx^dy^dt of a pulled-back form.
Expr top_coefficient(const Form& f, const std::vector<Atom>& independents);

FormalJet build_jet(const ProblemDefinition& p, bool cross_symmetry);

// u with a == u*b for a unit u (sign, i, involutive parameters), if any.
std::optional<Expr> unit_ratio(const Expr& a, const Expr& b);

// Pullback residual of each generator component (contact rules only) against
// the hand-entered equation residuals; unmatched generators must pull back to 0.
struct EquivalenceRecord {
    std::string generator;
    std::string equation;  // empty: expected zero
    Expr residual;
    Expr expected;
    std::optional<Expr> unit;
    bool pass = false;
};
std::vector<EquivalenceRecord> pullback_equivalence(const ProblemDefinition& p, const FormalJet& jet);

}  // namespace prolong
