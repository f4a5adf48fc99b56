#pragma once

#include "prolongate/ideal.hpp"
#include "prolongate/lie.hpp"
#include "prolongate/parse.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace prolong {

// Solve the pullback residual of `generator` for the section derivative `target`.
struct PivotRule {
    std::string generator;
    std::string target;
    bool pde = false;  // false: contact rule (S_x = P, ...)
};

struct AnsatzSpec {
    bool formal = true;
    int n = 0;  // concrete size
    std::vector<std::vector<Coeff>> a, b;  // concrete matrices
    std::vector<Fn> functions;  // Lie-valued H, F, G
    // Base 2-form coefficients: (i, j) index pairs into the independent coordinates.
    std::vector<std::pair<std::pair<int, int>, Fn>> omega;
    std::vector<std::string> theta;  // matrix letter per independent coordinate ("A", "B", "I")
    std::vector<std::string> free_jets;  // symbol names kept free (documentation)
};

struct NamedLie {
    std::string name;
    LieExpr value;
    std::string text;
};

struct NamedExpr {
    std::string name;
    Expr value;
    std::string text;
};

struct ProblemDefinition {
    std::string name;
    std::string path;
    std::string description;
    std::shared_ptr<SymbolTable> table;
    ParseContext ctx;
    Ring ring;
    std::vector<Atom> independents;
    ExteriorIdeal ideal;
    // generator name -> component names (vector generators expand to name_1..name_3)
    std::vector<std::pair<std::string, std::vector<std::string>>> generator_groups;
    std::vector<PivotRule> pivots;
    bool cross_symmetry = false;
    AnsatzSpec ansatz;
    LieBindings lemma;
    std::vector<std::pair<Fn, std::string>> lemma_text;
    std::vector<NamedLie> closure;           // reduced closure relations
    std::vector<NamedExpr> equations;        // hand-entered PDE residuals
    std::map<std::string, std::string> equation_match;  // generator group -> equation name
    std::map<std::string, std::string> golden;   // key -> resolved path
    std::map<std::string, std::string> settings; // raw top-level key/values

    const Generator& generator(const std::string& name) const;
};

ProblemDefinition load_problem(const std::string& path);
ProblemDefinition load_problem_text(const std::string& text, const std::string& origin, const std::string& base_dir);

// Resolves a bundled problem name (e.g. "ishimori-compact") or a path.
std::string resolve_problem(const std::string& name_or_path);
std::string bundled_dir();

}  // namespace prolong
