#pragma once

#include "prolongate/jet.hpp"

namespace prolong {

// Noncommutative words over matrix letters (A, B, Binv, H_xi, ...) and
// vector letters (H, F, G, xi_t) with Expr coefficients. Words ending in a
// vector letter are vectors, the others are matrices.
using MatWord = std::vector<std::string>;

class MatrixExpr {
public:
    using Map = std::map<MatWord, Expr>;
    MatrixExpr() = default;
    static MatrixExpr word(MatWord w, const Expr& c = Expr(1));

    const Map& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    void add(const MatWord& w, const Expr& c);
    MatrixExpr& operator+=(const MatrixExpr& o);
    MatrixExpr& operator-=(const MatrixExpr& o);
    MatrixExpr operator-() const;
    friend MatrixExpr operator+(MatrixExpr a, const MatrixExpr& b) { return a += b; }
    friend MatrixExpr operator-(MatrixExpr a, const MatrixExpr& b) { return a -= b; }
    friend MatrixExpr operator*(const MatrixExpr& a, const MatrixExpr& b);
    friend MatrixExpr operator*(const Expr& c, const MatrixExpr& m);
    friend bool operator==(const MatrixExpr& a, const MatrixExpr& b) { return a.t_ == b.t_; }

    // B*Binv = Binv*B = I always; with `commute`, runs of A, B, Binv are sorted.
    MatrixExpr normalized(bool commute) const;
    std::string str() const;

private:
    Map t_;
};

MatrixExpr parse_matrix(const std::string& text, const ParseContext& ctx);
bool matrix_equal_up_to_unit(const MatrixExpr& a, const MatrixExpr& b);

struct Constraint {
    std::string name;
    std::string sector;      // scalar | closure | compatibility | matrix
    std::string provenance;  // covector or free-jet monomial that produced it
    bool is_matrix = false;
    LieExpr value;
    MatrixExpr matrix;

    std::string text() const { return is_matrix ? matrix.str() : value.str(); }
};

struct ConstraintSet {
    std::vector<Constraint> items;
    // Adds unless zero or a unit multiple of an existing entry; returns false if merged.
    bool add(Constraint c);
    const Constraint* find(const std::string& name) const;
};

struct ExtractOptions {
    bool cross_symmetry = false;
};

struct Extraction {
    FormalJet jet;
    ConstraintSet constraints;
    std::vector<std::pair<std::string, MatrixExpr>> xi_pivots;  // xi_x = ..., xi_y = ...
    bool commutativity_assumed = false;
    LieExpr total;                               // scalar part of pullback(dOmega) before splitting
    std::vector<std::pair<Expr, LieExpr>> split;  // (free-jet monomial, coefficient), before merging
};

Extraction extract_constraints(const ProblemDefinition& p, const ExtractOptions& opt = {});

// Reference constraint list, one per line: `name | sector | expression`.
// Vector expressions expand to name_1..name_3.
ConstraintSet load_constraint_list(const std::string& path, const ProblemDefinition& p);

// Constraints of `want` found (up to a unit) in `have`.
struct ConstraintMatch {
    std::string name;
    bool found = false;
    std::string matched;
};
std::vector<ConstraintMatch> match_constraints(const ConstraintSet& want, const ConstraintSet& have);

// Substitutes the problem's lemma bindings; returns the constraints that do not vanish.
struct LemmaResidual {
    std::string name;
    LieExpr before;
    LieExpr after;
};
std::vector<LemmaResidual> verify_lemma_forms(const ConstraintSet& c, const ProblemDefinition& p);

// Remark-style connection components: H = B G1 - A G2, F = G2 - B G3, G = G1 - A G3.
using ExprMatrix = std::vector<std::vector<Expr>>;
struct HFG {
    std::vector<Expr> h, f, g;
};
HFG compose_connection(const ExprMatrix& a, const ExprMatrix& b, const std::array<std::vector<Expr>, 3>& gamma);

struct ConnectionSolve {
    bool ok = false;
    bool gauge_fixed = false;
    std::string message;
    std::array<std::vector<Expr>, 3> gamma;
};
// Constant A, B only. A singular 3N x 3N system falls back to the gauge Gamma_3 = 0
// when the compatibility H = B G - A F holds.
ConnectionSolve connection_components(const ExprMatrix& a, const ExprMatrix& b, const HFG& target);

}  // namespace prolong
