#pragma once

#include "prolongate/problem.hpp"

namespace prolong {

struct Relation {
    std::string name;
    LieExpr value;
    std::string provenance;  // standard monomial of the quotient it came from
    std::string branch;      // parameter branch, empty if none was split
    std::map<Atom, Expr, AtomLess> assignment;  // parameter values of the branch
};

struct RelationSet {
    std::vector<Relation> items;
    // Adds unless zero or a unit multiple of an entry of the same branch.
    bool add(Relation r);
};

struct CollectOptions {
    int extra_degree = 2;       // Macaulay truncation: residual degree + extra_degree
    bool stability_check = true;  // repeat at one more degree and compare
};

struct CollectResult {
    RelationSet relations;
    std::vector<std::string> variables;
    std::vector<std::string> branches;
    int degree = 0;
    int truncation = 0;
    bool stable = true;
};

// Coefficients of `residual` in the collection variables, reduced modulo the
// constraint ideal of the ring (quotient mode), one relation per standard monomial.
CollectResult collect_relations(const LieExpr& residual, const Ring& ring, const CollectOptions& opt = {});

// One relation per line, `name := expr` or a bare expression.
RelationSet load_relations(const std::string& path, const ParseContext& ctx);

struct SpanComparison {
    bool equal = false;
    int rank_have = 0, rank_want = 0, rank_union = 0;
    std::vector<std::string> outside_want;  // names of `have` relations not in span(want)
    std::vector<std::string> outside_have;
};
// Compares linear spans over the coefficient field, for every +-1 assignment of
// the involutive parameters that occur.
SpanComparison compare_spans(const RelationSet& have, const RelationSet& want);

struct UnitMatch {
    std::string want;
    std::string have;  // empty if no unit multiple exists
};
std::vector<UnitMatch> match_relations(const RelationSet& want, const RelationSet& have);

}  // namespace prolong
