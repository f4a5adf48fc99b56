#pragma once

#include "prolongate/relations.hpp"

namespace prolong {

// Basis element (index, grade): sl2 uses grade 0 and index 1..3; the loop
// algebra uses T_index^(grade).
using TargetKey = std::pair<int, int>;
using TargetElement = std::map<TargetKey, Expr>;

enum class TargetKind { sl2, loop };

struct TargetAlgebra {
    TargetKind kind = TargetKind::sl2;
    Expr zeta;  // sl2 structure parameter
    Expr k2;    // sl2 uses [E1,E2] = 2 i zeta k2 E3

    TargetElement bracket(const TargetElement& a, const TargetElement& b) const;
    std::string str(const TargetElement& e) const;
};

TargetAlgebra make_sl2(const Expr& zeta, const Expr& k2);
TargetAlgebra make_loop();

void add_to(TargetElement& e, const TargetKey& k, const Expr& c);
TargetElement scale(const Expr& c, const TargetElement& e);
bool is_zero(const TargetElement& e);

struct SpotCheck {
    std::string text;
    LieExpr source;
    TargetElement expected;
};

struct Morphism {
    TargetAlgebra algebra;
    std::map<Atom, TargetElement, AtomLess> images;
    std::vector<SpotCheck> checks;  // `check: [X1,X2] = i*k2*T(3,2)`
};

// Lines: `target: sl2|loop`, `X1 -> kappa*T(1,1)`, `X1 -> 2*X1_sl2`, `Y -> 0`.
// Generators without a line map to 0 in loop mode; sl2 files must be total.
Morphism load_morphism(const std::string& path, const ParseContext& ctx);
Morphism parse_morphism(const std::string& text, const ParseContext& ctx, const std::string& origin = "<morphism>");

TargetElement apply_morphism(const LieExpr& e, const Morphism& m);

struct RelationImage {
    std::string name;
    std::string image;
    bool zero = false;
};
struct RelationCheck {
    std::vector<RelationImage> images;
    bool pass = false;
};
RelationCheck check_relations(const RelationSet& r, const Morphism& m);

}  // namespace prolong
