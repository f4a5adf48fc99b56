#pragma once

#include "prolongate/forms.hpp"
#include "prolongate/lie.hpp"

#include <string>
#include <vector>

namespace prolong {

// One component of a parsed value: a differential form (degree 0 = scalar)
// or a Lie-valued expression.
struct Component {
    bool is_lie = false;
    Form form;
    LieExpr lie;
};

// Scalar (one component) or 3-vector value.
struct Value {
    std::vector<Component> c;
    bool vec = false;
};

struct ParseContext {
    const SymbolTable* table = nullptr;
    Metric sigma;  // used by Sigma(.)
    std::vector<Atom> chart;  // for d(expr); defaults to every coordinate symbol
};

Value parse_value(const std::string& text, const ParseContext& ctx);

Expr parse_expr(const std::string& text, const SymbolTable& table);
Expr parse_expr(const std::string& text, const ParseContext& ctx);
Form parse_form(const std::string& text, const ParseContext& ctx);
LieExpr parse_lie(const std::string& text, const ParseContext& ctx);

// Coordinates of the prolonged space: every declared symbol except parameters,
// section derivatives and Lie generators.
std::vector<Atom> chart_of(const SymbolTable& table);

}  // namespace prolong
