#include "prolongate/targets.hpp"

#include <fstream>
#include <regex>
#include <sstream>
#include <stdexcept>

namespace prolong {

void add_to(TargetElement& e, const TargetKey& k, const Expr& c) {
    if (c.is_zero()) return;
    auto it = e.find(k);
    if (it == e.end()) {
        e.emplace(k, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) e.erase(it);
}

TargetElement scale(const Expr& c, const TargetElement& e) {
    TargetElement out;
    for (auto& [k, v] : e) add_to(out, k, c * v);
    return out;
}

bool is_zero(const TargetElement& e) { return e.empty(); }

namespace {

// epsilon_{ijk} with epsilon_{123} = 1; returns (k, sign), sign 0 if degenerate.
std::pair<int, int> levi(int i, int j) {
    if (i == j) return {0, 0};
    int k = 6 - i - j;
    int s = ((i == 1 && j == 2) || (i == 2 && j == 3) || (i == 3 && j == 1)) ? 1 : -1;
    return {k, s};
}

}  // namespace

TargetElement TargetAlgebra::bracket(const TargetElement& a, const TargetElement& b) const {
    TargetElement out;
    const Expr two_i_zeta = Expr(Coeff(0, 2)) * zeta;
    for (auto& [ka, ca] : a)
        for (auto& [kb, cb] : b) {
            auto [k, s] = levi(ka.first, kb.first);
            if (!s) continue;
            Expr c = ca * cb;
            if (kind == TargetKind::loop) {
                add_to(out, {k, ka.second + kb.second}, Expr(Coeff(0, s)) * c);
                continue;
            }
            // [E1,E2] = 2i zeta k2 E3, [E1,E3] = -2i zeta E2, [E2,E3] = 2i zeta E1
            Expr f = k == 3 ? two_i_zeta * k2 : two_i_zeta;
            add_to(out, {k, 0}, Expr(s) * f * c);
        }
    return out;
}

std::string TargetAlgebra::str(const TargetElement& e) const {
    if (e.empty()) return "0";
    std::string s;
    for (auto& [k, c] : e) {
        std::string basis = kind == TargetKind::loop ? "T(" + std::to_string(k.first) + "," + std::to_string(k.second) + ")"
                                                     : "X" + std::to_string(k.first) + "_sl2";
        std::string cs = c.str();
        std::string term = c.terms().size() > 1 ? "(" + cs + ")*" + basis : (cs == "1" ? basis : cs == "-1" ? "-" + basis : cs + "*" + basis);
        if (s.empty()) s = term;
        else if (term[0] == '-') s += " - " + term.substr(1);
        else s += " + " + term;
    }
    return s;
}

TargetAlgebra make_sl2(const Expr& zeta, const Expr& k2) { return {TargetKind::sl2, zeta, k2}; }
TargetAlgebra make_loop() { return {TargetKind::loop, Expr(), Expr()}; }

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

TargetElement parse_image(const std::string& rhs, const ParseContext& ctx, TargetKind kind) {
    static const std::regex loop_re(R"(^(.*?)\*?\s*T\(\s*([123])\s*,\s*(-?\d+)\s*\)$)");
    static const std::regex sl2_re(R"(^(.*?)\*?\s*X([123])_sl2$)");
    TargetElement out;
    // split at top-level + and -
    std::vector<std::pair<int, std::string>> terms;
    int depth = 0, sign = 1;
    std::string cur;
    for (char ch : rhs) {
        if (ch == '(') ++depth;
        if (ch == ')') --depth;
        if (depth == 0 && (ch == '+' || ch == '-')) {
            if (!trim(cur).empty()) terms.push_back({sign, trim(cur)});
            else if (ch == '-') {
                sign = -sign;
                continue;
            }
            cur.clear();
            sign = ch == '-' ? -1 : 1;
            continue;
        }
        cur += ch;
    }
    if (!trim(cur).empty()) terms.push_back({sign, trim(cur)});
    for (auto& [s, t] : terms) {
        if (t == "0") continue;
        std::smatch m;
        const std::regex& re = kind == TargetKind::loop ? loop_re : sl2_re;
        if (!std::regex_match(t, m, re)) throw ParseError("cannot read target term '" + t + "'");
        std::string cs = trim(m[1].str());
        while (!cs.empty() && cs.back() == '*') cs = trim(cs.substr(0, cs.size() - 1));
        Expr c = cs.empty() ? Expr(1) : parse_expr(cs, ctx);
        int grade = kind == TargetKind::loop ? std::stoi(m[3].str()) : 0;
        add_to(out, {std::stoi(m[2].str()), grade}, Expr(s) * c);
    }
    return out;
}

}  // namespace

Morphism parse_morphism(const std::string& text, const ParseContext& ctx, const std::string& origin) {
    Morphism out;
    bool have_target = false;
    std::istringstream in(text);
    std::string line;
    int n = 0;
    std::vector<std::pair<int, std::string>> maps, checks;
    while (std::getline(in, line)) {
        ++n;
        line = trim(line.substr(0, line.find('#')));
        if (line.empty()) continue;
        try {
            if (line.rfind("target:", 0) == 0) {
                std::string t = trim(line.substr(7));
                if (t == "loop") out.algebra = make_loop();
                else if (t == "sl2") out.algebra = make_sl2(parse_expr("zeta", ctx), parse_expr("k2", ctx));
                else throw ParseError("unknown target '" + t + "'");
                have_target = true;
                continue;
            }
            if (line.rfind("check:", 0) == 0) {
                checks.push_back({n, trim(line.substr(6))});
                continue;
            }
            if (line.find("->") == std::string::npos) throw ParseError("expected 'generator -> image'");
            maps.push_back({n, line});
        } catch (const std::exception& e) {
            throw ParseError(origin + ":" + std::to_string(n) + ": " + e.what());
        }
    }
    if (!have_target) throw ParseError(origin + ": missing 'target:' line");
    for (auto& [ln, l] : maps) {
        try {
            size_t a = l.find("->");
            Atom g = ctx.table->at(trim(l.substr(0, a)));
            if (g->role != Role::lie_generator) throw ParseError("'" + g->name + "' is not a Lie generator");
            out.images[g] = parse_image(trim(l.substr(a + 2)), ctx, out.algebra.kind);
        } catch (const std::exception& e) {
            throw ParseError(origin + ":" + std::to_string(ln) + ": " + e.what());
        }
    }
    for (Atom g : ctx.table->symbols_with_role(Role::lie_generator))
        if (!out.images.count(g)) {
            if (out.algebra.kind == TargetKind::sl2) throw ParseError(origin + ": no image for generator " + g->name);
            out.images[g] = {};
        }
    for (auto& [ln, l] : checks) {
        try {
            size_t eq = l.find('=');
            if (eq == std::string::npos) throw ParseError("expected 'check: lie-expr = image'");
            out.checks.push_back({l, parse_lie(l.substr(0, eq), ctx), parse_image(trim(l.substr(eq + 1)), ctx, out.algebra.kind)});
        } catch (const std::exception& e) {
            throw ParseError(origin + ":" + std::to_string(ln) + ": " + e.what());
        }
    }
    return out;
}

Morphism load_morphism(const std::string& path, const ParseContext& ctx) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_morphism(ss.str(), ctx, path);
}

TargetElement apply_morphism(const LieExpr& e, const Morphism& m) {
    TargetElement out;
    auto letter = [&](Atom a) -> TargetElement {
        auto it = m.images.find(a);
        if (it == m.images.end()) throw std::runtime_error("morphism has no image for " + a->str());
        return it->second;
    };
    auto br = [&](const TargetElement& a, const TargetElement& b) { return m.algebra.bracket(a, b); };
    for (auto& [w, c] : e.terms())
        for (auto& [k, v] : scale(c, eval_word<TargetElement>(w, letter, br))) add_to(out, k, v);
    return out;
}

RelationCheck check_relations(const RelationSet& r, const Morphism& m) {
    RelationCheck out;
    out.pass = true;
    for (auto& rel : r.items) {
        TargetElement img = apply_morphism(rel.value, m);
        if (!rel.assignment.empty()) {
            Bindings b;
            for (auto& [a, v] : rel.assignment) b.symbols[a] = v;
            TargetElement fixed;
            for (auto& [k, c] : img) add_to(fixed, k, substitute(c, b));
            img = fixed;
        }
        out.images.push_back({rel.branch.empty() ? rel.name : rel.name + " (" + rel.branch + ")", m.algebra.str(img), img.empty()});
        out.pass = out.pass && img.empty();
    }
    return out;
}

}  // namespace prolong
