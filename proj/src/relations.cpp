#include "prolongate/relations.hpp"

#include "prolongate/linalg.hpp"

#include <fstream>
#include <set>
#include <stdexcept>

namespace prolong {

bool RelationSet::add(Relation r) {
    if (r.value.is_zero()) return false;
    for (auto& e : items)
        if (e.branch == r.branch && equal_up_to_unit(e.value, r.value)) return false;
    items.push_back(std::move(r));
    return true;
}

namespace {

using AtomSet = std::set<Atom, AtomLess>;

bool is_var(Atom a) { return a->is_symbol() && a->role != Role::parameter && a->role != Role::lie_generator; }

void all_monomials(const std::vector<Atom>& vars, int maxdeg, std::vector<Monomial>& out) {
    std::vector<int> e(vars.size(), 0);
    std::function<void(size_t, int)> rec = [&](size_t i, int left) {
        if (i == vars.size()) {
            Monomial m;
            for (size_t k = 0; k < vars.size(); ++k)
                if (e[k]) m.f.push_back({vars[k], e[k]});
            out.push_back(m);
            return;
        }
        for (int d = 0; d <= left; ++d) {
            e[i] = d;
            rec(i + 1, left - d);
        }
        e[i] = 0;
    };
    rec(0, maxdeg);
}

struct Branch {
    std::string label;
    Bindings values;
};

std::vector<Branch> branches_for(const std::vector<Expr>& polys) {
    std::vector<Atom> ps;
    for (auto& g : polys)
        for (Atom a : g.atoms())
            if (a->role == Role::parameter && std::find(ps.begin(), ps.end(), a) == ps.end()) {
                if (!a->has_square_rule || a->sq_target) throw std::runtime_error("cannot split parameter " + a->name + " in the constraint ideal");
                ps.push_back(a);
            }
    std::sort(ps.begin(), ps.end(), AtomLess());
    std::vector<Branch> out;
    for (size_t mask = 0; mask < (size_t(1) << ps.size()); ++mask) {
        Branch b;
        for (size_t k = 0; k < ps.size(); ++k) {
            bool neg = mask & (size_t(1) << k);
            // root of x^2 = c with c = +-1
            Coeff root = ps[k]->sq_coeff == Coeff(1) ? Coeff(1) : Coeff::I();
            if (neg) root = -root;
            b.values.symbols[ps[k]] = Expr(root);
            b.label += (b.label.empty() ? "" : ",") + ps[k]->name + "=" + Expr(root).str();
        }
        out.push_back(b);
    }
    return out;
}

RelationSet collect_branch(const std::map<Monomial, LieExpr, MonoGreater>& parts, const std::vector<Expr>& gens,
                           const std::vector<Atom>& vars, int truncation, const Branch& br) {
    std::vector<Monomial> monos;
    all_monomials(vars, truncation, monos);
    std::sort(monos.begin(), monos.end(), MonoGreater());
    std::map<Monomial, int, MonoGreater> col;
    for (size_t i = 0; i < monos.size(); ++i) col[monos[i]] = static_cast<int>(i);

    RowEchelon ech;
    for (auto& g : gens) {
        int dg = g.degree();
        if (dg > truncation) continue;
        std::vector<Monomial> us;
        all_monomials(vars, truncation - dg, us);
        for (auto& u : us) {
            SparseRow row;
            for (auto& t : g.terms()) {
                if (!t.c.is_zero()) row[col.at(u * t.m)] += t.c;
            }
            for (auto it = row.begin(); it != row.end();) it = it->second.is_zero() ? row.erase(it) : std::next(it);
            ech.insert(std::move(row));
        }
    }
    // normal form of each residual monomial, accumulated per standard monomial
    std::map<int, LieExpr> rel;
    for (auto& [m, l] : parts) {
        auto it = col.find(m);
        if (it == col.end()) throw std::runtime_error("residual monomial above truncation degree");
        SparseRow r{{it->second, Coeff(1)}};
        ech.reduce(r);
        for (auto& [j, c] : r) rel[j] += Expr(c) * l;
    }
    RelationSet out;
    for (auto& [j, l] : rel)
        out.add({"rel[" + (monos[j].empty() ? std::string("1") : monos[j].str()) + "]", l, monos[j].str(), br.label, br.values.symbols});
    return out;
}

bool same_relations(const RelationSet& a, const RelationSet& b) {
    if (a.items.size() != b.items.size()) return false;
    for (auto& r : a.items) {
        bool found = false;
        for (auto& s : b.items)
            if (s.branch == r.branch && equal_up_to_unit(r.value, s.value)) found = true;
        if (!found) return false;
    }
    return true;
}

}  // namespace

CollectResult collect_relations(const LieExpr& residual, const Ring& ring, const CollectOptions& opt) {
    CollectResult res;
    AtomSet vars;
    for (auto& [w, c] : residual.terms())
        for (Atom a : c.atoms()) {
            if (a->is_function()) throw std::runtime_error("residual not polynomial in the collection variables: " + a->str());
            if (is_var(a)) vars.insert(a);
        }
    res.variables.clear();
    for (Atom a : vars) res.variables.push_back(a->name);
    std::vector<Atom> vlist(vars.begin(), vars.end());

    // Constraint polynomials restricted to the residual's variables.
    std::vector<Expr> gens;
    if (ring.quotient) {
        Bindings zero;
        for (auto& g : ring.ideal())
            for (Atom a : g.atoms())
                if (is_var(a) && !vars.count(a)) zero.symbols[a] = Expr();
        for (auto& g : ring.ideal()) {
            Expr h = substitute(g, zero);
            if (!h.is_zero()) gens.push_back(h);
        }
    }
    for (auto& [w, c] : residual.terms()) res.degree = std::max(res.degree, c.degree());

    auto run = [&](int truncation) {
        RelationSet all;
        std::vector<std::string> labels;
        for (auto& br : branches_for(gens)) {
            std::vector<Expr> bg;
            for (auto& g : gens) bg.push_back(substitute(g, br.values));
            std::map<Monomial, LieExpr, MonoGreater> parts;
            for (auto& [w, c] : residual.terms()) {
                Expr cb = ring.quotient ? ring.normalize(substitute(c, br.values)) : substitute(c, br.values);
                for (auto& [m, part] : split_by(cb, is_var)) parts[m].add(w, part);
            }
            int deg = 0;
            for (auto& [m, l] : parts) deg = std::max(deg, m.degree());
            int trunc = std::max(truncation, deg);
            for (auto& r : collect_branch(parts, bg, vlist, trunc, br).items) all.add(r);
            labels.push_back(br.label);
        }
        return std::make_pair(all, labels);
    };
    res.truncation = res.degree + opt.extra_degree;
    auto [rels, labels] = run(res.truncation);
    res.relations = rels;
    res.branches = labels;
    if (labels.size() == 1 && labels[0].empty()) res.branches.clear();
    if (opt.stability_check) res.stable = same_relations(rels, run(res.truncation + 1).first);
    return res;
}

RelationSet load_relations(const std::string& path, const ParseContext& ctx) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    RelationSet out;
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        line = line.substr(0, line.find('#'));
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::string name = "r" + std::to_string(n), text = line;
        if (auto p = line.find(":="); p != std::string::npos) {
            name = line.substr(0, p);
            name.erase(0, name.find_first_not_of(" \t"));
            name.erase(name.find_last_not_of(" \t") + 1);
            text = line.substr(p + 2);
        }
        try {
            out.items.push_back({name, parse_lie(text, ctx), path + ":" + std::to_string(n), ""});
        } catch (const std::exception& e) {
            throw ParseError(path + ":" + std::to_string(n) + ": " + e.what());
        }
    }
    return out;
}

namespace {

// Rank of a set of Lie elements after assigning parameter values.
int rank_of(const std::vector<LieExpr>& v, const Bindings& b, std::map<Word, int, WordLess>& cols, RowEchelon* keep = nullptr) {
    RowEchelon local;
    RowEchelon& ech = keep ? *keep : local;
    int r0 = ech.rank();
    for (auto& l : v) {
        SparseRow row;
        for (auto& [w, c] : l.terms()) {
            Expr e = substitute(c, b);
            if (e.is_zero()) continue;
            if (!e.is_constant()) throw std::runtime_error("relation coefficient not constant after parameter assignment: " + e.str());
            auto it = cols.find(w);
            if (it == cols.end()) it = cols.emplace(w, static_cast<int>(cols.size())).first;
            row[it->second] = e.constant();
        }
        ech.insert(std::move(row));
    }
    return ech.rank() - r0;
}

bool in_span(const LieExpr& l, const std::vector<LieExpr>& basis, const Bindings& b, std::map<Word, int, WordLess>& cols) {
    RowEchelon ech;
    int r = rank_of(basis, b, cols, &ech);
    (void)r;
    return rank_of({l}, b, cols, &ech) == 0;
}

}  // namespace

SpanComparison compare_spans(const RelationSet& have, const RelationSet& want) {
    std::vector<Atom> ps;
    for (auto* s : {&have, &want})
        for (auto& r : s->items)
            for (auto& [w, c] : r.value.terms())
                for (Atom a : c.atoms())
                    if (a->role == Role::parameter && std::find(ps.begin(), ps.end(), a) == ps.end()) ps.push_back(a);
    std::sort(ps.begin(), ps.end(), AtomLess());
    std::vector<LieExpr> H, W;
    for (auto& r : have.items) H.push_back(r.value);
    for (auto& r : want.items) W.push_back(r.value);

    SpanComparison out;
    out.equal = true;
    std::set<std::string> ow, oh;
    for (size_t mask = 0; mask < (size_t(1) << ps.size()); ++mask) {
        Bindings b;
        for (size_t k = 0; k < ps.size(); ++k) {
            if (!ps[k]->has_square_rule) throw std::runtime_error("free parameter " + ps[k]->name + " in relation span comparison");
            Coeff root = ps[k]->sq_coeff == Coeff(1) ? Coeff(1) : Coeff::I();
            if (ps[k]->sq_target) root = Coeff(1);  // x^2 -> target: take x = 1 with target = 1
            b.symbols[ps[k]] = Expr(mask & (size_t(1) << k) ? -root : root);
        }
        std::map<Word, int, WordLess> cols;
        int rh = rank_of(H, b, cols), rw = rank_of(W, b, cols);
        std::vector<LieExpr> U = H;
        U.insert(U.end(), W.begin(), W.end());
        int ru = rank_of(U, b, cols);
        out.rank_have = std::max(out.rank_have, rh);
        out.rank_want = std::max(out.rank_want, rw);
        out.rank_union = std::max(out.rank_union, ru);
        if (rh != ru || rw != ru) out.equal = false;
        for (auto& r : have.items)
            if (!in_span(r.value, W, b, cols)) ow.insert(r.name);
        for (auto& r : want.items)
            if (!in_span(r.value, H, b, cols)) oh.insert(r.name);
    }
    out.outside_want.assign(ow.begin(), ow.end());
    out.outside_have.assign(oh.begin(), oh.end());
    return out;
}

std::vector<UnitMatch> match_relations(const RelationSet& want, const RelationSet& have) {
    std::vector<UnitMatch> out;
    for (auto& w : want.items) {
        UnitMatch m{w.name, ""};
        for (auto& h : have.items)
            if (equal_up_to_unit(w.value, h.value)) {
                m.have = h.name;
                break;
            }
        out.push_back(m);
    }
    return out;
}

}  // namespace prolong
