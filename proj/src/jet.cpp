#include "prolongate/jet.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>

namespace prolong {

Bindings FormalJet::bindings(bool with_pde) const {
    Bindings b;
    for (auto& r : rules)
        if (with_pde || !r.pde) b.symbols[r.target] = r.value;
    return b;
}

Expr FormalJet::apply(const Expr& e, const Ring& ring, bool with_pde) const {
    return ring.normalize(substitute_fixpoint(e, bindings(with_pde)));
}

const JetRule* FormalJet::rule_for(Atom target) const {
    for (auto& r : rules)
        if (r.target == target) return &r;
    return nullptr;
}

Form pullback_raw(const Form& f, SymbolTable& table, const std::vector<Atom>& independents) {
    Form out(f.degree());
    for (auto& [key, c] : f.terms()) {
        Form acc = Form::scalar(c);
        for (Atom v : key) {
            Form dv(1);
            if (v->role == Role::independent) {
                dv = Form::covector(v);
            } else {
                if (v->role != Role::fibre && v->role != Role::jet)
                    throw std::runtime_error("no section derivatives for covector d" + v->name);
                for (Atom x : independents) dv.add({x}, Expr(table.section_derivative(v, x)));
            }
            acc = wedge(acc, dv);
        }
        out += acc;
    }
    return out;
}

Form pullback_on_solutions(const Form& f, const FormalJet& jet, SymbolTable& table, const Ring& ring, bool with_pde) {
    Form raw = pullback_raw(f, table, jet.independents);
    Bindings b = jet.bindings(with_pde);
    return raw.map_coeffs([&](const Expr& e) { return ring.normalize(substitute_fixpoint(e, b)); });
}

Expr top_coefficient(const Form& f, const std::vector<Atom>& independents) {
    if (f.degree() != static_cast<int>(independents.size())) return Expr();
    CovKey k = independents;
    std::sort(k.begin(), k.end(), AtomLess());
    return f.coefficient(k);
}

namespace {

// Solve r = 0 for `target`, r linear in target with a unit coefficient.
Expr solve_linear_for(const Expr& r, Atom target) {
    Expr c = differentiate(r, target);
    if (c.contains(target)) throw std::runtime_error("pivot " + target->name + " enters nonlinearly");
    if (!is_unit(c)) throw std::runtime_error("pivot " + target->name + " has non-unit coefficient " + c.str());
    Expr rest = r - c * Expr(target);
    return -(unit_inverse(c) * rest);
}

}  // namespace

FormalJet build_jet(const ProblemDefinition& p, bool cross_symmetry) {
    FormalJet jet;
    jet.independents = p.independents;
    auto& table = *p.table;
    Ring ring = p.ring;

    for (auto& pv : p.pivots) {
        if (pv.pde) continue;
        Atom target = table.at(pv.target);
        if (jet.rule_for(target)) throw std::runtime_error("two rules for " + target->name);
        Form pb = pullback_raw(p.generator(pv.generator).form, table, p.independents);
        Expr r = ring.normalize(top_coefficient(pb, p.independents));
        jet.rules.push_back({target, solve_linear_for(r, target), pv.generator, false});
    }
    if (cross_symmetry) {
        // v_a = w and v_b = z imply w_b = z_a; eliminate z_a for a < b.
        std::vector<JetRule> extra;
        for (auto& r1 : jet.rules)
            for (auto& r2 : jet.rules) {
                if (r1.target->parent != r2.target->parent) continue;
                if (atom_cmp(r1.target->wrt, r2.target->wrt) >= 0) continue;
                auto& w = r1.value.terms();
                auto& z = r2.value.terms();
                if (w.size() != 1 || z.size() != 1 || w[0].m.degree() != 1 || z[0].m.degree() != 1) continue;
                Atom wa = w[0].m.f[0].first, za = z[0].m.f[0].first;
                Expr lhs = Expr(table.section_derivative(za, r1.target->wrt));
                Expr rhs = Expr(table.section_derivative(wa, r2.target->wrt));
                extra.push_back({lhs.terms()[0].m.f[0].first, rhs, "cross-symmetry", false});
            }
        for (auto& r : extra) jet.rules.push_back(r);
    }
    for (auto& pv : p.pivots) {
        if (!pv.pde) continue;
        Atom target = table.at(pv.target);
        if (jet.rule_for(target)) throw std::runtime_error("two rules for " + target->name);
        Form pb = pullback_on_solutions(p.generator(pv.generator).form, jet, table, ring, false);
        Expr r = top_coefficient(pb, p.independents);
        jet.rules.push_back({target, solve_linear_for(r, target), pv.generator, true});
    }
    // Triangularity: the rule set must reach a fixed point.
    Bindings all = jet.bindings(true);
    for (auto& r : jet.rules) substitute_fixpoint(r.value, all);
    return jet;
}

std::optional<Expr> unit_ratio(const Expr& a, const Expr& b) {
    if (a.is_zero() || b.is_zero()) {
        if (a.is_zero() && b.is_zero()) return Expr(1);
        return std::nullopt;
    }
    // Candidate units: c * (product of square-ruled parameters in a or b).
    std::vector<Atom> params;
    for (auto& e : {a, b})
        for (Atom x : e.atoms())
            if (x->role == Role::parameter && x->has_square_rule &&
                std::find(params.begin(), params.end(), x) == params.end())
                params.push_back(x);
    const Coeff consts[] = {Coeff(1), Coeff(-1), Coeff::I(), -Coeff::I()};
    for (size_t mask = 0; mask < (size_t(1) << params.size()); ++mask) {
        Expr m(1);
        for (size_t k = 0; k < params.size(); ++k)
            if (mask & (size_t(1) << k)) m = m * Expr(params[k]);
        for (auto& c : consts) {
            Expr u = c * m;
            if (a == u * b) return u;
        }
    }
    return std::nullopt;
}

std::vector<EquivalenceRecord> pullback_equivalence(const ProblemDefinition& p, const FormalJet& jet) {
    std::vector<EquivalenceRecord> out;
    for (auto& [group, comps] : p.generator_groups) {
        auto m = p.equation_match.find(group);
        for (size_t k = 0; k < comps.size(); ++k) {
            EquivalenceRecord rec;
            rec.generator = comps[k];
            Form pb = pullback_on_solutions(p.generator(comps[k]).form, jet, *p.table, p.ring, false);
            rec.residual = top_coefficient(pb, p.independents);
            if (m != p.equation_match.end()) {
                rec.equation = comps.size() > 1 ? m->second + "_" + std::to_string(k + 1) : m->second;
                bool found = false;
                for (auto& e : p.equations)
                    if (e.name == rec.equation) {
                        rec.expected = jet.apply(e.value, p.ring, false);
                        found = true;
                    }
                if (!found) throw std::runtime_error("unknown equation '" + rec.equation + "'");
            }
            rec.unit = unit_ratio(rec.residual, rec.expected);
            rec.pass = rec.unit.has_value() && (rec.equation.empty() || !rec.residual.is_zero());
            out.push_back(std::move(rec));
        }
    }
    return out;
}

}  // namespace prolong
