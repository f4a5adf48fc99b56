#include "prolongate/ideal.hpp"

#include "prolongate/linalg.hpp"

#include <set>

namespace prolong {

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::member: return "closed";
        case Verdict::nonmember: return "nonmember";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

namespace {

using Vec = std::map<CovKey, Expr, CovKeyLess>;
using Comb = std::map<int, Expr>;

struct Row {
    Vec v;
    Comb c;
};

struct Product {
    int gen;
    CovKey mu;
    Vec v;
};

int vertical(const CovKey& k) {
    int n = 0;
    for (auto a : k)
        if (a->role != Role::independent) ++n;
    return n;
}

// Preferred pivot: more fibre covectors first.
bool key_better(const CovKey& a, const CovKey& b) {
    int va = vertical(a), vb = vertical(b);
    if (va != vb) return va > vb;
    return CovKeyLess()(b, a);
}

void add_to(Vec& y, const CovKey& k, const Expr& e) {
    if (e.is_zero()) return;
    auto it = y.find(k);
    if (it == y.end()) {
        y.emplace(k, e);
    } else {
        it->second += e;
        if (it->second.is_zero()) y.erase(it);
    }
}

void add_to(Comb& y, int k, const Expr& e) {
    if (e.is_zero()) return;
    auto it = y.find(k);
    if (it == y.end()) {
        y.emplace(k, e);
    } else {
        it->second += e;
        if (it->second.is_zero()) y.erase(it);
    }
}

void axpy(Row& y, const Expr& a, const Row& x, const Ring& ring) {
    for (auto& [k, e] : x.v) add_to(y.v, k, ring.normalize(a * e));
    for (auto& [p, e] : x.c) add_to(y.c, p, ring.normalize(a * e));
}

void scale(Row& r, const Expr& a, const Ring& ring) {
    for (auto& [k, e] : r.v) e = ring.normalize(a * e);
    for (auto& [p, e] : r.c) e = ring.normalize(a * e);
}

std::vector<CovKey> multiplier_keys(const std::vector<Atom>& chart, int q) {
    std::vector<CovKey> out;
    if (q == 0) {
        out.push_back({});
        return out;
    }
    std::vector<Atom> sorted = chart;
    std::sort(sorted.begin(), sorted.end(), AtomLess());
    std::function<void(size_t, CovKey&)> rec = [&](size_t from, CovKey& cur) {
        if (static_cast<int>(cur.size()) == q) {
            out.push_back(cur);
            return;
        }
        for (size_t k = from; k < sorted.size(); ++k) {
            cur.push_back(sorted[k]);
            rec(k + 1, cur);
            cur.pop_back();
        }
    };
    CovKey cur;
    rec(0, cur);
    return out;
}

class Eliminator {
public:
    explicit Eliminator(const Ring& r) : ring_(r) {}

    void reduce(Row& r) const {
        std::vector<CovKey> keys;
        for (auto& [k, e] : r.v)
            if (piv_.count(k)) keys.push_back(k);
        for (auto& k : keys) {
            auto it = r.v.find(k);
            if (it == r.v.end()) continue;
            Expr a = -it->second;
            axpy(r, a, piv_.at(k), ring_);
        }
    }

    // Returns true if r became a pivot.
    bool try_pivot(Row& r) {
        const CovKey* best = nullptr;
        for (auto& [k, e] : r.v)
            if (is_unit(e) && (!best || key_better(k, *best))) best = &k;
        if (!best) return false;
        CovKey key = *best;
        scale(r, unit_inverse(r.v.at(key)), ring_);
        for (auto& [pk, row] : piv_) {
            auto it = row.v.find(key);
            if (it == row.v.end()) continue;
            Expr a = -it->second;
            axpy(row, a, r, ring_);
        }
        piv_.emplace(key, std::move(r));
        return true;
    }

    void insert(Row r) {
        reduce(r);
        if (r.v.empty()) return;
        if (!try_pivot(r)) residual_.push_back(std::move(r));
    }

    void settle() {
        for (bool changed = true; changed;) {
            changed = false;
            std::vector<Row> keep;
            auto res = std::move(residual_);
            residual_.clear();
            for (auto& r : res) {
                reduce(r);
                if (r.v.empty()) continue;
                if (try_pivot(r)) changed = true;
                else keep.push_back(std::move(r));
            }
            residual_ = std::move(keep);
        }
        for (auto& r : residual_) reduce(r);
    }

    const std::vector<Row>& residual() const { return residual_; }
    size_t pivot_count() const { return piv_.size(); }

private:
    const Ring& ring_;
    std::map<CovKey, Row, CovKeyLess> piv_;
    std::vector<Row> residual_;
};

// All parameter monomials (exponents 0/1) over params with square rules.
std::vector<Monomial> parameter_basis(const std::set<Atom, AtomLess>& params) {
    std::vector<Monomial> out{Monomial{}};
    for (auto p : params) {
        size_t n = out.size();
        for (size_t k = 0; k < n; ++k) {
            Monomial m = out[k];
            m.f.emplace_back(p, 1);
            Coeff c(1);
            apply_parameter_rules(m, c);
            out.push_back(m);
        }
    }
    return out;
}

std::vector<Monomial> var_monomials(const std::vector<Atom>& vars, int degree) {
    std::vector<Monomial> out{Monomial{}};
    std::function<void(size_t, int, Monomial&)> rec = [&](size_t from, int left, Monomial& cur) {
        for (size_t k = from; k < vars.size(); ++k) {
            Monomial next = cur * Monomial{{{vars[k], 1}}};
            out.push_back(next);
            if (left > 1) rec(k, left - 1, next);
        }
    };
    Monomial m;
    if (degree > 0) rec(0, degree, m);
    return out;
}

struct MonoKeyLess {
    bool operator()(const std::pair<CovKey, Monomial>& a, const std::pair<CovKey, Monomial>& b) const {
        if (a.first != b.first) return CovKeyLess()(a.first, b.first);
        return mono_cmp(a.second, b.second) < 0;
    }
};

// Polynomial multipliers b_j (bounded degree) with sum_j b_j R_j = rhs.
std::optional<std::vector<Expr>> solve_combination(const std::vector<const Row*>& rows, const Vec& rhs,
                                                   const Ring& ring, int max_degree) {
    std::set<Atom, AtomLess> vars, params;
    auto scan = [&](const Vec& v) {
        for (auto& [k, e] : v)
            for (auto a : e.atoms()) {
                if (a->is_function()) return false;
                if (a->role == Role::parameter) {
                    if (a->has_square_rule) params.insert(a);
                } else {
                    vars.insert(a);
                }
            }
        return true;
    };
    for (auto r : rows)
        if (!scan(r->v)) return std::nullopt;
    if (!scan(rhs)) return std::nullopt;
    std::vector<Atom> vlist(vars.begin(), vars.end());
    auto pbasis = parameter_basis(params);
    for (int d = 0; d <= max_degree; ++d) {
        auto vbasis = var_monomials(vlist, d);
        struct Unknown {
            size_t row;
            Monomial u;
        };
        std::vector<Unknown> unknowns;
        for (size_t j = 0; j < rows.size(); ++j)
            for (auto& vm : vbasis)
                for (auto& pm : pbasis) unknowns.push_back({j, vm * pm});
        std::map<std::pair<CovKey, Monomial>, SparseRow, MonoKeyLess> eqs;
        for (size_t x = 0; x < unknowns.size(); ++x) {
            Expr u = Expr::term(unknowns[x].u, Coeff(1));
            for (auto& [k, e] : rows[unknowns[x].row]->v) {
                Expr p = ring.normalize(u * e);
                for (auto& t : p.terms()) eqs[{k, t.m}][static_cast<int>(x)] += t.c;
            }
        }
        std::map<std::pair<CovKey, Monomial>, Coeff, MonoKeyLess> target;
        for (auto& [k, e] : rhs)
            for (auto& t : e.terms()) target[{k, t.m}] += t.c;
        bool reachable = true;
        for (auto& [key, c] : target)
            if (!eqs.count(key)) reachable = false;
        if (!reachable) continue;
        std::vector<SparseRow> A;
        std::vector<Coeff> b;
        for (auto& [key, row] : eqs) {
            SparseRow clean;
            for (auto& [j, c] : row)
                if (!c.is_zero()) clean.emplace(j, c);
            A.push_back(std::move(clean));
            auto it = target.find(key);
            b.push_back(it == target.end() ? Coeff(0) : it->second);
        }
        auto sol = solve_linear(A, b, static_cast<int>(unknowns.size()));
        if (!sol) continue;
        std::vector<Expr> out(rows.size());
        for (size_t x = 0; x < unknowns.size(); ++x)
            if (!(*sol)[x].is_zero()) out[unknowns[x].row] += Expr::term(unknowns[x].u, (*sol)[x]);
        return out;
    }
    return std::nullopt;
}

Coeff eval_exact(const Expr& e, const std::map<Atom, Coeff>& val) {
    Coeff s(0);
    for (auto& t : e.terms()) {
        Coeff p = t.c;
        for (auto& [a, k] : t.m.f) {
            auto it = val.find(a);
            if (it == val.end()) throw std::out_of_range("unbound " + a->str());
            for (int j = 0; j < k; ++j) p *= it->second;
        }
        s += p;
    }
    return s;
}

// Exact nonmembership witness at rational points of the constraint variety.
std::string find_witness(const Vec& target, const std::vector<Product>& prods, const Ring& ring) {
    std::set<Atom, AtomLess> vars, params;
    auto scan = [&](const Vec& v) {
        for (auto& [k, e] : v)
            for (auto a : e.atoms()) {
                if (a->is_function()) return false;
                (a->role == Role::parameter ? params : vars).insert(a);
            }
        return true;
    };
    if (!scan(target)) return {};
    for (auto& p : prods)
        if (!scan(p.v)) return {};
    for (auto& r : ring.rewrites) vars.insert(r.var);

    // Parameter assignments consistent with the square rules.
    std::vector<std::map<Atom, Coeff>> assigns{{}};
    for (auto p : params) {
        std::vector<std::map<Atom, Coeff>> next;
        for (auto& a : assigns) {
            if (!p->has_square_rule) return {};
            Coeff sq = p->sq_coeff;
            if (p->sq_target) {
                auto it = a.find(p->sq_target);
                if (it == a.end()) return {};
                sq *= it->second;
            }
            Coeff r;
            if (sq == Coeff(1)) r = Coeff(1);
            else if (sq == Coeff(-1)) r = Coeff::I();
            else return {};
            for (auto s : {r, -r}) {
                auto b = a;
                b[p] = s;
                next.push_back(b);
            }
        }
        assigns = std::move(next);
    }
    std::vector<Atom> vlist(vars.begin(), vars.end());
    std::vector<std::map<Atom, Coeff>> points;
    points.push_back({});
    for (auto v : vlist) points.push_back({{v, Coeff(1)}});
    std::map<CovKey, int, CovKeyLess> col;
    for (auto& pa : assigns)
        for (auto pt : points) {
            for (auto v : vlist)
                if (!pt.count(v)) pt[v] = Coeff(0);
            for (auto& [a, c] : pa) pt[a] = c;
            bool ok = true;
            if (ring.quotient) {
                for (auto& r : ring.rewrites) {
                    Coeff need = eval_exact(r.replacement, pt);
                    Coeff have = pt[r.var] * pt[r.var];
                    if (have == need) continue;
                    if (need == Coeff(1) && pt[r.var].is_zero()) pt[r.var] = Coeff(1);
                    else if (need.is_zero()) pt[r.var] = Coeff(0);
                    else ok = false;
                }
                for (auto& r : ring.rewrites)
                    if (!(pt[r.var] * pt[r.var] == eval_exact(r.replacement, pt))) ok = false;
            }
            if (!ok) continue;
            auto to_row = [&](const Vec& v) {
                SparseRow row;
                for (auto& [k, e] : v) {
                    Coeff c = eval_exact(e, pt);
                    if (c.is_zero()) continue;
                    auto it = col.find(k);
                    int idx = it == col.end() ? col.emplace(k, static_cast<int>(col.size())).first->second : it->second;
                    row[idx] = c;
                }
                return row;
            };
            RowEchelon ech;
            for (auto& p : prods) ech.insert(to_row(p.v));
            SparseRow t = to_row(target);
            ech.reduce(t);
            if (!t.empty()) {
                std::string s = "target not in span of generator products at point {";
                bool first = true;
                for (auto& [a, c] : pt) {
                    if (!first) s += ", ";
                    first = false;
                    s += a->name + "=" + c.str();
                }
                return s + "}";
            }
        }
    return {};
}

Vec to_vec(const Form& f, const Ring& ring) {
    Vec v;
    for (auto& [k, e] : f.terms()) add_to(v, k, ring.normalize(e));
    return v;
}

Form to_form(const Vec& v, int degree) {
    Form f(degree);
    for (auto& [k, e] : v) f.add(k, e);
    return f;
}

}  // namespace

Form certificate_defect(const Form& target, const ExteriorIdeal& I, const Ring& ring,
                        const std::vector<std::pair<std::string, Form>>& multipliers) {
    Form d = target;
    for (auto& [name, lam] : multipliers) {
        for (auto& g : I.gens)
            if (g.name == name) {
                d -= wedge(g.form, lam);
                break;
            }
    }
    return d.normalized(ring);
}

Reduction reduce_mod_ideal(const Form& target, const ExteriorIdeal& I, const Ring& ring, const ReduceOptions& opt) {
    Reduction out;
    out.remainder = Form(target.degree());
    Form t = target.normalized(ring);
    if (t.is_zero()) {
        out.verdict = Verdict::member;
        return out;
    }
    std::vector<Product> prods;
    for (size_t g = 0; g < I.gens.size(); ++g) {
        int q = target.degree() - I.gens[g].form.degree();
        if (q < 0) continue;
        for (auto& mu : multiplier_keys(I.chart, q)) {
            Form p = wedge(I.gens[g].form, Form::monomial(mu, Expr(1)));
            if (p.is_zero()) continue;
            prods.push_back({static_cast<int>(g), mu, to_vec(p, ring)});
        }
    }
    Eliminator el(ring);
    for (size_t p = 0; p < prods.size(); ++p) {
        Row r;
        r.v = prods[p].v;
        r.c[static_cast<int>(p)] = Expr(1);
        el.insert(std::move(r));
    }
    el.settle();
    out.pivots = static_cast<int>(el.pivot_count());
    out.residual_rows = static_cast<int>(el.residual().size());

    Row tr;
    tr.v = to_vec(t, ring);
    el.reduce(tr);
    out.remainder = to_form(tr.v, target.degree());

    // coefficient k_p of product p in target = sum k_p prod_p
    Comb k;
    for (auto& [p, e] : tr.c) add_to(k, p, -e);

    bool certified = tr.v.empty();
    if (!certified) {
        std::vector<const Row*> rows;
        for (auto& r : el.residual()) {
            bool touches = false;
            for (auto& [key, e] : r.v)
                if (tr.v.count(key)) touches = true;
            if (touches) rows.push_back(&r);
        }
        std::vector<Expr> b(rows.size());
        bool ok = !rows.empty();
        // Unit vectors first (multipliers in the row variables only), then the
        // remainder itself as right-hand side.
        for (auto& [m, coef] : tr.v) {
            if (!ok) break;
            Vec e;
            e.emplace(m, Expr(1));
            auto sol = solve_combination(rows, e, ring, opt.max_ansatz_degree);
            if (!sol) {
                ok = false;
                break;
            }
            for (size_t j = 0; j < rows.size(); ++j) b[j] += ring.normalize(coef * (*sol)[j]);
        }
        if (!ok && !rows.empty()) {
            if (auto sol = solve_combination(rows, tr.v, ring, opt.max_ansatz_degree)) {
                b = *sol;
                ok = true;
            }
        }
        if (ok) {
            for (size_t j = 0; j < rows.size(); ++j)
                for (auto& [p, e] : rows[j]->c) add_to(k, p, ring.normalize(b[j] * e));
            certified = true;
        }
    }
    if (certified) {
        std::map<int, Form> lam;
        for (auto& [p, e] : k) {
            auto it = lam.find(prods[p].gen);
            Form term = Form::monomial(prods[p].mu, e);
            if (it == lam.end()) lam.emplace(prods[p].gen, term);
            else it->second += term;
        }
        for (auto& [g, f] : lam)
            if (!f.is_zero()) out.multipliers.emplace_back(I.gens[g].name, f);
        Form defect = certificate_defect(t, I, ring, out.multipliers);
        if (defect.is_zero()) {
            out.verdict = Verdict::member;
            out.remainder = Form(target.degree());
            return out;
        }
        out.multipliers.clear();
        out.witness = "internal: certificate did not verify";
    }
    if (opt.witness) {
        std::string w = find_witness(to_vec(t, ring), prods, ring);
        if (!w.empty()) {
            out.verdict = Verdict::nonmember;
            out.witness = w;
            return out;
        }
    }
    out.verdict = Verdict::inconclusive;
    return out;
}

std::vector<ClosureRecord> closedness_check(const ExteriorIdeal& I, const Ring& ring, const ReduceOptions& opt) {
    std::vector<ClosureRecord> out;
    for (auto& g : I.gens) {
        ClosureRecord rec;
        rec.generator = g.name;
        rec.derivative = exterior_derivative(g.form, I.chart).normalized(ring);
        rec.reduction = reduce_mod_ideal(rec.derivative, I, ring, opt);
        out.push_back(std::move(rec));
    }
    return out;
}

}  // namespace prolong
