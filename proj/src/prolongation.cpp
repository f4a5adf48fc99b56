#include "prolongate/prolongation.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace prolong {

// ---- MatrixExpr

MatrixExpr MatrixExpr::word(MatWord w, const Expr& c) {
    MatrixExpr m;
    m.add(w, c);
    return m;
}

void MatrixExpr::add(const MatWord& w, const Expr& c) {
    if (c.is_zero()) return;
    auto it = t_.find(w);
    if (it == t_.end()) {
        t_.emplace(w, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) t_.erase(it);
}

MatrixExpr& MatrixExpr::operator+=(const MatrixExpr& o) {
    for (auto& [w, c] : o.t_) add(w, c);
    return *this;
}

MatrixExpr& MatrixExpr::operator-=(const MatrixExpr& o) {
    for (auto& [w, c] : o.t_) add(w, -c);
    return *this;
}

MatrixExpr MatrixExpr::operator-() const {
    MatrixExpr m;
    for (auto& [w, c] : t_) m.t_.emplace(w, -c);
    return m;
}

MatrixExpr operator*(const MatrixExpr& a, const MatrixExpr& b) {
    MatrixExpr out;
    for (auto& [u, c] : a.t_)
        for (auto& [v, d] : b.t_) {
            MatWord w = u;
            w.insert(w.end(), v.begin(), v.end());
            out.add(w, c * d);
        }
    return out;
}

MatrixExpr operator*(const Expr& c, const MatrixExpr& m) {
    MatrixExpr out;
    for (auto& [w, d] : m.t_) out.add(w, c * d);
    return out;
}

namespace {

bool constant_matrix_letter(const std::string& s) { return s == "A" || s == "B" || s == "Binv"; }

MatWord normalize_word(MatWord w, bool commute) {
    if (commute) {
        for (size_t i = 0; i < w.size();) {
            if (!constant_matrix_letter(w[i])) {
                ++i;
                continue;
            }
            size_t j = i;
            while (j < w.size() && constant_matrix_letter(w[j])) ++j;
            std::sort(w.begin() + i, w.begin() + j);  // A < B < Binv
            i = j;
        }
    }
    for (bool changed = true; changed;) {
        changed = false;
        for (size_t i = 0; i + 1 < w.size(); ++i)
            if ((w[i] == "B" && w[i + 1] == "Binv") || (w[i] == "Binv" && w[i + 1] == "B")) {
                w.erase(w.begin() + i, w.begin() + i + 2);
                changed = true;
                break;
            }
    }
    return w;
}

}  // namespace

MatrixExpr MatrixExpr::normalized(bool commute) const {
    MatrixExpr out;
    for (auto& [w, c] : t_) out.add(normalize_word(w, commute), c);
    return out;
}

std::string MatrixExpr::str() const {
    if (t_.empty()) return "0";
    std::string s;
    bool first = true;
    for (auto& [w, c] : t_) {
        std::string word;
        for (size_t i = 0; i < w.size(); ++i) word += (i ? "*" : "") + w[i];
        if (word.empty()) word = "I";
        std::string cs = c.str();
        bool neg = false;
        if (c.terms().size() == 1 && cs[0] == '-') {
            neg = true;
            cs = cs.substr(1);
        }
        std::string term = cs == "1" ? word : (c.terms().size() > 1 ? "(" + cs + ")" : cs) + "*" + word;
        if (first) s = (neg ? "-" : "") + term;
        else s += (neg ? " - " : " + ") + term;
        first = false;
    }
    return s;
}

MatrixExpr parse_matrix(const std::string& text, const ParseContext& ctx) {
    MatrixExpr out;
    std::string cur;
    int sign = 1;
    auto flush = [&]() {
        std::string t;
        for (char ch : cur)
            if (!std::isspace(static_cast<unsigned char>(ch))) t += ch;
        if (t.empty()) return;
        Expr c(sign);
        MatWord w;
        std::stringstream ss(t);
        for (std::string tok; std::getline(ss, tok, '*');) {
            if (tok.empty()) throw ParseError("empty factor in matrix expression '" + text + "'");
            bool scalar = std::isdigit(static_cast<unsigned char>(tok[0])) || tok == "i" ||
                          (ctx.table->find(tok) && ctx.table->find(tok)->role == Role::parameter) || ctx.table->value(tok);
            if (scalar) c = c * parse_expr(tok, ctx);
            else if (tok != "I") w.push_back(tok);
        }
        out.add(w, c);
    };
    for (char ch : text) {
        if (ch == '+' || ch == '-') {
            flush();
            cur.clear();
            sign = ch == '-' ? -1 : 1;
        } else {
            cur += ch;
        }
    }
    flush();
    return out;
}

bool matrix_equal_up_to_unit(const MatrixExpr& a, const MatrixExpr& b) {
    if (a.terms().size() != b.terms().size()) return false;
    if (a.is_zero()) return true;
    auto& [w, c] = *a.terms().begin();
    auto it = b.terms().find(w);
    if (it == b.terms().end()) return false;
    auto u = unit_ratio(c, it->second);
    return u && a == (*u) * b;
}

// ---- ConstraintSet

bool ConstraintSet::add(Constraint c) {
    if (c.is_matrix ? c.matrix.is_zero() : c.value.is_zero()) return false;
    for (auto& e : items) {
        if (e.is_matrix != c.is_matrix) continue;
        bool same = c.is_matrix ? matrix_equal_up_to_unit(e.matrix, c.matrix) : equal_up_to_unit(e.value, c.value);
        if (same) return false;
    }
    items.push_back(std::move(c));
    return true;
}

const Constraint* ConstraintSet::find(const std::string& name) const {
    for (auto& c : items)
        if (c.name == name) return &c;
    return nullptr;
}

// ---- extraction

namespace {

int perm_sign(std::vector<int> v) {
    int s = 1;
    for (size_t i = 0; i < v.size(); ++i)
        for (size_t j = i + 1; j < v.size(); ++j)
            if (v[i] > v[j]) s = -s;
    return s;
}

bool ends_with(const MatWord& w, const std::string& letter) { return !w.empty() && w.back() == letter; }

}  // namespace

Extraction extract_constraints(const ProblemDefinition& p, const ExtractOptions& opt) {
    Extraction ex;
    ex.jet = build_jet(p, opt.cross_symmetry);
    auto& an = p.ansatz;
    auto& T = *p.table;
    const int n = static_cast<int>(p.independents.size());
    if (n != 3) throw std::runtime_error("extraction needs three independent coordinates");
    if (static_cast<int>(an.theta.size()) != n || an.omega.empty()) throw std::runtime_error("problem has no [ansatz] omega/theta");

    std::map<std::pair<int, int>, Fn> om;
    for (auto& [ij, f] : an.omega) om[ij] = f;
    auto fvec = [&](int i, int j) {
        auto it = om.find({std::min(i, j), std::max(i, j)});
        if (i == j || it == om.end()) return MatrixExpr();
        MatrixExpr m = MatrixExpr::word({it->second->name});
        return i > j ? -m : m;
    };
    auto th = [&](int i, const MatrixExpr& v) {
        return an.theta[i] == "I" ? v : MatrixExpr::word({an.theta[i]}) * v;
    };
    int u = -1;
    for (int i = 0; i < n; ++i)
        if (an.theta[i] == "I") {
            if (u >= 0) throw std::runtime_error("theta has more than one identity coefficient");
            u = i;
        }
    if (u < 0) throw std::runtime_error("theta needs one identity coefficient");
    const std::string xu = "xi_" + p.independents[u]->name;

    // Pullback of Omega: coefficient of dc_i^dc_j is f_ij + theta_i xi_j - theta_j xi_i.
    std::vector<MatrixExpr> piv(n);
    for (int i = 0; i < n; ++i) {
        piv[i] = i == u ? MatrixExpr::word({xu}) : fvec(i, u) + th(i, MatrixExpr::word({xu}));
        if (i != u) ex.xi_pivots.emplace_back("xi_" + p.independents[i]->name, piv[i]);
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (i == u || j == u) continue;
            MatrixExpr e = (fvec(i, j) + th(i, piv[j]) - th(j, piv[i])).normalized(false);
            MatrixExpr free_part, rest;
            for (auto& [w, c] : e.terms()) {
                if (ends_with(w, xu)) free_part.add(MatWord(w.begin(), w.end() - 1), c);
                else rest.add(w, c);
            }
            std::string cov = "d" + p.independents[i]->name + "^d" + p.independents[j]->name;
            Constraint cm;
            cm.name = "commutator";
            cm.sector = "matrix";
            cm.provenance = "Omega " + cov + ", coefficient of " + xu;
            cm.is_matrix = true;
            cm.matrix = free_part;
            if (!free_part.is_zero()) {
                ex.constraints.add(cm);
                ex.commutativity_assumed = free_part.normalized(true).is_zero();
            }
            Constraint cc;
            cc.name = "compatibility";
            cc.sector = "compatibility";
            cc.provenance = "Omega " + cov;
            cc.is_matrix = true;
            cc.matrix = rest.normalized(ex.commutativity_assumed);
            ex.constraints.add(cc);
        }

    // Pullback of dOmega: sum over omega terms of sign * D_k f.
    LieExpr scalar;
    MatrixExpr mat;
    for (auto& [ij, f] : om) {
        int k = 3 - ij.first - ij.second;
        int s = perm_sign({k, ij.first, ij.second});
        Atom ck = p.independents[k];
        for (Atom v : f->args) {
            if (v->role != Role::fibre && v->role != Role::jet) continue;
            LieExpr d = differentiate(LieExpr::letter(f->base()), v);
            scalar += Expr(s) * Expr(T.section_derivative(v, ck)) * d;
        }
        mat += Expr(s) * (MatrixExpr::word({f->name + "_xi"}) * piv[k]);
    }
    scalar = scalar.map_coeffs([&](const Expr& e) { return ex.jet.apply(e, p.ring); });
    mat = mat.normalized(ex.commutativity_assumed);

    MatrixExpr xi_part, leftover;
    for (auto& [w, c] : mat.terms()) {
        if (ends_with(w, xu)) xi_part.add(MatWord(w.begin(), w.end() - 1), c);
        else leftover.add(w, c);
    }
    {
        Constraint c;
        c.name = "xi-sector";
        c.sector = "matrix";
        c.provenance = "dOmega dx^dy^dt, coefficient of " + xu;
        c.is_matrix = true;
        c.matrix = xi_part;
        ex.constraints.add(c);
    }
    // X_xi*Y - Y_xi*X = [Y, X]
    LieExpr brackets;
    MatrixExpr unpaired;
    for (auto& [w, c] : leftover.terms()) {
        bool paired = false;
        if (w.size() == 2 && w[0].size() > 3 && w[0].compare(w[0].size() - 3, 3, "_xi") == 0) {
            std::string x = w[0].substr(0, w[0].size() - 3), y = w[1];
            auto it = leftover.terms().find({y + "_xi", x});
            if (it != leftover.terms().end() && it->second == -c) {
                Fn fx = T.find_function(x), fy = T.find_function(y);
                if (fx && fy) {
                    if (x < y || x == y) brackets += c * bracket(LieExpr::letter(fy->base()), LieExpr::letter(fx->base()));
                    paired = true;
                }
            }
        }
        if (!paired) unpaired.add(w, c);
    }
    if (!unpaired.is_zero()) {
        Constraint c;
        c.name = "xi-unpaired";
        c.sector = "matrix";
        c.provenance = "dOmega dx^dy^dt";
        c.is_matrix = true;
        c.matrix = unpaired;
        ex.constraints.add(c);
    }

    LieExpr total = scalar + brackets;
    ex.total = total;
    std::map<Monomial, LieExpr, MonoGreater> groups;
    for (auto& [w, c] : total.terms())
        for (auto& [m, part] : split_by(c, [](Atom a) { return a->role == Role::section_derivative; }))
            groups[m].add(w, part);
    for (auto& [m, l] : groups) {
        Constraint c;
        c.value = l.normalized(p.ring);
        ex.split.emplace_back(Expr::term(m, Coeff(1)), c.value);
        if (m.empty()) {
            c.name = "closure";
            c.sector = "closure";
            c.provenance = "dOmega dx^dy^dt, free-jet degree 0";
        } else {
            c.name = "coeff[" + m.str() + "]";
            c.sector = "scalar";
            c.provenance = "dOmega dx^dy^dt, monomial " + m.str();
        }
        ex.constraints.add(c);
    }
    return ex;
}

// ---- reference lists and matching

ConstraintSet load_constraint_list(const std::string& path, const ProblemDefinition& p) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    ConstraintSet out;
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        line = line.substr(0, line.find('#'));
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::vector<std::string> parts;
        std::stringstream ss(line);
        for (std::string s; std::getline(ss, s, '|');) {
            size_t b = s.find_first_not_of(" \t\r"), e = s.find_last_not_of(" \t\r");
            parts.push_back(b == std::string::npos ? "" : s.substr(b, e - b + 1));
        }
        try {
            if (parts.size() != 3) throw ParseError("expected 'name | sector | expression'");
            if (parts[1] == "matrix" || parts[1] == "compatibility") {
                Constraint c{parts[0], parts[1], path + ":" + std::to_string(n), true, {}, parse_matrix(parts[2], p.ctx)};
                out.items.push_back(c);
                continue;
            }
            Value v = parse_value(parts[2], p.ctx);
            for (size_t k = 0; k < v.c.size(); ++k) {
                Constraint c;
                c.name = v.vec ? parts[0] + "_" + std::to_string(k + 1) : parts[0];
                c.sector = parts[1];
                c.provenance = path + ":" + std::to_string(n);
                c.value = v.c[k].is_lie ? v.c[k].lie : LieExpr();
                if (!v.c[k].is_lie && !v.c[k].form.is_zero()) throw ParseError("constraint '" + c.name + "' is not Lie-valued");
                c.value = c.value.normalized(p.ring);
                out.items.push_back(c);
            }
        } catch (const std::exception& e) {
            throw ParseError(path + ":" + std::to_string(n) + ": " + e.what());
        }
    }
    return out;
}

std::vector<ConstraintMatch> match_constraints(const ConstraintSet& want, const ConstraintSet& have) {
    std::vector<ConstraintMatch> out;
    for (auto& w : want.items) {
        ConstraintMatch m;
        m.name = w.name;
        for (auto& h : have.items) {
            if (h.is_matrix != w.is_matrix) continue;
            bool same = w.is_matrix ? matrix_equal_up_to_unit(w.matrix, h.matrix) : equal_up_to_unit(w.value, h.value);
            if (same) {
                m.found = true;
                m.matched = h.name;
                break;
            }
        }
        out.push_back(m);
    }
    return out;
}

std::vector<LemmaResidual> verify_lemma_forms(const ConstraintSet& c, const ProblemDefinition& p) {
    if (p.lemma.functions.empty()) throw std::runtime_error("problem has no [lemma] bindings");
    std::vector<LemmaResidual> out;
    for (auto& k : c.items) {
        if (k.is_matrix) continue;
        LieExpr after = substitute_fixpoint(k.value, p.lemma).normalized(p.ring);
        if (!after.is_zero()) out.push_back({k.name, k.value, after});
    }
    return out;
}

// ---- connection components

HFG compose_connection(const ExprMatrix& a, const ExprMatrix& b, const std::array<std::vector<Expr>, 3>& g) {
    size_t n = a.size();
    HFG out;
    out.h.assign(n, Expr());
    out.f.assign(n, Expr());
    out.g.assign(n, Expr());
    for (size_t k = 0; k < n; ++k) {
        out.f[k] = g[1][k];
        out.g[k] = g[0][k];
        for (size_t m = 0; m < n; ++m) {
            out.h[k] += b[k][m] * g[0][m] - a[k][m] * g[1][m];
            out.f[k] -= b[k][m] * g[2][m];
            out.g[k] -= a[k][m] * g[2][m];
        }
    }
    return out;
}

namespace {

std::string matrix_str(const ExprMatrix& m) {
    std::string s = "[";
    for (size_t i = 0; i < m.size(); ++i) {
        s += i ? "; " : "";
        for (size_t j = 0; j < m[i].size(); ++j) s += (j ? " " : "") + m[i][j].str();
    }
    return s + "]";
}

}  // namespace

ConnectionSolve connection_components(const ExprMatrix& a, const ExprMatrix& b, const HFG& target) {
    size_t n = a.size();
    ConnectionSolve out;
    for (auto* m : {&a, &b})
        for (auto& row : *m) {
            if (row.size() != n) throw std::runtime_error("A and B must be square of the same size");
            for (auto& e : row)
                if (!e.is_constant()) throw std::runtime_error("connection solve needs constant A, B");
        }
    // Unknown order (Gamma1, Gamma2, Gamma3), equations (H, F, G).
    size_t N = 3 * n;
    std::vector<std::vector<Coeff>> M(N, std::vector<Coeff>(N));
    std::vector<Expr> rhs(N);
    for (size_t k = 0; k < n; ++k) {
        for (size_t m = 0; m < n; ++m) {
            M[k][m] = b[k][m].constant();
            M[k][n + m] = -a[k][m].constant();
            M[n + k][2 * n + m] = -b[k][m].constant();
            M[2 * n + k][2 * n + m] = -a[k][m].constant();
        }
        M[n + k][n + k] += Coeff(1);
        M[2 * n + k][k] += Coeff(1);
        rhs[k] = target.h[k];
        rhs[n + k] = target.f[k];
        rhs[2 * n + k] = target.g[k];
    }
    bool singular = false;
    for (size_t c = 0; c < N && !singular; ++c) {
        size_t r = c;
        while (r < N && M[r][c].is_zero()) ++r;
        if (r == N) {
            singular = true;
            break;
        }
        std::swap(M[r], M[c]);
        std::swap(rhs[r], rhs[c]);
        Coeff inv = M[c][c].inverse();
        for (auto& v : M[c]) v *= inv;
        rhs[c] = inv * rhs[c];
        for (size_t i = 0; i < N; ++i) {
            if (i == c || M[i][c].is_zero()) continue;
            Coeff f = M[i][c];
            for (size_t j = 0; j < N; ++j) M[i][j] -= f * M[c][j];
            rhs[i] -= f * rhs[c];
        }
    }
    if (!singular) {
        for (size_t k = 0; k < n; ++k)
            for (int s = 0; s < 3; ++s) out.gamma[s].push_back(rhs[s * n + k]);
        out.ok = true;
        return out;
    }
    out.message = "singular system for A = " + matrix_str(a) + ", B = " + matrix_str(b);
    // Gauge Gamma3 = 0: Gamma1 = G, Gamma2 = F, requires H = B G - A F.
    out.gamma[0] = target.g;
    out.gamma[1] = target.f;
    out.gamma[2].assign(n, Expr());
    HFG back = compose_connection(a, b, out.gamma);
    bool same = true;
    for (size_t k = 0; k < n; ++k) same = same && back.h[k] == target.h[k];
    if (same) {
        out.ok = true;
        out.gauge_fixed = true;
        out.message += "; gauge-fixed with Gamma_3 = 0";
    } else {
        out.gamma = {};
        out.message += "; compatibility H = B G - A F fails";
    }
    return out;
}

}  // namespace prolong
