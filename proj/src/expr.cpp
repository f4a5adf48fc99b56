#include "prolongate/expr.hpp"

#include <algorithm>
#include <set>

namespace prolong {

int Monomial::degree() const {
    int d = 0;
    for (auto& [a, k] : f) d += k;
    return d;
}

int Monomial::exponent(Atom a) const {
    for (auto& [b, k] : f)
        if (b == a) return k;
    return 0;
}

bool Monomial::only_parameters() const {
    for (auto& [a, k] : f)
        if (!(a->is_symbol() && a->role == Role::parameter)) return false;
    return true;
}

Monomial Monomial::operator*(const Monomial& o) const {
    Monomial r;
    r.f.reserve(f.size() + o.f.size());
    size_t i = 0, j = 0;
    while (i < f.size() || j < o.f.size()) {
        if (j == o.f.size() || (i < f.size() && atom_cmp(f[i].first, o.f[j].first) < 0)) {
            r.f.push_back(f[i++]);
        } else if (i == f.size() || atom_cmp(o.f[j].first, f[i].first) < 0) {
            r.f.push_back(o.f[j++]);
        } else {
            r.f.emplace_back(f[i].first, f[i].second + o.f[j].second);
            ++i, ++j;
        }
    }
    return r;
}

std::string Monomial::str() const {
    std::string s;
    for (auto& [a, k] : f) {
        if (!s.empty()) s += "*";
        s += a->str();
        if (k != 1) s += "^" + std::to_string(k);
    }
    return s;
}

int mono_cmp(const Monomial& a, const Monomial& b) {
    int da = a.degree(), db = b.degree();
    if (da != db) return da > db ? 1 : -1;
    size_t n = std::min(a.f.size(), b.f.size());
    for (size_t k = 0; k < n; ++k) {
        int c = atom_cmp(a.f[k].first, b.f[k].first);
        if (c != 0) return c < 0 ? 1 : -1;
        if (a.f[k].second != b.f[k].second) return a.f[k].second > b.f[k].second ? 1 : -1;
    }
    if (a.f.size() != b.f.size()) return a.f.size() > b.f.size() ? 1 : -1;
    return 0;
}

void apply_parameter_rules(Monomial& m, Coeff& c) {
    for (bool changed = true; changed;) {
        changed = false;
        for (size_t k = 0; k < m.f.size(); ++k) {
            Atom a = m.f[k].first;
            if (!a->has_square_rule || m.f[k].second < 2) continue;
            int pairs = m.f[k].second / 2;
            m.f[k].second -= 2 * pairs;
            for (int p = 0; p < pairs; ++p) c *= a->sq_coeff;
            if (m.f[k].second == 0) m.f.erase(m.f.begin() + k);
            if (a->sq_target) {
                Monomial t;
                t.f.emplace_back(a->sq_target, pairs);
                m = m * t;
            }
            changed = true;
            break;
        }
    }
}

Expr::Expr(const Coeff& c) {
    if (!c.is_zero()) t_.push_back({Monomial{}, c});
}

Expr::Expr(Atom a) {
    Monomial m;
    m.f.emplace_back(a, 1);
    t_.push_back({std::move(m), Coeff(1)});
}

Expr Expr::term(Monomial m, Coeff c) {
    std::vector<Term> ts;
    ts.push_back({std::move(m), std::move(c)});
    return from_terms(std::move(ts));
}

Expr Expr::from_terms(std::vector<Term> ts) {
    for (auto& t : ts) apply_parameter_rules(t.m, t.c);
    std::sort(ts.begin(), ts.end(), [](const Term& a, const Term& b) { return mono_cmp(a.m, b.m) > 0; });
    Expr e;
    for (auto& t : ts) {
        if (!e.t_.empty() && e.t_.back().m == t.m) {
            e.t_.back().c += t.c;
            if (e.t_.back().c.is_zero()) e.t_.pop_back();
        } else if (!t.c.is_zero()) {
            e.t_.push_back(std::move(t));
        }
    }
    return e;
}

bool Expr::is_constant() const { return t_.empty() || (t_.size() == 1 && t_[0].m.empty()); }

Coeff Expr::constant() const {
    if (!is_constant()) throw std::logic_error("expression is not constant: " + str());
    return t_.empty() ? Coeff(0) : t_[0].c;
}

bool Expr::parameters_only() const {
    for (auto& t : t_)
        if (!t.m.only_parameters()) return false;
    return true;
}

int Expr::degree() const {
    int d = 0;
    for (auto& t : t_) d = std::max(d, t.m.degree());
    return d;
}

std::vector<Atom> Expr::atoms() const {
    std::set<Atom, AtomLess> s;
    for (auto& t : t_)
        for (auto& [a, k] : t.m.f) s.insert(a);
    return {s.begin(), s.end()};
}

bool Expr::contains(Atom a) const {
    for (auto& t : t_)
        if (t.m.exponent(a)) return true;
    return false;
}

Expr Expr::operator-() const {
    Expr r = *this;
    for (auto& t : r.t_) t.c = -t.c;
    return r;
}

Expr& Expr::operator+=(const Expr& o) {
    if (o.t_.empty()) return *this;
    std::vector<Term> out;
    out.reserve(t_.size() + o.t_.size());
    size_t i = 0, j = 0;
    while (i < t_.size() || j < o.t_.size()) {
        int c = i == t_.size() ? -1 : j == o.t_.size() ? 1 : mono_cmp(t_[i].m, o.t_[j].m);
        if (c > 0) {
            out.push_back(std::move(t_[i++]));
        } else if (c < 0) {
            out.push_back(o.t_[j++]);
        } else {
            Coeff s = t_[i].c + o.t_[j].c;
            if (!s.is_zero()) out.push_back({std::move(t_[i].m), std::move(s)});
            ++i, ++j;
        }
    }
    t_ = std::move(out);
    return *this;
}

Expr& Expr::operator-=(const Expr& o) { return *this += -o; }

Expr operator*(const Expr& a, const Expr& b) {
    if (a.t_.empty() || b.t_.empty()) return {};
    std::vector<Term> ts;
    ts.reserve(a.t_.size() * b.t_.size());
    for (auto& x : a.t_)
        for (auto& y : b.t_) ts.push_back({x.m * y.m, x.c * y.c});
    return Expr::from_terms(std::move(ts));
}

Expr operator*(const Coeff& c, const Expr& e) {
    if (c.is_zero()) return {};
    Expr r = e;
    for (auto& t : r.t_) t.c *= c;
    return r;
}

bool operator==(const Expr& a, const Expr& b) {
    if (a.t_.size() != b.t_.size()) return false;
    for (size_t k = 0; k < a.t_.size(); ++k)
        if (!(a.t_[k].m == b.t_[k].m) || !(a.t_[k].c == b.t_[k].c)) return false;
    return true;
}

Expr Expr::pow(int n) const {
    Expr r(1), base = *this;
    for (; n > 0; n >>= 1) {
        if (n & 1) r *= base;
        if (n > 1) base *= base;
    }
    return r;
}

static void append_part(std::string& s, const mpq_class& q, bool imag, const Monomial& m) {
    if (sgn(q) == 0) return;
    bool neg = sgn(q) < 0;
    mpq_class a = abs(q);
    if (s.empty()) {
        if (neg) s += "-";
    } else {
        s += neg ? " - " : " + ";
    }
    std::string body;
    if (a != 1) body = a.get_str();
    if (imag) body += body.empty() ? "i" : "*i";
    if (!m.empty()) body += (body.empty() ? "" : "*") + m.str();
    if (body.empty()) body = "1";
    s += body;
}

std::string Expr::str() const {
    if (t_.empty()) return "0";
    std::string s;
    for (auto& t : t_) {
        append_part(s, t.c.re, false, t.m);
        append_part(s, t.c.im, true, t.m);
    }
    return s;
}

Expr differentiate(const Expr& e, Atom s) {
    std::vector<Term> out;
    for (auto& t : e.terms()) {
        for (size_t k = 0; k < t.m.f.size(); ++k) {
            auto [a, n] = t.m.f[k];
            Atom da = nullptr;
            if (a == s) {
                da = nullptr;
            } else if (a->is_function()) {
                da = a->fn->derivative(a, s);
                if (!da) continue;
            } else {
                continue;
            }
            Monomial m = t.m;
            if (n == 1) m.f.erase(m.f.begin() + k);
            else m.f[k].second = n - 1;
            if (da) {
                Monomial d;
                d.f.emplace_back(da, 1);
                m = m * d;
            }
            out.push_back({std::move(m), t.c * Coeff(n)});
        }
    }
    return Expr::from_terms(std::move(out));
}

Expr map_terms(const Expr& e, const std::function<Expr(const Monomial&, const Coeff&)>& f) {
    Expr r;
    for (auto& t : e.terms()) r += f(t.m, t.c);
    return r;
}

namespace {

struct Substituter {
    const Bindings& b;
    std::map<Atom, Expr> cache;

    Expr atom_value(Atom a) {
        auto it = cache.find(a);
        if (it != cache.end()) return it->second;
        Expr v(a);
        if (a->is_symbol()) {
            auto s = b.symbols.find(a);
            if (s != b.symbols.end()) v = s->second;
        } else {
            auto f = b.functions.find(a->fn);
            if (f != b.functions.end()) {
                v = f->second;
                for (size_t k = 0; k < a->orders.size(); ++k)
                    for (int j = 0; j < a->orders[k]; ++j) v = differentiate(v, a->fn->args[k]);
            }
        }
        cache.emplace(a, v);
        return v;
    }
};

}  // namespace

Expr substitute(const Expr& e, const Bindings& b) {
    for (auto& [a, v] : b.symbols)
        if (a->is_function()) throw std::invalid_argument("cannot bind function instance '" + a->str() + "'; bind the base function");
    Substituter sub{b, {}};
    Expr r;
    for (auto& t : e.terms()) {
        Expr p(t.c);
        for (auto& [a, k] : t.m.f) {
            p *= sub.atom_value(a).pow(k);
            if (p.is_zero()) break;
        }
        r += p;
    }
    return r;
}

static bool bound_in(const Expr& e, const Bindings& b) {
    for (auto& t : e.terms())
        for (auto& [a, k] : t.m.f)
            if (a->is_symbol() ? b.symbols.count(a) > 0 : b.functions.count(a->fn) > 0) return true;
    return false;
}

Expr substitute_fixpoint(const Expr& e, const Bindings& b, int max_rounds) {
    // Cycle detection on the binding graph.
    std::map<std::string, std::set<std::string>> edges;
    auto deps = [&](const std::string& from, const Expr& v) {
        for (auto a : v.atoms()) {
            if (a->is_symbol() && b.symbols.count(a)) edges[from].insert(a->name);
            if (a->is_function() && b.functions.count(a->fn)) edges[from].insert(a->fn->name);
        }
    };
    for (auto& [a, v] : b.symbols) deps(a->name, v);
    for (auto& [f, v] : b.functions) deps(f->name, v);
    std::map<std::string, int> state;
    std::function<void(const std::string&, std::vector<std::string>&)> dfs = [&](const std::string& n, std::vector<std::string>& path) {
        state[n] = 1;
        path.push_back(n);
        for (auto& m : edges[n]) {
            if (state[m] == 1) {
                std::string msg = "cyclic binding: ";
                for (auto& p : path) msg += p + " -> ";
                throw std::invalid_argument(msg + m);
            }
            if (state[m] == 0) dfs(m, path);
        }
        path.pop_back();
        state[n] = 2;
    };
    for (auto& [n, _] : edges) {
        std::vector<std::string> path;
        if (state[n] == 0) dfs(n, path);
    }
    Expr r = e;
    for (int k = 0; k < max_rounds && bound_in(r, b); ++k) r = substitute(r, b);
    return r;
}

std::map<Monomial, Expr, MonoGreater> split_by(const Expr& e, const std::function<bool(Atom)>& pred) {
    std::map<Monomial, std::vector<Term>, MonoGreater> acc;
    for (auto& t : e.terms()) {
        Monomial key, rest;
        for (auto& f : t.m.f) (pred(f.first) ? key : rest).f.push_back(f);
        acc[key].push_back({std::move(rest), t.c});
    }
    std::map<Monomial, Expr, MonoGreater> out;
    for (auto& [k, ts] : acc) {
        Expr v = Expr::from_terms(std::move(ts));
        if (!v.is_zero()) out.emplace(k, std::move(v));
    }
    return out;
}

bool is_unit(const Expr& e) {
    if (e.terms().size() != 1 || !e.terms()[0].m.only_parameters()) return false;
    Expr e4 = e.pow(4);
    return e4.is_constant() && !e4.is_zero();
}

Expr unit_inverse(const Expr& e) {
    if (!is_unit(e)) throw std::domain_error("not a unit: " + e.str());
    return e.pow(4).constant().inverse() * e.pow(3);
}

Expr dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

Expr metric_dot(const Metric& s, const Vec3& a, const Vec3& b) {
    return s.diag[0] * a[0] * b[0] + s.diag[1] * a[1] * b[1] + s.diag[2] * a[2] * b[2];
}

Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

Vec3 apply_metric(const Metric& s, const Vec3& a) { return {s.diag[0] * a[0], s.diag[1] * a[1], s.diag[2] * a[2]}; }

}  // namespace prolong
