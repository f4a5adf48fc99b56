#include "prolongate/forms.hpp"

#include <stdexcept>

namespace prolong {

bool CovKeyLess::operator()(const CovKey& a, const CovKey& b) const {
    size_t n = std::min(a.size(), b.size());
    for (size_t k = 0; k < n; ++k) {
        int c = atom_cmp(a[k], b[k]);
        if (c != 0) return c < 0;
    }
    return a.size() < b.size();
}

int merge_sign(const CovKey& a, const CovKey& b, CovKey& out) {
    out.clear();
    out.reserve(a.size() + b.size());
    size_t i = 0, j = 0;
    long inversions = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size()) {
            out.push_back(a[i++]);
            continue;
        }
        if (i == a.size()) {
            out.push_back(b[j++]);
            continue;
        }
        int c = atom_cmp(a[i], b[j]);
        if (c == 0) return 0;
        if (c < 0) {
            out.push_back(a[i++]);
        } else {
            inversions += static_cast<long>(a.size() - i);
            out.push_back(b[j++]);
        }
    }
    return inversions % 2 ? -1 : 1;
}

std::string key_str(const CovKey& k) {
    std::string s;
    for (auto a : k) {
        if (!s.empty()) s += "^";
        s += "d" + a->name;
    }
    return s;
}

Form Form::scalar(const Expr& e) {
    Form f(0);
    f.add({}, e);
    return f;
}

Form Form::covector(Atom a) {
    Form f(1);
    f.add({a}, Expr(1));
    return f;
}

Form Form::monomial(const CovKey& k, const Expr& c) {
    Form f(static_cast<int>(k.size()));
    f.add(k, c);
    return f;
}

Expr Form::coefficient(const CovKey& k) const {
    auto it = c_.find(k);
    return it == c_.end() ? Expr() : it->second;
}

Expr Form::as_scalar() const {
    if (deg_ != 0) throw std::logic_error("form of degree " + std::to_string(deg_) + " used as a scalar");
    return coefficient({});
}

void Form::add(const CovKey& k, const Expr& c) {
    if (c.is_zero()) return;
    if (static_cast<int>(k.size()) != deg_) {
        if (!c_.empty()) throw std::logic_error("adding forms of different degree");
        deg_ = static_cast<int>(k.size());
    }
    auto it = c_.find(k);
    if (it == c_.end()) {
        c_.emplace(k, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) c_.erase(it);
    }
}

Form& Form::operator+=(const Form& o) {
    if (o.c_.empty()) return *this;
    if (c_.empty()) deg_ = o.deg_;
    if (deg_ != o.deg_) throw std::logic_error("adding forms of degree " + std::to_string(deg_) + " and " + std::to_string(o.deg_));
    for (auto& [k, v] : o.c_) add(k, v);
    return *this;
}

Form Form::operator-() const {
    Form r = *this;
    for (auto& [k, v] : r.c_) v = -v;
    return r;
}

Form& Form::operator-=(const Form& o) { return *this += -o; }

Form operator*(const Expr& e, const Form& f) {
    Form r(f.deg_);
    for (auto& [k, v] : f.c_) r.add(k, e * v);
    return r;
}

bool operator==(const Form& a, const Form& b) {
    if (a.c_.size() != b.c_.size()) return false;
    auto i = a.c_.begin();
    for (auto j = b.c_.begin(); j != b.c_.end(); ++i, ++j)
        if (i->first != j->first || !(i->second == j->second)) return false;
    return true;
}

Form Form::map_coeffs(const std::function<Expr(const Expr&)>& f) const {
    Form r(deg_);
    for (auto& [k, v] : c_) r.add(k, f(v));
    return r;
}

Form Form::normalized(const Ring& ring) const {
    return map_coeffs([&](const Expr& e) { return ring.normalize(e); });
}

std::string Form::str() const {
    if (c_.empty()) return "0";
    std::string s;
    for (auto& [k, v] : c_) {
        if (!s.empty()) s += " + ";
        if (k.empty()) {
            s += "(" + v.str() + ")";
        } else if (v == Expr(1)) {
            s += key_str(k);
        } else {
            s += "(" + v.str() + ")*" + key_str(k);
        }
    }
    return s;
}

Form wedge(const Form& a, const Form& b) {
    Form r(a.degree() + b.degree());
    CovKey k;
    for (auto& [ka, va] : a.terms())
        for (auto& [kb, vb] : b.terms()) {
            int s = merge_sign(ka, kb, k);
            if (s == 0) continue;
            Expr c = va * vb;
            r.add(k, s > 0 ? c : -c);
        }
    return r;
}

Form exterior_derivative(const Form& a, const std::vector<Atom>& chart) {
    Form r(a.degree() + 1);
    CovKey k;
    for (auto& [key, v] : a.terms())
        for (auto s : chart) {
            Expr dv = differentiate(v, s);
            if (dv.is_zero()) continue;
            int sg = merge_sign({s}, key, k);
            if (sg == 0) continue;
            r.add(k, sg > 0 ? dv : -dv);
        }
    return r;
}

}  // namespace prolong
