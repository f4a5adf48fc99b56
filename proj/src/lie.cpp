#include "prolongate/lie.hpp"

#include <mutex>
#include <set>

namespace prolong {

bool word_lex_less(const Word& a, const Word& b) {
    size_t n = std::min(a.size(), b.size());
    for (size_t k = 0; k < n; ++k) {
        int c = atom_cmp(a[k], b[k]);
        if (c != 0) return c < 0;
    }
    return a.size() < b.size();
}

bool WordLess::operator()(const Word& a, const Word& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    return word_lex_less(a, b);
}

bool is_lyndon(const Word& w) {
    if (w.empty()) return false;
    for (size_t k = 1; k < w.size(); ++k) {
        Word suf(w.begin() + k, w.end());
        if (!word_lex_less(w, suf)) return false;
    }
    return true;
}

std::pair<Word, Word> standard_factorization(const Word& w) {
    for (size_t k = 1; k < w.size(); ++k) {
        Word v(w.begin() + k, w.end());
        if (is_lyndon(v)) return {Word(w.begin(), w.begin() + k), v};
    }
    throw std::logic_error("standard factorization of a word of length < 2");
}

std::string bracketing_str(const Word& w) {
    if (w.size() == 1) return w[0]->str();
    auto [u, v] = standard_factorization(w);
    return "[" + bracketing_str(u) + "," + bracketing_str(v) + "]";
}

std::vector<Word> lyndon_words(const std::vector<Atom>& alphabet, int length) {
    // Duval's generation in lexicographic order, filtered by length.
    std::vector<Word> out;
    int n = static_cast<int>(alphabet.size());
    if (n == 0 || length <= 0) return out;
    std::vector<int> w{-1};
    while (!w.empty()) {
        ++w.back();
        if (static_cast<int>(w.size()) == length) {
            Word word;
            for (int i : w) word.push_back(alphabet[i]);
            out.push_back(word);
        }
        int m = static_cast<int>(w.size());
        while (static_cast<int>(w.size()) < length) w.push_back(w[w.size() - m]);
        while (!w.empty() && w.back() == n - 1) w.pop_back();
    }
    return out;
}

namespace {

std::mutex memo_mu;
std::map<std::pair<Word, Word>, FreeLie> memo;

void accumulate(FreeLie& acc, const FreeLie& x, const Coeff& s) {
    for (auto& [w, c] : x) {
        auto& slot = acc[w];
        slot += s * c;
        if (slot.is_zero()) acc.erase(w);
    }
}

FreeLie compute_bracket(const Word& u, const Word& v) {
    FreeLie r;
    if (u == v) return r;
    if (word_lex_less(v, u)) {
        accumulate(r, lyndon_bracket(v, u), Coeff(-1));
        return r;
    }
    Word uv = u;
    uv.insert(uv.end(), v.begin(), v.end());
    if (u.size() == 1) {
        r[uv] = Coeff(1);
        return r;
    }
    auto [u1, u2] = standard_factorization(u);
    if (!word_lex_less(u2, v)) {
        r[uv] = Coeff(1);
        return r;
    }
    // [[u1,u2],v] = [u1,[u2,v]] - [u2,[u1,v]]
    for (auto& [w, c] : lyndon_bracket(u2, v)) accumulate(r, lyndon_bracket(u1, w), c);
    for (auto& [w, c] : lyndon_bracket(u1, v)) accumulate(r, lyndon_bracket(u2, w), -c);
    return r;
}

}  // namespace

FreeLie lyndon_bracket(const Word& u, const Word& v) {
    auto key = std::make_pair(u, v);
    {
        std::lock_guard<std::mutex> lock(memo_mu);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
    }
    FreeLie r = compute_bracket(u, v);
    std::lock_guard<std::mutex> lock(memo_mu);
    memo.emplace(std::move(key), r);
    return r;
}

LieExpr LieExpr::letter(Atom a) {
    LieExpr l;
    l.add({a}, Expr(1));
    return l;
}

LieExpr LieExpr::word(const Word& w, const Expr& c) {
    if (!is_lyndon(w)) throw std::invalid_argument("not a Lyndon word");
    LieExpr l;
    l.add(w, c);
    return l;
}

Expr LieExpr::coefficient(const Word& w) const {
    auto it = t_.find(w);
    return it == t_.end() ? Expr() : it->second;
}

std::vector<Atom> LieExpr::letters() const {
    std::set<Atom, AtomLess> s;
    for (auto& [w, c] : t_) s.insert(w.begin(), w.end());
    return {s.begin(), s.end()};
}

void LieExpr::add(const Word& w, const Expr& c) {
    if (c.is_zero()) return;
    auto it = t_.find(w);
    if (it == t_.end()) {
        t_.emplace(w, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) t_.erase(it);
    }
}

LieExpr& LieExpr::operator+=(const LieExpr& o) {
    for (auto& [w, c] : o.t_) add(w, c);
    return *this;
}

LieExpr LieExpr::operator-() const {
    LieExpr r = *this;
    for (auto& [w, c] : r.t_) c = -c;
    return r;
}

LieExpr& LieExpr::operator-=(const LieExpr& o) { return *this += -o; }

LieExpr operator*(const Expr& e, const LieExpr& l) {
    LieExpr r;
    for (auto& [w, c] : l.t_) r.add(w, e * c);
    return r;
}

bool operator==(const LieExpr& a, const LieExpr& b) {
    if (a.t_.size() != b.t_.size()) return false;
    auto i = a.t_.begin();
    for (auto j = b.t_.begin(); j != b.t_.end(); ++i, ++j)
        if (i->first != j->first || !(i->second == j->second)) return false;
    return true;
}

LieExpr LieExpr::map_coeffs(const std::function<Expr(const Expr&)>& f) const {
    LieExpr r;
    for (auto& [w, c] : t_) r.add(w, f(c));
    return r;
}

LieExpr LieExpr::normalized(const Ring& ring) const {
    return map_coeffs([&](const Expr& e) { return ring.normalize(e); });
}

std::string LieExpr::str() const {
    if (t_.empty()) return "0";
    std::string s;
    for (auto& [w, c] : t_) {
        std::string b = bracketing_str(w);
        bool neg = c.terms().size() == 1 && c.terms()[0].c.is_real() && sgn(c.terms()[0].c.re) < 0;
        Expr a = neg ? -c : c;
        std::string body;
        if (a == Expr(1)) body = b;
        else if (a.terms().size() == 1) body = a.str() + "*" + b;
        else body = "(" + a.str() + ")*" + b;
        if (s.empty()) s = neg ? "-" + body : body;
        else s += (neg ? " - " : " + ") + body;
    }
    return s;
}

LieExpr bracket(const LieExpr& a, const LieExpr& b) {
    LieExpr r;
    for (auto& [wa, ca] : a.terms())
        for (auto& [wb, cb] : b.terms()) {
            Expr c = ca * cb;
            for (auto& [w, k] : lyndon_bracket(wa, wb)) r.add(w, k * c);
        }
    return r;
}

LieExpr differentiate(const LieExpr& l, Atom s) {
    LieExpr r;
    for (auto& [w, c] : l.terms()) {
        r.add(w, differentiate(c, s));
        for (size_t k = 0; k < w.size(); ++k) {
            Atom a = w[k];
            if (!a->is_function()) continue;
            Atom da = a->fn->derivative(a, s);
            if (!da) continue;
            // Product rule: replace the letter at position k only.
            size_t pos = 0;
            auto letter_at = [&](Atom x) {
                LieExpr out = (pos == k) ? LieExpr::letter(da) : LieExpr::letter(x);
                ++pos;
                return out;
            };
            r += c * eval_word<LieExpr>(w, letter_at, [](const LieExpr& x, const LieExpr& y) { return bracket(x, y); });
        }
    }
    return r;
}

namespace {

struct LieSubstituter {
    const LieBindings& b;
    std::map<Atom, LieExpr> cache;

    LieExpr value(Atom a) {
        auto it = cache.find(a);
        if (it != cache.end()) return it->second;
        LieExpr v = LieExpr::letter(a);
        if (a->is_function()) {
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

LieExpr substitute(const LieExpr& l, const LieBindings& b) {
    LieSubstituter sub{b, {}};
    LieExpr r;
    for (auto& [w, c] : l.terms()) {
        Expr cc = substitute(c, b.scalars);
        if (cc.is_zero()) continue;
        LieExpr v = eval_word<LieExpr>(
            w, [&](Atom a) { return sub.value(a); }, [](const LieExpr& x, const LieExpr& y) { return bracket(x, y); });
        r += cc * v;
    }
    return r;
}

LieExpr substitute_fixpoint(const LieExpr& l, const LieBindings& b, int max_rounds) {
    auto bound = [&](const LieExpr& x) {
        for (auto a : x.letters())
            if (a->is_function() && b.functions.count(a->fn)) return true;
        return false;
    };
    // Cycle check on Lie function bindings.
    for (auto& [f, v] : b.functions) {
        std::set<Fn> seen{f};
        std::vector<Fn> stack;
        for (auto a : v.letters())
            if (a->is_function() && b.functions.count(a->fn)) stack.push_back(a->fn);
        while (!stack.empty()) {
            Fn g = stack.back();
            stack.pop_back();
            if (g == f) throw std::invalid_argument("cyclic binding through '" + f->name + "'");
            if (!seen.insert(g).second) continue;
            for (auto a : b.functions.at(g).letters())
                if (a->is_function() && b.functions.count(a->fn)) stack.push_back(a->fn);
        }
    }
    LieExpr r = substitute(l, b);
    for (int k = 0; k < max_rounds && bound(r); ++k) r = substitute(r, b);
    return r;
}

LieExpr make_monic(const LieExpr& l) {
    if (l.is_zero()) return l;
    const Expr& c = l.terms().begin()->second;
    if (!is_unit(c)) return l;
    return unit_inverse(c) * l;
}

bool equal_up_to_unit(const LieExpr& a, const LieExpr& b) {
    if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
    if (a.terms().size() != b.terms().size()) return false;
    const Expr& ca = a.terms().begin()->second;
    const Expr& cb = b.terms().begin()->second;
    if (a.terms().begin()->first != b.terms().begin()->first) return false;
    if (!is_unit(cb)) return false;
    Expr u = ca * unit_inverse(cb);
    if (!is_unit(u)) return false;
    return a == u * b;
}

}  // namespace prolong
