#include "prolongate/ring.hpp"

namespace prolong {

Expr Ring::normalize(const Expr& e) const {
    if (!quotient || rewrites.empty()) return e;
    Expr cur = e;
    for (bool changed = true; changed;) {
        changed = false;
        std::vector<Term> keep;
        Expr add;
        for (auto& t : cur.terms()) {
            const RewriteRule* hit = nullptr;
            for (auto& r : rewrites)
                if (t.m.exponent(r.var) >= 2) { hit = &r; break; }
            if (!hit) {
                keep.push_back(t);
                continue;
            }
            Monomial rest = t.m;
            for (auto it = rest.f.begin(); it != rest.f.end(); ++it)
                if (it->first == hit->var) {
                    it->second -= 2;
                    if (it->second == 0) rest.f.erase(it);
                    break;
                }
            add += Expr::term(rest, t.c) * hit->replacement;
            changed = true;
        }
        cur = Expr::from_terms(std::move(keep)) + add;
    }
    return cur;
}

std::vector<Expr> Ring::ideal() const {
    std::vector<Expr> out;
    for (auto& r : rewrites) out.push_back(Expr(r.var).pow(2) - r.replacement);
    for (auto& l : relations) out.push_back(l.poly);
    return out;
}

}  // namespace prolong
