#pragma once

#include "prolongate/ring.hpp"

#include <functional>
#include <map>
#include <vector>

namespace prolong {

// Letters are Lie generators (role lie_generator) or instances of
// Lie-valued abstract functions; ordered by atom_cmp.
using Word = std::vector<Atom>;

// Lexicographic, a proper prefix is smaller.
bool word_lex_less(const Word& a, const Word& b);
// Display order: length first, then lexicographic.
struct WordLess {
    bool operator()(const Word& a, const Word& b) const;
};

bool is_lyndon(const Word& w);
// w = u v with v the longest proper Lyndon suffix. Requires |w| >= 2.
std::pair<Word, Word> standard_factorization(const Word& w);
std::string bracketing_str(const Word& w);
// All Lyndon words of the given length over the sorted alphabet.
std::vector<Word> lyndon_words(const std::vector<Atom>& alphabet, int length);

using FreeLie = std::map<Word, Coeff, WordLess>;

// [P_u, P_v] in the Lyndon basis, for Lyndon words u, v. Memoized.
FreeLie lyndon_bracket(const Word& u, const Word& v);

// Lie element with Expr coefficients on Lyndon words.
class LieExpr {
public:
    using Map = std::map<Word, Expr, WordLess>;

    LieExpr() = default;
    static LieExpr letter(Atom a);
    static LieExpr word(const Word& lyndon, const Expr& c = Expr(1));

    const Map& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    Expr coefficient(const Word& w) const;
    std::vector<Atom> letters() const;

    void add(const Word& w, const Expr& c);
    LieExpr& operator+=(const LieExpr& o);
    LieExpr& operator-=(const LieExpr& o);
    LieExpr operator-() const;
    friend LieExpr operator+(LieExpr a, const LieExpr& b) { return a += b; }
    friend LieExpr operator-(LieExpr a, const LieExpr& b) { return a -= b; }
    friend LieExpr operator*(const Expr& e, const LieExpr& l);
    friend bool operator==(const LieExpr& a, const LieExpr& b);

    LieExpr map_coeffs(const std::function<Expr(const Expr&)>& f) const;
    LieExpr normalized(const Ring& r) const;
    std::string str() const;

private:
    Map t_;
};

LieExpr bracket(const LieExpr& a, const LieExpr& b);

// Evaluates the standard bracketing of a Lyndon word in a target algebra.
template <class T, class Letter, class Br>
T eval_word(const Word& w, const Letter& letter, const Br& br) {
    if (w.size() == 1) return letter(w[0]);
    auto [u, v] = standard_factorization(w);
    T a = eval_word<T>(u, letter, br);  // left to right: letter() may be stateful
    T b = eval_word<T>(v, letter, br);
    return br(a, b);
}

// Derivative w.r.t. a scalar symbol: coefficients and Lie-valued function letters.
LieExpr differentiate(const LieExpr& l, Atom s);

struct LieBindings {
    Bindings scalars;
    std::map<Fn, LieExpr> functions;
};
LieExpr substitute(const LieExpr& l, const LieBindings& b);
LieExpr substitute_fixpoint(const LieExpr& l, const LieBindings& b, int max_rounds = 16);

// Leading coefficient normalization: divides by the first coefficient when it is a unit.
LieExpr make_monic(const LieExpr& l);
// a = u b for a unit u.
bool equal_up_to_unit(const LieExpr& a, const LieExpr& b);

}  // namespace prolong
