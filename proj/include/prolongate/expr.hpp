#pragma once

#include "prolongate/symbols.hpp"

#include <array>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace prolong {

// Power product, factors sorted by atom order, exponents > 0.
struct Monomial {
    std::vector<std::pair<Atom, int>> f;

    int degree() const;
    int exponent(Atom a) const;
    bool empty() const { return f.empty(); }
    bool only_parameters() const;
    Monomial operator*(const Monomial& o) const;  // no parameter rules applied
    std::string str() const;
    friend bool operator==(const Monomial& a, const Monomial& b) { return a.f == b.f; }
};

// Graded lexicographic: 1 if a > b, -1 if a < b.
int mono_cmp(const Monomial& a, const Monomial& b);
struct MonoGreater {
    bool operator()(const Monomial& a, const Monomial& b) const { return mono_cmp(a, b) > 0; }
};

struct Term {
    Monomial m;
    Coeff c;
};

// Canonical expanded polynomial; terms strictly decreasing in term order,
// no zero coefficients, parameter square rules applied.
class Expr {
public:
    Expr() = default;
    Expr(long v) : Expr(Coeff(v)) {}
    Expr(const Coeff& c);
    Expr(Atom a);
    static Expr term(Monomial m, Coeff c);

    const std::vector<Term>& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    bool is_constant() const;
    // Constant coefficient value (throws unless is_constant()).
    Coeff constant() const;
    // Only parameter atoms occur.
    bool parameters_only() const;
    int degree() const;
    std::vector<Atom> atoms() const;
    bool contains(Atom a) const;

    Expr operator-() const;
    Expr& operator+=(const Expr& o);
    Expr& operator-=(const Expr& o);
    Expr& operator*=(const Expr& o) { return *this = *this * o; }
    friend Expr operator+(Expr a, const Expr& b) { return a += b; }
    friend Expr operator-(Expr a, const Expr& b) { return a -= b; }
    friend Expr operator*(const Expr& a, const Expr& b);
    friend Expr operator*(const Coeff& c, const Expr& e);
    friend bool operator==(const Expr& a, const Expr& b);
    Expr pow(int n) const;

    std::string str() const;

    // Build from unsorted terms.
    static Expr from_terms(std::vector<Term> ts);

private:
    std::vector<Term> t_;
};

// Applies parameter square rules to a monomial; multiplies c accordingly.
void apply_parameter_rules(Monomial& m, Coeff& c);

Expr differentiate(const Expr& e, Atom s);

// Simultaneous substitution. Function bindings replace the base function;
// derivative instances become derivatives of the replacement.
struct Bindings {
    std::map<Atom, Expr, AtomLess> symbols;
    std::map<Fn, Expr> functions;
};
Expr substitute(const Expr& e, const Bindings& b);

// Iterates substitution to a fixed point; throws on a cyclic binding.
Expr substitute_fixpoint(const Expr& e, const Bindings& b, int max_rounds = 64);

// Applies f to every coefficient-monomial pair, summing the results.
Expr map_terms(const Expr& e, const std::function<Expr(const Monomial&, const Coeff&)>& f);

// Splits e = sum_k key_k * part_k where key_k is the sub-monomial of atoms
// selected by pred.
std::map<Monomial, Expr, MonoGreater> split_by(const Expr& e, const std::function<bool(Atom)>& pred);

// Unit test in the parameter ring: single term with constant coefficient
// and parameter atoms whose fourth power is a constant.
bool is_unit(const Expr& e);
Expr unit_inverse(const Expr& e);

using Vec3 = std::array<Expr, 3>;

struct Metric {
    Vec3 diag{Expr(1), Expr(1), Expr(1)};
};

Expr dot(const Vec3& a, const Vec3& b);
Expr metric_dot(const Metric& s, const Vec3& a, const Vec3& b);
Vec3 cross(const Vec3& a, const Vec3& b);
Vec3 apply_metric(const Metric& s, const Vec3& a);

}  // namespace prolong
