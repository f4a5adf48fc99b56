#pragma once

#include "prolongate/ring.hpp"

#include <map>
#include <vector>

namespace prolong {

// Strictly increasing list of covector symbols.
using CovKey = std::vector<Atom>;
struct CovKeyLess {
    bool operator()(const CovKey& a, const CovKey& b) const;
};

// Sign of the permutation sorting the concatenation a|b, 0 if they share a symbol.
int merge_sign(const CovKey& a, const CovKey& b, CovKey& out);

class Form {
public:
    using Map = std::map<CovKey, Expr, CovKeyLess>;

    explicit Form(int degree = 0) : deg_(degree) {}
    static Form scalar(const Expr& e);
    static Form covector(Atom a);
    static Form monomial(const CovKey& k, const Expr& c);

    int degree() const { return deg_; }
    const Map& terms() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    Expr coefficient(const CovKey& k) const;
    Expr as_scalar() const;  // degree 0 only

    void add(const CovKey& k, const Expr& c);
    Form& operator+=(const Form& o);
    Form& operator-=(const Form& o);
    Form operator-() const;
    friend Form operator+(Form a, const Form& b) { return a += b; }
    friend Form operator-(Form a, const Form& b) { return a -= b; }
    friend Form operator*(const Expr& e, const Form& f);
    friend bool operator==(const Form& a, const Form& b);

    Form map_coeffs(const std::function<Expr(const Expr&)>& f) const;
    Form normalized(const Ring& r) const;
    std::string str() const;

private:
    int deg_;
    Map c_;
};

Form wedge(const Form& a, const Form& b);
Form exterior_derivative(const Form& a, const std::vector<Atom>& chart);

std::string key_str(const CovKey& k);

}  // namespace prolong
