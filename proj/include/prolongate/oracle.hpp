#pragma once

#include "prolongate/targets.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>

namespace prolong {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;

// SplitMix64 (Steele, Lea, Flood): 64-bit state, one multiply-xorshift output.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : s_(seed) {}
    std::uint64_t next();
    double uniform(double lo = -1.0, double hi = 1.0);  // 53-bit resolution
    bool coin() { return next() >> 63; }

private:
    std::uint64_t s_;
};

struct OracleOptions {
    std::uint64_t seed = 1;
    int points = 100;
    double tol = 1e-9;
    bool complex_samples = false;  // imaginary parts on free variables
    int rep_dim = 4;               // size of the random Lie algebra representation
};

// Random polynomial of total degree <= 2 in n arguments.
struct Poly {
    std::vector<std::pair<std::vector<int>, cplx>> terms;
    cplx eval(const std::vector<cplx>& x, const std::vector<int>& orders) const;  // derivative then evaluate
};

struct EvaluationPoint {
    std::map<Atom, cplx, AtomLess> values;
    std::map<Fn, Poly> scalar_functions;
    std::map<Fn, std::map<Atom, Poly, AtomLess>> lie_functions;  // per generator
    std::map<Atom, CMatrix, AtomLess> generators;                // random representation
};

struct Num {
    cplx v;
    double scale = 0;  // sum of |term|
};

struct OracleVerdict {
    std::string target;
    int n = 0;
    double tol = 0;
    double max_abs = 0;  // max |value| / (1 + |largest term|)
    bool pass = true;
    std::string witness;
};

class Oracle {
public:
    Oracle(const ProblemDefinition& p, OracleOptions opt);

    const OracleOptions& options() const { return opt_; }
    // Point k depends only on (seed, k).
    EvaluationPoint point(int k) const;

    Num eval(const Expr& e, const EvaluationPoint& pt) const;
    // Lie elements are evaluated in the random matrix representation; function
    // letters expand to sum_g p_g(args) M_g.
    CMatrix eval(const LieExpr& l, const EvaluationPoint& pt, double& scale) const;

    // residual(pt) returns a scaled magnitude; the verdict fails when it reaches tol.
    OracleVerdict zero_test(const std::string& name, const std::function<double(const EvaluationPoint&)>& residual) const;
    OracleVerdict test(const std::string& name, const Expr& e) const;
    OracleVerdict test(const std::string& name, const LieExpr& e) const;
    OracleVerdict test(const std::string& name, const Form& f) const;

    std::string describe(const EvaluationPoint& pt) const;

private:
    cplx instance_value(Atom inst, const Poly& p, const EvaluationPoint& pt) const;

    const ProblemDefinition* p_;
    OracleOptions opt_;
};

// Numeric images of a morphism: sl2 as zeta*kappa*sigma_1, zeta*kappa*sigma_2,
// zeta*sigma_3 and the loop algebra as T(a,m) = lambda^m sigma_a / 2.
CMatrix numeric_element(const TargetElement& e, const TargetAlgebra& alg, const Oracle& o, const EvaluationPoint& pt, cplx lambda);
std::map<Atom, CMatrix, AtomLess> numeric_images(const Morphism& m, const Oracle& o, const EvaluationPoint& pt, cplx lambda);
CMatrix eval_in(const LieExpr& l, const std::map<Atom, CMatrix, AtomLess>& gens, const Oracle& o, const EvaluationPoint& pt,
                double& scale);

}  // namespace prolong
