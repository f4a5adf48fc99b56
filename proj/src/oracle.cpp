#include "prolongate/oracle.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace prolong {

std::uint64_t SplitMix64::next() {
    std::uint64_t z = (s_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

double SplitMix64::uniform(double lo, double hi) {
    double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

cplx Poly::eval(const std::vector<cplx>& x, const std::vector<int>& orders) const {
    cplx sum = 0;
    for (auto& [e, c] : terms) {
        cplx t = c;
        for (size_t i = 0; i < e.size() && t != cplx(0); ++i) {
            int o = i < orders.size() ? orders[i] : 0;
            if (e[i] < o) {
                t = 0;
                break;
            }
            for (int k = 0; k < o; ++k) t *= double(e[i] - k);
            t *= std::pow(x[i], e[i] - o);
        }
        sum += t;
    }
    return sum;
}

namespace {

Poly random_poly(size_t n, SplitMix64& rng) {
    Poly p;
    std::vector<int> e(n, 0);
    p.terms.push_back({e, rng.uniform()});
    for (size_t i = 0; i < n; ++i) {
        e.assign(n, 0);
        e[i] = 1;
        p.terms.push_back({e, rng.uniform()});
    }
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i; j < n; ++j) {
            e.assign(n, 0);
            ++e[i];
            ++e[j];
            p.terms.push_back({e, rng.uniform()});
        }
    return p;
}

double max_abs(const CMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

Oracle::Oracle(const ProblemDefinition& p, OracleOptions opt) : p_(&p), opt_(opt) {}

EvaluationPoint Oracle::point(int k) const {
    SplitMix64 rng(opt_.seed + 0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(k + 1));
    auto& T = *p_->table;
    EvaluationPoint pt;
    auto draw = [&]() { return cplx(rng.uniform(), opt_.complex_samples ? rng.uniform() : 0.0); };

    auto syms = T.symbols();
    for (Atom a : syms) {
        if (a->role != Role::parameter) continue;
        if (const Coeff* v = T.value(a->name)) pt.values[a] = v->to_complex();
        else if (a->has_square_rule && !a->sq_target) pt.values[a] = std::sqrt(a->sq_coeff.to_complex()) * (rng.coin() ? -1.0 : 1.0);
        else if (!a->has_square_rule) pt.values[a] = draw();
    }
    for (Atom a : syms)
        if (a->role == Role::parameter && a->has_square_rule && a->sq_target)
            pt.values[a] = std::sqrt(a->sq_coeff.to_complex() * pt.values.at(a->sq_target)) * (rng.coin() ? -1.0 : 1.0);
    for (Atom a : syms)
        if (a->role != Role::parameter && a->role != Role::lie_generator) pt.values[a] = draw();

    if (p_->ring.quotient) {
        for (auto& r : p_->ring.rewrites) {
            // var^2 = repl; redraw repl's variables until the root is real on the compact sheet
            for (int tries = 0;; ++tries) {
                cplx v = eval(r.replacement, pt).v;
                if (v.real() >= 0 || tries > 1000 || opt_.complex_samples) {
                    pt.values[r.var] = std::sqrt(v);
                    break;
                }
                for (Atom a : r.replacement.atoms())
                    if (a->role != Role::parameter) pt.values[a] = draw();
            }
        }
        for (auto& l : p_->ring.relations) {
            Bindings zero;
            zero.symbols[l.solve_for] = Expr();
            cplx rest = eval(substitute(l.poly, zero), pt).v;
            cplx c = eval(differentiate(l.poly, l.solve_for), pt).v;
            pt.values[l.solve_for] = -rest / c;
        }
    }
    auto gens = T.symbols_with_role(Role::lie_generator);
    for (Fn f : T.functions()) {
        if (f->lie_valued)
            for (Atom g : gens) pt.lie_functions[f][g] = random_poly(f->args.size(), rng);
        else
            pt.scalar_functions[f] = random_poly(f->args.size(), rng);
    }
    for (Atom g : gens) {
        CMatrix m(opt_.rep_dim, opt_.rep_dim);
        for (int i = 0; i < opt_.rep_dim; ++i)
            for (int j = 0; j < opt_.rep_dim; ++j) m(i, j) = cplx(rng.uniform(), rng.uniform());
        pt.generators[g] = m;
    }
    return pt;
}

cplx Oracle::instance_value(Atom inst, const Poly& p, const EvaluationPoint& pt) const {
    std::vector<cplx> x;
    for (Atom a : inst->fn->args) {
        auto it = pt.values.find(a);
        if (it == pt.values.end()) throw std::runtime_error("unbound symbol " + a->name);
        x.push_back(it->second);
    }
    return p.eval(x, inst->orders);
}

Num Oracle::eval(const Expr& e, const EvaluationPoint& pt) const {
    Num out;
    for (auto& t : e.terms()) {
        cplx v = t.c.to_complex();
        for (auto& [a, n] : t.m.f) {
            cplx base;
            if (a->is_function()) {
                auto it = pt.scalar_functions.find(a->fn);
                if (it == pt.scalar_functions.end()) throw std::runtime_error("unbound function " + a->str());
                base = instance_value(a, it->second, pt);
            } else {
                auto it = pt.values.find(a);
                if (it == pt.values.end()) throw std::runtime_error("unbound symbol " + a->name);
                base = it->second;
            }
            for (int k = 0; k < n; ++k) v *= base;
        }
        out.v += v;
        out.scale = std::max(out.scale, std::abs(v));
    }
    return out;
}

CMatrix Oracle::eval(const LieExpr& l, const EvaluationPoint& pt, double& scale) const {
    return eval_in(l, pt.generators, *this, pt, scale);
}

CMatrix eval_in(const LieExpr& l, const std::map<Atom, CMatrix, AtomLess>& gens, const Oracle& o, const EvaluationPoint& pt,
                double& scale) {
    int dim = gens.empty() ? 1 : static_cast<int>(gens.begin()->second.rows());
    CMatrix sum = CMatrix::Zero(dim, dim);
    scale = 0;
    auto letter = [&](Atom a) -> CMatrix {
        if (!a->is_function()) {
            auto it = gens.find(a);
            if (it == gens.end()) throw std::runtime_error("no matrix for generator " + a->name);
            return it->second;
        }
        auto it = pt.lie_functions.find(a->fn);
        if (it == pt.lie_functions.end()) throw std::runtime_error("unbound Lie-valued function " + a->str());
        CMatrix m = CMatrix::Zero(dim, dim);
        std::vector<cplx> x;
        for (Atom s : a->fn->args) x.push_back(pt.values.at(s));
        for (auto& [g, poly] : it->second) m += poly.eval(x, a->orders) * gens.at(g);
        return m;
    };
    auto comm = [](const CMatrix& a, const CMatrix& b) -> CMatrix { return a * b - b * a; };
    for (auto& [w, c] : l.terms()) {
        Num cv = o.eval(c, pt);
        CMatrix m = eval_word<CMatrix>(w, letter, comm);
        sum += cv.v * m;
        scale = std::max(scale, std::max(cv.scale, std::abs(cv.v)) * max_abs(m));
    }
    return sum;
}

OracleVerdict Oracle::zero_test(const std::string& name, const std::function<double(const EvaluationPoint&)>& residual) const {
    OracleVerdict v;
    v.target = name;
    v.n = opt_.points;
    v.tol = opt_.tol;
    for (int k = 0; k < opt_.points; ++k) {
        EvaluationPoint pt = point(k);
        double r = residual(pt);
        if (!(r < opt_.tol) && v.pass) {
            v.pass = false;
            v.witness = "point " + std::to_string(k) + ": " + describe(pt);
        }
        if (std::isnan(r)) r = INFINITY;
        v.max_abs = std::max(v.max_abs, r);
    }
    return v;
}

OracleVerdict Oracle::test(const std::string& name, const Expr& e) const {
    return zero_test(name, [&](const EvaluationPoint& pt) {
        Num n = eval(e, pt);
        return std::abs(n.v) / (1 + n.scale);
    });
}

OracleVerdict Oracle::test(const std::string& name, const LieExpr& e) const {
    return zero_test(name, [&](const EvaluationPoint& pt) {
        double s = 0;
        CMatrix m = eval(e, pt, s);
        return max_abs(m) / (1 + s);
    });
}

OracleVerdict Oracle::test(const std::string& name, const Form& f) const {
    return zero_test(name, [&](const EvaluationPoint& pt) {
        double worst = 0;
        for (auto& [k, c] : f.terms()) {
            Num n = eval(c, pt);
            worst = std::max(worst, std::abs(n.v) / (1 + n.scale));
        }
        return worst;
    });
}

std::string Oracle::describe(const EvaluationPoint& pt) const {
    std::ostringstream os;
    os.precision(6);
    bool first = true;
    for (auto& [a, v] : pt.values) {
        if (a->role == Role::section_derivative) continue;
        os << (first ? "" : ", ") << a->name << "=" << v.real();
        if (v.imag() != 0) os << (v.imag() > 0 ? "+" : "") << v.imag() << "i";
        first = false;
    }
    return os.str();
}

CMatrix numeric_element(const TargetElement& e, const TargetAlgebra& alg, const Oracle& o, const EvaluationPoint& pt, cplx lambda) {
    const cplx I(0, 1);
    CMatrix s[3];
    for (auto& x : s) x = CMatrix::Zero(2, 2);
    s[0] << 0, 1, 1, 0;
    s[1] << 0, -I, I, 0;
    s[2] << 1, 0, 0, -1;
    cplx zeta = 0, kappa = 1;
    if (alg.kind == TargetKind::sl2) {
        zeta = o.eval(alg.zeta, pt).v;
        kappa = std::sqrt(o.eval(alg.k2, pt).v);
    }
    CMatrix acc = CMatrix::Zero(2, 2);
    for (auto& [key, c] : e) {
        auto [a, grade] = key;
        CMatrix b = alg.kind == TargetKind::sl2 ? CMatrix((a == 3 ? zeta : zeta * kappa) * s[a - 1])
                                                : CMatrix(std::pow(lambda, grade) * 0.5 * s[a - 1]);
        acc += o.eval(c, pt).v * b;
    }
    return acc;
}

std::map<Atom, CMatrix, AtomLess> numeric_images(const Morphism& m, const Oracle& o, const EvaluationPoint& pt, cplx lambda) {
    std::map<Atom, CMatrix, AtomLess> out;
    for (auto& [g, img] : m.images) out[g] = numeric_element(img, m.algebra, o, pt, lambda);
    return out;
}

}  // namespace prolong
