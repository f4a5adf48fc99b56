#include "prolongate/pipeline.hpp"

#include "prolongate/relations.hpp"
#include "prolongate/targets.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace prolong {

namespace {

const std::vector<std::string> kStages = {"closure-check",          "pullback-equivalence",   "extract",
                                          "verify-lemma",           "collect-relations",      "verify-realization sl2",
                                          "verify-realization loop", "oracle"};

bool passing(const std::string& v) { return v == "pass" || v == "inconclusive" || v == "info"; }

std::string file_name(const std::string& path) { return std::filesystem::path(path).filename().string(); }

struct Run {
    const ProblemDefinition& p;
    RunOptions opt;
    Report& r;
    std::string stage;

    // The reference is only valid until the next add().
    Json& add(const std::string& name, const std::string& verdict) {
        Json j;
        j["record"] = "check";
        j["stage"] = stage;
        j["name"] = name;
        j["verdict"] = verdict;
        r.records.push_back(std::move(j));
        if (!passing(verdict)) r.pass = false;
        return r.records.back();
    }

    std::string golden(const std::string& key) const {
        if (!opt.golden.empty()) return opt.golden;
        auto it = p.golden.find(key);
        if (it == p.golden.end()) throw ParseError(p.path + ": no [golden] entry '" + key + "'");
        return it->second;
    }
};

std::vector<Json> read_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path + " (run with --freeze to create it)");
    std::vector<Json> out;
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            out.push_back(Json::parse(line));
        } catch (const std::exception& e) {
            throw ParseError(path + ":" + std::to_string(n) + ": " + e.what());
        }
    }
    return out;
}

std::string record_key(const Json& j) {
    std::string k = j.value("name", "");
    if (j.contains("branch") && !j["branch"].get<std::string>().empty()) k += " @" + j["branch"].get<std::string>();
    return k;
}

// Compares records by key and normal form; --freeze rewrites the file instead.
void golden_diff(Run& x, const std::string& check, const std::string& path, const std::vector<Json>& have) {
    if (x.opt.freeze) {
        std::ofstream out(path);
        if (!out) throw ParseError("cannot write " + path);
        for (auto& j : have) out << j.dump() << "\n";
        Json& j = x.add(check, "pass");
        j["frozen"] = file_name(path);
        j["records"] = have.size();
        return;
    }
    auto want = read_jsonl(path);
    std::map<std::string, const Json*> w, h;
    for (auto& j : want) w[record_key(j)] = &j;
    for (auto& j : have) h[record_key(j)] = &j;
    Json missing = Json::array(), extra = Json::array(), changed = Json::array();
    for (auto& [k, j] : w) {
        auto it = h.find(k);
        if (it == h.end()) missing.push_back(k);
        else if ((*it->second)["normal_form"] != (*j)["normal_form"] || it->second->value("sector", "") != j->value("sector", ""))
            changed.push_back(k);
    }
    for (auto& [k, j] : h)
        if (!w.count(k)) extra.push_back(k);
    bool ok = missing.empty() && extra.empty() && changed.empty();
    Json& j = x.add(check, ok ? "pass" : "fail");
    j["golden"] = file_name(path);
    j["records"] = have.size();
    if (!ok) {
        j["missing"] = missing;
        j["extra"] = extra;
        j["changed"] = changed;
    }
}

Extraction extract(const ProblemDefinition& p) {
    ExtractOptions eo;
    eo.cross_symmetry = p.cross_symmetry;
    return extract_constraints(p, eo);
}

std::vector<LieExpr> residuals(const ProblemDefinition& p, const std::string& route) {
    std::vector<LieExpr> out;
    if (route == "reduced") {
        if (p.closure.empty()) throw std::runtime_error(p.name + ": no [closure] residual");
        for (auto& c : p.closure) out.push_back(substitute_fixpoint(c.value, p.lemma).normalized(p.ring));
    } else if (route == "extracted") {
        auto ex = extract(p);
        const Constraint* c = ex.constraints.find("closure");
        if (!c) throw std::runtime_error(p.name + ": extraction produced no closure constraint");
        out.push_back(substitute_fixpoint(c->value, p.lemma).normalized(p.ring));
    } else {
        throw std::invalid_argument("unknown route '" + route + "' (reduced | extracted)");
    }
    return out;
}

CollectResult collect(const ProblemDefinition& p, const std::string& route) {
    CollectResult out;
    bool first = true;
    for (auto& r : residuals(p, route)) {
        auto cr = collect_relations(r, p.ring);
        if (first) {
            out = cr;
            first = false;
            continue;
        }
        for (auto& rel : cr.relations.items) out.relations.add(rel);
        out.stable = out.stable && cr.stable;
        out.degree = std::max(out.degree, cr.degree);
        out.truncation = std::max(out.truncation, cr.truncation);
    }
    return out;
}

// ---- commands

void closure_check(Run& x) {
    for (auto& rec : closedness_check(x.p.ideal, x.p.ring)) {
        auto& red = rec.reduction;
        std::string v = red.verdict == Verdict::member ? "pass" : red.verdict == Verdict::inconclusive ? "inconclusive" : "fail";
        Json& j = x.add("closure[" + rec.generator + "]", v);
        j["result"] = verdict_name(red.verdict);
        if (red.verdict == Verdict::member) {
            Json cert = Json::object();
            for (auto& [g, lam] : red.multipliers)
                if (!lam.is_zero()) cert[g] = lam.str();
            j["certificate"] = cert;
        } else {
            j["remainder"] = red.remainder.str();
            if (!red.witness.empty()) j["witness"] = red.witness;
        }
    }
}

void equivalence(Run& x) {
    auto jet = build_jet(x.p, x.p.cross_symmetry);
    for (auto& rec : pullback_equivalence(x.p, jet)) {
        Json& j = x.add("pullback[" + rec.generator + "]", rec.pass ? "pass" : "fail");
        j["equation"] = rec.equation.empty() ? "0" : rec.equation;
        j["residual"] = rec.residual.str();
        if (rec.unit) j["unit"] = rec.unit->str();
    }
}

void extract_cmd(Run& x) {
    auto ex = extract(x.p);
    std::vector<Json> have;
    for (auto& c : ex.constraints.items) {
        Json j;
        j["name"] = c.name;
        j["sector"] = c.sector;
        j["provenance"] = c.provenance;
        j["normal_form"] = c.text();
        have.push_back(std::move(j));
    }
    {
        Json& j = x.add("constraints", "info");
        j["count"] = have.size();
        j["commutativity_assumed"] = ex.commutativity_assumed;
        Json piv = Json::object();
        for (auto& [name, m] : ex.xi_pivots) piv[name] = m.str();
        j["xi"] = piv;
    }
    golden_diff(x, "golden-constraints", x.golden("constraints"), have);

    auto it = x.p.golden.find("reference");
    if (it == x.p.golden.end()) return;
    auto want = load_constraint_list(it->second, x.p);
    auto matches = match_constraints(want, ex.constraints);
    Json pairs = Json::object(), unmatched = Json::array();
    int found = 0;
    for (auto& m : matches) {
        if (m.found) {
            ++found;
            pairs[m.name] = m.matched;
        } else {
            unmatched.push_back(m.name);
        }
    }
    Json& j = x.add("reference-constraints", "info");
    j["reference"] = file_name(it->second);
    j["matched"] = found;
    j["total"] = matches.size();
    j["pairs"] = pairs;
    j["unmatched"] = unmatched;
}

void verify_lemma(Run& x) {
    auto ex = extract(x.p);
    auto res = verify_lemma_forms(ex.constraints, x.p);
    for (auto& c : ex.constraints.items) {
        if (c.is_matrix) continue;
        const LemmaResidual* r = nullptr;
        for (auto& lr : res)
            if (lr.name == c.name) r = &lr;
        if (!r) {
            x.add("lemma[" + c.name + "]", "pass");
            continue;
        }
        // the closure part is what relation collection consumes
        Json& j = x.add("lemma[" + c.name + "]", c.sector == "closure" ? "info" : "fail");
        j["residual"] = r->after.str();
    }
}

void collect_cmd(Run& x) {
    auto cr = collect(x.p, x.opt.route);
    {
        Json& j = x.add("collection", "info");
        j["route"] = x.opt.route;
        j["relations"] = cr.relations.items.size();
        j["degree"] = cr.degree;
        j["truncation"] = cr.truncation;
        j["variables"] = cr.variables;
        j["branches"] = cr.branches;
    }
    {
        Json& j = x.add("stability", cr.stable ? "pass" : "fail");
        j["truncation"] = cr.truncation;
    }
    std::vector<Json> have;
    for (auto& rel : cr.relations.items) {
        Json j;
        j["name"] = rel.name;
        j["branch"] = rel.branch;
        j["provenance"] = rel.provenance;
        j["normal_form"] = rel.value.str();
        have.push_back(j);
        Json& rj = x.add("relation[" + rel.name + "]", "info");
        rj["branch"] = rel.branch;
        rj["normal_form"] = rel.value.str();
    }
    if (x.opt.route == "reduced") golden_diff(x, "golden-relations", x.golden("collected"), have);

    auto it = x.p.golden.find("relations");
    if (it == x.p.golden.end()) return;
    auto want = load_relations(it->second, x.p.ctx);
    Json pairs = Json::object(), unmatched = Json::array();
    for (auto& m : match_relations(want, cr.relations)) {
        if (m.have.empty()) unmatched.push_back(m.want);
        else pairs[m.want] = m.have;
    }
    auto span = compare_spans(cr.relations, want);
    Json& j = x.add("reference-relations", "info");
    j["reference"] = file_name(it->second);
    j["count"] = cr.relations.items.size();
    j["reference_count"] = want.items.size();
    j["unit_matches"] = pairs;
    j["unmatched"] = unmatched;
    j["span_equal"] = span.equal;
    j["rank"] = {{"engine", span.rank_have}, {"reference", span.rank_want}, {"union", span.rank_union}};
    j["outside_reference"] = span.outside_want;
    j["reference_outside"] = span.outside_have;
}

TargetElement difference(TargetElement a, const TargetElement& b) {
    for (auto& [k, c] : b) add_to(a, k, -c);
    return a;
}

void realization(Run& x) {
    const std::string& t = x.opt.target;
    if (t != "sl2" && t != "loop") throw std::invalid_argument("verify-realization needs a target: sl2 | loop");
    Morphism m = load_morphism(x.golden(t), x.p.ctx);
    auto cr = collect(x.p, "reduced");
    auto rc = check_relations(cr.relations, m);
    for (size_t i = 0; i < rc.images.size(); ++i) {
        auto& img = rc.images[i];
        Json& j = x.add("image[" + img.name + "]", img.zero ? "pass" : "fail");
        j["branch"] = cr.relations.items[i].branch;
        j["image"] = img.image;
    }
    for (auto& sc : m.checks) {
        TargetElement got = apply_morphism(sc.source, m);
        bool ok = is_zero(difference(got, sc.expected));
        Json& j = x.add("spot[" + sc.text + "]", ok ? "pass" : "fail");
        j["image"] = m.algebra.str(got);
    }
}

// Point with the branch assignment imposed; square roots of reassigned
// parameters are recomputed.
EvaluationPoint with_branch(const EvaluationPoint& pt, const Relation& rel, const Oracle& o) {
    EvaluationPoint q = pt;
    for (auto& [a, v] : rel.assignment) q.values[a] = o.eval(v, pt).v;
    for (auto& [a, v] : q.values)
        if (a->has_square_rule && a->sq_target && rel.assignment.count(a->sq_target)) {
            cplx r = std::sqrt(a->sq_coeff.to_complex() * q.values.at(a->sq_target));
            v = pt.values.at(a).real() < 0 ? -r : r;
        }
    return q;
}

double scaled(const CMatrix& m, double scale) { return (m.size() ? m.cwiseAbs().maxCoeff() : 0.0) / (1 + scale); }

void oracle_cmd(Run& x) {
    OracleOptions oo;
    oo.seed = x.opt.seed;
    oo.points = x.opt.points;
    oo.tol = x.opt.tol;
    Oracle o(x.p, oo);
    auto& p = x.p;
    auto report = [&](const std::string& group, const OracleVerdict& v) {
        Json& j = x.add("oracle:" + group + "[" + v.target + "]", v.pass ? "pass" : "fail");
        j["target"] = v.target;
        j["n"] = v.n;
        j["tol"] = v.tol;
        j["max_abs"] = v.max_abs;
        if (!v.pass) j["witness"] = v.witness;
    };

    // closure certificates, unnormalized: d(g) - sum h ^ lambda_h vanishes on the constraint set
    for (auto& rec : closedness_check(p.ideal, p.ring)) {
        if (rec.reduction.verdict != Verdict::member) continue;
        Form raw = exterior_derivative(p.generator(rec.generator).form, p.ideal.chart);
        for (auto& [h, lam] : rec.reduction.multipliers) raw -= wedge(p.generator(h).form, lam);
        report("closure", o.test(rec.generator, raw));
    }

    // equivalence: raw pullback with contact substitution against unit * equation
    auto jet = build_jet(p, p.cross_symmetry);
    Bindings contact = jet.bindings(false);
    for (auto& rec : pullback_equivalence(p, jet)) {
        if (!rec.pass) continue;
        Expr raw = substitute_fixpoint(top_coefficient(pullback_raw(p.generator(rec.generator).form, *p.table, p.independents),
                                                       p.independents),
                                       contact);
        Expr rhs = rec.equation.empty() ? Expr() : *rec.unit * rec.expected;
        report("pullback", o.zero_test(rec.generator, [&](const EvaluationPoint& pt) {
            Num a = o.eval(raw, pt), b = o.eval(rhs, pt);
            return std::abs(a.v - b.v) / (1 + std::max(a.scale, b.scale));
        }));
    }

    // extraction: the scalar part equals sum monomial * constraint
    auto ex = extract(p);
    report("extract", o.zero_test("split", [&](const EvaluationPoint& pt) {
        double s0 = 0, s = 0;
        CMatrix acc = o.eval(ex.total, pt, s0);
        for (auto& [w, c] : ex.split) {
            double sc = 0;
            Num wn = o.eval(w, pt);
            acc -= wn.v * o.eval(c, pt, sc);
            s = std::max(s, sc * std::abs(wn.v));
        }
        return scaled(acc, std::max(s0, s));
    }));

    // lemma: every non-closure constraint vanishes after substitution
    for (auto& c : ex.constraints.items) {
        if (c.is_matrix || c.sector == "closure") continue;
        report("lemma", o.test(c.name, substitute_fixpoint(c.value, p.lemma)));
    }

    // realizations: relation images and spot identities in numeric matrix models
    std::vector<LieExpr> res;
    CollectResult cr;
    bool have_relations = false;
    SplitMix64 lr(x.opt.seed ^ 0xD1B54A32D192ED03ull);
    cplx lambda(lr.uniform(0.5, 1.5), lr.uniform(-1, 1));
    for (std::string t : {"sl2", "loop"}) {
        auto it = p.golden.find(t);
        if (it == p.golden.end()) continue;
        if (!have_relations) {
            res = residuals(p, "reduced");
            cr = collect(p, "reduced");
            have_relations = true;
        }
        Morphism m = load_morphism(it->second, p.ctx);
        for (auto& rel : cr.relations.items) {
            std::string name = t + ":" + rel.name + (rel.branch.empty() ? "" : " @" + rel.branch);
            report("image", o.zero_test(name, [&](const EvaluationPoint& pt0) {
                EvaluationPoint pt = with_branch(pt0, rel, o);
                double s = 0;
                CMatrix v = eval_in(rel.value, numeric_images(m, o, pt, lambda), o, pt, s);
                return scaled(v, s);
            }));
        }
        for (size_t i = 0; i < res.size(); ++i)
            report("image", o.zero_test(t + ":residual" + (res.size() > 1 ? std::to_string(i + 1) : ""), [&](const EvaluationPoint& pt) {
                double s = 0;
                CMatrix v = eval_in(res[i], numeric_images(m, o, pt, lambda), o, pt, s);
                return scaled(v, s);
            }));
        for (auto& sc : m.checks)
            report("spot", o.zero_test(t + ":" + sc.text, [&](const EvaluationPoint& pt) {
                double s = 0;
                CMatrix v = eval_in(sc.source, numeric_images(m, o, pt, lambda), o, pt, s);
                v -= numeric_element(sc.expected, m.algebra, o, pt, lambda);
                return scaled(v, s);
            }));
    }
}

void dispatch(Run& x, const std::string& command) {
    if (command == "closure-check") closure_check(x);
    else if (command == "pullback-equivalence") equivalence(x);
    else if (command == "extract") extract_cmd(x);
    else if (command == "verify-lemma") verify_lemma(x);
    else if (command == "collect-relations") collect_cmd(x);
    else if (command == "verify-realization") realization(x);
    else if (command == "oracle") oracle_cmd(x);
    else throw std::invalid_argument("unknown command '" + command + "'");
}

}  // namespace

const std::vector<std::string>& commands() {
    static const std::vector<std::string> c = {"closure-check", "pullback-equivalence", "extract", "verify-lemma",
                                               "collect-relations", "verify-realization", "oracle", "all"};
    return c;
}

std::string Report::jsonl(bool with_timing) const {
    std::ostringstream os;
    Json h;
    h["record"] = "header";
    h["engine"] = "prolongate";
    h["version"] = kEngineVersion;
    h["command"] = command;
    h["problem"] = problem;
    h["seed"] = seed;
    h["points"] = points;
    h["tol"] = tol;
    os << h.dump() << "\n";
    int failed = 0;
    for (auto& r : records) {
        os << r.dump() << "\n";
        if (!passing(r.value("verdict", "pass"))) ++failed;
    }
    Json s;
    s["record"] = "summary";
    s["command"] = command;
    s["problem"] = problem;
    s["pass"] = pass;
    s["checks"] = records.size();
    s["failed"] = failed;
    if (!stopped_at.empty()) s["stopped_at"] = stopped_at;
    if (with_timing) s["timing_ms"] = timing_ms;
    os << s.dump() << "\n";
    return os.str();
}

std::string Report::summary() const {
    std::ostringstream os;
    int failed = 0, inconclusive = 0;
    for (auto& r : records) {
        std::string v = r.value("verdict", "pass");
        if (v == "inconclusive") ++inconclusive;
        if (!passing(v)) {
            ++failed;
            os << "  FAIL " << r.value("stage", "") << " " << r.value("name", "") << "\n";
        }
    }
    std::ostringstream head;
    head << command << " " << problem << ": " << (pass ? "PASS" : "FAIL") << " (" << records.size() << " records, " << failed
         << " failed";
    if (inconclusive) head << ", " << inconclusive << " inconclusive";
    head << ", " << static_cast<long>(timing_ms) << " ms)\n";
    if (!stopped_at.empty()) os << "  stopped at " << stopped_at << "\n";
    return head.str() + os.str();
}

Report run(const std::string& command_in, const std::string& problem, const RunOptions& opt_in) {
    auto t0 = std::chrono::steady_clock::now();
    RunOptions opt = opt_in;
    std::string command = command_in;
    if (auto sp = command.find(' '); sp != std::string::npos) {
        opt.target = command.substr(sp + 1);
        command = command.substr(0, sp);
    }
    if (std::find(commands().begin(), commands().end(), command) == commands().end())
        throw std::invalid_argument("unknown command '" + command + "'");
    if (command == "verify-realization" && opt.target != "sl2" && opt.target != "loop")
        throw std::invalid_argument("verify-realization needs a target: sl2 | loop");

    ProblemDefinition p = load_problem(resolve_problem(problem));
    Report r;
    r.command = command == "verify-realization" ? command + " " + opt.target : command;
    r.problem = p.name;
    r.seed = opt.seed;
    r.points = opt.points;
    r.tol = opt.tol;

    if (command == "all") {
        opt.golden.clear();
        opt.freeze = false;
        for (auto& stage : kStages) {
            Run x{p, opt, r, stage};
            std::string c = stage;
            if (auto sp = c.find(' '); sp != std::string::npos) {
                x.opt.target = c.substr(sp + 1);
                c = c.substr(0, sp);
            }
            bool before = r.pass;
            r.pass = true;
            dispatch(x, c);
            bool ok = r.pass;
            r.pass = before && ok;
            if (!ok) {
                r.hard_failure = true;
                r.stopped_at = stage;
                break;
            }
        }
    } else {
        Run x{p, opt, r, r.command};
        dispatch(x, command);
        r.hard_failure = !r.pass;
    }
    r.timing_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

}  // namespace prolong
