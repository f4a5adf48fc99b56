#include "prolongate/problem.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace prolong {

namespace fs = std::filesystem;

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> words(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    for (std::string w; in >> w;) out.push_back(w);
    return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    return out;
}

struct Line {
    int number;
    std::string text;
};

class Loader {
public:
    Loader(std::string origin, std::string base) : origin_(std::move(origin)), base_(std::move(base)) {
        p_.table = std::make_shared<SymbolTable>();
        p_.ctx.table = p_.table.get();
        p_.path = origin_;
    }

    ProblemDefinition run(const std::string& text) {
        std::vector<std::pair<std::string, Line>> items;  // (section, line)
        std::istringstream in(text);
        std::string raw, section;
        int n = 0;
        for (; std::getline(in, raw); ) {
            ++n;
            std::string body = raw.substr(0, raw.find('#'));
            if (trim(body).empty()) continue;
            bool continuation = (body[0] == ' ' || body[0] == '\t') && !items.empty() && items.back().first == section &&
                                body.find(":=") == std::string::npos && section != "symbols" && trim(body)[0] != '[';
            std::string t = trim(body);
            if (t.front() == '[' && t.back() == ']') {
                section = t.substr(1, t.size() - 2);
                continue;
            }
            if (continuation && (items.back().second.text.find(":=") != std::string::npos)) {
                items.back().second.text += " " + t;
                continue;
            }
            items.push_back({section, {n, t}});
        }
        std::string current;
        for (auto& [sec, line] : items) {
            if (sec != current) {
                if (current == "symbols") finish_symbols();
                current = sec;
            }
            try {
                handle(sec, line.text);
            } catch (const std::exception& e) {
                throw ParseError(origin_ + ":" + std::to_string(line.number) + ": " + e.what());
            }
        }
        if (current == "symbols") finish_symbols();
        finish();
        return std::move(p_);
    }

private:
    void handle(const std::string& sec, const std::string& t) {
        if (sec.empty()) return top(t);
        if (sec == "symbols") return symbols(t);
        if (sec == "parameters") return parameters(t);
        if (sec == "quotient") return quotient(t);
        if (sec == "generators") return generators(t);
        if (sec == "pivots") return pivots(t);
        if (sec == "ansatz") return ansatz(t);
        if (sec == "lemma") return lemma(t);
        if (sec == "closure") return closure(t);
        if (sec == "equations") return equations(t);
        if (sec == "golden") return golden(t);
        throw ParseError("unknown section [" + sec + "]");
    }

    static std::pair<std::string, std::string> key_value(const std::string& t) {
        size_t c = t.find(':');
        if (c == std::string::npos || t.compare(c, 2, ":=") == 0) throw ParseError("expected 'key: value'");
        return {trim(t.substr(0, c)), trim(t.substr(c + 1))};
    }

    static std::pair<std::string, std::string> definition(const std::string& t) {
        size_t c = t.find(":=");
        if (c == std::string::npos) throw ParseError("expected 'name := expression'");
        std::string name = trim(t.substr(0, c));
        if (name.empty()) throw ParseError("missing name before ':='");
        return {name, trim(t.substr(c + 2))};
    }

    void top(const std::string& t) {
        auto [k, v] = key_value(t);
        if (k == "name") p_.name = v;
        else if (k == "description") p_.description = v;
        p_.settings[k] = v;
    }

    void symbols(const std::string& t) {
        auto [k, v] = key_value(t);
        static const std::map<std::string, Role> roles{{"independent", Role::independent},
                                                       {"fibre", Role::fibre},
                                                       {"jet", Role::jet},
                                                       {"pseudopotential", Role::pseudopotential},
                                                       {"lie", Role::lie_generator}};
        if (k == "vector") {
            size_t eq = v.find('=');
            if (eq == std::string::npos) throw ParseError("expected 'vector: name = c1 c2 c3'");
            auto comps = words(v.substr(eq + 1));
            if (comps.size() != 3) throw ParseError("vectors have exactly three components");
            for (auto& c : comps) p_.table->at(c);
            p_.table->declare_vector(trim(v.substr(0, eq)), comps);
            vectors_.push_back(trim(v.substr(0, eq)));
            return;
        }
        auto it = roles.find(k);
        if (it == roles.end()) throw ParseError("unknown symbol role '" + k + "'");
        for (auto& w : words(v)) {
            Atom a = p_.table->declare(w, it->second);
            if (it->second == Role::independent) p_.independents.push_back(a);
        }
    }

    void finish_symbols() {
        auto& tab = *p_.table;
        std::vector<Atom> dep;
        for (auto a : tab.symbols())
            if (a->role == Role::fibre || a->role == Role::jet) dep.push_back(a);
        for (auto a : dep)
            for (auto c : p_.independents) tab.section_derivative(a, c);
        for (auto& v : vectors_) {
            auto comps = *tab.vector(v);
            Atom first = tab.at(comps[0]);
            if (first->role != Role::fibre && first->role != Role::jet) continue;
            for (auto c : p_.independents) {
                std::vector<std::string> d;
                for (auto& s : comps) d.push_back(s + "_" + c->name);
                tab.declare_vector(v + "_" + c->name, d);
            }
        }
    }

    void parameters(const std::string& t) {
        auto& tab = *p_.table;
        if (t.rfind("metric:", 0) == 0) {
            auto w = words(t.substr(7));
            if (w.size() != 3) throw ParseError("metric needs three diagonal entries");
            for (int k = 0; k < 3; ++k) p_.ctx.sigma.diag[k] = parse_expr(w[k], p_.ctx);
            metric_set_ = true;
            return;
        }
        size_t eq = t.find('=');
        if (eq == std::string::npos) throw ParseError("expected 'name = value'");
        std::string name = trim(t.substr(0, eq));
        auto w = words(t.substr(eq + 1));
        if (w.empty()) throw ParseError("missing parameter value");
        Atom a = tab.declare(name, Role::parameter);
        if (w[0] == "involutive") {
            tab.set_square_rule(a, Coeff(1));
        } else if (w[0] == "free") {
        } else if (w[0] == "sqrt" && w.size() == 2) {
            if (const Coeff* v = tab.value(w[1])) tab.set_square_rule(a, *v);
            else tab.set_square_rule(a, Coeff(1), tab.at(w[1]));
        } else {
            Expr v = parse_expr(w[0], p_.ctx);
            if (!v.is_constant()) throw ParseError("parameter value must be a constant or 'involutive'/'free'/'sqrt p'");
            tab.set_value(name, v.constant());
        }
        p_.settings["param." + name] = trim(t.substr(eq + 1));
    }

    void quotient(const std::string& t) {
        auto [k, v] = key_value(t);
        if (k == "mode") {
            if (v != "on" && v != "off") throw ParseError("quotient mode is 'on' or 'off'");
            p_.ring.quotient = v == "on";
        } else if (k == "rewrite") {
            size_t arrow = v.find("->");
            if (arrow == std::string::npos) throw ParseError("expected 'rewrite: v^2 -> expr'");
            std::string lhs = trim(v.substr(0, arrow));
            size_t caret = lhs.find('^');
            if (caret == std::string::npos || trim(lhs.substr(caret + 1)) != "2") throw ParseError("rewrite rules have the form v^2 -> expr");
            p_.ring.rewrites.push_back({p_.table->at(trim(lhs.substr(0, caret))), parse_expr(v.substr(arrow + 2), p_.ctx)});
        } else if (k.rfind("relation", 0) == 0) {
            auto w = words(k);
            if (w.size() != 2) throw ParseError("expected 'relation <solve-for>: expr'");
            p_.ring.relations.push_back({p_.table->at(w[1]), parse_expr(v, p_.ctx)});
        } else {
            throw ParseError("unknown quotient key '" + k + "'");
        }
    }

    void generators(const std::string& t) {
        auto [name, text] = definition(t);
        if (p_.ideal.chart.empty()) p_.ideal.chart = chart_of(*p_.table);
        Value v = parse_value(text, p_.ctx);
        std::vector<std::string> names;
        for (size_t k = 0; k < v.c.size(); ++k) {
            if (v.c[k].is_lie) throw ParseError("generator '" + name + "' is Lie-valued");
            std::string n = v.vec ? name + "_" + std::to_string(k + 1) : name;
            const Form& f = v.c[k].form;
            if (f.is_zero()) throw ParseError("generator '" + n + "' is zero");
            if (f.degree() < 2 || f.degree() > 3) throw ParseError("generator '" + n + "' has degree " + std::to_string(f.degree()) + " (expected 2 or 3)");
            p_.ideal.gens.push_back({n, f});
            names.push_back(n);
        }
        p_.generator_groups.emplace_back(name, names);
    }

    void pivots(const std::string& t) {
        auto [k, v] = key_value(t);
        if (k == "cross-symmetry") {
            p_.cross_symmetry = v == "on";
            return;
        }
        if (k != "contact" && k != "pde") throw ParseError("pivot kind is 'contact' or 'pde'");
        size_t arrow = v.find("->");
        if (arrow == std::string::npos) throw ParseError("expected 'generator -> section-derivative'");
        std::string g = trim(v.substr(0, arrow)), target = trim(v.substr(arrow + 2));
        const std::vector<std::string>* comps = nullptr;
        for (auto& [gn, cs] : p_.generator_groups)
            if (gn == g) comps = &cs;
        if (!comps) throw ParseError("unknown generator '" + g + "'");
        std::vector<std::string> targets;
        if (auto vt = p_.table->vector(target)) targets = *vt;
        else targets.push_back(target);
        if (targets.size() != comps->size()) throw ParseError("pivot shape mismatch for '" + g + "'");
        for (size_t i = 0; i < targets.size(); ++i) {
            Atom a = p_.table->at(targets[i]);
            if (a->role != Role::section_derivative) throw ParseError("'" + targets[i] + "' is not a section derivative");
            p_.pivots.push_back({(*comps)[i], targets[i], k == "pde"});
        }
    }

    void ansatz(const std::string& t) {
        auto [k, v] = key_value(t);
        auto& an = p_.ansatz;
        if (k == "mode") {
            if (v != "formal" && v != "concrete") throw ParseError("ansatz mode is 'formal' or 'concrete'");
            an.formal = v == "formal";
        } else if (k == "N") {
            an.n = std::stoi(v);
        } else if (k == "A" || k == "B") {
            std::vector<std::vector<Coeff>> m;
            for (auto& row : split(v, ';')) {
                std::vector<Coeff> r;
                for (auto& w : words(row)) r.push_back(parse_expr(w, p_.ctx).constant());
                m.push_back(r);
            }
            (k == "A" ? an.a : an.b) = m;
        } else if (k == "functions") {
            size_t open = v.find('(');
            if (open == std::string::npos || v.back() != ')') throw ParseError("expected 'functions: H F G (args)'");
            std::vector<Atom> args;
            for (auto& w : words(v.substr(open + 1, v.size() - open - 2))) args.push_back(p_.table->at(w));
            for (auto& w : words(v.substr(0, open))) an.functions.push_back(p_.table->declare_function(w, args, true));
        } else if (k == "omega") {
            for (auto& piece : split(v, '+')) {
                auto parts = split(piece, '*');
                if (parts.size() != 2) throw ParseError("omega terms look like 'H*dx^dy'");
                Fn f = p_.table->find_function(parts[0]);
                if (!f) throw ParseError("undeclared function '" + parts[0] + "'");
                auto cov = split(parts[1], '^');
                if (cov.size() != 2) throw ParseError("omega terms are 2-forms on the base");
                int i = base_index(cov[0]), j = base_index(cov[1]);
                if (i == j) throw ParseError("degenerate omega term");
                if (i > j) throw ParseError("write omega terms in coordinate order (" + piece + ")");
                an.omega.push_back({{i, j}, f});
            }
        } else if (k == "theta") {
            an.theta.assign(p_.independents.size(), "");
            for (auto& piece : split(v, '+')) {
                auto parts = split(piece, '*');
                std::string letter = parts.size() == 2 ? parts[0] : "I";
                int i = base_index(parts.back());
                an.theta[i] = letter;
            }
        } else if (k == "free") {
            an.free_jets = words(v);
        } else {
            throw ParseError("unknown ansatz key '" + k + "'");
        }
    }

    int base_index(const std::string& cov) const {
        if (cov.size() < 2 || cov[0] != 'd') throw ParseError("expected a base covector, got '" + cov + "'");
        for (size_t k = 0; k < p_.independents.size(); ++k)
            if (p_.independents[k]->name == cov.substr(1)) return static_cast<int>(k);
        throw ParseError("'" + cov + "' is not a base covector");
    }

    void lemma(const std::string& t) {
        if (t.rfind("functions:", 0) == 0) {
            std::string v = trim(t.substr(10));
            size_t open = v.find('(');
            if (open == std::string::npos || v.back() != ')') throw ParseError("expected 'functions: Fhat Ghat (args)'");
            std::vector<Atom> args;
            for (auto& w : words(v.substr(open + 1, v.size() - open - 2))) args.push_back(p_.table->at(w));
            for (auto& w : words(v.substr(0, open))) p_.table->declare_function(w, args, true);
            return;
        }
        auto [name, text] = definition(t);
        Fn f = p_.table->find_function(name);
        if (!f || !f->lie_valued) throw ParseError("'" + name + "' is not a declared Lie-valued function");
        p_.lemma.functions[f] = parse_lie(text, p_.ctx);
        p_.lemma_text.emplace_back(f, text);
    }

    void closure(const std::string& t) {
        auto [name, text] = definition(t);
        p_.closure.push_back({name, parse_lie(text, p_.ctx), text});
    }

    void equations(const std::string& t) {
        if (t.rfind("match:", 0) == 0) {
            std::string v = t.substr(6);
            size_t eq = v.find('=');
            if (eq == std::string::npos) throw ParseError("expected 'match: generator = equation'");
            p_.equation_match[trim(v.substr(0, eq))] = trim(v.substr(eq + 1));
            return;
        }
        auto [name, text] = definition(t);
        Value v = parse_value(text, p_.ctx);
        for (size_t k = 0; k < v.c.size(); ++k) {
            if (v.c[k].is_lie || v.c[k].form.degree() != 0) throw ParseError("equation '" + name + "' must be scalar");
            std::string n = v.vec ? name + "_" + std::to_string(k + 1) : name;
            p_.equations.push_back({n, v.c[k].form.as_scalar(), text});
        }
    }

    void golden(const std::string& t) {
        auto [k, v] = key_value(t);
        fs::path p(v);
        if (p.is_relative()) p = fs::path(base_) / p;
        p_.golden[k] = p.lexically_normal().string();
    }

    void finish() {
        if (p_.name.empty()) p_.name = fs::path(origin_).stem().string();
        if (!metric_set_) p_.ctx.sigma.diag = {Expr(1), Expr(1), Expr(1)};
        if (p_.ideal.chart.empty()) p_.ideal.chart = chart_of(*p_.table);
        for (auto& g : p_.ideal.gens) g.form = g.form.normalized(p_.ring);
    }

    ProblemDefinition p_;
    std::string origin_, base_;
    std::vector<std::string> vectors_;
    bool metric_set_ = false;
};

}  // namespace

const Generator& ProblemDefinition::generator(const std::string& n) const {
    for (auto& g : ideal.gens)
        if (g.name == n) return g;
    throw std::out_of_range("unknown generator '" + n + "'");
}

ProblemDefinition load_problem_text(const std::string& text, const std::string& origin, const std::string& base_dir) {
    return Loader(origin, base_dir).run(text);
}

std::string bundled_dir() {
#ifdef PROLONGATE_PROBLEM_DIR
    if (const char* env = std::getenv("PROLONGATE_PROBLEMS")) return env;
    return PROLONGATE_PROBLEM_DIR;
#else
    if (const char* env = std::getenv("PROLONGATE_PROBLEMS")) return env;
    return "problems";
#endif
}

std::string resolve_problem(const std::string& name) {
    if (fs::exists(name) && fs::is_regular_file(name)) return name;
    fs::path p = fs::path(bundled_dir()) / (name + ".problem");
    if (fs::exists(p)) return p.string();
    throw ParseError("problem file not found: " + name);
}

ProblemDefinition load_problem(const std::string& path) {
    std::string resolved = resolve_problem(path);
    std::ifstream in(resolved);
    if (!in) throw ParseError("cannot open " + resolved);
    std::stringstream ss;
    ss << in.rdbuf();
    return load_problem_text(ss.str(), resolved, fs::path(resolved).parent_path().string());
}

}  // namespace prolong
