#include "prolongate/parse.hpp"

#include <cctype>

namespace prolong {

std::vector<Atom> chart_of(const SymbolTable& table) {
    std::vector<Atom> out;
    for (auto a : table.symbols())
        if (a->role != Role::parameter && a->role != Role::section_derivative && a->role != Role::lie_generator)
            out.push_back(a);
    return out;
}

namespace {

struct Token {
    enum Kind { end, ident, integer, op } kind = end;
    std::string text;
    std::vector<std::string> derivs;  // _d{..} suffixes
    size_t pos = 0;
};

class Lexer {
public:
    explicit Lexer(const std::string& s) : s_(s) { advance(); }
    const Token& peek() const { return cur_; }
    Token take() {
        Token t = cur_;
        advance();
        return t;
    }

private:
    void advance() {
        while (p_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[p_]))) ++p_;
        cur_ = Token{};
        cur_.pos = p_;
        if (p_ >= s_.size()) return;
        char ch = s_[p_];
        if (std::isalpha(static_cast<unsigned char>(ch))) {
            size_t b = p_;
            while (p_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[p_])) || s_[p_] == '_')) {
                if (s_.compare(p_, 3, "_d{") == 0) break;
                ++p_;
            }
            cur_.kind = Token::ident;
            cur_.text = s_.substr(b, p_ - b);
            while (s_.compare(p_, 3, "_d{") == 0) {
                size_t close = s_.find('}', p_);
                if (close == std::string::npos) throw ParseError("syntax error at column " + std::to_string(p_ + 1) + ": unterminated _d{");
                cur_.derivs.push_back(s_.substr(p_ + 3, close - p_ - 3));
                p_ = close + 1;
            }
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(ch))) {
            size_t b = p_;
            while (p_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p_]))) ++p_;
            cur_.kind = Token::integer;
            cur_.text = s_.substr(b, p_ - b);
            return;
        }
        if (std::string("+-*/^()[],;").find(ch) != std::string::npos) {
            cur_.kind = Token::op;
            cur_.text = std::string(1, ch);
            ++p_;
            return;
        }
        throw ParseError("syntax error at column " + std::to_string(p_ + 1) + ": unexpected character '" + std::string(1, ch) + "'");
    }

    const std::string& s_;
    size_t p_ = 0;
    Token cur_;
};

Component lie_comp(const LieExpr& l) {
    Component c;
    c.is_lie = true;
    c.lie = l;
    return c;
}

Component scalar_comp(const Expr& e) {
    Component c;
    c.form = Form::scalar(e);
    return c;
}

Value scalar_value(const Expr& e) { return Value{{scalar_comp(e)}, false}; }

Value form_value(const Form& f) {
    Component c;
    c.form = f;
    return Value{{c}, false};
}

Value lie_value(const LieExpr& l) {
    Component c;
    c.is_lie = true;
    c.lie = l;
    return Value{{c}, false};
}

bool is_scalar0(const Component& c) { return !c.is_lie && c.form.degree() == 0; }

Component add(const Component& a, const Component& b, bool sub) {
    if (a.is_lie != b.is_lie) {
        // zero scalars are neutral for Lie values
        if (!a.is_lie && a.form.is_zero()) return sub ? lie_comp(-b.lie) : b;
        if (!b.is_lie && b.form.is_zero()) return a;
        throw ParseError("cannot add a Lie-valued and a scalar/form value");
    }
    Component r = a;
    if (a.is_lie) r.lie = sub ? a.lie - b.lie : a.lie + b.lie;
    else r.form = sub ? a.form - b.form : a.form + b.form;
    return r;
}

Component mul(const Component& a, const Component& b, bool) {
    if (a.is_lie && b.is_lie) throw ParseError("product of two Lie-valued values; use [.,.]");
    if (a.is_lie || b.is_lie) {
        const Component& l = a.is_lie ? a : b;
        const Component& s = a.is_lie ? b : a;
        if (!is_scalar0(s)) throw ParseError("Lie value multiplied by a form of positive degree");
        Component r;
        r.is_lie = true;
        r.lie = s.form.as_scalar() * l.lie;
        return r;
    }
    Component r;
    r.form = wedge(a.form, b.form);
    return r;
}

Value broadcast(const Value& a, const Value& b, const std::function<Component(const Component&, const Component&)>& f,
                bool allow_scalar_broadcast) {
    Value r;
    if (a.vec && b.vec) {
        r.vec = true;
        for (int k = 0; k < 3; ++k) r.c.push_back(f(a.c[k], b.c[k]));
    } else if (a.vec || b.vec) {
        if (!allow_scalar_broadcast) throw ParseError("shape mismatch: vector and scalar");
        r.vec = true;
        for (int k = 0; k < 3; ++k) r.c.push_back(f(a.vec ? a.c[k] : a.c[0], b.vec ? b.c[k] : b.c[0]));
    } else {
        r.c.push_back(f(a.c[0], b.c[0]));
    }
    return r;
}

class Parser {
public:
    Parser(const std::string& s, const ParseContext& ctx) : lex_(s), ctx_(ctx), text_(s) {
        if (ctx_.chart.empty()) chart_ = chart_of(*ctx_.table);
        else chart_ = ctx_.chart;
    }

    Value parse_all() {
        Value v = sum();
        if (lex_.peek().kind != Token::end) fail(lex_.peek(), "unexpected '" + lex_.peek().text + "'");
        return v;
    }

private:
    [[noreturn]] void fail(const Token& t, const std::string& msg) const {
        throw ParseError("syntax error at column " + std::to_string(t.pos + 1) + ": " + msg);
    }

    bool accept(const char* op) {
        if (lex_.peek().kind == Token::op && lex_.peek().text == op) {
            lex_.take();
            return true;
        }
        return false;
    }

    void expect(const char* op) {
        if (!accept(op)) fail(lex_.peek(), std::string("expected '") + op + "'");
    }

    Value sum() {
        Value v = term();
        for (;;) {
            if (accept("+")) v = broadcast(v, term(), [](auto& a, auto& b) { return add(a, b, false); }, false);
            else if (accept("-")) v = broadcast(v, term(), [](auto& a, auto& b) { return add(a, b, true); }, false);
            else return v;
        }
    }

    Value term() {
        Value v = unary();
        for (;;) {
            if (accept("*")) {
                v = broadcast(v, unary(), [](auto& a, auto& b) { return mul(a, b, false); }, true);
            } else if (lex_.peek().kind == Token::op && lex_.peek().text == "/") {
                Token t = lex_.take();
                Value d = unary();
                if (d.vec || d.c[0].is_lie || d.c[0].form.degree() != 0 || !d.c[0].form.as_scalar().is_constant() ||
                    d.c[0].form.as_scalar().is_zero())
                    fail(t, "division only by a nonzero constant");
                Expr inv(d.c[0].form.as_scalar().constant().inverse());
                v = broadcast(scalar_value(inv), v, [](auto& a, auto& b) { return mul(a, b, false); }, true);
            } else {
                return v;
            }
        }
    }

    Value unary() {
        if (accept("-")) {
            Value v = unary();
            return broadcast(scalar_value(Expr(-1)), v, [](auto& a, auto& b) { return mul(a, b, false); }, true);
        }
        if (accept("+")) return unary();
        return wedge_level();
    }

    Value wedge_level() {
        Value v = primary();
        while (lex_.peek().kind == Token::op && lex_.peek().text == "^") {
            Token t = lex_.take();
            if (lex_.peek().kind == Token::integer && !v.vec && is_scalar0(v.c[0])) {
                int n = std::stoi(lex_.take().text);
                if (n <= 0) fail(t, "exponent must be a positive integer");
                v = scalar_value(v.c[0].form.as_scalar().pow(n));
                continue;
            }
            Value r = primary();
            v = broadcast(v, r, [](auto& a, auto& b) { return mul(a, b, true); }, true);
        }
        return v;
    }

    std::vector<Value> args() {
        std::vector<Value> out;
        expect("(");
        if (accept(")")) return out;
        do {
            out.push_back(sum());
        } while (accept(",") || accept(";"));
        expect(")");
        return out;
    }

    Value primary() {
        const Token& t = lex_.peek();
        if (t.kind == Token::integer) {
            Token n = lex_.take();
            return scalar_value(Expr(Coeff(mpq_class(n.text))));
        }
        if (t.kind == Token::op && t.text == "(") {
            lex_.take();
            Value v = sum();
            expect(")");
            return v;
        }
        if (t.kind == Token::op && t.text == "[") {
            Token open = lex_.take();
            Value a = sum();
            expect(",");
            Value b = sum();
            expect("]");
            return broadcast(a, b, [&](const Component& x, const Component& y) {
                if (!x.is_lie || !y.is_lie) {
                    bool zx = !x.is_lie && x.form.is_zero(), zy = !y.is_lie && y.form.is_zero();
                    if (zx || zy) return lie_comp({});
                    fail(open, "bracket of non-Lie values");
                }
                return lie_comp(bracket(x.lie, y.lie));
            }, false);
        }
        if (t.kind != Token::ident) fail(t, t.kind == Token::end ? "unexpected end of input" : "unexpected '" + t.text + "'");
        Token id = lex_.take();
        return identifier(id);
    }

    Value covector_of(const std::string& name, const Token& at) {
        const SymbolTable& tab = *ctx_.table;
        if (auto comps = tab.vector(name)) {
            Value v;
            v.vec = true;
            for (auto& c : *comps) v.c.push_back(form_value(Form::covector(tab.at(c))).c[0]);
            return v;
        }
        Atom a = tab.find(name);
        if (!a) fail(at, "undeclared identifier '" + name + "'");
        return form_value(Form::covector(a));
    }

    Value d_of(const Value& v, const Token& at) {
        Value r;
        r.vec = v.vec;
        for (auto& c : v.c) {
            if (c.is_lie) fail(at, "d of a Lie-valued value");
            Component o;
            o.form = exterior_derivative(c.form, chart_);
            if (o.form.is_zero()) o.form = Form(c.form.degree() + 1);
            r.c.push_back(o);
        }
        return r;
    }

    Value identifier(const Token& id) {
        const SymbolTable& tab = *ctx_.table;
        const std::string& n = id.text;
        bool call = lex_.peek().kind == Token::op && lex_.peek().text == "(";

        if (id.derivs.empty()) {
            if (n == "i" && !tab.find("i")) return scalar_value(Expr(Coeff::I()));
            if (n == "d" && !tab.find("d")) {
                if (call) {
                    expect("(");
                    Value v = sum();
                    expect(")");
                    return d_of(v, id);
                }
                Token s = lex_.take();
                if (s.kind != Token::ident) fail(s, "expected a symbol after d");
                if (tab.vector(s.text) || tab.find(s.text)) return covector_of(s.text, s);
                fail(s, "undeclared identifier '" + s.text + "'");
            }
            if (call && (n == "dot" || n == "cross" || n == "Sigma") && !tab.find(n)) return builtin(id);
            if (const Coeff* v = tab.value(n)) return scalar_value(Expr(*v));
            if (auto comps = tab.vector(n)) {
                Value v;
                v.vec = true;
                for (auto& c : *comps) v.c.push_back(atom_value(tab.at(c)).c[0]);
                return v;
            }
            if (Atom a = tab.find(n)) return atom_value(a);
            if (Fn f = tab.find_function(n)) {
                if (call) args();  // argument list is documentation only
                return fn_value(f->base());
            }
            if (n.size() > 1 && n[0] == 'd' && (tab.find(n.substr(1)) || tab.vector(n.substr(1))))
                return covector_of(n.substr(1), id);
            fail(id, "undeclared identifier '" + n + "'");
        }
        Fn f = tab.find_function(n);
        if (!f) fail(id, "undeclared function '" + n + "'");
        if (call) args();
        // A vector name in a _d{} suffix yields the gradient.
        std::vector<Atom> insts{f->base()};
        bool vec = false;
        for (auto& dname : id.derivs) {
            std::vector<Atom> wrt;
            if (auto comps = tab.vector(dname)) {
                if (vec) fail(id, "only one vector derivative per reference");
                vec = true;
                for (auto& c : *comps) wrt.push_back(tab.at(c));
            } else {
                Atom a = tab.find(dname);
                if (!a) fail(id, "undeclared identifier '" + dname + "'");
                wrt.push_back(a);
            }
            std::vector<Atom> next;
            for (auto inst : insts)
                for (auto w : wrt) {
                    Atom di = f->derivative(inst, w);
                    if (!di) fail(id, "'" + dname + "' is not an argument of " + n);
                    next.push_back(di);
                }
            if (wrt.size() == 3 && insts.size() == 1) insts = next;
            else if (wrt.size() == 1) insts = next;
            else fail(id, "unsupported derivative shape");
        }
        if (!vec) return fn_value(insts[0]);
        Value v;
        v.vec = true;
        for (auto a : insts) v.c.push_back(fn_value(a).c[0]);
        return v;
    }

    Value atom_value(Atom a) {
        if (a->role == Role::lie_generator) return lie_value(LieExpr::letter(a));
        return scalar_value(Expr(a));
    }

    Value fn_value(Atom inst) {
        if (inst->fn->lie_valued) return lie_value(LieExpr::letter(inst));
        return scalar_value(Expr(inst));
    }

    Value builtin(const Token& id) {
        auto a = args();
        auto prod = [](const Component& x, const Component& y) { return mul(x, y, false); };
        if (id.text == "Sigma") {
            if (a.size() != 1 || !a[0].vec) fail(id, "Sigma expects one vector argument");
            Value r = a[0];
            for (int k = 0; k < 3; ++k) r.c[k] = mul(scalar_comp(ctx_.sigma.diag[k]), r.c[k], false);
            return r;
        }
        if (a.size() != 2 || !a[0].vec || !a[1].vec) fail(id, id.text + " expects two vector arguments");
        const auto& u = a[0].c;
        const auto& v = a[1].c;
        if (id.text == "dot") {
            Component s = prod(u[0], v[0]);
            s = add(s, prod(u[1], v[1]), false);
            s = add(s, prod(u[2], v[2]), false);
            return Value{{s}, false};
        }
        Value r;
        r.vec = true;
        r.c.push_back(add(prod(u[1], v[2]), prod(u[2], v[1]), true));
        r.c.push_back(add(prod(u[2], v[0]), prod(u[0], v[2]), true));
        r.c.push_back(add(prod(u[0], v[1]), prod(u[1], v[0]), true));
        return r;
    }

    Lexer lex_;
    const ParseContext& ctx_;
    const std::string& text_;
    std::vector<Atom> chart_;
};

}  // namespace

Value parse_value(const std::string& text, const ParseContext& ctx) {
    Parser p(text, ctx);
    return p.parse_all();
}

Expr parse_expr(const std::string& text, const ParseContext& ctx) {
    Value v = parse_value(text, ctx);
    if (v.vec || v.c[0].is_lie || v.c[0].form.degree() != 0) throw ParseError("expected a scalar expression: " + text);
    return v.c[0].form.as_scalar();
}

Expr parse_expr(const std::string& text, const SymbolTable& table) {
    ParseContext ctx;
    ctx.table = &table;
    return parse_expr(text, ctx);
}

Form parse_form(const std::string& text, const ParseContext& ctx) {
    Value v = parse_value(text, ctx);
    if (v.vec || v.c[0].is_lie) throw ParseError("expected a scalar form: " + text);
    return v.c[0].form;
}

LieExpr parse_lie(const std::string& text, const ParseContext& ctx) {
    Value v = parse_value(text, ctx);
    if (v.vec) throw ParseError("expected a Lie expression, got a vector: " + text);
    if (!v.c[0].is_lie) {
        if (v.c[0].form.is_zero()) return {};
        throw ParseError("expected a Lie expression: " + text);
    }
    return v.c[0].lie;
}

}  // namespace prolong
