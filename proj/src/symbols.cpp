#include "prolongate/symbols.hpp"

namespace prolong {

const char* role_name(Role r) {
    switch (r) {
        case Role::independent: return "independent";
        case Role::fibre: return "fibre";
        case Role::jet: return "jet";
        case Role::pseudopotential: return "pseudopotential";
        case Role::section_derivative: return "section-derivative";
        case Role::parameter: return "parameter";
        case Role::lie_generator: return "lie-generator";
    }
    return "?";
}

std::string AtomData::str() const {
    if (is_symbol()) return name;
    std::string s = name;
    for (size_t k = 0; k < orders.size(); ++k)
        for (int j = 0; j < orders[k]; ++j) s += "_d{" + fn->args[k]->name + "}";
    return s;
}

int atom_cmp(Atom a, Atom b) {
    if (a == b) return 0;
    if (a->kind != b->kind) return a->is_symbol() ? -1 : 1;
    if (a->is_symbol()) {
        if (a->role != b->role) return a->role < b->role ? -1 : 1;
        if (a->index != b->index) return a->index < b->index ? -1 : 1;
        int c = a->name.compare(b->name);
        return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    int c = a->fn->name.compare(b->fn->name);
    if (c != 0) return c < 0 ? -1 : 1;
    int ta = 0, tb = 0;
    for (int o : a->orders) ta += o;
    for (int o : b->orders) tb += o;
    if (ta != tb) return ta < tb ? -1 : 1;
    if (a->orders != b->orders) return a->orders > b->orders ? -1 : 1;
    return 0;
}

int FunctionData::arg_position(Atom s) const {
    for (size_t k = 0; k < args.size(); ++k)
        if (args[k] == s) return static_cast<int>(k);
    return -1;
}

Atom FunctionData::instance(const std::vector<int>& orders) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = instances_.find(orders);
    if (it != instances_.end()) return it->second.get();
    auto d = std::make_unique<AtomData>();
    d->kind = AtomData::Kind::function;
    d->name = name;
    d->role = Role::parameter;
    d->fn = this;
    d->orders = orders;
    Atom out = d.get();
    instances_.emplace(orders, std::move(d));
    return out;
}

Atom FunctionData::derivative(Atom inst, Atom wrt) const {
    int k = arg_position(wrt);
    if (k < 0) return nullptr;
    auto o = inst->orders;
    ++o[k];
    return instance(o);
}

Atom SymbolTable::declare(const std::string& name, Role role, int component) {
    if (by_name_.count(name) || funcs_.count(name)) throw ParseError("duplicate declaration of '" + name + "'");
    auto* d = new AtomData();  // intentionally never freed (stable handle)
    d->name = name;
    d->role = role;
    d->index = next_index_++;
    d->component = component;
    by_name_[name] = d;
    order_.push_back(d);
    return d;
}

void SymbolTable::set_square_rule(Atom param, Coeff c, Atom target) {
    auto* d = const_cast<AtomData*>(param);
    d->has_square_rule = true;
    d->sq_coeff = std::move(c);
    d->sq_target = target;
}

Fn SymbolTable::declare_function(const std::string& name, std::vector<Atom> args, bool lie_valued) {
    if (by_name_.count(name) || funcs_.count(name)) throw ParseError("duplicate declaration of '" + name + "'");
    auto* f = new FunctionData();  // never freed, see declare()
    f->name = name;
    f->args = std::move(args);
    f->lie_valued = lie_valued;
    funcs_[name] = f;
    func_order_.push_back(f);
    return f;
}

Atom SymbolTable::section_derivative(Atom parent, Atom wrt) {
    std::string n = parent->name + "_" + wrt->name;
    if (auto a = find(n)) return a;
    Atom a = declare(n, Role::section_derivative, parent->component);
    auto* d = const_cast<AtomData*>(a);
    d->parent = parent;
    d->wrt = wrt;
    return a;
}

Atom SymbolTable::find(const std::string& name) const {
    auto it = by_name_.find(name);
    return it == by_name_.end() ? nullptr : it->second;
}

Fn SymbolTable::find_function(const std::string& name) const {
    auto it = funcs_.find(name);
    return it == funcs_.end() ? nullptr : it->second;
}

Atom SymbolTable::at(const std::string& name) const {
    if (auto a = find(name)) return a;
    throw ParseError("undeclared identifier '" + name + "'");
}

const Coeff* SymbolTable::value(const std::string& name) const {
    auto it = values_.find(name);
    return it == values_.end() ? nullptr : &it->second;
}

const std::vector<std::string>* SymbolTable::vector(const std::string& name) const {
    auto it = vectors_.find(name);
    return it == vectors_.end() ? nullptr : &it->second;
}

std::vector<Atom> SymbolTable::symbols_with_role(Role r) const {
    std::vector<Atom> out;
    for (auto a : order_)
        if (a->role == r) out.push_back(a);
    return out;
}

std::vector<Fn> SymbolTable::functions() const { return func_order_; }

}  // namespace prolong
