#pragma once

#include "prolongate/coeff.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace prolong {

enum class Role { independent, fibre, jet, pseudopotential, section_derivative, parameter, lie_generator };

const char* role_name(Role r);

struct FunctionData;

// A symbol or an abstract-function instance. Records are interned and never
// freed, so a raw pointer is a stable handle for the life of the process.
struct AtomData {
    enum class Kind { symbol, function };
    Kind kind = Kind::symbol;
    std::string name;
    Role role = Role::parameter;
    int index = 0;
    int component = 0;

    // Parameter square rule: x*x -> sq_coeff * sq_target (sq_target may be null).
    bool has_square_rule = false;
    Coeff sq_coeff{1};
    const AtomData* sq_target = nullptr;

    // Section derivatives: parent_x means d(parent)/d(wrt).
    const AtomData* parent = nullptr;
    const AtomData* wrt = nullptr;

    // Function instances.
    const FunctionData* fn = nullptr;
    std::vector<int> orders;

    bool is_symbol() const { return kind == Kind::symbol; }
    bool is_function() const { return kind == Kind::function; }
    std::string str() const;
};

using Atom = const AtomData*;

// -1, 0, 1 in the fixed symbol order: symbols before function instances;
// symbols by role, declaration index, name; functions by name then multi-index.
int atom_cmp(Atom a, Atom b);
struct AtomLess {
    bool operator()(Atom a, Atom b) const { return atom_cmp(a, b) < 0; }
};

struct FunctionData {
    std::string name;
    std::vector<Atom> args;
    bool lie_valued = false;

    int arg_position(Atom s) const;
    // Interned instance with the given derivative multi-index.
    Atom instance(const std::vector<int>& orders) const;
    Atom base() const { return instance(std::vector<int>(args.size(), 0)); }
    Atom derivative(Atom inst, Atom wrt) const;  // null if wrt is not an argument

private:
    mutable std::mutex mu_;
    mutable std::map<std::vector<int>, std::unique_ptr<AtomData>> instances_;
};
using Fn = const FunctionData*;

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class SymbolTable {
public:
    Atom declare(const std::string& name, Role role, int component = 0);
    // x*x -> c * target
    void set_square_rule(Atom param, Coeff c, Atom target = nullptr);
    Fn declare_function(const std::string& name, std::vector<Atom> args, bool lie_valued = false);
    // Section derivative symbol named parent_wrt, created on demand.
    Atom section_derivative(Atom parent, Atom wrt);

    Atom find(const std::string& name) const;
    Fn find_function(const std::string& name) const;
    Atom at(const std::string& name) const;  // throws on unknown name

    // Fixed numeric value of a parameter declared as "k2 = 1"; substituted by the parser.
    void set_value(const std::string& name, Coeff v) { values_[name] = std::move(v); }
    const Coeff* value(const std::string& name) const;

    // Named 3-vectors of scalar symbols (S = S1 S2 S3) or Lie generators.
    void declare_vector(const std::string& name, std::vector<std::string> comps) { vectors_[name] = std::move(comps); }
    const std::vector<std::string>* vector(const std::string& name) const;

    std::vector<Atom> symbols() const { return order_; }
    std::vector<Atom> symbols_with_role(Role r) const;
    std::vector<Fn> functions() const;

private:
    std::map<std::string, Atom> by_name_;
    std::vector<Atom> order_;
    std::map<std::string, Fn> funcs_;
    std::vector<Fn> func_order_;
    std::map<std::string, Coeff> values_;
    std::map<std::string, std::vector<std::string>> vectors_;
    int next_index_ = 0;
};

}  // namespace prolong
