#pragma once

// Scalar expression language used to describe g, K, F and the pointwise
// maps h, f1, f2 of a problem instance.
//
// Grammar (lowest to highest precedence):
//   sum     := product (('+' | '-') product)*
//   product := unary (('*' | '/') unary)*
//   unary   := ('-' | '+') unary | power
//   power   := primary ('^' unary)?          right associative
//   primary := number | variable | name '(' args ')' | '(' sum ')'
//
// Functions: exp sin cos abs sqrt (one argument), pow min max (two).
// Variables come from the fixed set {x, y, z, r, s, t, v}; each parse call
// narrows that to the set a given field is allowed to mention.

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "hur/error.hpp"

namespace hur {

enum class Var : std::uint8_t { x, y, z, r, s, t, v };
inline constexpr std::size_t kVarCount = 7;

std::string_view var_name(Var v) noexcept;

/// Small bitset over Var.
class VarSet {
public:
    constexpr VarSet() = default;
    constexpr VarSet(std::initializer_list<Var> vars) {
        for (Var v : vars) bits_ |= bit(v);
    }

    constexpr bool contains(Var v) const noexcept { return (bits_ & bit(v)) != 0; }
    constexpr void insert(Var v) noexcept { bits_ |= bit(v); }
    constexpr bool subset_of(VarSet other) const noexcept { return (bits_ & ~other.bits_) == 0; }
    constexpr bool empty() const noexcept { return bits_ == 0; }
    constexpr VarSet operator|(VarSet o) const noexcept { return VarSet(static_cast<std::uint8_t>(bits_ | o.bits_)); }
    constexpr bool operator==(const VarSet&) const = default;

    std::string to_string() const;

private:
    constexpr explicit VarSet(std::uint8_t bits) : bits_(bits) {}
    static constexpr std::uint8_t bit(Var v) { return static_cast<std::uint8_t>(1u << static_cast<unsigned>(v)); }
    std::uint8_t bits_ = 0;
};

namespace vars {
inline constexpr VarSet point{Var::x, Var::y, Var::z};
inline constexpr VarSet pointwise_map{Var::x, Var::y, Var::z, Var::v};
inline constexpr VarSet kernel{Var::x, Var::y, Var::z, Var::r, Var::s, Var::t, Var::v};
inline constexpr VarSet lipschitz_kernel{Var::x, Var::y, Var::z, Var::r, Var::s, Var::t};
inline constexpr VarSet outer{Var::x, Var::y, Var::z};
} // namespace vars

/// Values for every variable slot, indexed by Var.
using Bindings = std::array<double, kVarCount>;

enum class Op : std::uint8_t {
    constant, variable,
    neg, exp, sin, cos, abs, sqrt,
    add, sub, mul, div, pow, min, max,
};

bool is_unary(Op op) noexcept;
bool is_binary(Op op) noexcept;

struct Node {
    Op op = Op::constant;
    double value = 0.0;
    Var var = Var::x;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
};

class ExpressionError : public Error {
public:
    ExpressionError(const std::string& what, std::size_t position)
        : Error(what), position_(position) {}
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

class SyntaxError : public ExpressionError {
public:
    SyntaxError(const std::string& message, std::size_t position)
        : ExpressionError("syntax error at " + std::to_string(position) + ": " + message, position) {}
};

class UnknownVariable : public ExpressionError {
public:
    UnknownVariable(const std::string& name, std::size_t position)
        : ExpressionError("unknown variable '" + name + "' at " + std::to_string(position), position),
          name_(name) {}
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

class ArityError : public ExpressionError {
public:
    ArityError(const std::string& function, std::size_t position, std::size_t expected, std::size_t got)
        : ExpressionError("function '" + function + "' at " + std::to_string(position) + " takes " +
                              std::to_string(expected) + " argument(s), got " + std::to_string(got),
                          position) {}
};

/// Immutable expression tree plus a flattened postfix program for fast,
/// reentrant evaluation.
class Expression {
public:
    /// The constant 0.
    Expression();

    static Expression constant(double value);
    static Expression variable(Var v);
    static Expression unary(Op op, Expression arg);
    static Expression binary(Op op, Expression lhs, Expression rhs);

    /// Evaluate with every slot bound. Throws DomainError.
    double evaluate(const Bindings& b) const;

    const Node& root() const noexcept { return *root_; }
    VarSet free_vars() const noexcept { return vars_; }
    bool uses(Var v) const noexcept { return vars_.contains(v); }
    bool uses_any(VarSet s) const noexcept;

private:
    explicit Expression(std::shared_ptr<const Node> root);

    struct Instr {
        Op op;
        Var var;
        double value;
    };

    std::shared_ptr<const Node> root_;
    std::vector<Instr> program_;
    std::size_t stack_depth_ = 1;
    VarSet vars_;
};

Expression operator+(Expression a, Expression b);
Expression operator-(Expression a, Expression b);
Expression operator*(Expression a, Expression b);
Expression operator/(Expression a, Expression b);
Expression operator-(Expression a);

/// Parse `text`; every variable must belong to `allowed`.
Expression parse(std::string_view text, VarSet allowed);

/// Evaluate with named bindings. Throws MissingBinding when a free variable
/// of `e` has no entry, DomainError on non-real arithmetic.
double eval(const Expression& e, const std::map<std::string, double>& bindings);

/// Fully parenthesized form, e.g. "(x + (y * z))".
std::string print_canonical(const Expression& e);

} // namespace hur
