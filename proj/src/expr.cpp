#include "hur/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <optional>
#include <utility>

namespace hur {

namespace {

constexpr std::array<std::string_view, kVarCount> kVarNames{"x", "y", "z", "r", "s", "t", "v"};

std::optional<Var> lookup_var(std::string_view name) {
    for (std::size_t i = 0; i < kVarNames.size(); ++i)
        if (kVarNames[i] == name) return static_cast<Var>(i);
    return std::nullopt;
}

struct FunctionInfo {
    std::string_view name;
    Op op;
    std::size_t arity;
};

constexpr std::array<FunctionInfo, 8> kFunctions{{
    {"exp", Op::exp, 1},
    {"sin", Op::sin, 1},
    {"cos", Op::cos, 1},
    {"abs", Op::abs, 1},
    {"sqrt", Op::sqrt, 1},
    {"pow", Op::pow, 2},
    {"min", Op::min, 2},
    {"max", Op::max, 2},
}};

const FunctionInfo* lookup_function(std::string_view name) {
    for (const auto& f : kFunctions)
        if (f.name == name) return &f;
    return nullptr;
}

std::string_view function_name(Op op) {
    for (const auto& f : kFunctions)
        if (f.op == op) return f.name;
    return "?";
}

std::string_view infix_symbol(Op op) {
    switch (op) {
    case Op::add: return "+";
    case Op::sub: return "-";
    case Op::mul: return "*";
    case Op::div: return "/";
    default: return {};
    }
}

double checked(double value, const char* what) {
    if (!std::isfinite(value)) throw DomainError(std::string(what) + " produced a non-finite value");
    return value;
}

double apply_unary(Op op, double a) {
    switch (op) {
    case Op::neg: return -a;
    case Op::exp: return checked(std::exp(a), "exp");
    case Op::sin: return std::sin(a);
    case Op::cos: return std::cos(a);
    case Op::abs: return std::fabs(a);
    case Op::sqrt:
        if (a < 0.0) throw DomainError("sqrt of negative value " + std::to_string(a));
        return std::sqrt(a);
    default: throw Error("internal: not a unary op");
    }
}

double apply_binary(Op op, double a, double b) {
    switch (op) {
    case Op::add: return checked(a + b, "addition");
    case Op::sub: return checked(a - b, "subtraction");
    case Op::mul: return checked(a * b, "multiplication");
    case Op::div:
        if (b == 0.0) throw DomainError("division by zero");
        return checked(a / b, "division");
    case Op::pow: {
        const double p = std::pow(a, b);
        if (std::isnan(p)) throw DomainError("pow(" + std::to_string(a) + ", " + std::to_string(b) + ") is not real");
        return checked(p, "pow");
    }
    case Op::min: return std::fmin(a, b);
    case Op::max: return std::fmax(a, b);
    default: throw Error("internal: not a binary op");
    }
}

class Parser {
public:
    Parser(std::string_view text, VarSet allowed) : text_(text), allowed_(allowed) {}

    Expression run() {
        skip_ws();
        if (pos_ >= text_.size()) throw SyntaxError("empty expression", 0);
        Expression e = sum();
        skip_ws();
        if (pos_ < text_.size())
            throw SyntaxError("unexpected '" + std::string(1, text_[pos_]) + "'", pos_);
        return e;
    }

private:
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) {
            if (pos_ >= text_.size()) throw SyntaxError(std::string("expected '") + c + "' before end of input", pos_);
            throw SyntaxError(std::string("expected '") + c + "'", pos_);
        }
    }

    Expression sum() {
        Expression lhs = product();
        for (;;) {
            if (accept('+')) lhs = Expression::binary(Op::add, std::move(lhs), product());
            else if (accept('-')) lhs = Expression::binary(Op::sub, std::move(lhs), product());
            else return lhs;
        }
    }

    Expression product() {
        Expression lhs = unary();
        for (;;) {
            if (accept('*')) lhs = Expression::binary(Op::mul, std::move(lhs), unary());
            else if (accept('/')) lhs = Expression::binary(Op::div, std::move(lhs), unary());
            else return lhs;
        }
    }

    Expression unary() {
        if (accept('-')) return Expression::unary(Op::neg, unary());
        if (accept('+')) return unary();
        return power();
    }

    Expression power() {
        Expression base = primary();
        if (accept('^')) return Expression::binary(Op::pow, std::move(base), unary());
        return base;
    }

    Expression primary() {
        skip_ws();
        if (pos_ >= text_.size()) throw SyntaxError("unexpected end of input", pos_);
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Expression inner = sum();
            expect(')');
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        throw SyntaxError("unexpected '" + std::string(1, c) + "'", pos_);
    }

    Expression number() {
        const std::size_t start = pos_;
        auto digits = [&] {
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        };
        digits();
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            digits();
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t save = pos_++;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
            if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) digits();
            else pos_ = save;
        }
        double value = 0.0;
        const char* first = text_.data() + start;
        const char* last = text_.data() + pos_;
        auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc{} || ptr != last || !std::isfinite(value))
            throw SyntaxError("malformed number '" + std::string(first, last) + "'", start);
        return Expression::constant(value);
    }

    Expression identifier() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        const std::string name(text_.substr(start, pos_ - start));

        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == '(') {
            const FunctionInfo* fn = lookup_function(name);
            if (fn == nullptr) throw SyntaxError("unknown function '" + name + "'", start);
            ++pos_;
            std::vector<Expression> args;
            if (!accept(')')) {
                do {
                    args.push_back(sum());
                } while (accept(','));
                expect(')');
            }
            if (args.size() != fn->arity) throw ArityError(name, start, fn->arity, args.size());
            if (fn->arity == 1) return Expression::unary(fn->op, std::move(args[0]));
            return Expression::binary(fn->op, std::move(args[0]), std::move(args[1]));
        }

        auto var = lookup_var(name);
        if (!var || !allowed_.contains(*var)) throw UnknownVariable(name, start);
        return Expression::variable(*var);
    }

    std::string_view text_;
    VarSet allowed_;
    std::size_t pos_ = 0;
};

void print_node(const Node& n, std::string& out) {
    switch (n.op) {
    case Op::constant: {
        std::array<char, 32> buf{};
        const double mag = std::fabs(n.value);
        auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), mag);
        (void)ec;
        if (std::signbit(n.value)) {
            out += "(-";
            out.append(buf.data(), ptr);
            out += ")";
        } else {
            out.append(buf.data(), ptr);
        }
        return;
    }
    case Op::variable:
        out += var_name(n.var);
        return;
    case Op::neg:
        out += "(-";
        print_node(*n.lhs, out);
        out += ")";
        return;
    case Op::add:
    case Op::sub:
    case Op::mul:
    case Op::div:
        out += "(";
        print_node(*n.lhs, out);
        out += " ";
        out += infix_symbol(n.op);
        out += " ";
        print_node(*n.rhs, out);
        out += ")";
        return;
    default:
        out += function_name(n.op);
        out += "(";
        print_node(*n.lhs, out);
        if (is_binary(n.op)) {
            out += ", ";
            print_node(*n.rhs, out);
        }
        out += ")";
        return;
    }
}

} // namespace

std::string_view var_name(Var v) noexcept { return kVarNames[static_cast<std::size_t>(v)]; }

std::string VarSet::to_string() const {
    std::string out = "{";
    for (std::size_t i = 0; i < kVarCount; ++i) {
        if (!contains(static_cast<Var>(i))) continue;
        if (out.size() > 1) out += ",";
        out += kVarNames[i];
    }
    return out + "}";
}

bool is_unary(Op op) noexcept { return op >= Op::neg && op <= Op::sqrt; }
bool is_binary(Op op) noexcept { return op >= Op::add && op <= Op::max; }

Expression::Expression() : Expression(std::make_shared<const Node>()) {}

Expression::Expression(std::shared_ptr<const Node> root) : root_(std::move(root)) {
    // Post-order flattening; depth tracks the peak operand stack size.
    std::size_t depth = 0;
    auto emit = [&](auto&& self, const Node& n) -> void {
        if (n.op == Op::constant || n.op == Op::variable) {
            if (n.op == Op::variable) vars_.insert(n.var);
            program_.push_back({n.op, n.var, n.value});
            stack_depth_ = std::max(stack_depth_, ++depth);
            return;
        }
        self(self, *n.lhs);
        if (is_binary(n.op)) {
            self(self, *n.rhs);
            --depth;
        }
        program_.push_back({n.op, n.var, n.value});
    };
    emit(emit, *root_);
}

Expression Expression::constant(double value) {
    auto n = std::make_shared<Node>();
    n->op = Op::constant;
    n->value = value;
    return Expression(std::move(n));
}

Expression Expression::variable(Var v) {
    auto n = std::make_shared<Node>();
    n->op = Op::variable;
    n->var = v;
    return Expression(std::move(n));
}

Expression Expression::unary(Op op, Expression arg) {
    if (!is_unary(op)) throw Error("Expression::unary: not a unary op");
    auto n = std::make_shared<Node>();
    n->op = op;
    n->lhs = std::move(arg.root_);
    return Expression(std::move(n));
}

Expression Expression::binary(Op op, Expression lhs, Expression rhs) {
    if (!is_binary(op)) throw Error("Expression::binary: not a binary op");
    auto n = std::make_shared<Node>();
    n->op = op;
    n->lhs = std::move(lhs.root_);
    n->rhs = std::move(rhs.root_);
    return Expression(std::move(n));
}

bool Expression::uses_any(VarSet s) const noexcept {
    for (std::size_t i = 0; i < kVarCount; ++i) {
        const auto v = static_cast<Var>(i);
        if (s.contains(v) && vars_.contains(v)) return true;
    }
    return false;
}

double Expression::evaluate(const Bindings& b) const {
    constexpr std::size_t kInline = 32;
    std::array<double, kInline> inline_stack{};
    std::vector<double> heap_stack;
    double* stack = inline_stack.data();
    if (stack_depth_ > kInline) {
        heap_stack.resize(stack_depth_);
        stack = heap_stack.data();
    }

    std::size_t top = 0;
    for (const Instr& in : program_) {
        switch (in.op) {
        case Op::constant: stack[top++] = in.value; break;
        case Op::variable: stack[top++] = b[static_cast<std::size_t>(in.var)]; break;
        default:
            if (is_unary(in.op)) {
                stack[top - 1] = apply_unary(in.op, stack[top - 1]);
            } else {
                const double rhs = stack[--top];
                stack[top - 1] = apply_binary(in.op, stack[top - 1], rhs);
            }
        }
    }
    return stack[0];
}

Expression operator+(Expression a, Expression b) { return Expression::binary(Op::add, std::move(a), std::move(b)); }
Expression operator-(Expression a, Expression b) { return Expression::binary(Op::sub, std::move(a), std::move(b)); }
Expression operator*(Expression a, Expression b) { return Expression::binary(Op::mul, std::move(a), std::move(b)); }
Expression operator/(Expression a, Expression b) { return Expression::binary(Op::div, std::move(a), std::move(b)); }
Expression operator-(Expression a) { return Expression::unary(Op::neg, std::move(a)); }

Expression parse(std::string_view text, VarSet allowed) { return Parser(text, allowed).run(); }

double eval(const Expression& e, const std::map<std::string, double>& bindings) {
    Bindings b{};
    for (std::size_t i = 0; i < kVarCount; ++i) {
        const auto v = static_cast<Var>(i);
        if (!e.uses(v)) continue;
        auto it = bindings.find(std::string(var_name(v)));
        if (it == bindings.end()) throw MissingBinding(std::string(var_name(v)));
        b[i] = it->second;
    }
    return e.evaluate(b);
}

std::string print_canonical(const Expression& e) {
    std::string out;
    print_node(e.root(), out);
    return out;
}

} // namespace hur
