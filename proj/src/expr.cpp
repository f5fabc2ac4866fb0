#include "momsec/expr.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>

namespace momsec {

namespace detail {

enum class Kind { Constant, Variable, Add, Sub, Mul, Div, Neg, Pow, Call };

struct Node {
    Kind kind;
    double value = 0.0;     // Constant
    std::string name;       // Variable name or Call function name
    int exponent = 0;       // Pow
    NodePtr a, b;           // operands (Call/Neg/Pow use a)
};

namespace {

NodePtr make(Node node) { return std::make_shared<const Node>(std::move(node)); }

NodePtr make_constant(double v) {
    return make({.kind = Kind::Constant, .value = v});
}

bool is_literal(const NodePtr& n, double v) {
    return n->kind == Kind::Constant && n->value == v;
}

NodePtr make_neg(NodePtr a) {
    if (a->kind == Kind::Constant) return make_constant(-a->value);
    if (a->kind == Kind::Neg) return a->a;
    return make({.kind = Kind::Neg, .a = std::move(a)});
}

NodePtr make_add(NodePtr a, NodePtr b) {
    if (a->kind == Kind::Constant && b->kind == Kind::Constant)
        return make_constant(a->value + b->value);
    if (is_literal(a, 0.0)) return b;
    if (is_literal(b, 0.0)) return a;
    return make({.kind = Kind::Add, .a = std::move(a), .b = std::move(b)});
}

NodePtr make_sub(NodePtr a, NodePtr b) {
    if (a->kind == Kind::Constant && b->kind == Kind::Constant)
        return make_constant(a->value - b->value);
    if (is_literal(b, 0.0)) return a;
    if (is_literal(a, 0.0)) return make_neg(std::move(b));
    return make({.kind = Kind::Sub, .a = std::move(a), .b = std::move(b)});
}

NodePtr make_mul(NodePtr a, NodePtr b) {
    if (a->kind == Kind::Constant && b->kind == Kind::Constant)
        return make_constant(a->value * b->value);
    if (is_literal(a, 0.0) || is_literal(b, 0.0)) return make_constant(0.0);
    if (is_literal(a, 1.0)) return b;
    if (is_literal(b, 1.0)) return a;
    return make({.kind = Kind::Mul, .a = std::move(a), .b = std::move(b)});
}

NodePtr make_div(NodePtr a, NodePtr b) {
    // A literal zero divisor is kept so the domain error surfaces at eval.
    if (a->kind == Kind::Constant && b->kind == Kind::Constant && b->value != 0.0)
        return make_constant(a->value / b->value);
    if (is_literal(b, 1.0)) return a;
    return make({.kind = Kind::Div, .a = std::move(a), .b = std::move(b)});
}

NodePtr make_pow(NodePtr a, int n) {
    if (n == 0) return make_constant(1.0);
    if (n == 1) return a;
    if (a->kind == Kind::Constant && !(a->value == 0.0 && n < 0))
        return make_constant(std::pow(a->value, n));
    return make({.kind = Kind::Pow, .exponent = n, .a = std::move(a)});
}

NodePtr make_call(std::string name, NodePtr a) {
    return make({.kind = Kind::Call, .name = std::move(name), .a = std::move(a)});
}

constexpr std::array<const char*, 5> kFunctions = {"sin", "cos", "exp", "ln",
                                                   "sqrt"};

bool is_function_name(std::string_view s) {
    return std::find(kFunctions.begin(), kFunctions.end(), s) != kFunctions.end();
}

std::string format_double(double v) {
    std::array<char, 32> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    (void)ec;
    return std::string(buf.data(), ptr);
}

double eval_node(const Node& n, const Env& env) {
    switch (n.kind) {
        case Kind::Constant:
            return n.value;
        case Kind::Variable: {
            auto it = env.find(n.name);
            if (it == env.end())
                throw EvalError("unbound variable '" + n.name + "'");
            return it->second;
        }
        case Kind::Add:
            return eval_node(*n.a, env) + eval_node(*n.b, env);
        case Kind::Sub:
            return eval_node(*n.a, env) - eval_node(*n.b, env);
        case Kind::Mul:
            return eval_node(*n.a, env) * eval_node(*n.b, env);
        case Kind::Div: {
            const double num = eval_node(*n.a, env);
            const double den = eval_node(*n.b, env);
            if (den == 0.0) throw EvalError("division by zero");
            return num / den;
        }
        case Kind::Neg:
            return -eval_node(*n.a, env);
        case Kind::Pow: {
            const double base = eval_node(*n.a, env);
            if (base == 0.0 && n.exponent < 0)
                throw EvalError("zero raised to a negative power");
            return std::pow(base, n.exponent);
        }
        case Kind::Call: {
            const double arg = eval_node(*n.a, env);
            if (n.name == "sin") return std::sin(arg);
            if (n.name == "cos") return std::cos(arg);
            if (n.name == "exp") return std::exp(arg);
            if (n.name == "ln") {
                if (arg <= 0.0) throw EvalError("ln of a non-positive value");
                return std::log(arg);
            }
            // sqrt
            if (arg < 0.0) throw EvalError("sqrt of a negative value");
            return std::sqrt(arg);
        }
    }
    throw EvalError("corrupt expression node");
}

NodePtr derivative_node(const NodePtr& n, const std::string& var) {
    switch (n->kind) {
        case Kind::Constant:
            return make_constant(0.0);
        case Kind::Variable:
            return make_constant(n->name == var ? 1.0 : 0.0);
        case Kind::Add:
            return make_add(derivative_node(n->a, var), derivative_node(n->b, var));
        case Kind::Sub:
            return make_sub(derivative_node(n->a, var), derivative_node(n->b, var));
        case Kind::Mul:
            return make_add(make_mul(derivative_node(n->a, var), n->b),
                            make_mul(n->a, derivative_node(n->b, var)));
        case Kind::Div:
            return make_div(
                make_sub(make_mul(derivative_node(n->a, var), n->b),
                         make_mul(n->a, derivative_node(n->b, var))),
                make_pow(n->b, 2));
        case Kind::Neg:
            return make_neg(derivative_node(n->a, var));
        case Kind::Pow:
            return make_mul(
                make_mul(make_constant(static_cast<double>(n->exponent)),
                         make_pow(n->a, n->exponent - 1)),
                derivative_node(n->a, var));
        case Kind::Call: {
            NodePtr inner = derivative_node(n->a, var);
            if (n->name == "sin") return make_mul(make_call("cos", n->a), inner);
            if (n->name == "cos")
                return make_neg(make_mul(make_call("sin", n->a), inner));
            if (n->name == "exp") return make_mul(make_call("exp", n->a), inner);
            if (n->name == "ln") return make_div(inner, n->a);
            // sqrt
            return make_div(inner,
                            make_mul(make_constant(2.0), make_call("sqrt", n->a)));
        }
    }
    throw EvalError("corrupt expression node");
}

NodePtr substitute_node(const NodePtr& n,
                        const std::map<std::string, NodePtr>& bindings) {
    switch (n->kind) {
        case Kind::Constant:
            return n;
        case Kind::Variable: {
            auto it = bindings.find(n->name);
            return it == bindings.end() ? n : it->second;
        }
        case Kind::Add:
            return make_add(substitute_node(n->a, bindings),
                            substitute_node(n->b, bindings));
        case Kind::Sub:
            return make_sub(substitute_node(n->a, bindings),
                            substitute_node(n->b, bindings));
        case Kind::Mul:
            return make_mul(substitute_node(n->a, bindings),
                            substitute_node(n->b, bindings));
        case Kind::Div:
            return make_div(substitute_node(n->a, bindings),
                            substitute_node(n->b, bindings));
        case Kind::Neg:
            return make_neg(substitute_node(n->a, bindings));
        case Kind::Pow:
            return make_pow(substitute_node(n->a, bindings), n->exponent);
        case Kind::Call:
            return make_call(n->name, substitute_node(n->a, bindings));
    }
    throw EvalError("corrupt expression node");
}

// Precedence levels used by the printer: 1 additive, 2 multiplicative,
// 3 unary minus, 4 power, 5 atom.
int level(const Node& n) {
    switch (n.kind) {
        case Kind::Add:
        case Kind::Sub:
            return 1;
        case Kind::Mul:
        case Kind::Div:
            return 2;
        case Kind::Neg:
            return 3;
        case Kind::Pow:
            return 4;
        case Kind::Constant:
            return n.value < 0.0 ? 3 : 5;  // negative literals print a sign
        case Kind::Variable:
        case Kind::Call:
            return 5;
    }
    return 5;
}

void print_node(const Node& n, std::string& out);

void print_child(const Node& child, int min_level, std::string& out) {
    if (level(child) < min_level) {
        out += '(';
        print_node(child, out);
        out += ')';
    } else {
        print_node(child, out);
    }
}

void print_node(const Node& n, std::string& out) {
    switch (n.kind) {
        case Kind::Constant:
            out += format_double(n.value);
            return;
        case Kind::Variable:
            out += n.name;
            return;
        case Kind::Add:
            print_child(*n.a, 1, out);
            out += " + ";
            print_child(*n.b, 2, out);
            return;
        case Kind::Sub:
            print_child(*n.a, 1, out);
            out += " - ";
            print_child(*n.b, 2, out);
            return;
        case Kind::Mul:
            print_child(*n.a, 2, out);
            out += "*";
            print_child(*n.b, 3, out);
            return;
        case Kind::Div:
            print_child(*n.a, 2, out);
            out += "/";
            print_child(*n.b, 3, out);
            return;
        case Kind::Neg:
            out += '-';
            print_child(*n.a, 3, out);
            return;
        case Kind::Pow:
            print_child(*n.a, 5, out);
            out += '^';
            if (n.exponent < 0) {
                out += '-';
                out += std::to_string(-static_cast<long long>(n.exponent));
            } else {
                out += std::to_string(n.exponent);
            }
            return;
        case Kind::Call:
            out += n.name;
            out += '(';
            print_node(*n.a, out);
            out += ')';
            return;
    }
}

void collect_variables(const Node& n, std::set<std::string>& out) {
    switch (n.kind) {
        case Kind::Constant:
            return;
        case Kind::Variable:
            out.insert(n.name);
            return;
        case Kind::Add:
        case Kind::Sub:
        case Kind::Mul:
        case Kind::Div:
            collect_variables(*n.a, out);
            collect_variables(*n.b, out);
            return;
        case Kind::Neg:
        case Kind::Pow:
        case Kind::Call:
            collect_variables(*n.a, out);
            return;
    }
}

std::size_t count_nodes(const Node& n) {
    switch (n.kind) {
        case Kind::Constant:
        case Kind::Variable:
            return 1;
        case Kind::Add:
        case Kind::Sub:
        case Kind::Mul:
        case Kind::Div:
            return 1 + count_nodes(*n.a) + count_nodes(*n.b);
        case Kind::Neg:
        case Kind::Pow:
        case Kind::Call:
            return 1 + count_nodes(*n.a);
    }
    return 1;
}

// ---------------------------------------------------------------------------
// Lexer and recursive-descent parser.

enum class TokKind {
    Number,
    Ident,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End
};

struct Token {
    TokKind kind;
    std::size_t offset;
    std::string text;       // Ident
    double value = 0.0;     // Number
    bool is_integer = false;
    long long int_value = 0;
};

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    Token next() {
        while (pos_ < text_.size() &&
               std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        const std::size_t start = pos_;
        if (pos_ >= text_.size()) return {TokKind::End, start, ""};

        const char c = text_[pos_];
        switch (c) {
            case '+': ++pos_; return {TokKind::Plus, start, "+"};
            case '-': ++pos_; return {TokKind::Minus, start, "-"};
            case '*': ++pos_; return {TokKind::Star, start, "*"};
            case '/': ++pos_; return {TokKind::Slash, start, "/"};
            case '^': ++pos_; return {TokKind::Caret, start, "^"};
            case '(': ++pos_; return {TokKind::LParen, start, "("};
            case ')': ++pos_; return {TokKind::RParen, start, ")"};
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return lex_number(start);
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
            return lex_ident(start);
        throw ParseError(start, std::string("unexpected character '") + c + "'",
                         "a number, identifier, operator, or parenthesis");
    }

private:
    Token lex_number(std::size_t start) {
        bool integral = true;
        while (pos_ < text_.size() &&
               std::isdigit(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        if (pos_ < text_.size() && text_[pos_] == '.') {
            integral = false;
            ++pos_;
            if (pos_ >= text_.size() ||
                !std::isdigit(static_cast<unsigned char>(text_[pos_])))
                throw ParseError(pos_, "expected digits after decimal point",
                                 "a digit");
            while (pos_ < text_.size() &&
                   std::isdigit(static_cast<unsigned char>(text_[pos_])))
                ++pos_;
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            integral = false;
            ++pos_;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-'))
                ++pos_;
            if (pos_ >= text_.size() ||
                !std::isdigit(static_cast<unsigned char>(text_[pos_])))
                throw ParseError(pos_, "expected digits in exponent", "a digit");
            while (pos_ < text_.size() &&
                   std::isdigit(static_cast<unsigned char>(text_[pos_])))
                ++pos_;
        }
        const std::string_view slice = text_.substr(start, pos_ - start);
        Token tok{TokKind::Number, start, std::string(slice)};
        auto [ptr, ec] =
            std::from_chars(slice.data(), slice.data() + slice.size(), tok.value);
        if (ec != std::errc{} || ptr != slice.data() + slice.size())
            throw ParseError(start, "malformed number literal", "a number");
        tok.is_integer = integral;
        if (integral) {
            auto [iptr, iec] = std::from_chars(
                slice.data(), slice.data() + slice.size(), tok.int_value);
            if (iec != std::errc{}) tok.is_integer = false;
            (void)iptr;
        }
        return tok;
    }

    Token lex_ident(std::size_t start) {
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                text_[pos_] == '_'))
            ++pos_;
        return {TokKind::Ident, start, std::string(text_.substr(start, pos_ - start))};
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

class Parser {
public:
    Parser(std::string_view text, const std::set<std::string>* allowed)
        : lexer_(text), allowed_(allowed) {
        advance();
    }

    NodePtr run() {
        NodePtr e = parse_expr();
        if (tok_.kind != TokKind::End)
            throw ParseError(tok_.offset, "unexpected trailing input",
                             "end of expression or an operator");
        return e;
    }

private:
    void advance() { tok_ = lexer_.next(); }

    bool accept(TokKind k) {
        if (tok_.kind != k) return false;
        advance();
        return true;
    }

    NodePtr parse_expr() {
        NodePtr e = parse_term();
        for (;;) {
            if (accept(TokKind::Plus)) {
                e = make_add(std::move(e), parse_term());
            } else if (accept(TokKind::Minus)) {
                e = make_sub(std::move(e), parse_term());
            } else {
                return e;
            }
        }
    }

    NodePtr parse_term() {
        NodePtr e = parse_factor();
        for (;;) {
            if (accept(TokKind::Star)) {
                e = make_mul(std::move(e), parse_factor());
            } else if (accept(TokKind::Slash)) {
                e = make_div(std::move(e), parse_factor());
            } else {
                return e;
            }
        }
    }

    NodePtr parse_factor() {
        if (accept(TokKind::Minus)) return make_neg(parse_factor());
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_atom();
        if (!accept(TokKind::Caret)) return base;
        const bool negated = accept(TokKind::Minus);
        if (tok_.kind != TokKind::Number || !tok_.is_integer)
            throw ParseError(tok_.offset, "exponent must be an integer literal",
                             "an integer");
        long long n = tok_.int_value;
        if (negated) n = -n;
        if (n < -64 || n > 64)
            throw ParseError(tok_.offset, "exponent out of supported range",
                             "an integer between -64 and 64");
        advance();
        if (tok_.kind == TokKind::Caret)
            throw ParseError(tok_.offset, "exponent chaining is not supported",
                             "an operator or end of expression");
        return make_pow(std::move(base), static_cast<int>(n));
    }

    NodePtr parse_atom() {
        if (tok_.kind == TokKind::Number) {
            const double v = tok_.value;
            advance();
            return make_constant(v);
        }
        if (tok_.kind == TokKind::Ident) {
            Token ident = tok_;
            advance();
            if (accept(TokKind::LParen)) {
                if (!is_function_name(ident.text))
                    throw ParseError(ident.offset,
                                     "unknown function '" + ident.text + "'",
                                     "one of sin, cos, exp, ln, sqrt");
                NodePtr arg = parse_expr();
                if (!accept(TokKind::RParen))
                    throw ParseError(tok_.offset, "expected ')'", "')'");
                return make_call(ident.text, std::move(arg));
            }
            if (allowed_ && !allowed_->count(ident.text))
                throw ParseError(ident.offset,
                                 "unknown variable '" + ident.text + "'",
                                 "a chart coordinate or fiber variable");
            return make({.kind = Kind::Variable, .name = ident.text});
        }
        if (accept(TokKind::LParen)) {
            NodePtr e = parse_expr();
            if (!accept(TokKind::RParen))
                throw ParseError(tok_.offset, "expected ')'", "')'");
            return e;
        }
        throw ParseError(tok_.offset, "expected an expression",
                         "a number, identifier, or '('");
    }

    Lexer lexer_;
    Token tok_{TokKind::End, 0, ""};
    const std::set<std::string>* allowed_;
};

}  // namespace
}  // namespace detail

ParseError::ParseError(std::size_t offset, const std::string& message,
                       std::string expected)
    : std::runtime_error(
          "parse error at byte " + std::to_string(offset) + ": " + message +
          (expected.empty() ? "" : " (expected " + expected + ")")),
      offset_(offset),
      expected_(std::move(expected)) {}

Expr::Expr() : node_(detail::make_constant(0.0)) {}

Expr Expr::constant(double value) { return Expr(detail::make_constant(value)); }

Expr Expr::variable(std::string name) {
    return Expr(detail::make(
        {.kind = detail::Kind::Variable, .name = std::move(name)}));
}

Expr Expr::parse(std::string_view text) {
    return Expr(detail::Parser(text, nullptr).run());
}

Expr Expr::parse_with_variables(std::string_view text,
                                const std::set<std::string>& allowed) {
    return Expr(detail::Parser(text, &allowed).run());
}

bool Expr::is_constant() const {
    return node_->kind == detail::Kind::Constant;
}

double Expr::constant_value() const {
    if (!is_constant()) throw EvalError("expression is not a literal");
    return node_->value;
}

bool Expr::is_zero() const {
    return node_->kind == detail::Kind::Constant && node_->value == 0.0;
}

bool Expr::is_variable() const {
    return node_->kind == detail::Kind::Variable;
}

const std::string& Expr::variable_name() const {
    if (!is_variable()) throw EvalError("expression is not a variable");
    return node_->name;
}

double Expr::eval(const Env& env) const { return detail::eval_node(*node_, env); }

Expr Expr::derivative(const std::string& var) const {
    return Expr(detail::derivative_node(node_, var));
}

Expr Expr::substitute(const std::string& var, const Expr& replacement) const {
    std::map<std::string, detail::NodePtr> bindings{{var, replacement.node_}};
    return Expr(detail::substitute_node(node_, bindings));
}

Expr Expr::substitute(const std::map<std::string, Expr>& bindings) const {
    std::map<std::string, detail::NodePtr> nodes;
    for (const auto& [name, expr] : bindings) nodes.emplace(name, expr.node_);
    return Expr(detail::substitute_node(node_, nodes));
}

std::string Expr::str() const {
    std::string out;
    detail::print_node(*node_, out);
    return out;
}

std::vector<std::string> Expr::variables() const {
    std::set<std::string> names;
    detail::collect_variables(*node_, names);
    return {names.begin(), names.end()};
}

std::size_t Expr::size() const { return detail::count_nodes(*node_); }

Expr operator+(const Expr& a, const Expr& b) {
    return Expr(detail::make_add(a.node_, b.node_));
}
Expr operator-(const Expr& a, const Expr& b) {
    return Expr(detail::make_sub(a.node_, b.node_));
}
Expr operator*(const Expr& a, const Expr& b) {
    return Expr(detail::make_mul(a.node_, b.node_));
}
Expr operator/(const Expr& a, const Expr& b) {
    return Expr(detail::make_div(a.node_, b.node_));
}
Expr operator-(const Expr& a) { return Expr(detail::make_neg(a.node_)); }

Expr pow(const Expr& base, int exponent) {
    return Expr(detail::make_pow(base.node_, exponent));
}
Expr sin(const Expr& a) { return Expr(detail::make_call("sin", a.node_)); }
Expr cos(const Expr& a) { return Expr(detail::make_call("cos", a.node_)); }
Expr exp(const Expr& a) { return Expr(detail::make_call("exp", a.node_)); }
Expr ln(const Expr& a) { return Expr(detail::make_call("ln", a.node_)); }
Expr sqrt(const Expr& a) { return Expr(detail::make_call("sqrt", a.node_)); }

}  // namespace momsec
