#pragma once

#include <cstddef>
#include <initializer_list>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace momsec {

/// Raised when expression text does not conform to the grammar.
/// Carries the byte offset of the offending token and, when available,
/// a hint describing what was expected at that position.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t offset, const std::string& message,
               std::string expected = "");

    std::size_t offset() const noexcept { return offset_; }
    const std::string& expected() const noexcept { return expected_; }

private:
    std::size_t offset_;
    std::string expected_;
};

/// Raised when numeric evaluation hits a domain error
/// (division by zero, ln of a non-positive value, sqrt of a negative value,
/// zero raised to a negative power).
class EvalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Variable bindings for numeric evaluation.
using Env = std::unordered_map<std::string, double>;

namespace detail {
struct Node;
using NodePtr = std::shared_ptr<const Node>;
}  // namespace detail

/// Immutable symbolic expression over named real variables.
///
/// Supported operations: +, -, *, /, unary minus, integer powers, and the
/// functions sin, cos, exp, ln, sqrt. Expressions are values; all operations
/// build new trees and never mutate. Construction applies a fixed set of
/// simplifications (constant folding of literal subtrees, dropping additive
/// zeros and multiplicative ones, annihilating multiplicative zeros,
/// collapsing double negation, e^0 -> 1, e^1 -> e). Division by a literal
/// zero and literal function applications are deliberately left unfolded so
/// domain errors surface at evaluation time.
class Expr {
public:
    /// The zero expression.
    Expr();

    static Expr constant(double value);
    static Expr variable(std::string name);

    /// Parses expression text. Grammar (whitespace insignificant):
    ///
    ///   expr   := term (("+" | "-") term)*
    ///   term   := factor (("*" | "/") factor)*
    ///   factor := "-" factor | power
    ///   power  := atom ("^" integer)?
    ///   atom   := number | ident | ident "(" expr ")" | "(" expr ")"
    ///
    /// "^" binds tighter than unary minus (so "-x^2" is -(x^2)) and does not
    /// chain. Exponents are (optionally signed) integer literals. Function
    /// names are restricted to sin, cos, exp, ln, sqrt; any other ident
    /// followed by "(" is a ParseError.
    static Expr parse(std::string_view text);

    /// Like parse(), but every variable must be a member of `allowed`;
    /// otherwise a ParseError pointing at the ident is raised.
    static Expr parse_with_variables(std::string_view text,
                                     const std::set<std::string>& allowed);

    bool is_constant() const;
    /// Value of a literal node; requires is_constant().
    double constant_value() const;
    /// True exactly for the literal 0.
    bool is_zero() const;
    bool is_variable() const;
    const std::string& variable_name() const;

    /// Numeric evaluation. Unbound variables raise EvalError.
    double eval(const Env& env) const;

    /// Exact partial derivative with respect to `var`.
    Expr derivative(const std::string& var) const;

    /// Replaces every occurrence of `var` by `replacement`.
    Expr substitute(const std::string& var, const Expr& replacement) const;

    /// Simultaneous substitution of several variables.
    Expr substitute(const std::map<std::string, Expr>& bindings) const;

    /// Renders text that reparses to an equivalent expression; printing the
    /// reparse yields the same text again.
    std::string str() const;

    /// Sorted unique free variables.
    std::vector<std::string> variables() const;

    /// Number of nodes in the tree (diagnostic).
    std::size_t size() const;

    friend Expr operator+(const Expr&, const Expr&);
    friend Expr operator-(const Expr&, const Expr&);
    friend Expr operator*(const Expr&, const Expr&);
    friend Expr operator/(const Expr&, const Expr&);
    friend Expr operator-(const Expr&);
    friend Expr pow(const Expr& base, int exponent);
    friend Expr sin(const Expr&);
    friend Expr cos(const Expr&);
    friend Expr exp(const Expr&);
    friend Expr ln(const Expr&);
    friend Expr sqrt(const Expr&);

private:
    explicit Expr(detail::NodePtr node) : node_(std::move(node)) {}
    detail::NodePtr node_;
};

Expr operator+(const Expr&, const Expr&);
Expr operator-(const Expr&, const Expr&);
Expr operator*(const Expr&, const Expr&);
Expr operator/(const Expr&, const Expr&);
Expr operator-(const Expr&);

inline Expr operator+(const Expr& a, double b) { return a + Expr::constant(b); }
inline Expr operator+(double a, const Expr& b) { return Expr::constant(a) + b; }
inline Expr operator-(const Expr& a, double b) { return a - Expr::constant(b); }
inline Expr operator-(double a, const Expr& b) { return Expr::constant(a) - b; }
inline Expr operator*(const Expr& a, double b) { return a * Expr::constant(b); }
inline Expr operator*(double a, const Expr& b) { return Expr::constant(a) * b; }
inline Expr operator/(const Expr& a, double b) { return a / Expr::constant(b); }
inline Expr operator/(double a, const Expr& b) { return Expr::constant(a) / b; }

Expr pow(const Expr& base, int exponent);
Expr sin(const Expr&);
Expr cos(const Expr&);
Expr exp(const Expr&);
Expr ln(const Expr&);
Expr sqrt(const Expr&);

}  // namespace momsec
