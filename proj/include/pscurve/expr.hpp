#pragma once

// Expression trees in one variable t, closed under d/dt.
//
// Nodes are immutable and shared; an Expr is a cheap handle. The smart
// constructors fold constants and drop additive zeros and multiplicative
// ones, nothing more.

#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "pscurve/forms.hpp"

namespace pscurve {

enum class Func { Exp, Log, Sin, Cos, Tan, Sinh, Cosh, Tanh, Sqrt };

std::string_view to_string(Func f);
std::optional<Func> func_from_name(std::string_view name);

class Expr {
public:
    enum class Kind { Const, Var, Neg, Apply, Add, Sub, Mul, Div, Pow };

    /// The zero constant.
    Expr();

    static Expr constant(Scalar value);
    static Expr constant(double value) { return constant(Scalar(value, 0.0)); }
    static Expr var();
    static Expr apply(Func f, const Expr& arg);
    /// base^exponent with a constant real exponent.
    static Expr pow(const Expr& base, double exponent);

    friend Expr operator+(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a, const Expr& b);
    friend Expr operator*(const Expr& a, const Expr& b);
    friend Expr operator/(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a);

    Kind kind() const;
    /// Constant payload; only meaningful for Kind::Const.
    Scalar value() const;
    /// Only meaningful for Kind::Apply.
    Func func() const;
    /// Only meaningful for Kind::Pow.
    double exponent() const;
    /// First operand (unary argument, pow base, left side).
    const Expr& lhs() const;
    /// Second operand of binary arithmetic.
    const Expr& rhs() const;

    bool is_constant() const { return kind() == Kind::Const; }
    bool is_constant(double v) const;
    /// True when no Var node occurs in the tree.
    bool is_closed() const;

    /// Evaluate with real arithmetic. Throws DomainError outside the real
    /// domain of a node (log of a non-positive number, sqrt of a negative
    /// number, division by zero, non-finite result) and when a constant has a
    /// nonzero imaginary part.
    double eval_real(double t) const;
    /// Evaluate with complex arithmetic (principal branches).
    Scalar eval_complex(double t) const;

    /// Replace t by `replacement` everywhere.
    Expr substitute(const Expr& replacement) const;

    /// Text that parse_expression reads back into an equal tree.
    std::string to_string() const;

    std::size_t node_count() const;

private:
    struct Node;
    explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    static Expr make(Kind kind, const Expr& a, const Expr& b = Expr(nullptr), Func f = Func::Exp,
                     double exponent = 0.0);

    std::shared_ptr<const Node> node_;
};

/// Exact symbolic d/dt.
Expr differentiate(const Expr& e);

/// r-fold derivative.
Expr differentiate(const Expr& e, int order);

/// Parse one expression. `i` is the imaginary unit and `<number>i` an
/// imaginary literal; both are rejected when field is Real. Errors carry the
/// 1-based column of the offending token (line is reported as `line`).
Expr parse_expression(std::string_view text, Field field, int line = 0);

}  // namespace pscurve
