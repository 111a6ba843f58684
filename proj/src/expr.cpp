#include "pscurve/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <type_traits>

#include "pscurve/error.hpp"

namespace pscurve {

struct Expr::Node {
    Kind kind = Kind::Const;
    Scalar value{0.0, 0.0};
    Func func = Func::Exp;
    double exponent = 0.0;
    Expr a{nullptr};
    Expr b{nullptr};
    std::size_t count = 1;
    bool closed = true;
};

namespace {

constexpr std::array<std::pair<Func, std::string_view>, 9> kFuncNames{{
    {Func::Exp, "exp"},
    {Func::Log, "log"},
    {Func::Sin, "sin"},
    {Func::Cos, "cos"},
    {Func::Tan, "tan"},
    {Func::Sinh, "sinh"},
    {Func::Cosh, "cosh"},
    {Func::Tanh, "tanh"},
    {Func::Sqrt, "sqrt"},
}};

bool is_integer(double x) {
    return std::isfinite(x) && std::floor(x) == x && std::abs(x) < 1e9;
}

template <class T>
T int_pow(T base, long long k) {
    if (k < 0) {
        return T(1.0) / int_pow(base, -k);
    }
    T result(1.0);
    while (k > 0) {
        if (k & 1) {
            result *= base;
        }
        base *= base;
        k >>= 1;
    }
    return result;
}

bool finite(double x) { return std::isfinite(x); }
bool finite(Scalar z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

std::string_view to_string(Func f) {
    for (const auto& [fn, name] : kFuncNames) {
        if (fn == f) {
            return name;
        }
    }
    return "?";
}

std::optional<Func> func_from_name(std::string_view name) {
    for (const auto& [fn, n] : kFuncNames) {
        if (n == name) {
            return fn;
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Construction

Expr Expr::make(Kind kind, const Expr& a, const Expr& b, Func f, double exponent) {
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->func = f;
    n->exponent = exponent;
    n->a = a;
    n->b = b;
    n->count = 1;
    n->closed = true;
    if (a.node_) {
        n->count += a.node_count();
        n->closed = n->closed && a.is_closed();
    }
    if (b.node_) {
        n->count += b.node_count();
        n->closed = n->closed && b.is_closed();
    }
    if (kind == Kind::Var) {
        n->closed = false;
    }
    return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr::Expr() {
    static const Expr zero = constant(0.0);
    node_ = zero.node_;
}

Expr Expr::constant(Scalar value) {
    auto n = std::make_shared<Node>();
    n->value = value;
    return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::var() {
    static const Expr t = make(Kind::Var, Expr(nullptr));
    return t;
}

Expr Expr::apply(Func f, const Expr& arg) {
    return make(Kind::Apply, arg, Expr(nullptr), f);
}

Expr Expr::pow(const Expr& base, double exponent) {
    if (exponent == 0.0) {
        return constant(1.0);
    }
    if (exponent == 1.0) {
        return base;
    }
    if (base.is_constant() && is_integer(exponent)) {
        const Scalar v = int_pow(base.value(), static_cast<long long>(exponent));
        if (finite(v)) {
            return constant(v);
        }
    }
    return make(Kind::Pow, base, Expr(nullptr), Func::Exp, exponent);
}

Expr operator-(const Expr& a) {
    if (a.is_constant()) {
        return Expr::constant(-a.value());
    }
    if (a.kind() == Expr::Kind::Neg) {
        return a.lhs();
    }
    return Expr::make(Expr::Kind::Neg, a);
}

Expr operator+(const Expr& a, const Expr& b) {
    if (a.is_constant() && b.is_constant()) {
        return Expr::constant(a.value() + b.value());
    }
    if (a.is_constant(0.0)) {
        return b;
    }
    if (b.is_constant(0.0)) {
        return a;
    }
    return Expr::make(Expr::Kind::Add, a, b);
}

Expr operator-(const Expr& a, const Expr& b) {
    if (a.is_constant() && b.is_constant()) {
        return Expr::constant(a.value() - b.value());
    }
    if (b.is_constant(0.0)) {
        return a;
    }
    if (a.is_constant(0.0)) {
        return -b;
    }
    return Expr::make(Expr::Kind::Sub, a, b);
}

Expr operator*(const Expr& a, const Expr& b) {
    if (a.is_constant() && b.is_constant()) {
        const Scalar v = a.value() * b.value();
        if (finite(v)) {
            return Expr::constant(v);
        }
    }
    if (a.is_constant(0.0) || b.is_constant(0.0)) {
        return Expr();
    }
    if (a.is_constant(1.0)) {
        return b;
    }
    if (b.is_constant(1.0)) {
        return a;
    }
    if (a.is_constant(-1.0)) {
        return -b;
    }
    if (b.is_constant(-1.0)) {
        return -a;
    }
    return Expr::make(Expr::Kind::Mul, a, b);
}

Expr operator/(const Expr& a, const Expr& b) {
    if (a.is_constant() && b.is_constant() && b.value() != Scalar(0.0)) {
        const Scalar v = a.value() / b.value();
        if (finite(v)) {
            return Expr::constant(v);
        }
    }
    if (b.is_constant(1.0)) {
        return a;
    }
    if (a.is_constant(0.0) && !b.is_constant(0.0)) {
        return Expr();
    }
    return Expr::make(Expr::Kind::Div, a, b);
}

// ---------------------------------------------------------------------------
// Accessors

Expr::Kind Expr::kind() const { return node_->kind; }
Scalar Expr::value() const { return node_->value; }
Func Expr::func() const { return node_->func; }
double Expr::exponent() const { return node_->exponent; }
const Expr& Expr::lhs() const { return node_->a; }
const Expr& Expr::rhs() const { return node_->b; }
bool Expr::is_constant(double v) const { return is_constant() && node_->value == Scalar(v, 0.0); }
bool Expr::is_closed() const { return node_->closed; }
std::size_t Expr::node_count() const { return node_->count; }

// ---------------------------------------------------------------------------
// Evaluation

namespace {

[[noreturn]] void domain_fail(const std::string& what, double t) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", t);
    throw DomainError(what + " at t=" + buf);
}

template <class T>
T check(T v, const char* what, double t) {
    if (!finite(v)) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", t);
        throw OverflowError(std::string("non-finite value from ") + what + " at t=" + buf);
    }
    return v;
}

template <class T>
T eval_node(const Expr& e, double t) {
    constexpr bool kReal = std::is_same_v<T, double>;
    using K = Expr::Kind;
    switch (e.kind()) {
        case K::Const:
            if constexpr (kReal) {
                if (e.value().imag() != 0.0) {
                    domain_fail("complex constant in real evaluation", t);
                }
                return e.value().real();
            } else {
                return e.value();
            }
        case K::Var: return T(t);
        case K::Neg: return -eval_node<T>(e.lhs(), t);
        case K::Add: return eval_node<T>(e.lhs(), t) + eval_node<T>(e.rhs(), t);
        case K::Sub: return eval_node<T>(e.lhs(), t) - eval_node<T>(e.rhs(), t);
        case K::Mul: return check(eval_node<T>(e.lhs(), t) * eval_node<T>(e.rhs(), t), "product", t);
        case K::Div: {
            const T num = eval_node<T>(e.lhs(), t);
            const T den = eval_node<T>(e.rhs(), t);
            if (den == T(0.0)) {
                domain_fail("division by zero", t);
            }
            return check(T(num / den), "quotient", t);
        }
        case K::Pow: {
            const T base = eval_node<T>(e.lhs(), t);
            const double k = e.exponent();
            if (base == T(0.0) && k < 0.0) {
                domain_fail("zero raised to a negative power", t);
            }
            if (is_integer(k)) {
                return check(int_pow(base, static_cast<long long>(k)), "power", t);
            }
            if constexpr (kReal) {
                if (base < 0.0) {
                    domain_fail("negative base with non-integer exponent", t);
                }
                return check(std::pow(base, k), "power", t);
            } else {
                return check(std::pow(base, k), "power", t);
            }
        }
        case K::Apply: {
            const T u = eval_node<T>(e.lhs(), t);
            switch (e.func()) {
                case Func::Exp: return check(std::exp(u), "exp", t);
                case Func::Log:
                    if constexpr (kReal) {
                        if (u <= 0.0) {
                            domain_fail("log of a non-positive number", t);
                        }
                    } else {
                        if (u == T(0.0)) {
                            domain_fail("log of zero", t);
                        }
                    }
                    return std::log(u);
                case Func::Sin: return check(std::sin(u), "sin", t);
                case Func::Cos: return check(std::cos(u), "cos", t);
                case Func::Tan: return check(std::tan(u), "tan", t);
                case Func::Sinh: return check(std::sinh(u), "sinh", t);
                case Func::Cosh: return check(std::cosh(u), "cosh", t);
                case Func::Tanh: return check(std::tanh(u), "tanh", t);
                case Func::Sqrt:
                    if constexpr (kReal) {
                        if (u < 0.0) {
                            domain_fail("sqrt of a negative number", t);
                        }
                    }
                    return std::sqrt(u);
            }
        }
    }
    domain_fail("corrupt expression node", t);
}

}  // namespace

double Expr::eval_real(double t) const { return eval_node<double>(*this, t); }
Scalar Expr::eval_complex(double t) const { return eval_node<Scalar>(*this, t); }

Expr Expr::substitute(const Expr& replacement) const {
    switch (kind()) {
        case Kind::Const: return *this;
        case Kind::Var: return replacement;
        case Kind::Neg: return -lhs().substitute(replacement);
        case Kind::Add: return lhs().substitute(replacement) + rhs().substitute(replacement);
        case Kind::Sub: return lhs().substitute(replacement) - rhs().substitute(replacement);
        case Kind::Mul: return lhs().substitute(replacement) * rhs().substitute(replacement);
        case Kind::Div: return lhs().substitute(replacement) / rhs().substitute(replacement);
        case Kind::Pow: return pow(lhs().substitute(replacement), exponent());
        case Kind::Apply: return apply(func(), lhs().substitute(replacement));
    }
    return *this;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

std::string number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string constant_text(Scalar v) {
    const double re = v.real();
    const double im = v.imag();
    if (im == 0.0) {
        return re < 0.0 || std::signbit(re) ? "(" + number(re) + ")" : number(re);
    }
    if (re == 0.0) {
        return im < 0.0 ? "(" + number(im) + "i)" : number(im) + "i";
    }
    return "(" + number(re) + (im < 0.0 ? "-" : "+") + number(std::abs(im)) + "i)";
}

int precedence(const Expr& e) {
    switch (e.kind()) {
        case Expr::Kind::Add:
        case Expr::Kind::Sub: return 1;
        case Expr::Kind::Mul:
        case Expr::Kind::Div: return 2;
        case Expr::Kind::Neg: return 3;
        case Expr::Kind::Pow: return 4;
        default: return 5;
    }
}

void print(const Expr& e, int min_prec, std::string& out);

void print_child(const Expr& e, int min_prec, std::string& out) {
    if (precedence(e) < min_prec) {
        out += '(';
        print(e, 0, out);
        out += ')';
    } else {
        print(e, min_prec, out);
    }
}

void print(const Expr& e, int /*min_prec*/, std::string& out) {
    using K = Expr::Kind;
    switch (e.kind()) {
        case K::Const: out += constant_text(e.value()); return;
        case K::Var: out += 't'; return;
        case K::Neg:
            out += '-';
            print_child(e.lhs(), 3, out);
            return;
        case K::Apply:
            out += to_string(e.func());
            out += '(';
            print(e.lhs(), 0, out);
            out += ')';
            return;
        case K::Pow:
            print_child(e.lhs(), 5, out);
            out += '^';
            out += constant_text(Scalar(e.exponent(), 0.0));
            return;
        case K::Add:
        case K::Sub:
            print_child(e.lhs(), 1, out);
            out += e.kind() == K::Add ? " + " : " - ";
            print_child(e.rhs(), 2, out);
            return;
        case K::Mul:
        case K::Div:
            print_child(e.lhs(), 2, out);
            out += e.kind() == K::Mul ? "*" : "/";
            print_child(e.rhs(), 3, out);
            return;
    }
}

}  // namespace

std::string Expr::to_string() const {
    std::string out;
    print(*this, 0, out);
    return out;
}

// ---------------------------------------------------------------------------
// Differentiation

Expr differentiate(const Expr& e) {
    using K = Expr::Kind;
    if (e.is_closed()) {
        return Expr();
    }
    switch (e.kind()) {
        case K::Const: return Expr();
        case K::Var: return Expr::constant(1.0);
        case K::Neg: return -differentiate(e.lhs());
        case K::Add: return differentiate(e.lhs()) + differentiate(e.rhs());
        case K::Sub: return differentiate(e.lhs()) - differentiate(e.rhs());
        case K::Mul: {
            const Expr& u = e.lhs();
            const Expr& v = e.rhs();
            return differentiate(u) * v + u * differentiate(v);
        }
        case K::Div: {
            const Expr& u = e.lhs();
            const Expr& v = e.rhs();
            if (v.is_closed()) {
                return differentiate(u) / v;
            }
            return (differentiate(u) * v - u * differentiate(v)) / Expr::pow(v, 2.0);
        }
        case K::Pow: {
            const double k = e.exponent();
            return Expr::constant(k) * Expr::pow(e.lhs(), k - 1.0) * differentiate(e.lhs());
        }
        case K::Apply: {
            const Expr& u = e.lhs();
            const Expr du = differentiate(u);
            switch (e.func()) {
                case Func::Exp: return e * du;
                case Func::Log: return du / u;
                case Func::Sin: return Expr::apply(Func::Cos, u) * du;
                case Func::Cos: return -(Expr::apply(Func::Sin, u) * du);
                case Func::Tan: return du / Expr::pow(Expr::apply(Func::Cos, u), 2.0);
                case Func::Sinh: return Expr::apply(Func::Cosh, u) * du;
                case Func::Cosh: return Expr::apply(Func::Sinh, u) * du;
                case Func::Tanh: return du / Expr::pow(Expr::apply(Func::Cosh, u), 2.0);
                case Func::Sqrt: return du / (Expr::constant(2.0) * e);
            }
        }
    }
    return Expr();
}

Expr differentiate(const Expr& e, int order) {
    Expr d = e;
    for (int k = 0; k < order; ++k) {
        d = differentiate(d);
    }
    return d;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class Parser {
public:
    Parser(std::string_view text, Field field, int line) : text_(text), field_(field), line_(line) {}

    Expr parse() {
        Expr e = expression();
        skip_space();
        if (pos_ < text_.size()) {
            fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        }
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { fail_at(msg, pos_); }
    [[noreturn]] void fail_at(const std::string& msg, std::size_t at) const {
        throw ParseError(msg, line_ > 0 ? line_ : 0, static_cast<int>(at) + 1);
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Expr expression() {
        Expr lhs = term();
        for (;;) {
            if (accept('+')) {
                lhs = lhs + term();
            } else if (accept('-')) {
                lhs = lhs - term();
            } else {
                return lhs;
            }
        }
    }

    Expr term() {
        Expr lhs = unary();
        for (;;) {
            if (accept('*')) {
                lhs = lhs * unary();
            } else if (accept('/')) {
                lhs = lhs / unary();
            } else {
                return lhs;
            }
        }
    }

    Expr unary() {
        if (accept('-')) {
            return -unary();
        }
        if (accept('+')) {
            return unary();
        }
        return power();
    }

    Expr power() {
        Expr base = primary();
        skip_space();
        const std::size_t at = pos_;
        if (accept('^')) {
            const Expr exponent = unary();
            if (!exponent.is_closed()) {
                fail_at("exponent must be a constant", at);
            }
            const Scalar k = exponent.eval_complex(0.0);
            if (k.imag() != 0.0) {
                fail_at("exponent must be real", at);
            }
            return Expr::pow(base, k.real());
        }
        return base;
    }

    Expr primary() {
        skip_space();
        if (pos_ >= text_.size()) {
            fail("unexpected end of expression");
        }
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Expr inner = expression();
            if (!accept(')')) {
                fail("expected ')'");
            }
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            return number_literal();
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
                ++pos_;
            }
            const std::string_view name = text_.substr(start, pos_ - start);
            if (name == "t") {
                return Expr::var();
            }
            if (name == "pi") {
                return Expr::constant(std::numbers::pi);
            }
            if (name == "i") {
                require_complex(start);
                return Expr::constant(Scalar(0.0, 1.0));
            }
            skip_space();
            if (pos_ < text_.size() && text_[pos_] == '(') {
                const auto f = func_from_name(name);
                if (!f) {
                    fail_at("unknown function '" + std::string(name) + "'", start);
                }
                ++pos_;
                Expr arg = expression();
                if (!accept(')')) {
                    fail("expected ')' after argument of " + std::string(name));
                }
                return Expr::apply(*f, arg);
            }
            fail_at("unknown identifier '" + std::string(name) + "'", start);
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    Expr number_literal() {
        const std::size_t start = pos_;
        double v = 0.0;
        const char* first = text_.data() + pos_;
        const char* last = text_.data() + text_.size();
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc() || ptr == first) {
            fail("malformed number");
        }
        pos_ += static_cast<std::size_t>(ptr - first);
        if (pos_ < text_.size() && text_[pos_] == 'i' &&
            (pos_ + 1 >= text_.size() || !std::isalnum(static_cast<unsigned char>(text_[pos_ + 1])))) {
            require_complex(start);
            ++pos_;
            return Expr::constant(Scalar(0.0, v));
        }
        if (pos_ < text_.size() && (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            fail("missing operator after number");
        }
        return Expr::constant(v);
    }

    void require_complex(std::size_t at) const {
        if (field_ != Field::Complex) {
            fail_at("imaginary unit 'i' is only allowed in complex-field paths", at);
        }
    }

    std::string_view text_;
    Field field_;
    int line_;
    std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expression(std::string_view text, Field field, int line) {
    return Parser(text, field, line).parse();
}

}  // namespace pscurve
