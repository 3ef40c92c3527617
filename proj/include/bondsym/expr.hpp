#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bondsym {

/// Node kinds of the expression tree. The language is deliberately small:
/// it only has to express the closed forms, source terms and generator
/// coefficients that appear in the transformation chain.
enum class ExprKind {
    Constant,
    Variable,
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    Neg,
    Exp,
    Log,   // natural logarithm
    Sqrt,
    Abs,
};

class Expr;
using Bindings = std::map<std::string, double>;

/// Raised by parse() with the byte offset of the offending token.
struct ParseError : std::runtime_error {
    ParseError(const std::string& msg, std::size_t off)
        : std::runtime_error(msg + " at offset " + std::to_string(off)), offset(off) {}
    std::size_t offset;
};

/// Raised by eval() for log/sqrt/pow domain violations, division by zero
/// and unbound variables.
struct EvalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Immutable expression tree with value semantics.  Construction goes
/// through smart constructors that do light simplification (constant
/// folding, 0/1 identities); no canonical form is promised.
class Expr {
public:
    Expr() = default;

    static Expr constant(double v);
    static Expr variable(std::string name);

    static Expr add(Expr a, Expr b);
    static Expr sub(Expr a, Expr b);
    static Expr mul(Expr a, Expr b);
    static Expr div(Expr a, Expr b);
    static Expr pow(Expr base, Expr exponent);
    static Expr neg(Expr a);
    static Expr exp(Expr a);
    static Expr log(Expr a);
    static Expr sqrt(Expr a);
    static Expr abs(Expr a);

    ExprKind kind() const;
    double value() const;           // Constant only
    const std::string& name() const; // Variable only
    const Expr& left() const;
    const Expr& right() const;

    bool is_null() const { return node_ == nullptr; }
    explicit operator bool() const { return node_ != nullptr; }

    bool is_constant() const;
    bool is_constant(double v) const;

    /// Decidable structural equality (constants compare bitwise-exact).
    bool same_as(const Expr& other) const;

private:
    struct Node;
    explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    static Expr make(Node n);
    static Expr unary(ExprKind k, Expr a);

    std::shared_ptr<const Node> node_;
};

struct Expr::Node {
    ExprKind kind;
    double value = 0.0;
    std::string name;
    Expr a, b;
};

inline Expr Expr::make(Node n) { return Expr(std::make_shared<const Node>(std::move(n))); }
inline ExprKind Expr::kind() const { return node_->kind; }
inline double Expr::value() const { return node_->value; }
inline const std::string& Expr::name() const { return node_->name; }
inline const Expr& Expr::left() const { return node_->a; }
inline const Expr& Expr::right() const { return node_->b; }
inline bool Expr::is_constant() const { return node_ && node_->kind == ExprKind::Constant; }
inline bool Expr::is_constant(double v) const { return is_constant() && node_->value == v; }

inline Expr operator+(Expr a, Expr b) { return Expr::add(std::move(a), std::move(b)); }
inline Expr operator-(Expr a, Expr b) { return Expr::sub(std::move(a), std::move(b)); }
inline Expr operator*(Expr a, Expr b) { return Expr::mul(std::move(a), std::move(b)); }
inline Expr operator/(Expr a, Expr b) { return Expr::div(std::move(a), std::move(b)); }
inline Expr operator-(Expr a) { return Expr::neg(std::move(a)); }

/// IEEE double evaluation; every variable of e must be bound.
double eval(const Expr& e, const Bindings& b);

/// Partial derivative of e with respect to var, lightly simplified.
/// d|w|/dv is sign(w)*dw/dv; evaluation at w=0 raises EvalError.
Expr differentiate(const Expr& e, const std::string& var);

/// Replace every occurrence of variable var by repl (single pass: variables
/// introduced by repl are not re-substituted).
Expr substitute(const Expr& e, const std::string& var, const Expr& repl);

bool depends_on(const Expr& e, const std::string& var);

/// Unambiguous (fully parenthesized) printer; parse(render(e)) evaluates
/// identically to e.
std::string render(const Expr& e);

/// Parse under the grammar: unary minus > ^ > * / > + -, with ^
/// right-associative and function application by name(arg).  Variable
/// names x, t, u are implicitly declared; anything else must appear in
/// declared_constants.
Expr parse(std::string_view text, const std::vector<std::string>& declared_constants = {});

/// Flattened postfix form of an expression for fast repeated evaluation with
/// a fixed variable layout.  Same value and same domain errors as eval().
class Compiled {
public:
    Compiled() = default;
    /// vars fixes the argument order of operator(); every variable of e must
    /// be listed.
    Compiled(const Expr& e, const std::vector<std::string>& vars);

    double operator()(const double* args) const;
    double operator()(std::initializer_list<double> args) const {
        return (*this)(args.begin());
    }

private:
    struct Op {
        ExprKind kind;
        double value = 0.0; // Constant payload
        int slot = 0;       // Variable payload
    };
    std::vector<Op> ops_;
    std::size_t stack_need_ = 0;
};

} // namespace bondsym
