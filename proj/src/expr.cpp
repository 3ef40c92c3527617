#include "bondsym/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace bondsym {

Expr Expr::constant(double v) {
    Node n;
    n.kind = ExprKind::Constant;
    n.value = v;
    return make(std::move(n));
}

Expr Expr::variable(std::string name) {
    Node n;
    n.kind = ExprKind::Variable;
    n.name = std::move(name);
    return make(std::move(n));
}

Expr Expr::add(Expr a, Expr b) {
    if (a.is_constant() && b.is_constant()) return constant(a.value() + b.value());
    if (a.is_constant(0.0)) return b;
    if (b.is_constant(0.0)) return a;
    Node n;
    n.kind = ExprKind::Add;
    n.a = std::move(a);
    n.b = std::move(b);
    return make(std::move(n));
}

Expr Expr::sub(Expr a, Expr b) {
    if (a.is_constant() && b.is_constant()) return constant(a.value() - b.value());
    if (b.is_constant(0.0)) return a;
    if (a.is_constant(0.0)) return neg(std::move(b));
    Node n;
    n.kind = ExprKind::Sub;
    n.a = std::move(a);
    n.b = std::move(b);
    return make(std::move(n));
}

Expr Expr::mul(Expr a, Expr b) {
    if (a.is_constant(0.0) || b.is_constant(0.0)) return constant(0.0);
    if (a.is_constant() && b.is_constant()) return constant(a.value() * b.value());
    if (a.is_constant(1.0)) return b;
    if (b.is_constant(1.0)) return a;
    Node n;
    n.kind = ExprKind::Mul;
    n.a = std::move(a);
    n.b = std::move(b);
    return make(std::move(n));
}

Expr Expr::div(Expr a, Expr b) {
    if (a.is_constant(0.0)) return constant(0.0);
    if (b.is_constant(1.0)) return a;
    if (a.is_constant() && b.is_constant() && b.value() != 0.0)
        return constant(a.value() / b.value());
    Node n;
    n.kind = ExprKind::Div;
    n.a = std::move(a);
    n.b = std::move(b);
    return make(std::move(n));
}

Expr Expr::pow(Expr base, Expr exponent) {
    if (exponent.is_constant(0.0)) return constant(1.0);
    if (exponent.is_constant(1.0)) return base;
    if (base.is_constant(1.0)) return constant(1.0);
    if (base.is_constant() && exponent.is_constant()) {
        double v = std::pow(base.value(), exponent.value());
        if (std::isfinite(v)) return constant(v);
    }
    Node n;
    n.kind = ExprKind::Pow;
    n.a = std::move(base);
    n.b = std::move(exponent);
    return make(std::move(n));
}

Expr Expr::neg(Expr a) {
    if (a.is_constant()) return constant(-a.value());
    if (a.kind() == ExprKind::Neg) return a.left();
    Node n;
    n.kind = ExprKind::Neg;
    n.a = std::move(a);
    return make(std::move(n));
}

Expr Expr::exp(Expr a) { return unary(ExprKind::Exp, std::move(a)); }
Expr Expr::log(Expr a) { return unary(ExprKind::Log, std::move(a)); }
Expr Expr::sqrt(Expr a) { return unary(ExprKind::Sqrt, std::move(a)); }
Expr Expr::abs(Expr a) { return unary(ExprKind::Abs, std::move(a)); }

Expr Expr::unary(ExprKind k, Expr a) {
    if (a.is_constant()) {
        double x = a.value();
        switch (k) {
        case ExprKind::Exp: return Expr::constant(std::exp(x));
        case ExprKind::Log:
            if (x > 0.0) return Expr::constant(std::log(x));
            break;
        case ExprKind::Sqrt:
            if (x >= 0.0) return Expr::constant(std::sqrt(x));
            break;
        case ExprKind::Abs: return Expr::constant(std::fabs(x));
        default: break;
        }
    }
    Node n;
    n.kind = k;
    n.a = std::move(a);
    return make(std::move(n));
}

bool Expr::same_as(const Expr& other) const {
    if (node_ == other.node_) return true;
    if (!node_ || !other.node_) return false;
    if (node_->kind != other.node_->kind) return false;
    switch (node_->kind) {
    case ExprKind::Constant: return node_->value == other.node_->value;
    case ExprKind::Variable: return node_->name == other.node_->name;
    default: break;
    }
    if (static_cast<bool>(node_->a) != static_cast<bool>(other.node_->a)) return false;
    if (static_cast<bool>(node_->b) != static_cast<bool>(other.node_->b)) return false;
    if (node_->a && !node_->a.same_as(other.node_->a)) return false;
    if (node_->b && !node_->b.same_as(other.node_->b)) return false;
    return true;
}

// ---------------------------------------------------------------------------
// evaluation

static bool is_integer(double v) { return std::isfinite(v) && v == std::floor(v); }

double eval(const Expr& e, const Bindings& b) {
    switch (e.kind()) {
    case ExprKind::Constant: return e.value();
    case ExprKind::Variable: {
        auto it = b.find(e.name());
        if (it == b.end()) throw EvalError("unbound variable '" + e.name() + "'");
        return it->second;
    }
    case ExprKind::Add: return eval(e.left(), b) + eval(e.right(), b);
    case ExprKind::Sub: return eval(e.left(), b) - eval(e.right(), b);
    case ExprKind::Mul: return eval(e.left(), b) * eval(e.right(), b);
    case ExprKind::Div: {
        double num = eval(e.left(), b);
        double den = eval(e.right(), b);
        if (den == 0.0) throw EvalError("division by zero");
        return num / den;
    }
    case ExprKind::Pow: {
        double base = eval(e.left(), b);
        double p = eval(e.right(), b);
        if (base == 0.0 && p < 0.0) throw EvalError("zero raised to negative power");
        if (base < 0.0 && !is_integer(p))
            throw EvalError("negative base with non-integer exponent");
        return std::pow(base, p);
    }
    case ExprKind::Neg: return -eval(e.left(), b);
    case ExprKind::Exp: return std::exp(eval(e.left(), b));
    case ExprKind::Log: {
        double v = eval(e.left(), b);
        if (v <= 0.0) throw EvalError("log of non-positive value");
        return std::log(v);
    }
    case ExprKind::Sqrt: {
        double v = eval(e.left(), b);
        if (v < 0.0) throw EvalError("sqrt of negative value");
        return std::sqrt(v);
    }
    case ExprKind::Abs: return std::fabs(eval(e.left(), b));
    }
    throw EvalError("corrupt expression");
}

// ---------------------------------------------------------------------------
// differentiation

Expr differentiate(const Expr& e, const std::string& var) {
    using E = Expr;
    switch (e.kind()) {
    case ExprKind::Constant: return E::constant(0.0);
    case ExprKind::Variable: return E::constant(e.name() == var ? 1.0 : 0.0);
    case ExprKind::Add:
        return differentiate(e.left(), var) + differentiate(e.right(), var);
    case ExprKind::Sub:
        return differentiate(e.left(), var) - differentiate(e.right(), var);
    case ExprKind::Mul:
        return differentiate(e.left(), var) * e.right() +
               e.left() * differentiate(e.right(), var);
    case ExprKind::Div:
        return (differentiate(e.left(), var) * e.right() -
                e.left() * differentiate(e.right(), var)) /
               E::pow(e.right(), E::constant(2.0));
    case ExprKind::Pow: {
        const Expr& a = e.left();
        const Expr& p = e.right();
        Expr da = differentiate(a, var);
        if (!depends_on(p, var)) {
            // p * a^(p-1) * a'
            return p * E::pow(a, p - E::constant(1.0)) * da;
        }
        // a^p * (p' log a + p a'/a)
        Expr dp = differentiate(p, var);
        return e * (dp * E::log(a) + p * da / a);
    }
    case ExprKind::Neg: return -differentiate(e.left(), var);
    case ExprKind::Exp: return e * differentiate(e.left(), var);
    case ExprKind::Log: return differentiate(e.left(), var) / e.left();
    case ExprKind::Sqrt:
        return differentiate(e.left(), var) / (E::constant(2.0) * e);
    case ExprKind::Abs:
        // sign(w) * w' = w/|w| * w'; undefined (division by zero) at w=0
        return e.left() / e * differentiate(e.left(), var);
    }
    throw EvalError("corrupt expression");
}

// ---------------------------------------------------------------------------
// substitution and queries

Expr substitute(const Expr& e, const std::string& var, const Expr& repl) {
    using E = Expr;
    switch (e.kind()) {
    case ExprKind::Constant: return e;
    case ExprKind::Variable: return e.name() == var ? repl : e;
    case ExprKind::Add:
        return substitute(e.left(), var, repl) + substitute(e.right(), var, repl);
    case ExprKind::Sub:
        return substitute(e.left(), var, repl) - substitute(e.right(), var, repl);
    case ExprKind::Mul:
        return substitute(e.left(), var, repl) * substitute(e.right(), var, repl);
    case ExprKind::Div:
        return substitute(e.left(), var, repl) / substitute(e.right(), var, repl);
    case ExprKind::Pow:
        return E::pow(substitute(e.left(), var, repl), substitute(e.right(), var, repl));
    case ExprKind::Neg: return -substitute(e.left(), var, repl);
    case ExprKind::Exp: return E::exp(substitute(e.left(), var, repl));
    case ExprKind::Log: return E::log(substitute(e.left(), var, repl));
    case ExprKind::Sqrt: return E::sqrt(substitute(e.left(), var, repl));
    case ExprKind::Abs: return E::abs(substitute(e.left(), var, repl));
    }
    throw EvalError("corrupt expression");
}

bool depends_on(const Expr& e, const std::string& var) {
    switch (e.kind()) {
    case ExprKind::Constant: return false;
    case ExprKind::Variable: return e.name() == var;
    default:
        if (e.left() && depends_on(e.left(), var)) return true;
        if (e.right() && depends_on(e.right(), var)) return true;
        return false;
    }
}

// ---------------------------------------------------------------------------
// rendering

static void render_rec(const Expr& e, std::string& out) {
    auto bin = [&](const char* op) {
        out += '(';
        render_rec(e.left(), out);
        out += op;
        render_rec(e.right(), out);
        out += ')';
    };
    auto fn = [&](const char* name) {
        out += name;
        out += '(';
        render_rec(e.left(), out);
        out += ')';
    };
    switch (e.kind()) {
    case ExprKind::Constant: {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", e.value());
        out += buf;
        break;
    }
    case ExprKind::Variable: out += e.name(); break;
    case ExprKind::Add: bin("+"); break;
    case ExprKind::Sub: bin("-"); break;
    case ExprKind::Mul: bin("*"); break;
    case ExprKind::Div: bin("/"); break;
    case ExprKind::Pow: bin("^"); break;
    case ExprKind::Neg:
        out += "(-";
        render_rec(e.left(), out);
        out += ')';
        break;
    case ExprKind::Exp: fn("exp"); break;
    case ExprKind::Log: fn("log"); break;
    case ExprKind::Sqrt: fn("sqrt"); break;
    case ExprKind::Abs: fn("abs"); break;
    }
}

std::string render(const Expr& e) {
    std::string out;
    render_rec(e, out);
    return out;
}

// ---------------------------------------------------------------------------
// parser

namespace {

struct Parser {
    std::string_view text;
    std::size_t pos = 0;
    const std::vector<std::string>* constants;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    bool at_end() {
        skip_ws();
        return pos >= text.size();
    }

    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }

    bool accept(char c) {
        if (peek() == c) {
            ++pos;
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& msg) {
        skip_ws();
        throw ParseError(msg, pos);
    }

    Expr parse_expr() {
        Expr e = parse_term();
        for (;;) {
            if (accept('+'))
                e = e + parse_term();
            else if (accept('-'))
                e = e - parse_term();
            else
                return e;
        }
    }

    Expr parse_term() {
        Expr e = parse_power();
        for (;;) {
            if (accept('*'))
                e = e * parse_power();
            else if (accept('/'))
                e = e / parse_power();
            else
                return e;
        }
    }

    // ^ is right-associative; unary minus binds tighter than ^
    Expr parse_power() {
        Expr base = parse_atom();
        if (accept('^')) return Expr::pow(base, parse_power());
        return base;
    }

    Expr parse_atom() {
        if (accept('-')) return -parse_atom();
        return parse_primary();
    }

    Expr parse_primary() {
        skip_ws();
        if (pos >= text.size()) fail("unexpected end of input");
        char c = text[pos];
        if (c == '(') {
            ++pos;
            Expr e = parse_expr();
            if (!accept(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
        fail("unexpected character");
    }

    Expr parse_number() {
        std::size_t start = pos;
        while (pos < text.size() &&
               (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '.'))
            ++pos;
        // exponent part
        if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
            std::size_t save = pos;
            ++pos;
            if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) ++pos;
            if (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
                while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
                    ++pos;
            } else {
                pos = save; // 'e' was an identifier start, not an exponent
            }
        }
        std::string tok(text.substr(start, pos - start));
        try {
            std::size_t used = 0;
            double v = std::stod(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            return Expr::constant(v);
        } catch (const std::exception&) {
            throw ParseError("malformed number '" + tok + "'", start);
        }
    }

    Expr parse_ident() {
        std::size_t start = pos;
        while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) ||
                                     text[pos] == '_'))
            ++pos;
        std::string name(text.substr(start, pos - start));
        if (peek() == '(') {
            ++pos;
            Expr arg = parse_expr();
            if (!accept(')')) fail("expected ')'");
            if (name == "exp") return Expr::exp(arg);
            if (name == "log") return Expr::log(arg);
            if (name == "sqrt") return Expr::sqrt(arg);
            if (name == "abs") return Expr::abs(arg);
            throw ParseError("unknown function '" + name + "'", start);
        }
        if (name == "x" || name == "t" || name == "u") return Expr::variable(name);
        for (const auto& c : *constants)
            if (c == name) return Expr::variable(name);
        throw ParseError("undeclared identifier '" + name + "'", start);
    }
};

} // namespace

Expr parse(std::string_view text, const std::vector<std::string>& declared_constants) {
    Parser p{text, 0, &declared_constants};
    if (p.at_end()) throw ParseError("empty expression", 0);
    Expr e = p.parse_expr();
    if (!p.at_end()) p.fail("trailing input");
    return e;
}

// ---------------------------------------------------------------------------
// compiled evaluation

namespace {

constexpr std::size_t kMaxStack = 256;

void flatten(const Expr& e, const std::vector<std::string>& vars,
             std::vector<std::pair<ExprKind, std::pair<double, int>>>& out) {
    switch (e.kind()) {
    case ExprKind::Constant:
        out.push_back({ExprKind::Constant, {e.value(), 0}});
        return;
    case ExprKind::Variable: {
        for (std::size_t i = 0; i < vars.size(); ++i)
            if (vars[i] == e.name()) {
                out.push_back({ExprKind::Variable, {0.0, static_cast<int>(i)}});
                return;
            }
        throw EvalError("unbound variable '" + e.name() + "' in compiled expression");
    }
    case ExprKind::Add:
    case ExprKind::Sub:
    case ExprKind::Mul:
    case ExprKind::Div:
    case ExprKind::Pow:
        flatten(e.left(), vars, out);
        flatten(e.right(), vars, out);
        out.push_back({e.kind(), {0.0, 0}});
        return;
    default:
        flatten(e.left(), vars, out);
        out.push_back({e.kind(), {0.0, 0}});
        return;
    }
}

} // namespace

Compiled::Compiled(const Expr& e, const std::vector<std::string>& vars) {
    std::vector<std::pair<ExprKind, std::pair<double, int>>> flat;
    flatten(e, vars, flat);
    ops_.reserve(flat.size());
    std::size_t depth = 0;
    for (auto& [kind, payload] : flat) {
        Op op;
        op.kind = kind;
        op.value = payload.first;
        op.slot = payload.second;
        ops_.push_back(op);
        switch (kind) {
        case ExprKind::Constant:
        case ExprKind::Variable:
            ++depth;
            stack_need_ = std::max(stack_need_, depth);
            break;
        case ExprKind::Add:
        case ExprKind::Sub:
        case ExprKind::Mul:
        case ExprKind::Div:
        case ExprKind::Pow: --depth; break;
        default: break; // unary: depth unchanged
        }
    }
    if (stack_need_ > kMaxStack) throw EvalError("expression too deep to compile");
}

double Compiled::operator()(const double* args) const {
    double stack[kMaxStack];
    std::size_t sp = 0;
    for (const Op& op : ops_) {
        switch (op.kind) {
        case ExprKind::Constant: stack[sp++] = op.value; break;
        case ExprKind::Variable: stack[sp++] = args[op.slot]; break;
        case ExprKind::Add: --sp; stack[sp - 1] += stack[sp]; break;
        case ExprKind::Sub: --sp; stack[sp - 1] -= stack[sp]; break;
        case ExprKind::Mul: --sp; stack[sp - 1] *= stack[sp]; break;
        case ExprKind::Div: {
            --sp;
            if (stack[sp] == 0.0) throw EvalError("division by zero");
            stack[sp - 1] /= stack[sp];
            break;
        }
        case ExprKind::Pow: {
            --sp;
            double base = stack[sp - 1], p = stack[sp];
            if (base == 0.0 && p < 0.0) throw EvalError("zero raised to negative power");
            if (base < 0.0 && !is_integer(p))
                throw EvalError("negative base with non-integer exponent");
            stack[sp - 1] = std::pow(base, p);
            break;
        }
        case ExprKind::Neg: stack[sp - 1] = -stack[sp - 1]; break;
        case ExprKind::Exp: stack[sp - 1] = std::exp(stack[sp - 1]); break;
        case ExprKind::Log:
            if (stack[sp - 1] <= 0.0) throw EvalError("log of non-positive value");
            stack[sp - 1] = std::log(stack[sp - 1]);
            break;
        case ExprKind::Sqrt:
            if (stack[sp - 1] < 0.0) throw EvalError("sqrt of negative value");
            stack[sp - 1] = std::sqrt(stack[sp - 1]);
            break;
        case ExprKind::Abs: stack[sp - 1] = std::fabs(stack[sp - 1]); break;
        }
    }
    return stack[0];
}

} // namespace bondsym
