#include "cutplane/expr.hpp"

#include <cassert>
#include <cctype>
#include <cmath>
#include <cstdlib>

namespace cutplane {

using ast::Node;
using ast::NodePtr;
using ast::Op;

// ---------------------------------------------------------------------------
// parser
// ---------------------------------------------------------------------------

namespace {

class Parser {
public:
    Parser(const std::string& text, int n) : text_(text), n_(n) {}

    NodePtr parse() {
        NodePtr e = expression();
        skip_ws();
        if (pos_ != text_.size()) throw ParseError("unexpected trailing input", pos_);
        return e;
    }

private:
    const std::string& text_;
    int n_;
    std::size_t pos_ = 0;

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

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    NodePtr expression() {
        NodePtr lhs = term();
        for (;;) {
            if (accept('+'))
                lhs = ast::add(lhs, term());
            else if (accept('-'))
                lhs = ast::sub(lhs, term());
            else
                return lhs;
        }
    }

    NodePtr term() {
        NodePtr lhs = unary();
        for (;;) {
            if (accept('*'))
                lhs = ast::mul(lhs, unary());
            else if (accept('/'))
                lhs = ast::div(lhs, unary());
            else
                return lhs;
        }
    }

    NodePtr unary() {
        if (accept('-')) return ast::neg(unary());
        return power();
    }

    NodePtr power() {
        NodePtr base = atom();
        if (accept('^')) {
            // right-associative; the exponent must fold to an integer
            std::size_t at = pos_;
            NodePtr e = unary();
            if (e->op != Op::Constant) throw ParseError("exponent must be an integer constant", at);
            double v = e->value;
            if (v != std::floor(v) || std::fabs(v) > 1e9)
                throw ParseError("exponent must be an integer constant", at);
            return ast::pow(base, static_cast<long>(v));
        }
        return base;
    }

    NodePtr atom() {
        skip_ws();
        if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr e = expression();
            if (!accept(')')) throw ParseError("expected ')'", pos_);
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

    NodePtr number() {
        const char* begin = text_.c_str() + pos_;
        char* end = nullptr;
        double v = std::strtod(begin, &end);
        if (end == begin) throw ParseError("malformed number", pos_);
        pos_ += static_cast<std::size_t>(end - begin);
        return ast::constant(v);
    }

    NodePtr identifier() {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        std::string name = text_.substr(start, pos_ - start);

        if (name.size() >= 2 && name[0] == 'x' &&
            std::isdigit(static_cast<unsigned char>(name[1]))) {
            char* end = nullptr;
            long idx = std::strtol(name.c_str() + 1, &end, 10);
            if (*end != '\0') throw ParseError("unknown identifier '" + name + "'", start);
            if (idx < 1 || idx > n_)
                throw ParseError("variable index out of range: " + name, start);
            auto node = std::make_shared<Node>();
            node->op = Op::Variable;
            node->index = static_cast<int>(idx - 1);
            node->offset = start;
            return node;
        }

        Op op;
        if (name == "exp")
            op = Op::Exp;
        else if (name == "log")
            op = Op::Log;
        else if (name == "sin")
            op = Op::Sin;
        else if (name == "cos")
            op = Op::Cos;
        else
            throw ParseError("unknown identifier '" + name + "'", start);

        if (!accept('(')) throw ParseError("expected '(' after " + name, pos_);
        NodePtr arg = expression();
        if (!accept(')')) throw ParseError("expected ')'", pos_);
        auto node = std::make_shared<Node>();
        node->op = op;
        node->lhs = arg;
        node->offset = start;
        return node;
    }
};

} // namespace

NonlinearFunction parse_expression(const std::string& text, int n) {
    Parser p(text, n);
    return NonlinearFunction::expression(p.parse(), n);
}

// ---------------------------------------------------------------------------
// NonlinearFunction
// ---------------------------------------------------------------------------

NonlinearFunction NonlinearFunction::quadratic(Matrix q_matrix, std::vector<double> q_linear,
                                               double c) {
    if (q_matrix.rows() != q_matrix.cols())
        throw Error("quadratic matrix must be square");
    if (static_cast<int>(q_linear.size()) != q_matrix.rows())
        throw Error("quadratic linear term has wrong dimension");
    const int n = q_matrix.rows();
    // enforce symmetry
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double s = 0.5 * (q_matrix(i, j) + q_matrix(j, i));
            q_matrix(i, j) = s;
            q_matrix(j, i) = s;
        }
    NonlinearFunction f;
    f.kind_ = FunctionKind::Quadratic;
    f.n_ = n;
    f.quad_ = std::move(q_matrix);
    f.linear_ = std::move(q_linear);
    f.constant_ = c;
    return f;
}

NonlinearFunction NonlinearFunction::expression(ast::NodePtr root, int n) {
    NonlinearFunction f;
    f.kind_ = FunctionKind::Expression;
    f.n_ = n;
    f.root_ = std::move(root);
    return f;
}

bool NonlinearFunction::is_linear() const {
    for (bool b : nonlinear_variables())
        if (b) return false;
    return true;
}

std::vector<double> NonlinearFunction::linear_coefficients() const {
    if (!is_linear()) throw Error("function is not provably linear");
    if (kind_ == FunctionKind::Quadratic) return linear_;
    std::vector<double> zero(n_, 0.0);
    return gradient(*this, std::span<const double>(zero));
}

std::vector<bool> NonlinearFunction::nonlinear_variables() const {
    std::vector<bool> mask(n_, false);
    if (kind_ == FunctionKind::Quadratic) {
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j)
                if (quad_(i, j) != 0.0) {
                    mask[i] = true;
                    break;
                }
        return mask;
    }
    // Expression: x_i is linear when every d^2/dx_i dx_j simplifies to the
    // constant zero; anything unresolved counts as nonlinear.
    for (int i = 0; i < n_; ++i) {
        NodePtr di = ast::differentiate(root_, i);
        for (int j = 0; j < n_; ++j) {
            NodePtr dij = ast::differentiate(di, j);
            if (!ast::is_constant(dij, 0.0)) {
                mask[i] = true;
                break;
            }
        }
    }
    return mask;
}

// ---------------------------------------------------------------------------
// evaluation
// ---------------------------------------------------------------------------

namespace {

double eval_node(const NodePtr& n, std::span<const double> x) {
    switch (n->op) {
    case Op::Constant:
        return n->value;
    case Op::Variable:
        return x[n->index];
    case Op::Add:
        return eval_node(n->lhs, x) + eval_node(n->rhs, x);
    case Op::Sub:
        return eval_node(n->lhs, x) - eval_node(n->rhs, x);
    case Op::Mul:
        return eval_node(n->lhs, x) * eval_node(n->rhs, x);
    case Op::Div: {
        const double den = eval_node(n->rhs, x);
        if (den == 0.0) throw EvalDomainError("division by zero", ast::to_string(n));
        return eval_node(n->lhs, x) / den;
    }
    case Op::Pow: {
        const double base = eval_node(n->lhs, x);
        long e = n->exponent;
        if (e < 0) {
            if (base == 0.0) throw EvalDomainError("zero raised to negative power", ast::to_string(n));
            double r = 1.0;
            for (long i = 0; i < -e; ++i) r *= base;
            return 1.0 / r;
        }
        double r = 1.0;
        for (long i = 0; i < e; ++i) r *= base;
        return r;
    }
    case Op::Neg:
        return -eval_node(n->lhs, x);
    case Op::Exp:
        return std::exp(eval_node(n->lhs, x));
    case Op::Log: {
        const double a = eval_node(n->lhs, x);
        if (a <= 0.0) throw EvalDomainError("log of nonpositive value", ast::to_string(n));
        return std::log(a);
    }
    case Op::Sin:
        return std::sin(eval_node(n->lhs, x));
    case Op::Cos:
        return std::cos(eval_node(n->lhs, x));
    }
    return 0.0;
}

// first-order dual number for the forward-mode sweep
struct Dual {
    double v;
    double d;
};

Dual eval_dual(const NodePtr& n, std::span<const double> x, int wrt) {
    switch (n->op) {
    case Op::Constant:
        return {n->value, 0.0};
    case Op::Variable:
        return {x[n->index], n->index == wrt ? 1.0 : 0.0};
    case Op::Add: {
        Dual a = eval_dual(n->lhs, x, wrt), b = eval_dual(n->rhs, x, wrt);
        return {a.v + b.v, a.d + b.d};
    }
    case Op::Sub: {
        Dual a = eval_dual(n->lhs, x, wrt), b = eval_dual(n->rhs, x, wrt);
        return {a.v - b.v, a.d - b.d};
    }
    case Op::Mul: {
        Dual a = eval_dual(n->lhs, x, wrt), b = eval_dual(n->rhs, x, wrt);
        return {a.v * b.v, a.d * b.v + a.v * b.d};
    }
    case Op::Div: {
        Dual a = eval_dual(n->lhs, x, wrt), b = eval_dual(n->rhs, x, wrt);
        if (b.v == 0.0) throw EvalDomainError("division by zero", ast::to_string(n));
        return {a.v / b.v, (a.d * b.v - a.v * b.d) / (b.v * b.v)};
    }
    case Op::Pow: {
        Dual a = eval_dual(n->lhs, x, wrt);
        long e = n->exponent;
        if (e < 0) {
            if (a.v == 0.0) throw EvalDomainError("zero raised to negative power", ast::to_string(n));
            double p = 1.0;
            for (long i = 0; i < -e - 1; ++i) p *= a.v;
            const double full = p * a.v; // a.v^{-e}
            const double inv = 1.0 / full;
            return {inv, static_cast<double>(e) * inv / a.v * a.d};
        }
        if (e == 0) return {1.0, 0.0};
        double p = 1.0;
        for (long i = 0; i < e - 1; ++i) p *= a.v; // a.v^{e-1}
        return {p * a.v, static_cast<double>(e) * p * a.d};
    }
    case Op::Neg: {
        Dual a = eval_dual(n->lhs, x, wrt);
        return {-a.v, -a.d};
    }
    case Op::Exp: {
        Dual a = eval_dual(n->lhs, x, wrt);
        const double e = std::exp(a.v);
        return {e, e * a.d};
    }
    case Op::Log: {
        Dual a = eval_dual(n->lhs, x, wrt);
        if (a.v <= 0.0) throw EvalDomainError("log of nonpositive value", ast::to_string(n));
        return {std::log(a.v), a.d / a.v};
    }
    case Op::Sin: {
        Dual a = eval_dual(n->lhs, x, wrt);
        return {std::sin(a.v), std::cos(a.v) * a.d};
    }
    case Op::Cos: {
        Dual a = eval_dual(n->lhs, x, wrt);
        return {std::cos(a.v), -std::sin(a.v) * a.d};
    }
    }
    return {0.0, 0.0};
}

std::vector<double> to_doubles(const std::vector<std::uint8_t>& bits) {
    std::vector<double> x(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) x[i] = bits[i];
    return x;
}

} // namespace

double eval(const NonlinearFunction& f, std::span<const double> x) {
    if (static_cast<int>(x.size()) != f.dimension())
        throw Error("eval: point dimension mismatch");
    if (f.kind() == FunctionKind::Quadratic) {
        double s = f.constant();
        for (int i = 0; i < f.dimension(); ++i) {
            s += f.linear()[i] * x[i];
            s += 0.5 * x[i] * dot(f.quad().row(i), x);
        }
        return s;
    }
    return eval_node(f.root(), x);
}

double eval(const NonlinearFunction& f, const std::vector<std::uint8_t>& x) {
    return eval(f, std::span<const double>(to_doubles(x)));
}

std::vector<double> gradient(const NonlinearFunction& f, std::span<const double> x) {
    if (static_cast<int>(x.size()) != f.dimension())
        throw Error("gradient: point dimension mismatch");
    std::vector<double> g(f.dimension());
    if (f.kind() == FunctionKind::Quadratic) {
        for (int i = 0; i < f.dimension(); ++i)
            g[i] = dot(f.quad().row(i), x) + f.linear()[i];
    } else {
        for (int i = 0; i < f.dimension(); ++i) g[i] = eval_dual(f.root(), x, i).d;
    }
    for (double v : g)
        if (!std::isfinite(v)) throw Error("gradient has non-finite entries");
    return g;
}

std::vector<double> gradient(const NonlinearFunction& f, const std::vector<std::uint8_t>& x) {
    return gradient(f, std::span<const double>(to_doubles(x)));
}

// ---------------------------------------------------------------------------
// Hessian row-sum bound via interval arithmetic over [0,1]^n
// ---------------------------------------------------------------------------

namespace {

struct Interval {
    double lo, hi;
};

Interval iv_add(Interval a, Interval b) { return {a.lo + b.lo, a.hi + b.hi}; }
Interval iv_sub(Interval a, Interval b) { return {a.lo - b.hi, a.hi - b.lo}; }
Interval iv_neg(Interval a) { return {-a.hi, -a.lo}; }

Interval iv_mul(Interval a, Interval b) {
    const double p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
    Interval r{p[0], p[0]};
    for (double v : p) {
        r.lo = std::min(r.lo, v);
        r.hi = std::max(r.hi, v);
    }
    return r;
}

Interval eval_interval(const NodePtr& n) {
    switch (n->op) {
    case Op::Constant:
        return {n->value, n->value};
    case Op::Variable:
        return {0.0, 1.0};
    case Op::Add:
        return iv_add(eval_interval(n->lhs), eval_interval(n->rhs));
    case Op::Sub:
        return iv_sub(eval_interval(n->lhs), eval_interval(n->rhs));
    case Op::Mul:
        return iv_mul(eval_interval(n->lhs), eval_interval(n->rhs));
    case Op::Div: {
        Interval b = eval_interval(n->rhs);
        if (b.lo <= 0.0 && b.hi >= 0.0)
            throw Error("hessian_row_sum_bound: division range contains zero in '" +
                        ast::to_string(n) + "'");
        Interval inv{1.0 / b.hi, 1.0 / b.lo};
        return iv_mul(eval_interval(n->lhs), inv);
    }
    case Op::Pow: {
        Interval a = eval_interval(n->lhs);
        long e = n->exponent;
        if (e < 0) {
            if (a.lo <= 0.0 && a.hi >= 0.0)
                throw Error("hessian_row_sum_bound: negative power over range containing zero");
            Interval inv{1.0 / a.hi, 1.0 / a.lo};
            a = inv;
            e = -e;
        }
        Interval r{1.0, 1.0};
        for (long i = 0; i < e; ++i) r = iv_mul(r, a);
        return r;
    }
    case Op::Neg:
        return iv_neg(eval_interval(n->lhs));
    case Op::Exp:
    case Op::Log:
    case Op::Sin:
    case Op::Cos:
        throw Error("hessian_row_sum_bound: unsupported non-polynomial node '" +
                    ast::to_string(n) + "'; supply the bound manually");
    }
    return {0.0, 0.0};
}

} // namespace

double hessian_row_sum_bound(const NonlinearFunction& f) {
    const int n = f.dimension();
    if (f.kind() == FunctionKind::Quadratic) {
        double best = 0.0;
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (int j = 0; j < n; ++j) s += std::fabs(f.quad()(i, j));
            best = std::max(best, s);
        }
        return best;
    }
    double best = 0.0;
    for (int i = 0; i < n; ++i) {
        NodePtr di = ast::differentiate(f.root(), i);
        double s = 0.0;
        for (int j = 0; j < n; ++j) {
            NodePtr dij = ast::differentiate(di, j);
            if (ast::is_constant(dij, 0.0)) continue;
            Interval r = eval_interval(dij);
            s += std::max(std::fabs(r.lo), std::fabs(r.hi));
        }
        best = std::max(best, s);
    }
    return best;
}

std::string to_string(const NonlinearFunction& f) {
    if (f.kind() == FunctionKind::Expression) return ast::to_string(f.root());
    // expand the quadratic into the expression grammar
    std::string out;
    const int n = f.dimension();
    auto append_term = [&](const std::string& term) {
        if (!out.empty()) out += " + ";
        out += term;
    };
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            const double coef = i == j ? 0.5 * f.quad()(i, i) : f.quad()(i, j);
            if (coef == 0.0) continue;
            append_term(format_double(coef) + "*x" + std::to_string(i + 1) + "*x" +
                        std::to_string(j + 1));
        }
    for (int i = 0; i < n; ++i)
        if (f.linear()[i] != 0.0)
            append_term(format_double(f.linear()[i]) + "*x" + std::to_string(i + 1));
    if (f.constant() != 0.0 || out.empty()) append_term(format_double(f.constant()));
    return out;
}

} // namespace cutplane
