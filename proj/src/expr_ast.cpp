#include <cmath>

#include "cutplane/expr.hpp"

namespace cutplane::ast {

namespace {

std::shared_ptr<Node> make(Op op, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
}

bool constant_value(const NodePtr& n, double& out) {
    if (n->op != Op::Constant) return false;
    out = n->value;
    return true;
}

} // namespace

NodePtr constant(double v) {
    auto n = std::make_shared<Node>();
    n->op = Op::Constant;
    n->value = v;
    return n;
}

NodePtr variable(int index) {
    auto n = std::make_shared<Node>();
    n->op = Op::Variable;
    n->index = index;
    return n;
}

bool is_constant(const NodePtr& n, double v) {
    double c;
    return constant_value(n, c) && c == v;
}

NodePtr add(NodePtr a, NodePtr b) {
    double ca, cb;
    if (constant_value(a, ca) && constant_value(b, cb)) return constant(ca + cb);
    if (is_constant(a, 0.0)) return b;
    if (is_constant(b, 0.0)) return a;
    return make(Op::Add, std::move(a), std::move(b));
}

NodePtr sub(NodePtr a, NodePtr b) {
    double ca, cb;
    if (constant_value(a, ca) && constant_value(b, cb)) return constant(ca - cb);
    if (is_constant(b, 0.0)) return a;
    if (is_constant(a, 0.0)) return neg(std::move(b));
    return make(Op::Sub, std::move(a), std::move(b));
}

NodePtr mul(NodePtr a, NodePtr b) {
    double ca, cb;
    if (constant_value(a, ca) && constant_value(b, cb)) return constant(ca * cb);
    if (is_constant(a, 0.0) || is_constant(b, 0.0)) return constant(0.0);
    if (is_constant(a, 1.0)) return b;
    if (is_constant(b, 1.0)) return a;
    return make(Op::Mul, std::move(a), std::move(b));
}

NodePtr div(NodePtr a, NodePtr b) {
    double ca, cb;
    if (constant_value(b, cb) && cb != 0.0) {
        if (constant_value(a, ca)) return constant(ca / cb);
        if (cb == 1.0) return a;
    }
    if (is_constant(a, 0.0) && !is_constant(b, 0.0)) return constant(0.0);
    return make(Op::Div, std::move(a), std::move(b));
}

NodePtr pow(NodePtr base, long exponent) {
    if (exponent == 0) return constant(1.0);
    if (exponent == 1) return base;
    double cb;
    if (constant_value(base, cb)) {
        double r = 1.0;
        long e = exponent < 0 ? -exponent : exponent;
        for (long i = 0; i < e; ++i) r *= cb;
        if (exponent < 0) {
            if (r == 0.0) {
                auto n = make(Op::Pow, std::move(base));
                n->exponent = exponent;
                return n;
            }
            r = 1.0 / r;
        }
        return constant(r);
    }
    auto n = make(Op::Pow, std::move(base));
    n->exponent = exponent;
    return n;
}

NodePtr neg(NodePtr a) {
    double ca;
    if (constant_value(a, ca)) return constant(-ca);
    return make(Op::Neg, std::move(a));
}

NodePtr unary(Op op, NodePtr a) { return make(op, std::move(a)); }

NodePtr differentiate(const NodePtr& n, int wrt) {
    switch (n->op) {
    case Op::Constant:
        return constant(0.0);
    case Op::Variable:
        return constant(n->index == wrt ? 1.0 : 0.0);
    case Op::Add:
        return add(differentiate(n->lhs, wrt), differentiate(n->rhs, wrt));
    case Op::Sub:
        return sub(differentiate(n->lhs, wrt), differentiate(n->rhs, wrt));
    case Op::Mul:
        return add(mul(differentiate(n->lhs, wrt), n->rhs),
                   mul(n->lhs, differentiate(n->rhs, wrt)));
    case Op::Div:
        // (u/v)' = u'/v - u v' / v^2
        return sub(div(differentiate(n->lhs, wrt), n->rhs),
                   div(mul(n->lhs, differentiate(n->rhs, wrt)), pow(n->rhs, 2)));
    case Op::Pow:
        return mul(mul(constant(static_cast<double>(n->exponent)), pow(n->lhs, n->exponent - 1)),
                   differentiate(n->lhs, wrt));
    case Op::Neg:
        return neg(differentiate(n->lhs, wrt));
    case Op::Exp:
        return mul(unary(Op::Exp, n->lhs), differentiate(n->lhs, wrt));
    case Op::Log:
        return div(differentiate(n->lhs, wrt), n->lhs);
    case Op::Sin:
        return mul(unary(Op::Cos, n->lhs), differentiate(n->lhs, wrt));
    case Op::Cos:
        return neg(mul(unary(Op::Sin, n->lhs), differentiate(n->lhs, wrt)));
    }
    return constant(0.0);
}

namespace {

int precedence(Op op) {
    switch (op) {
    case Op::Add:
    case Op::Sub:
        return 1;
    case Op::Mul:
    case Op::Div:
        return 2;
    case Op::Neg:
        return 3;
    case Op::Pow:
        return 4;
    default:
        return 5;
    }
}

void print(const NodePtr& n, std::string& out, int parent_prec) {
    const int prec = precedence(n->op);
    const bool parens = prec < parent_prec;
    if (parens) out += '(';
    switch (n->op) {
    case Op::Constant:
        if (n->value < 0) {
            out += '(';
            out += format_double(n->value);
            out += ')';
        } else {
            out += format_double(n->value);
        }
        break;
    case Op::Variable:
        out += 'x';
        out += std::to_string(n->index + 1);
        break;
    case Op::Add:
        print(n->lhs, out, prec);
        out += " + ";
        print(n->rhs, out, prec);
        break;
    case Op::Sub:
        print(n->lhs, out, prec);
        out += " - ";
        print(n->rhs, out, prec + 1);
        break;
    case Op::Mul:
        print(n->lhs, out, prec);
        out += "*";
        print(n->rhs, out, prec);
        break;
    case Op::Div:
        print(n->lhs, out, prec);
        out += "/";
        print(n->rhs, out, prec + 1);
        break;
    case Op::Pow:
        print(n->lhs, out, prec + 1);
        out += '^';
        if (n->exponent < 0) {
            out += '(';
            out += std::to_string(n->exponent);
            out += ')';
        } else {
            out += std::to_string(n->exponent);
        }
        break;
    case Op::Neg:
        out += '-';
        print(n->lhs, out, prec + 1);
        break;
    case Op::Exp:
    case Op::Log:
    case Op::Sin:
    case Op::Cos:
        out += n->op == Op::Exp   ? "exp"
               : n->op == Op::Log ? "log"
               : n->op == Op::Sin ? "sin"
                                  : "cos";
        out += '(';
        print(n->lhs, out, 0);
        out += ')';
        break;
    }
    if (parens) out += ')';
}

} // namespace

std::string to_string(const NodePtr& n) {
    std::string out;
    print(n, out, 0);
    return out;
}

} // namespace cutplane::ast
