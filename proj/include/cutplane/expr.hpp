#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "cutplane/errors.hpp"
#include "cutplane/linalg.hpp"

namespace cutplane {

namespace ast {

enum class Op { Constant, Variable, Add, Sub, Mul, Div, Pow, Neg, Exp, Log, Sin, Cos };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
    Op op;
    double value = 0.0;   // Constant
    int index = -1;       // Variable, 0-based
    long exponent = 0;    // Pow
    NodePtr lhs, rhs;
    std::size_t offset = 0; // byte offset in the source text, 0 when synthesized
};

NodePtr constant(double v);
NodePtr variable(int index);
NodePtr add(NodePtr a, NodePtr b);
NodePtr sub(NodePtr a, NodePtr b);
NodePtr mul(NodePtr a, NodePtr b);
NodePtr div(NodePtr a, NodePtr b);
NodePtr pow(NodePtr base, long exponent);
NodePtr neg(NodePtr a);
NodePtr unary(Op op, NodePtr a); // Exp/Log/Sin/Cos

bool is_constant(const NodePtr& n, double v);

/// d(node)/d(x_wrt) with on-the-fly simplification; identically-zero results
/// come back as the constant 0.
NodePtr differentiate(const NodePtr& n, int wrt);

std::string to_string(const NodePtr& n);

} // namespace ast

enum class FunctionKind { Quadratic, Expression };

/// A nonlinear scalar function of n binary (or box) variables.
/// Quadratic kind stores f(x) = 1/2 x^T Q x + q^T x + c with Q symmetrized on
/// construction; Expression kind stores a parsed syntax tree.
class NonlinearFunction {
public:
    NonlinearFunction() = default; // zero function of dimension 0

    static NonlinearFunction quadratic(Matrix q_matrix, std::vector<double> q_linear, double c);
    static NonlinearFunction expression(ast::NodePtr root, int n);

    FunctionKind kind() const { return kind_; }
    int dimension() const { return n_; }

    const Matrix& quad() const { return quad_; }
    const std::vector<double>& linear() const { return linear_; }
    double constant() const { return constant_; }
    const ast::NodePtr& root() const { return root_; }

    /// True when every second partial derivative is provably identically zero.
    bool is_linear() const;
    /// Gradient of a linear function (valid at every point); requires is_linear().
    std::vector<double> linear_coefficients() const;
    /// mask[i] is false only when the function is provably linear in x_i
    /// (Hessian row i identically zero). Conservative: true when unknown.
    std::vector<bool> nonlinear_variables() const;

private:
    FunctionKind kind_ = FunctionKind::Quadratic;
    int n_ = 0;
    Matrix quad_;
    std::vector<double> linear_;
    double constant_ = 0.0;
    ast::NodePtr root_;
};

/// Grammar: numeric literals, x1..xn, parentheses, binary + - * /,
/// right-associative ^ with integer exponent, unary -, exp/log/sin/cos.
NonlinearFunction parse_expression(const std::string& text, int n);

double eval(const NonlinearFunction& f, std::span<const double> x);
double eval(const NonlinearFunction& f, const std::vector<std::uint8_t>& x);

/// Quadratic: Qx + q. Expression: forward-mode dual-number sweep, one pass per
/// coordinate. Entries are checked finite.
std::vector<double> gradient(const NonlinearFunction& f, std::span<const double> x);
std::vector<double> gradient(const NonlinearFunction& f, const std::vector<std::uint8_t>& x);

/// Upper bound on the largest Hessian eigenvalue over [0,1]^n via absolute row
/// sums: max_i sum_j sup|H_ij|. Quadratic: max_i sum_j |Q_ij|. Expression:
/// symbolic second partials bounded by interval arithmetic; throws Error for
/// non-polynomial nodes (exp/log/sin/cos, division by a non-constant).
double hessian_row_sum_bound(const NonlinearFunction& f);

std::string to_string(const NonlinearFunction& f);

} // namespace cutplane
