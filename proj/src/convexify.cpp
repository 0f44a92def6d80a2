#include "cutplane/convexify.hpp"

#include <cmath>

#include "cutplane/errors.hpp"

namespace cutplane {

namespace {

// phi +- w * sum_{i in mask} (x_i^2 - x_i)
NonlinearFunction penalized(const NonlinearFunction& f, double weight, double sign) {
    const double w = sign * weight;
    if (w == 0.0) return f;
    const int n = f.dimension();
    const std::vector<bool> mask = f.nonlinear_variables();

    if (f.kind() == FunctionKind::Quadratic) {
        Matrix q = f.quad();
        std::vector<double> lin = f.linear();
        for (int i = 0; i < n; ++i) {
            if (!mask[i]) continue;
            q(i, i) += 2.0 * w;
            lin[i] -= w;
        }
        return NonlinearFunction::quadratic(std::move(q), std::move(lin), f.constant());
    }

    ast::NodePtr penalty;
    for (int i = 0; i < n; ++i) {
        if (!mask[i]) continue;
        ast::NodePtr term = ast::sub(ast::pow(ast::variable(i), 2), ast::variable(i));
        penalty = penalty ? ast::add(penalty, term) : term;
    }
    if (!penalty) return f;
    return NonlinearFunction::expression(
        ast::add(f.root(), ast::mul(ast::constant(w), penalty)), n);
}

} // namespace

Problem penalty_transform(const Problem& p, const PenaltyConfig& config) {
    if (static_cast<int>(config.lambdas.size()) != p.num_constraints())
        throw Error("penalty config has " + std::to_string(config.lambdas.size()) +
                    " lambdas for " + std::to_string(p.num_constraints()) + " constraints");
    if (config.mu < 0.0) throw Error("penalty mu must be nonnegative");
    for (double l : config.lambdas)
        if (l < 0.0) throw Error("penalty lambdas must be nonnegative");

    Problem out = p;
    out.objective = penalized(p.objective, config.mu, -1.0);
    for (int j = 0; j < p.num_constraints(); ++j)
        out.constraints[j] = penalized(p.constraints[j], config.lambdas[j], +1.0);
    return out;
}

PenaltyConfig auto_penalties(const Problem& p) {
    PenaltyConfig cfg;
    cfg.mu = std::max(0.0, 0.5 * hessian_row_sum_bound(p.objective));
    cfg.mu_provenance = PenaltyProvenance::AutoRowSum;
    for (const NonlinearFunction& g : p.constraints) {
        cfg.lambdas.push_back(std::max(0.0, 0.5 * hessian_row_sum_bound(g)));
        cfg.lambda_provenance.push_back(PenaltyProvenance::AutoRowSum);
    }
    return cfg;
}

Cut LipschitzCutFactory::optimality(const NonlinearFunction& f, const BinaryVector& y) const {
    return lipschitz_cut(f, y, objective_constant, CutSide::Objective);
}

Cut LipschitzCutFactory::feasibility(const Problem& p, int j, const BinaryVector& y) const {
    if (j < 0 || j >= static_cast<int>(constraint_constants.size()))
        throw Error("lipschitz factory: constraint index out of range");
    return lipschitz_cut(p.constraints[j], y, constraint_constants[j], CutSide::Constraint, j);
}

LipschitzCutFactory lipschitz_linearization(const Problem& p, double lipschitz_f,
                                            std::vector<double> lipschitz_g) {
    if (!(lipschitz_f > 0.0)) throw Error("lipschitz_linearization requires L(f) > 0");
    if (static_cast<int>(lipschitz_g.size()) != p.num_constraints())
        throw Error("lipschitz_linearization: one constant per constraint required");
    for (double l : lipschitz_g)
        if (!(l > 0.0)) throw Error("lipschitz_linearization requires L(g_j) > 0");
    return {lipschitz_f, std::move(lipschitz_g)};
}

} // namespace cutplane
