#pragma once

#include <vector>

#include "cutplane/cuts.hpp"
#include "cutplane/model.hpp"

namespace cutplane {

enum class PenaltyProvenance { User, AutoRowSum };

/// Penalty weights for the transform f - mu * sum(x_i^2 - x_i) and
/// g_j + lambda_j * sum(x_i^2 - x_i). All entries nonnegative.
struct PenaltyConfig {
    double mu = 0.0;
    std::vector<double> lambdas;
    PenaltyProvenance mu_provenance = PenaltyProvenance::User;
    std::vector<PenaltyProvenance> lambda_provenance;
};

/// Applies the binary-null penalties. Values at binary points are unchanged.
/// The penalty touches only variables with a nonzero Hessian row (a function
/// linear in x_i gets no x_i penalty, which keeps gradient norms small).
/// Quadratic functions stay quadratic; expressions get appended subtrees.
Problem penalty_transform(const Problem& p, const PenaltyConfig& config);

/// mu = max(0, row_sum_bound(f)/2), lambda_j likewise, from the Hessian
/// absolute-row-sum bound over [0,1]^n. Throws when a function does not
/// support the bound (caller must then supply penalties).
PenaltyConfig auto_penalties(const Problem& p);

/// Produces the linearized descent-lemma cuts for Algorithm 1 so it solves the
/// equivalent fully linear problem incrementally.
struct LipschitzCutFactory {
    double objective_constant = 0.0;    // L(f)
    std::vector<double> constraint_constants; // L(g_j)

    Cut optimality(const NonlinearFunction& f, const BinaryVector& y) const;
    Cut feasibility(const Problem& p, int j, const BinaryVector& y) const;
};

LipschitzCutFactory lipschitz_linearization(const Problem& p, double lipschitz_f,
                                            std::vector<double> lipschitz_g);

} // namespace cutplane
