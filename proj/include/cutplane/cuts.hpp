#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cutplane/model.hpp"

namespace cutplane {

enum class CutFamily {
    OptTangent,
    FeasTangent,
    OptShifted,
    FeasShifted,
    OptLipschitz,
    FeasLipschitz,
};

bool is_optimality_family(CutFamily f);
std::string to_string(CutFamily f);

/// Affine cut in normalized (a, rhs) form.
/// Opt* families mean  theta <= a.x + rhs;  Feas* families mean  a.x + rhs <= 0.
/// The source point and constraint index are kept for diagnostics only.
struct Cut {
    CutFamily family;
    std::vector<double> a;
    double rhs = 0.0;
    BinaryVector source_point;
    int source_constraint = -1;
};

/// theta <= h_f(x,y) = <grad f(y), x-y> + f(y)
Cut optimality_cut(const NonlinearFunction& f, const BinaryVector& y);

/// h_{g_j}(x,y) <= 0 with j in J(y); requires g_j(y) to attain the max over
/// constraints within the tie tolerance.
Cut feasibility_cut(const Problem& p, int j, const BinaryVector& y);

/// theta <= h_f^0(x,y) = <grad f(y), x-y>
Cut shifted_optimality_cut(const NonlinearFunction& f, const BinaryVector& y);

/// h_{g_j}^eps(x,y) = <grad g_j(y), x-y> + eps <= 0, eps > 0
Cut shifted_feasibility_cut(const Problem& p, int j, const BinaryVector& y, double epsilon);

enum class CutSide { Objective, Constraint };

/// Linearized descent-lemma plane, exact on binary points:
/// objective side  h_f(x,y) + L/2 (<e-2y, x> + |y|^2)  as  theta <= a.x + rhs;
/// constraint side h_g(x,y) - L/2 (<e-2y, x> + |y|^2)  as  a.x + rhs <= 0.
Cut lipschitz_cut(const NonlinearFunction& fn, const BinaryVector& y, double lipschitz,
                  CutSide side, int constraint_index = -1);

/// Opt*: a.x + rhs - theta (satisfied when >= 0); Feas*: a.x + rhs (satisfied
/// when <= 0). theta is required for optimality families.
double evaluate_cut(const Cut& cut, const BinaryVector& x,
                    std::optional<double> theta = std::nullopt);

/// a.x + rhs at a fractional point (used by the LP relaxation).
double cut_affine_value(const Cut& cut, std::span<const double> x);

} // namespace cutplane
