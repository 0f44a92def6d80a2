#pragma once

#include <map>
#include <string>
#include <vector>

#include "cutplane/cuts.hpp"
#include "cutplane/model.hpp"

namespace cutplane {

enum class ObjectiveMode { Theta, Linear };
enum class MasterStatus { Optimal, Infeasible };

/// Mixed-binary master problem: maximize theta (or c.x) over x in K cap {0,1}^n
/// subject to the accumulated cuts and variable fixings.
struct MasterModel {
    LinearPolyhedron polyhedron;
    std::vector<Cut> opt_cuts;  // theta <= a.x + rhs
    std::vector<Cut> feas_cuts; // a.x + rhs <= 0
    std::map<int, int> fixings; // variable index -> 0/1
    ObjectiveMode mode = ObjectiveMode::Theta;
    std::vector<double> linear_objective; // Linear mode only

    int dimension() const { return polyhedron.dimension(); }
};

struct MasterSolution {
    MasterStatus status = MasterStatus::Infeasible;
    BinaryVector x;
    double theta = 0.0; // min over opt cuts in Theta mode, c.x in Linear mode
    long node_count = 0;
};

/// Validates and assembles a model. Theta mode with no optimality cuts is
/// rejected as unbounded; contradictory or out-of-range fixings are rejected.
MasterModel build_master(LinearPolyhedron polyhedron, std::vector<Cut> opt_cuts,
                         std::vector<Cut> feas_cuts, std::map<int, int> fixings,
                         ObjectiveMode mode, std::vector<double> linear_objective = {});

/// Exact optimum by lexicographic scan over the free variables; ties keep the
/// lexicographically smallest x. node_count is the number of points scanned.
MasterSolution solve_enumerative(const MasterModel& model, int limit = kEnumerationLimit);

/// Best-first branch and bound on the LP relaxation bound; branches on the
/// most fractional variable, depth-first among equal bounds. Agrees with
/// solve_enumerative on the optimal value.
MasterSolution solve_branch_and_bound(const MasterModel& model);

struct Relaxation {
    bool feasible = false;
    double bound = 0.0;     // optimum of the continuous relaxation
    std::vector<double> x;  // fractional point in [0,1]^n (fixings substituted)
};

/// Continuous relaxation over [0,1]^n via the two-phase simplex.
Relaxation lp_relaxation(const MasterModel& model);

/// Textual LP interchange export (objective, subject-to rows, bounds,
/// binaries) for cross-checking with external solvers.
std::string write_lp(const MasterModel& model);

} // namespace cutplane
