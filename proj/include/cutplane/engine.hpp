#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "cutplane/analysis.hpp"
#include "cutplane/convexify.hpp"
#include "cutplane/master.hpp"
#include "cutplane/model.hpp"
#include "cutplane/trace.hpp"

namespace cutplane {

enum class SolveStatus { OptimalGapClosed, RepeatedPoint, IterationLimit };
enum class MasterBackend { Enumerative, BranchAndBound };
enum class CutPlan { Tangent, Lipschitz };

std::string to_string(SolveStatus s);

struct SolveOptions {
    double eps_stop = 0.0;      // gap target; the comparison adds 1e-9 relative slack
    long max_iterations = 0;    // 0 -> 10 * 2^min(n,20)
    bool variable_fixing = false;
    bool early_stop = false;    // stop as soon as grad f(x^k) = 0 at a feasible iterate
    bool certify = false;       // run the KKT certificate on the returned point
    MasterBackend backend = MasterBackend::Enumerative;
    int enumeration_limit = kEnumerationLimit;
    CutPlan cut_plan = CutPlan::Tangent;
    std::optional<LipschitzCutFactory> lipschitz; // required for CutPlan::Lipschitz
};

struct FixEvent {
    long k;    // iteration whose gradient produced the fix
    int index; // variable
    int value; // 0/1
};

/// Iteration ledger of one cutting-plane run.
struct SolveState {
    long iterations = 0;
    std::vector<BinaryVector> visited_feasible;   // C_k, in visit order
    std::vector<BinaryVector> visited_infeasible; // Cbar_k, in visit order
    double lb = 0.0;
    double ub = 0.0;
    BinaryVector incumbent;
    std::vector<Cut> opt_cuts, feas_cuts;
    std::map<int, int> fixings;
    std::vector<FixEvent> fix_events;
    std::vector<TraceRecord> trace;
    long master_nodes = 0; // total nodes/points visited across master solves
    std::string diagnostic;
};

struct SolveResult {
    SolveStatus status = SolveStatus::IterationLimit;
    BinaryVector best_x;
    double best_value = 0.0;
    long iterations = 0;
    SolveState state;
    std::optional<Certificate> certificate;
};

/// Algorithm 1: tangent (or Lipschitz) cuts from a feasible start, terminating
/// when UB - LB closes. Throws on an infeasible x0; a master infeasibility
/// (possible only outside the soundness condition) ends the run with
/// IterationLimit and a diagnostic instead of raising.
SolveResult solve_algorithm1(const Problem& p, const BinaryVector& x0, const SolveOptions& opt);

/// Algorithm 2 for linear objectives: maximize f over K with accumulated
/// feasibility cuts, stop at the first feasible master solution.
SolveResult solve_algorithm2(const Problem& p, const SolveOptions& opt);

/// Algorithm 3: shifted cuts h^0 / h^eps, terminating on point repetition.
SolveResult solve_algorithm3(const Problem& p, const BinaryVector& x0, double epsilon,
                             const SolveOptions& opt);

/// Variable fixing from the gradient at a feasible iterate whose optimality
/// cut is in the model. Returns the (possibly empty) map of forced values.
std::map<int, int> apply_variable_fixing(const BinaryVector& xk, const std::vector<double>& grad);

enum class EarlyStopDecision { Continue, StopOptimal };

/// Stationarity test: grad f(x^k) = 0 certifies optimality outright; with a
/// (M1, M2) hint, |grad f(x^k)| < (M1 - M2)/sqrt(n) does as well.
EarlyStopDecision stationarity_early_stop(const Problem& p, const BinaryVector& xk,
                                          std::optional<std::pair<double, double>> gap_hint);

} // namespace cutplane
