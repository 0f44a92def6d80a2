#include "cutplane/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cutplane/errors.hpp"

namespace cutplane {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

long default_iteration_limit(int n) { return 10L * (1L << std::min(n, 20)); }

long iteration_limit(const Problem& p, const SolveOptions& opt) {
    return opt.max_iterations > 0 ? opt.max_iterations : default_iteration_limit(p.n);
}

MasterSolution run_master(const MasterModel& model, const SolveOptions& opt) {
    if (opt.backend == MasterBackend::BranchAndBound) return solve_branch_and_bound(model);
    return solve_enumerative(model, opt.enumeration_limit);
}

bool gap_closed(double ub, double lb, double eps_stop) {
    if (!std::isfinite(ub) || !std::isfinite(lb)) return false;
    return ub - lb <= eps_stop + 1e-9 * std::max(1.0, std::fabs(ub));
}

bool contains(const std::vector<BinaryVector>& set, const BinaryVector& x) {
    return std::find(set.begin(), set.end(), x) != set.end();
}

void merge_fixings(SolveState& state, const std::map<int, int>& fresh, long k) {
    for (auto [idx, val] : fresh) {
        auto it = state.fixings.find(idx);
        if (it != state.fixings.end()) {
            if (it->second != val)
                throw Error("variable fixing produced contradictory values for x" +
                            std::to_string(idx + 1));
            continue;
        }
        state.fixings[idx] = val;
        state.fix_events.push_back({k, idx, val});
    }
}

void attach_certificate(const Problem& p, SolveResult& res, const SolveOptions& opt,
                        bool force = false) {
    if ((!opt.certify && !force) || res.best_x.empty()) return;
    std::optional<std::vector<double>> lambda;
    if (p.n <= opt.enumeration_limit) {
        lambda = find_kkt_multipliers(p, res.best_x, opt.enumeration_limit);
    } else {
        std::vector<double> zeros(p.num_constraints(), 0.0);
        Certificate c = kkt_certificate(p, res.best_x, zeros);
        if (c.passed) lambda = zeros;
    }
    if (lambda) res.certificate = kkt_certificate(p, res.best_x, *lambda);
}

} // namespace

std::string to_string(SolveStatus s) {
    switch (s) {
    case SolveStatus::OptimalGapClosed: return "OPTIMAL_GAP_CLOSED";
    case SolveStatus::RepeatedPoint: return "REPEATED_POINT";
    case SolveStatus::IterationLimit: return "ITERATION_LIMIT";
    }
    return "?";
}

SolveResult solve_algorithm1(const Problem& p, const BinaryVector& x0, const SolveOptions& opt) {
    if (classify_point(p, x0).status != FeasStatus::FeasibleC)
        throw Error("algorithm 1 requires a feasible starting point; " + to_bitstring(x0) +
                    " is not in C");
    const bool lipschitz = opt.cut_plan == CutPlan::Lipschitz;
    if (lipschitz) {
        if (!opt.lipschitz) throw Error("Lipschitz cut plan needs a cut factory");
        if (static_cast<int>(opt.lipschitz->constraint_constants.size()) != p.num_constraints())
            throw Error("Lipschitz factory does not match the constraint count");
    }

    auto make_opt_cut = [&](const BinaryVector& y) {
        return lipschitz ? opt.lipschitz->optimality(p.objective, y)
                         : optimality_cut(p.objective, y);
    };
    auto make_feas_cut = [&](int j, const BinaryVector& y) {
        return lipschitz ? opt.lipschitz->feasibility(p, j, y) : feasibility_cut(p, j, y);
    };

    SolveResult res;
    SolveState& st = res.state;
    st.visited_feasible.push_back(x0);
    st.opt_cuts.push_back(make_opt_cut(x0));
    st.lb = eval(p.objective, x0);
    st.ub = kInf;
    st.incumbent = x0;
    if (opt.variable_fixing)
        merge_fixings(st, apply_variable_fixing(x0, gradient(p.objective, x0)), 0);

    const long limit = iteration_limit(p, opt);
    long k = 0;
    res.status = SolveStatus::IterationLimit;

    while (!gap_closed(st.ub, st.lb, opt.eps_stop)) {
        if (k >= limit) {
            st.diagnostic = "iteration limit reached";
            break;
        }
        ++k;

        MasterModel model = build_master(p.polyhedron, st.opt_cuts, st.feas_cuts, st.fixings,
                                         ObjectiveMode::Theta);
        const MasterSolution sol = run_master(model, opt);
        st.master_nodes += sol.node_count;
        if (sol.status == MasterStatus::Infeasible) {
            st.diagnostic = "master became infeasible: the accumulated cuts removed every "
                            "feasible point, which cannot happen when the zero-gap condition "
                            "holds";
            break;
        }

        const Classification cls = classify_point(p, sol.x);
        const std::vector<double> grad = gradient(p.objective, sol.x);

        TraceRecord rec;
        rec.k = k;
        rec.x = sol.x;
        rec.theta = sol.theta;
        rec.feasible = cls.status == FeasStatus::FeasibleC;
        rec.max_violation = cls.max_violation;
        rec.grad_norm = norm2(grad);

        st.ub = sol.theta;
        if (cls.status == FeasStatus::FeasibleC) {
            rec.cut_family = lipschitz ? CutFamily::OptLipschitz : CutFamily::OptTangent;
            const double fx = eval(p.objective, sol.x);
            if (fx > st.lb) {
                st.lb = fx;
                st.incumbent = sol.x;
            }
            if (!contains(st.visited_feasible, sol.x)) {
                st.visited_feasible.push_back(sol.x);
                st.opt_cuts.push_back(make_opt_cut(sol.x));
            }
            if (opt.variable_fixing) merge_fixings(st, apply_variable_fixing(sol.x, grad), k);
        } else {
            rec.cut_family = lipschitz ? CutFamily::FeasLipschitz : CutFamily::FeasTangent;
            if (contains(st.visited_infeasible, sol.x)) {
                rec.lb = st.lb;
                rec.ub = st.ub;
                st.trace.push_back(rec);
                st.diagnostic = "an infeasible point reappeared despite its feasibility cut";
                break;
            }
            st.visited_infeasible.push_back(sol.x);
            for (int j : cls.active_set) st.feas_cuts.push_back(make_feas_cut(j, sol.x));
        }
        rec.lb = st.lb;
        rec.ub = st.ub;
        st.trace.push_back(rec);

        if (opt.early_stop && cls.status == FeasStatus::FeasibleC && rec.grad_norm == 0.0) {
            // stationary feasible point: optimal outright under the zero-gap condition
            st.ub = st.lb;
            res.status = SolveStatus::OptimalGapClosed;
            break;
        }
    }

    if (gap_closed(st.ub, st.lb, opt.eps_stop)) res.status = SolveStatus::OptimalGapClosed;
    st.iterations = k;
    res.iterations = k;
    res.best_x = st.incumbent;
    res.best_value = st.lb;
    attach_certificate(p, res, opt);
    return res;
}

SolveResult solve_algorithm2(const Problem& p, const SolveOptions& opt) {
    if (!p.objective.is_linear())
        throw Error("algorithm 2 requires a linear objective");
    const std::vector<double> c = p.objective.linear_coefficients();

    SolveResult res;
    SolveState& st = res.state;
    st.lb = -kInf;
    st.ub = kInf;
    res.status = SolveStatus::IterationLimit;

    const long limit = iteration_limit(p, opt);
    long k = 0;
    while (k < limit) {
        ++k;
        MasterModel model = build_master(p.polyhedron, {}, st.feas_cuts, {},
                                         ObjectiveMode::Linear, c);
        const MasterSolution sol = run_master(model, opt);
        st.master_nodes += sol.node_count;
        if (sol.status == MasterStatus::Infeasible)
            throw Error("algorithm 2: master infeasible, the cuts removed every binary point");

        const Classification cls = classify_point(p, sol.x);
        const std::vector<double> grad = gradient(p.objective, sol.x);
        TraceRecord rec;
        rec.k = k;
        rec.x = sol.x;
        rec.theta = sol.theta;
        rec.feasible = cls.status == FeasStatus::FeasibleC;
        rec.max_violation = cls.max_violation;
        rec.grad_norm = norm2(grad);
        rec.cut_family = CutFamily::FeasTangent;
        st.ub = sol.theta;

        if (cls.status == FeasStatus::FeasibleC) {
            const double fx = eval(p.objective, sol.x);
            st.lb = fx;
            st.incumbent = sol.x;
            st.visited_feasible.push_back(sol.x);
            rec.lb = st.lb;
            rec.ub = st.ub;
            st.trace.push_back(rec);
            res.status = SolveStatus::OptimalGapClosed;
            break;
        }
        st.visited_infeasible.push_back(sol.x);
        for (int j : cls.active_set) st.feas_cuts.push_back(feasibility_cut(p, j, sol.x));
        rec.lb = st.lb;
        rec.ub = st.ub;
        st.trace.push_back(rec);
    }

    if (res.status != SolveStatus::OptimalGapClosed)
        st.diagnostic = "iteration limit reached";
    st.iterations = k;
    res.iterations = k;
    res.best_x = st.incumbent;
    res.best_value = st.lb;
    attach_certificate(p, res, opt);
    return res;
}

SolveResult solve_algorithm3(const Problem& p, const BinaryVector& x0, double epsilon,
                             const SolveOptions& opt) {
    if (!(epsilon > 0.0)) throw Error("algorithm 3 requires epsilon > 0");
    if (classify_point(p, x0).status != FeasStatus::FeasibleC)
        throw Error("algorithm 3 requires a feasible starting point; " + to_bitstring(x0) +
                    " is not in C");

    SolveResult res;
    SolveState& st = res.state;
    st.visited_feasible.push_back(x0);
    st.opt_cuts.push_back(shifted_optimality_cut(p.objective, x0));
    st.lb = eval(p.objective, x0);
    st.ub = kInf;
    st.incumbent = x0;
    res.status = SolveStatus::IterationLimit;

    const long limit = iteration_limit(p, opt);
    long k = 0;
    while (k < limit) {
        ++k;
        MasterModel model = build_master(p.polyhedron, st.opt_cuts, st.feas_cuts, {},
                                         ObjectiveMode::Theta);
        const MasterSolution sol = run_master(model, opt);
        st.master_nodes += sol.node_count;
        if (sol.status == MasterStatus::Infeasible) {
            st.diagnostic = "master became infeasible: a shifted cut excluded every point "
                            "(flat level set in a violated constraint, or epsilon too large)";
            break;
        }

        const Classification cls = classify_point(p, sol.x);
        TraceRecord rec;
        rec.k = k;
        rec.x = sol.x;
        rec.theta = sol.theta;
        rec.feasible = cls.status == FeasStatus::FeasibleC;
        rec.max_violation = cls.max_violation;
        rec.grad_norm = norm2(gradient(p.objective, sol.x));
        rec.cut_family =
            rec.feasible ? CutFamily::OptShifted : CutFamily::FeasShifted;
        rec.lb = st.lb;
        rec.ub = kInf;

        if (cls.status == FeasStatus::FeasibleC) {
            if (contains(st.visited_feasible, sol.x)) {
                st.trace.push_back(rec);
                res.status = SolveStatus::RepeatedPoint;
                break;
            }
            const double fx = eval(p.objective, sol.x);
            if (fx > st.lb) {
                st.lb = fx;
                st.incumbent = sol.x;
            }
            rec.lb = st.lb;
            st.visited_feasible.push_back(sol.x);
            st.opt_cuts.push_back(shifted_optimality_cut(p.objective, sol.x));
        } else {
            if (contains(st.visited_infeasible, sol.x)) {
                st.trace.push_back(rec);
                res.status = SolveStatus::RepeatedPoint;
                st.diagnostic = "repeated infeasible point: the shifted cut failed to exclude "
                                "it, so the pseudoconvexity premises do not hold here";
                break;
            }
            st.visited_infeasible.push_back(sol.x);
            for (int j : cls.active_set)
                st.feas_cuts.push_back(shifted_feasibility_cut(p, j, sol.x, epsilon));
        }
        st.trace.push_back(rec);
    }

    if (res.status == SolveStatus::IterationLimit && st.diagnostic.empty())
        st.diagnostic = "iteration limit reached";
    st.iterations = k;
    res.iterations = k;
    res.best_x = st.incumbent;
    res.best_value = st.lb;
    // the repeated-point exit carries no bound certificate, so the KKT check
    // runs unconditionally here
    attach_certificate(p, res, opt, /*force=*/res.status == SolveStatus::RepeatedPoint);
    return res;
}

std::map<int, int> apply_variable_fixing(const BinaryVector& xk,
                                         const std::vector<double>& grad) {
    if (xk.size() != grad.size()) throw Error("apply_variable_fixing: dimension mismatch");
    const int n = static_cast<int>(xk.size());
    // threshold = sum over S0+ of grad_i - sum over S1- of grad_i
    double threshold = 0.0;
    for (int i = 0; i < n; ++i) {
        if (xk[i] == 0 && grad[i] > 0.0) threshold += grad[i];
        if (xk[i] == 1 && grad[i] <= 0.0) threshold -= grad[i];
    }
    std::map<int, int> fixed;
    for (int i = 0; i < n; ++i) {
        if (xk[i] == 1 && grad[i] > threshold) fixed[i] = 1;          // i in S1+
        if (xk[i] == 0 && grad[i] <= 0.0 && grad[i] < -threshold) fixed[i] = 0; // i in S0-
    }
    return fixed;
}

EarlyStopDecision stationarity_early_stop(const Problem& p, const BinaryVector& xk,
                                          std::optional<std::pair<double, double>> gap_hint) {
    const std::vector<double> grad = gradient(p.objective, xk);
    const double gn = norm2(grad);
    if (gn == 0.0) return EarlyStopDecision::StopOptimal;
    if (gap_hint) {
        const auto [m1, m2] = *gap_hint;
        // ties (m1 == m2) make the bound vacuous; skip the test then
        if (m1 > m2 && gn < (m1 - m2) / std::sqrt(static_cast<double>(p.n)))
            return EarlyStopDecision::StopOptimal;
    }
    return EarlyStopDecision::Continue;
}

} // namespace cutplane
