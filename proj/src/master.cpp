#include "cutplane/master.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

#include "cutplane/errors.hpp"
#include "cutplane/simplex.hpp"

namespace cutplane {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Model with fixed variables substituted out. Row r of `a` holds polyhedron
// rows first, then feasibility-cut rows; opt rows are kept separate.
struct Reduced {
    std::vector<int> free_idx; // ascending original indices
    Matrix a;
    std::vector<double> b;
    Matrix opt_a;
    std::vector<double> opt_rhs;
    std::vector<double> c; // Linear mode objective over free vars
    double c_fixed = 0.0;

    int nf() const { return static_cast<int>(free_idx.size()); }
};

Reduced reduce(const MasterModel& m) {
    const int n = m.dimension();
    Reduced r;
    for (int j = 0; j < n; ++j)
        if (!m.fixings.count(j)) r.free_idx.push_back(j);
    const int nf = r.nf();

    const int nrows = m.polyhedron.rows() + static_cast<int>(m.feas_cuts.size());
    r.a = Matrix(nrows, nf);
    r.b.assign(nrows, 0.0);
    for (int i = 0; i < m.polyhedron.rows(); ++i) {
        double fixed = 0.0;
        for (auto [j, v] : m.fixings)
            if (v) fixed += m.polyhedron.a(i, j);
        r.b[i] = m.polyhedron.b[i] - fixed;
        for (int k = 0; k < nf; ++k) r.a(i, k) = m.polyhedron.a(i, r.free_idx[k]);
    }
    for (std::size_t ci = 0; ci < m.feas_cuts.size(); ++ci) {
        const Cut& cut = m.feas_cuts[ci];
        const int i = m.polyhedron.rows() + static_cast<int>(ci);
        double fixed = cut.rhs;
        for (auto [j, v] : m.fixings)
            if (v) fixed += cut.a[j];
        r.b[i] = -fixed; // a.x + rhs <= 0  ->  a_free.z <= -(rhs + a_fixed)
        for (int k = 0; k < nf; ++k) r.a(i, k) = cut.a[r.free_idx[k]];
    }

    r.opt_a = Matrix(static_cast<int>(m.opt_cuts.size()), nf);
    r.opt_rhs.assign(m.opt_cuts.size(), 0.0);
    for (std::size_t ci = 0; ci < m.opt_cuts.size(); ++ci) {
        const Cut& cut = m.opt_cuts[ci];
        double fixed = cut.rhs;
        for (auto [j, v] : m.fixings)
            if (v) fixed += cut.a[j];
        r.opt_rhs[ci] = fixed;
        for (int k = 0; k < nf; ++k) r.opt_a(static_cast<int>(ci), k) = cut.a[r.free_idx[k]];
    }

    if (m.mode == ObjectiveMode::Linear) {
        r.c.assign(nf, 0.0);
        for (int k = 0; k < nf; ++k) r.c[k] = m.linear_objective[r.free_idx[k]];
        for (auto [j, v] : m.fixings)
            if (v) r.c_fixed += m.linear_objective[j];
    }
    return r;
}

BinaryVector assemble(const MasterModel& m, const Reduced& r, const std::vector<std::uint8_t>& z) {
    BinaryVector x(m.dimension(), 0);
    for (auto [j, v] : m.fixings) x[j] = static_cast<std::uint8_t>(v);
    for (int k = 0; k < r.nf(); ++k) x[r.free_idx[k]] = z[k];
    return x;
}

// exact objective of a reduced binary point
double exact_value(const MasterModel& m, const Reduced& r, const std::vector<std::uint8_t>& z) {
    if (m.mode == ObjectiveMode::Linear) {
        double v = r.c_fixed;
        for (int k = 0; k < r.nf(); ++k)
            if (z[k]) v += r.c[k];
        return v;
    }
    double v = kInf;
    for (int ci = 0; ci < r.opt_a.rows(); ++ci) {
        double t = r.opt_rhs[ci];
        for (int k = 0; k < r.nf(); ++k)
            if (z[k]) t += r.opt_a(ci, k);
        v = std::min(v, t);
    }
    return v;
}

bool exact_feasible(const Reduced& r, const std::vector<std::uint8_t>& z) {
    for (int i = 0; i < r.a.rows(); ++i) {
        double lhs = 0.0;
        for (int k = 0; k < r.nf(); ++k)
            if (z[k]) lhs += r.a(i, k);
        if (lhs > r.b[i] + kFeasTol * std::max(1.0, std::fabs(r.b[i]))) return false;
    }
    return true;
}

} // namespace

MasterModel build_master(LinearPolyhedron polyhedron, std::vector<Cut> opt_cuts,
                         std::vector<Cut> feas_cuts, std::map<int, int> fixings,
                         ObjectiveMode mode, std::vector<double> linear_objective) {
    const int n = polyhedron.dimension();
    if (mode == ObjectiveMode::Theta && opt_cuts.empty())
        throw Error("master model is unbounded: theta objective needs at least one optimality cut");
    if (mode == ObjectiveMode::Linear && static_cast<int>(linear_objective.size()) != n)
        throw Error("linear objective has wrong dimension");
    for (const Cut& c : opt_cuts) {
        if (!is_optimality_family(c.family)) throw Error("feasibility cut passed as optimality cut");
        if (static_cast<int>(c.a.size()) != n) throw Error("optimality cut has wrong dimension");
    }
    for (const Cut& c : feas_cuts) {
        if (is_optimality_family(c.family)) throw Error("optimality cut passed as feasibility cut");
        if (static_cast<int>(c.a.size()) != n) throw Error("feasibility cut has wrong dimension");
    }
    for (auto [j, v] : fixings) {
        if (j < 0 || j >= n) throw Error("fixing index out of range");
        if (v != 0 && v != 1)
            throw Error("contradictory fixings: variable x" + std::to_string(j + 1) +
                        " must be fixed to 0 or 1");
    }
    MasterModel m;
    m.polyhedron = std::move(polyhedron);
    m.opt_cuts = std::move(opt_cuts);
    m.feas_cuts = std::move(feas_cuts);
    m.fixings = std::move(fixings);
    m.mode = mode;
    m.linear_objective = std::move(linear_objective);
    return m;
}

MasterSolution solve_enumerative(const MasterModel& model, int limit) {
    const Reduced r = reduce(model);
    const int nf = r.nf();
    if (nf > limit) throw DimensionTooLarge(nf, limit);

    MasterSolution sol;
    std::vector<std::uint8_t> z(nf, 0), best_z;
    double best = -kInf;

    // running accumulators, updated on the bits each increment flips
    std::vector<double> row(r.a.rows(), 0.0), opt(r.opt_a.rows(), 0.0);
    for (int ci = 0; ci < r.opt_a.rows(); ++ci) opt[ci] = r.opt_rhs[ci];
    const bool linear = model.mode == ObjectiveMode::Linear;
    double lin = r.c_fixed;

    for (;;) {
        ++sol.node_count;
        bool ok = true;
        for (int i = 0; i < r.a.rows() && ok; ++i)
            if (row[i] > r.b[i] + kFeasTol * std::max(1.0, std::fabs(r.b[i]))) ok = false;
        if (ok) {
            double val;
            if (linear) {
                val = lin;
            } else {
                val = kInf;
                for (int ci = 0; ci < r.opt_a.rows(); ++ci) val = std::min(val, opt[ci]);
            }
            // guard band: re-evaluate candidates exactly so accumulator drift
            // cannot affect the argmax or the lexicographic tie-break
            if (val > best - 1e-7 * std::max(1.0, std::fabs(best))) {
                if (exact_feasible(r, z)) {
                    const double exact = exact_value(model, r, z);
                    if (exact > best) {
                        best = exact;
                        best_z = z;
                    }
                }
            }
        }
        int j = nf - 1;
        while (j >= 0 && z[j] == 1) {
            z[j] = 0;
            for (int i = 0; i < r.a.rows(); ++i) row[i] -= r.a(i, j);
            for (int ci = 0; ci < r.opt_a.rows(); ++ci) opt[ci] -= r.opt_a(ci, j);
            if (linear) lin -= r.c[j];
            --j;
        }
        if (j < 0) break;
        z[j] = 1;
        for (int i = 0; i < r.a.rows(); ++i) row[i] += r.a(i, j);
        for (int ci = 0; ci < r.opt_a.rows(); ++ci) opt[ci] += r.opt_a(ci, j);
        if (linear) lin += r.c[j];
    }

    if (best_z.empty() && best == -kInf) {
        sol.status = MasterStatus::Infeasible;
        return sol;
    }
    sol.status = MasterStatus::Optimal;
    sol.x = assemble(model, r, best_z.empty() ? std::vector<std::uint8_t>(nf, 0) : best_z);
    sol.theta = best;
    return sol;
}

namespace {

// LP over the reduced model: variables z_1..z_nf in [0,1], plus split theta
// variables in Theta mode. Constraint order: reduced rows, box upper bounds,
// optimality-cut rows.
Relaxation relax_reduced(const MasterModel& model, const Reduced& r) {
    const int nf = r.nf();
    const bool theta_mode = model.mode == ObjectiveMode::Theta;
    const int nvars = nf + (theta_mode ? 2 : 0);
    const int nrows = r.a.rows() + nf + (theta_mode ? r.opt_a.rows() : 0);

    Matrix a(nrows, nvars);
    std::vector<double> b(nrows, 0.0);
    for (int i = 0; i < r.a.rows(); ++i) {
        for (int k = 0; k < nf; ++k) a(i, k) = r.a(i, k);
        b[i] = r.b[i];
    }
    for (int k = 0; k < nf; ++k) {
        a(r.a.rows() + k, k) = 1.0;
        b[r.a.rows() + k] = 1.0;
    }
    if (theta_mode) {
        const int base = r.a.rows() + nf;
        for (int ci = 0; ci < r.opt_a.rows(); ++ci) {
            // theta - a.z <= rhs
            for (int k = 0; k < nf; ++k) a(base + ci, k) = -r.opt_a(ci, k);
            a(base + ci, nf) = 1.0;
            a(base + ci, nf + 1) = -1.0;
            b[base + ci] = r.opt_rhs[ci];
        }
    }

    std::vector<double> c(nvars, 0.0);
    if (theta_mode) {
        c[nf] = 1.0;
        c[nf + 1] = -1.0;
    } else {
        for (int k = 0; k < nf; ++k) c[k] = r.c[k];
    }

    const LpResult lp = simplex_maximize(a, b, c);
    Relaxation rel;
    if (lp.status == LpStatus::Infeasible) return rel;
    if (lp.status == LpStatus::Unbounded)
        throw Error("master relaxation unbounded (theta mode without cuts?)");
    rel.feasible = true;
    rel.bound = lp.value + (theta_mode ? 0.0 : r.c_fixed);
    rel.x.assign(model.dimension(), 0.0);
    for (auto [j, v] : model.fixings) rel.x[j] = v;
    for (int k = 0; k < nf; ++k) rel.x[r.free_idx[k]] = std::clamp(lp.x[k], 0.0, 1.0);
    return rel;
}

} // namespace

Relaxation lp_relaxation(const MasterModel& model) {
    return relax_reduced(model, reduce(model));
}

MasterSolution solve_branch_and_bound(const MasterModel& model) {
    struct Node {
        double bound;
        int depth;
        long seq;
        std::map<int, int> fix;
    };
    struct NodeLess {
        bool operator()(const Node& a, const Node& b) const {
            if (a.bound != b.bound) return a.bound < b.bound; // best bound first
            if (a.depth != b.depth) return a.depth < b.depth; // then deepest
            return a.seq > b.seq;
        }
    };

    MasterSolution sol;
    double best = -kInf;
    BinaryVector best_x;
    long seq = 0;

    std::priority_queue<Node, std::vector<Node>, NodeLess> queue;
    queue.push({kInf, 0, seq++, model.fixings});

    auto prune_tol = [&](double v) { return v + 1e-6 + 1e-12 * std::fabs(v); };

    while (!queue.empty()) {
        Node node = queue.top();
        queue.pop();
        if (!best_x.empty() && node.bound <= prune_tol(best)) continue;

        MasterModel sub = model;
        sub.fixings = node.fix;
        const Reduced r = reduce(sub);
        ++sol.node_count;
        const Relaxation rel = relax_reduced(sub, r);
        if (!rel.feasible) continue;
        if (!best_x.empty() && rel.bound <= prune_tol(best)) continue;

        // most fractional free variable
        int branch_var = -1;
        double frac_best = 1e-7;
        for (int k = 0; k < r.nf(); ++k) {
            const int j = r.free_idx[k];
            const double f = std::min(rel.x[j], 1.0 - rel.x[j]);
            if (f > frac_best) {
                frac_best = f;
                branch_var = j;
            }
        }

        if (branch_var < 0) {
            // integral relaxation: optimal for this subtree
            std::vector<std::uint8_t> z(r.nf());
            for (int k = 0; k < r.nf(); ++k)
                z[k] = rel.x[r.free_idx[k]] > 0.5 ? 1 : 0;
            if (exact_feasible(r, z)) {
                const double val = exact_value(sub, r, z);
                BinaryVector x = assemble(sub, r, z);
                if (val > best || (val == best && x < best_x)) {
                    best = val;
                    best_x = std::move(x);
                }
                continue;
            }
            // numerically integral but exactly infeasible: force a branch
            if (r.nf() == 0) continue;
            branch_var = r.free_idx[0];
        }

        for (int v : {0, 1}) {
            Node child{rel.bound, node.depth + 1, seq++, node.fix};
            child.fix[branch_var] = v;
            queue.push(child);
        }
    }

    if (best_x.empty()) {
        sol.status = MasterStatus::Infeasible;
        return sol;
    }
    sol.status = MasterStatus::Optimal;
    sol.x = std::move(best_x);
    sol.theta = best;
    return sol;
}

std::string write_lp(const MasterModel& model) {
    const int n = model.dimension();
    std::ostringstream out;
    auto term = [&](double coef, const std::string& name, bool first) {
        std::string s;
        if (coef < 0)
            s += first ? "-" : "- ";
        else if (!first)
            s += "+ ";
        s += format_double(std::fabs(coef)) + " " + name + " ";
        return s;
    };

    out << "\\ cutplane master model\n";
    out << "Maximize\n obj: ";
    if (model.mode == ObjectiveMode::Theta) {
        out << "theta";
    } else {
        bool first = true;
        for (int j = 0; j < n; ++j) {
            if (model.linear_objective[j] == 0.0) continue;
            out << term(model.linear_objective[j], "x" + std::to_string(j + 1), first);
            first = false;
        }
        if (first) out << "0 x1";
    }
    out << "\nSubject To\n";
    for (int i = 0; i < model.polyhedron.rows(); ++i) {
        out << " r" << i + 1 << ": ";
        bool first = true;
        for (int j = 0; j < n; ++j) {
            if (model.polyhedron.a(i, j) == 0.0) continue;
            out << term(model.polyhedron.a(i, j), "x" + std::to_string(j + 1), first);
            first = false;
        }
        if (first) out << "0 x1 ";
        out << "<= " << format_double(model.polyhedron.b[i]) << "\n";
    }
    for (std::size_t ci = 0; ci < model.opt_cuts.size(); ++ci) {
        const Cut& c = model.opt_cuts[ci];
        out << " oc" << ci + 1 << ": theta ";
        for (int j = 0; j < n; ++j)
            if (c.a[j] != 0.0) out << term(-c.a[j], "x" + std::to_string(j + 1), false);
        out << "<= " << format_double(c.rhs) << "\n";
    }
    for (std::size_t ci = 0; ci < model.feas_cuts.size(); ++ci) {
        const Cut& c = model.feas_cuts[ci];
        out << " fc" << ci + 1 << ": ";
        bool first = true;
        for (int j = 0; j < n; ++j) {
            if (c.a[j] == 0.0) continue;
            out << term(c.a[j], "x" + std::to_string(j + 1), first);
            first = false;
        }
        if (first) out << "0 x1 ";
        out << "<= " << format_double(-c.rhs) << "\n";
    }
    int fi = 0;
    for (auto [j, v] : model.fixings)
        out << " fx" << ++fi << ": x" << j + 1 << " = " << v << "\n";
    out << "Bounds\n";
    if (model.mode == ObjectiveMode::Theta) out << " theta free\n";
    out << "Binaries\n";
    for (int j = 0; j < n; ++j) out << " x" << j + 1;
    out << "\nEnd\n";
    return out.str();
}

} // namespace cutplane
