#include "cutplane/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "cutplane/errors.hpp"
#include "cutplane/master.hpp"
#include "cutplane/simplex.hpp"

namespace cutplane {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> diff_to_doubles(const BinaryVector& a, const BinaryVector& b) {
    std::vector<double> d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        d[i] = static_cast<double>(a[i]) - static_cast<double>(b[i]);
    return d;
}

double sq_distance(const BinaryVector& a, const BinaryVector& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) s += 1.0;
    return s;
}

// incremental quadratic value tracker for the lexicographic scan
struct QuadTracker {
    const NonlinearFunction* f = nullptr;
    std::vector<double> qx; // Q x
    double value = 0.0;

    explicit QuadTracker(const NonlinearFunction& fn) : f(&fn) {
        qx.assign(fn.dimension(), 0.0);
        value = fn.constant();
    }
    void flip(int j, double sign) {
        value += sign * (f->linear()[j] + qx[j]) + 0.5 * f->quad()(j, j);
        for (int i = 0; i < f->dimension(); ++i) qx[i] += sign * f->quad()(i, j);
    }
};

} // namespace

BruteForceResult brute_force_solve(const Problem& p, int limit) {
    if (p.n > limit) throw DimensionTooLarge(p.n, limit);
    const bool quad_obj = p.objective.kind() == FunctionKind::Quadratic;

    BinaryVector x(p.n, 0);
    std::vector<double> row(p.polyhedron.rows(), 0.0);
    std::optional<QuadTracker> obj;
    if (quad_obj) obj.emplace(p.objective);

    BruteForceResult best;
    double m1 = -kInf, m2 = -kInf;
    BinaryVector argmax;
    long feasible_count = 0, tie_count = 0;

    for (;;) {
        bool in_k = true;
        for (int i = 0; i < p.polyhedron.rows() && in_k; ++i)
            if (row[i] > p.polyhedron.b[i] + kFeasTol * std::max(1.0, std::fabs(p.polyhedron.b[i])))
                in_k = false;
        if (in_k) {
            bool feasible = true;
            if (p.num_constraints() > 0)
                feasible = classify_point(p, x).status == FeasStatus::FeasibleC;
            if (feasible) {
                ++feasible_count;
                const double v = obj ? obj->value : eval(p.objective, x);
                const double guard = 1e-7 * std::max(1.0, std::fabs(m1));
                if (v > m1 - guard) {
                    const double ve = eval(p.objective, x); // exact, drift-free
                    if (ve > m1) {
                        if (m1 > -kInf) m2 = std::max(m2, m1);
                        m1 = ve;
                        argmax = x;
                        tie_count = 1;
                    } else if (ve == m1) {
                        ++tie_count;
                    } else {
                        m2 = std::max(m2, ve);
                    }
                } else {
                    m2 = std::max(m2, v);
                }
            }
        }
        int j = p.n - 1;
        while (j >= 0 && x[j] == 1) {
            x[j] = 0;
            for (int i = 0; i < p.polyhedron.rows(); ++i) row[i] -= p.polyhedron.a(i, j);
            if (obj) obj->flip(j, -1.0);
            --j;
        }
        if (j < 0) break;
        x[j] = 1;
        for (int i = 0; i < p.polyhedron.rows(); ++i) row[i] += p.polyhedron.a(i, j);
        if (obj) obj->flip(j, +1.0);
    }

    if (feasible_count == 0) throw Error("brute force: the feasible set C is empty");
    best.x = argmax;
    best.value = m1;
    if (m2 == -kInf && feasible_count >= 2) {
        // f is constant on a multi-point C: report a zero gap rather than -inf
        best.second_value = m1;
        best.constant_on_c = true;
    } else {
        best.second_value = m2;
    }
    return best;
}

ConditionReport check_condition1(const Problem& p, int limit) {
    std::vector<BinaryVector> c_set, cbar_set;
    enumerate_classified(p, c_set, cbar_set, limit);
    if (c_set.empty()) throw Error("check_condition1: the feasible set C is empty");

    std::vector<Cut> opt_cuts, feas_cuts;
    for (const BinaryVector& y : c_set) opt_cuts.push_back(optimality_cut(p.objective, y));
    for (const BinaryVector& y : cbar_set) {
        const Classification cls = classify_point(p, y);
        if (cls.linear_violation) continue; // never happens: enumeration stays in K
        for (int j : cls.active_set) feas_cuts.push_back(feasibility_cut(p, j, y));
    }

    ConditionReport rep;
    const MasterModel model =
        build_master(p.polyhedron, std::move(opt_cuts), std::move(feas_cuts), {},
                     ObjectiveMode::Theta);
    const MasterSolution sol = solve_enumerative(model, limit);
    rep.lp_value = sol.status == MasterStatus::Optimal ? sol.theta : -kInf;
    rep.true_optimum = brute_force_solve(p, limit).value;
    rep.holds = sol.status == MasterStatus::Optimal &&
                std::fabs(rep.lp_value - rep.true_optimum) <=
                    1e-9 * std::max(1.0, std::fabs(rep.true_optimum));
    if (!rep.holds) {
        std::ostringstream note;
        note << "gap " << format_double(rep.true_optimum - rep.lp_value)
             << " between the fully-cut master and the true optimum";
        rep.note = note.str();
    }
    return rep;
}

ConditionReport check_tangent_domination(const Problem& p, int limit) {
    std::vector<BinaryVector> c_set, cbar_set;
    enumerate_classified(p, c_set, cbar_set, limit);

    ConditionReport rep;
    rep.holds = true;

    std::vector<double> f_vals(c_set.size());
    for (std::size_t i = 0; i < c_set.size(); ++i) f_vals[i] = eval(p.objective, c_set[i]);

    for (const BinaryVector& y : c_set) {
        const Cut cut = optimality_cut(p.objective, y);
        for (std::size_t i = 0; i < c_set.size(); ++i) {
            const double hf = evaluate_cut(cut, c_set[i], 0.0); // a.x + rhs
            const double tol = 1e-9 * std::max(1.0, std::fabs(f_vals[i]));
            if (f_vals[i] > hf + tol) {
                rep.holds = false;
                rep.witness = {c_set[i], y};
                rep.note = "objective tangent at " + to_bitstring(y) + " lies below f at " +
                           to_bitstring(c_set[i]);
                return rep;
            }
        }
    }
    for (const BinaryVector& y : cbar_set) {
        const Classification cls = classify_point(p, y);
        for (int j : cls.active_set) {
            const Cut cut = feasibility_cut(p, j, y);
            for (const BinaryVector& x : c_set) {
                const double hg = evaluate_cut(cut, x);
                if (hg > 1e-9 * std::max(1.0, std::fabs(cut.rhs))) {
                    rep.holds = false;
                    rep.witness = {x, y};
                    rep.note = "feasibility tangent of g" + std::to_string(j + 1) + " at " +
                               to_bitstring(y) + " cuts off the feasible point " + to_bitstring(x);
                    return rep;
                }
            }
        }
    }
    return rep;
}

std::optional<std::pair<BinaryVector, BinaryVector>>
check_robust_quasiconvex_binary(const NonlinearFunction& fn, double tau,
                                const std::vector<BinaryVector>& points) {
    if (tau < 0.0) throw Error("robust quasiconvexity modulus must be nonnegative");
    const std::size_t k = points.size();
    std::vector<double> vals(k);
    std::vector<std::vector<double>> grads(k);
    for (std::size_t i = 0; i < k; ++i) {
        vals[i] = eval(fn, points[i]);
        grads[i] = gradient(fn, points[i]);
    }
    for (std::size_t xi = 0; xi < k; ++xi) {
        for (std::size_t yi = 0; yi < k; ++yi) {
            if (xi == yi || vals[xi] > vals[yi]) continue;
            const std::vector<double> d = diff_to_doubles(points[xi], points[yi]); // x - y
            const double lhs = dot(grads[yi], d);
            const double dist = std::sqrt(sq_distance(points[xi], points[yi]));
            const double rhs = -std::min(tau * dist, vals[yi] - vals[xi]);
            if (lhs > rhs + 1e-9 * std::max(1.0, std::fabs(rhs)))
                return std::make_pair(points[xi], points[yi]);
        }
    }
    return std::nullopt;
}

EpsilonBar compute_epsilon_bar(const Problem& p, int limit) {
    std::vector<BinaryVector> c_set, cbar_set;
    enumerate_classified(p, c_set, cbar_set, limit);
    if (c_set.empty()) throw Error("compute_epsilon_bar: the feasible set C is empty");
    if (cbar_set.empty()) return {kInf, false};

    double eps = kInf;
    for (const BinaryVector& y : cbar_set) {
        const Classification cls = classify_point(p, y);
        for (int j : cls.active_set) {
            const std::vector<double> g = gradient(p.constraints[j], y);
            for (const BinaryVector& x : c_set) {
                const std::vector<double> d = diff_to_doubles(y, x); // y - x
                eps = std::min(eps, dot(g, d));
            }
        }
    }
    return {eps, eps <= 0.0};
}

double delta_k(double optimal_value, double f_xk, const std::vector<double>& grad) {
    if (optimal_value < f_xk - 1e-9 * std::max(1.0, std::fabs(f_xk)))
        throw Error("delta_k: optimal value below f(x^k)");
    const double gap = std::max(0.0, optimal_value - f_xk);
    const double gn = norm2(grad);
    return gn > 0.0 ? gap / gn : 0.0;
}

std::uint64_t u_count(int m_radius, int m_dim) {
    if (m_radius < 0 || m_dim < 0 || m_radius > m_dim)
        throw Error("u_count requires 0 <= M <= m");
    if (m_dim > 62) throw Error("u_count: dimension too large for exact 64-bit arithmetic");
    std::uint64_t binom = 1, sum = 1;
    for (int q = 1; q <= m_radius; ++q) {
        binom = binom * static_cast<std::uint64_t>(m_dim - q + 1) / static_cast<std::uint64_t>(q);
        sum += binom;
    }
    return sum;
}

std::uint64_t removal_lower_bound(double delta, int n) {
    if (delta < 0.0) throw Error("removal_lower_bound: delta must be nonnegative");
    if (delta == 0.0) return 0;
    for (int big_n = n; big_n >= 0; --big_n)
        if (delta > std::sqrt(static_cast<double>(big_n))) return u_count(big_n, n);
    return 0;
}

std::uint64_t iteration_bound(int n, int big_n) {
    if (big_n < 1 || big_n > n) throw Error("iteration_bound requires 1 <= N <= n");
    if (n - big_n > 62) throw Error("iteration_bound: result exceeds 64 bits");
    return std::uint64_t{1} << (n - big_n);
}

// ---------------------------------------------------------------------------
// nonnegative least squares and the cone distance
// ---------------------------------------------------------------------------

namespace {

// solve (gram) z = rhs by Gaussian elimination with partial pivoting;
// returns false on (numerical) singularity
bool solve_dense(Matrix gram, std::vector<double> rhs, std::vector<double>& z) {
    const int n = gram.rows();
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int i = col + 1; i < n; ++i)
            if (std::fabs(gram(i, col)) > std::fabs(gram(piv, col))) piv = i;
        if (std::fabs(gram(piv, col)) < 1e-13) return false;
        if (piv != col) {
            for (int j = 0; j < n; ++j) std::swap(gram(col, j), gram(piv, j));
            std::swap(rhs[col], rhs[piv]);
        }
        for (int i = col + 1; i < n; ++i) {
            const double f = gram(i, col) / gram(col, col);
            if (f == 0.0) continue;
            for (int j = col; j < n; ++j) gram(i, j) -= f * gram(col, j);
            rhs[i] -= f * rhs[col];
        }
    }
    z.assign(n, 0.0);
    for (int i = n - 1; i >= 0; --i) {
        double s = rhs[i];
        for (int j = i + 1; j < n; ++j) s -= gram(i, j) * z[j];
        z[i] = s / gram(i, i);
    }
    return true;
}

} // namespace

std::vector<double> nnls(const Matrix& g, const std::vector<double>& v, double tol) {
    const int rows = g.rows();
    const int cols = g.cols();
    if (static_cast<int>(v.size()) != rows) throw Error("nnls: dimension mismatch");

    std::vector<double> w(cols, 0.0);
    std::vector<bool> passive(cols, false);

    auto residual = [&] {
        std::vector<double> r = v;
        for (int j = 0; j < cols; ++j) {
            if (w[j] == 0.0) continue;
            for (int i = 0; i < rows; ++i) r[i] -= g(i, j) * w[j];
        }
        return r;
    };

    double scale = 0.0;
    {
        std::vector<double> r0 = v;
        for (int j = 0; j < cols; ++j) {
            double s = 0.0;
            for (int i = 0; i < rows; ++i) s += g(i, j) * r0[i];
            scale = std::max(scale, std::fabs(s));
        }
        scale = std::max(scale, 1.0);
    }
    const double grad_tol = tol * scale;

    // least squares restricted to the passive set, via normal equations
    auto restricted_ls = [&](std::vector<double>& z) -> bool {
        std::vector<int> idx;
        for (int j = 0; j < cols; ++j)
            if (passive[j]) idx.push_back(j);
        const int k = static_cast<int>(idx.size());
        Matrix gram(k, k);
        std::vector<double> rhs(k, 0.0);
        for (int a = 0; a < k; ++a) {
            for (int b = a; b < k; ++b) {
                double s = 0.0;
                for (int i = 0; i < rows; ++i) s += g(i, idx[a]) * g(i, idx[b]);
                gram(a, b) = gram(b, a) = s;
            }
            double s = 0.0;
            for (int i = 0; i < rows; ++i) s += g(i, idx[a]) * v[i];
            rhs[a] = s;
        }
        std::vector<double> zp;
        if (!solve_dense(gram, rhs, zp)) return false;
        z.assign(cols, 0.0);
        for (int a = 0; a < k; ++a) z[idx[a]] = zp[a];
        return true;
    };

    const int max_outer = 3 * cols + 30;
    for (int outer = 0; outer < max_outer; ++outer) {
        const std::vector<double> r = residual();
        int enter = -1;
        double best = grad_tol;
        for (int j = 0; j < cols; ++j) {
            if (passive[j]) continue;
            double s = 0.0;
            for (int i = 0; i < rows; ++i) s += g(i, j) * r[i];
            if (s > best) {
                best = s;
                enter = j;
            }
        }
        if (enter < 0) break;
        passive[enter] = true;

        for (int inner = 0; inner < max_outer; ++inner) {
            std::vector<double> z;
            if (!restricted_ls(z)) {
                // dependent column: back out the variable just added
                passive[enter] = false;
                enter = -1;
                break;
            }
            bool all_positive = true;
            for (int j = 0; j < cols; ++j)
                if (passive[j] && z[j] <= 0.0) all_positive = false;
            if (all_positive) {
                w = z;
                break;
            }
            double alpha = 1.0;
            for (int j = 0; j < cols; ++j)
                if (passive[j] && z[j] <= 0.0 && w[j] != z[j])
                    alpha = std::min(alpha, w[j] / (w[j] - z[j]));
            for (int j = 0; j < cols; ++j) {
                if (!passive[j]) continue;
                w[j] += alpha * (z[j] - w[j]);
                if (w[j] <= tol) {
                    w[j] = 0.0;
                    passive[j] = false;
                }
            }
        }
        if (enter < 0) break;
    }
    return w;
}

double tangent_cone_distance(const std::vector<double>& v, const BinaryVector& x,
                             const std::vector<BinaryVector>& feasible_points) {
    const int n = static_cast<int>(v.size());
    if (static_cast<int>(x.size()) != n) throw Error("tangent_cone_distance: dimension mismatch");
    std::vector<const BinaryVector*> gens;
    for (const BinaryVector& y : feasible_points)
        if (y != x) gens.push_back(&y);
    if (gens.empty()) return 0.0; // isolated point: the normal cone is all of R^n

    Matrix g(n, static_cast<int>(gens.size()));
    for (std::size_t col = 0; col < gens.size(); ++col)
        for (int i = 0; i < n; ++i)
            g(i, static_cast<int>(col)) = static_cast<double>((*gens[col])[i]) - x[i];

    const std::vector<double> w = nnls(g, v);
    std::vector<double> proj(n, 0.0);
    for (std::size_t col = 0; col < gens.size(); ++col) {
        if (w[col] == 0.0) continue;
        for (int i = 0; i < n; ++i) proj[i] += g(i, static_cast<int>(col)) * w[col];
    }
    return norm2(proj);
}

Certificate kkt_certificate(const Problem& p, const BinaryVector& xstar,
                            const std::vector<double>& lambda) {
    if (static_cast<int>(lambda.size()) != p.num_constraints())
        throw Error("kkt_certificate: one multiplier per constraint required");
    if (classify_point(p, xstar).status != FeasStatus::FeasibleC)
        throw Error("kkt_certificate: x* is infeasible");
    const std::vector<double> xd = to_doubles(xstar);
    for (int j = 0; j < p.num_constraints(); ++j) {
        if (lambda[j] < 0.0) throw Error("kkt_certificate: multipliers must be nonnegative");
        const double comp = lambda[j] * eval(p.constraints[j], std::span<const double>(xd));
        if (std::fabs(comp) > 1e-9)
            throw Error("kkt_certificate: complementary slackness violated for constraint " +
                        std::to_string(j + 1));
    }

    std::vector<double> c = gradient(p.objective, xstar);
    for (int j = 0; j < p.num_constraints(); ++j) {
        if (lambda[j] == 0.0) continue;
        const std::vector<double> gj = gradient(p.constraints[j], xstar);
        for (int i = 0; i < p.n; ++i) c[i] -= lambda[j] * gj[i];
    }

    const MasterModel model = build_master(p.polyhedron, {}, {}, {}, ObjectiveMode::Linear, c);
    const MasterSolution sol = p.n <= kEnumerationLimit ? solve_enumerative(model)
                                                        : solve_branch_and_bound(model);
    if (sol.status != MasterStatus::Optimal)
        throw Error("kkt_certificate: certificate LP has no binary point in K");

    double at_star = 0.0;
    for (int i = 0; i < p.n; ++i)
        if (xstar[i]) at_star += c[i];

    Certificate cert;
    cert.kind = CertificateKind::KktLp;
    cert.slack = sol.theta - at_star;
    cert.passed = cert.slack <= 1e-9 * std::max(1.0, std::fabs(sol.theta));
    cert.multipliers = lambda;
    return cert;
}

std::optional<std::vector<double>> find_kkt_multipliers(const Problem& p,
                                                        const BinaryVector& xstar,
                                                        int limit) {
    std::vector<double> zeros(p.num_constraints(), 0.0);
    if (kkt_certificate(p, xstar, zeros).passed) return zeros;
    if (p.n > limit) return std::nullopt;

    // active constraints may carry positive multipliers
    const std::vector<double> xd = to_doubles(xstar);
    std::vector<int> active;
    for (int j = 0; j < p.num_constraints(); ++j)
        if (std::fabs(eval(p.constraints[j], std::span<const double>(xd))) <= 1e-9)
            active.push_back(j);
    if (active.empty()) return std::nullopt;

    // feasibility in lambda >= 0 of
    //   sum_j lambda_j <grad g_j(x*), x - x*>  >=  <grad f(x*), x - x*>
    // over every binary x in K, solved as an LP minimizing sum lambda
    const std::vector<BinaryVector> pts = enumerate_binary_points(p.polyhedron, limit);
    const std::vector<double> gradf = gradient(p.objective, xstar);
    std::vector<std::vector<double>> gradg;
    for (int j : active) gradg.push_back(gradient(p.constraints[j], xstar));

    Matrix a(static_cast<int>(pts.size()), static_cast<int>(active.size()));
    std::vector<double> b(pts.size(), 0.0);
    for (std::size_t r = 0; r < pts.size(); ++r) {
        const std::vector<double> d = diff_to_doubles(pts[r], xstar);
        for (std::size_t cidx = 0; cidx < active.size(); ++cidx)
            a(static_cast<int>(r), static_cast<int>(cidx)) = -dot(gradg[cidx], d);
        b[r] = -dot(gradf, d);
    }
    std::vector<double> obj(active.size(), -1.0); // maximize -sum lambda
    const LpResult lp = simplex_maximize(a, b, obj);
    if (lp.status != LpStatus::Optimal) return std::nullopt;

    std::vector<double> lambda(p.num_constraints(), 0.0);
    for (std::size_t cidx = 0; cidx < active.size(); ++cidx)
        lambda[active[cidx]] = std::max(0.0, lp.x[cidx]);
    if (kkt_certificate(p, xstar, lambda).passed) return lambda;
    return std::nullopt;
}

double lipschitz_threshold(const Problem& p, int j, const BinaryVector& xk, int limit) {
    if (j < 0 || j >= p.num_constraints())
        throw Error("lipschitz_threshold: constraint index out of range");
    double min_violation = kInf;
    double max_sqdist = 0.0;
    bool have_denominator = false;
    for (const BinaryVector& x : enumerate_binary_points(p.polyhedron, limit)) {
        const double gx = eval(p.constraints[j], x);
        if (gx <= kFeasTol) continue;
        min_violation = std::min(min_violation, gx);
        if (x != xk) {
            max_sqdist = std::max(max_sqdist, sq_distance(x, xk));
            have_denominator = true;
        }
    }
    if (!have_denominator) return kInf;
    return 2.0 * min_violation / max_sqdist;
}

TraceCheckReport verify_trace_inequalities(const std::vector<TraceRecord>& trace,
                                           const Problem& p, double optimal_value,
                                           const std::vector<double>& lipschitz_g) {
    TraceCheckReport rep;

    // gradient-Lipschitz constants for the descent check
    std::vector<double> lg = lipschitz_g;
    if (lg.empty() && p.num_constraints() > 0) {
        lg.reserve(p.constraints.size());
        try {
            for (const NonlinearFunction& g : p.constraints)
                lg.push_back(hessian_row_sum_bound(g));
        } catch (const Error&) {
            lg.clear();
            rep.descent_check_skipped = true;
            rep.details.push_back(
                "descent inequality skipped: no Lipschitz constants available for the constraints");
        }
    }

    auto violate = [&](long k, long l, const std::string& what, double by) {
        ++rep.violations;
        std::ostringstream os;
        os << "k=" << k << ", l=" << l << ": " << what << " violated by " << format_double(by);
        rep.details.push_back(os.str());
    };

    for (std::size_t a = 0; a < trace.size(); ++a) {
        const TraceRecord& ra = trace[a];
        if (ra.feasible) {
            const double fa = eval(p.objective, ra.x);
            const std::vector<double> ga = gradient(p.objective, ra.x);
            for (std::size_t b = a + 1; b < trace.size(); ++b) {
                const TraceRecord& rb = trace[b];
                const double tol =
                    1e-7 * std::max({1.0, std::fabs(optimal_value), std::fabs(rb.theta),
                                     std::fabs(fa)});
                if (optimal_value < fa - tol)
                    violate(ra.k, rb.k, "0 <= optimal - f(x^k)", fa - optimal_value);
                if (rb.theta < optimal_value - tol)
                    violate(ra.k, rb.k, "optimal - f(x^k) <= theta^l - f(x^k)",
                            optimal_value - rb.theta);
                const double gain = dot(ga, diff_to_doubles(rb.x, ra.x));
                if (rb.theta - fa > gain + tol)
                    violate(ra.k, rb.k, "theta^l - f(x^k) <= <grad f(x^k), x^l - x^k>",
                            rb.theta - fa - gain);
            }
        } else if (!lg.empty()) {
            const Classification cls = classify_point(p, ra.x);
            for (std::size_t b = a + 1; b < trace.size(); ++b) {
                const TraceRecord& rb = trace[b];
                const double sq = sq_distance(ra.x, rb.x);
                for (int j : cls.active_set) {
                    const double gj = eval(p.constraints[j], rb.x);
                    const double bound = 0.5 * lg[j] * sq;
                    const double tol = 1e-7 * std::max(1.0, std::fabs(bound));
                    if (gj > bound + tol)
                        violate(ra.k, rb.k,
                                "g_" + std::to_string(j + 1) +
                                    "(x^l) <= L/2 |x^k - x^l|^2",
                                gj - bound);
                }
            }
        } else if (p.num_constraints() > 0) {
            rep.descent_check_skipped = true;
        }
    }
    return rep;
}

} // namespace cutplane
