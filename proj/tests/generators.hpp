#pragma once

// Random instance families shared by the unit and acceptance suites. All
// coefficients are integers or dyadic rationals so double arithmetic on them
// is exact and runs reproduce bit-for-bit.

#include <optional>
#include <vector>

#include "cutplane/analysis.hpp"
#include "cutplane/master.hpp"
#include "cutplane/model.hpp"
#include "cutplane/qkp.hpp"

namespace testgen {

using namespace cutplane;

inline BinaryVector random_binary(int n, SplitMix64& rng) {
    BinaryVector x(n);
    for (int i = 0; i < n; ++i) x[i] = static_cast<std::uint8_t>(rng.uniform(0, 1));
    return x;
}

/// Q = -B^T B with small integer B: negative semidefinite, integer entries.
inline Matrix random_negative_semidefinite(int n, SplitMix64& rng) {
    Matrix b(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) b(i, j) = static_cast<double>(rng.uniform(-2, 2));
    Matrix q(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) s += b(k, i) * b(k, j);
            q(i, j) = -s;
        }
    return q;
}

inline NonlinearFunction random_concave_quadratic(int n, SplitMix64& rng) {
    Matrix q = random_negative_semidefinite(n, rng);
    std::vector<double> lin(n);
    for (int i = 0; i < n; ++i) lin[i] = static_cast<double>(rng.uniform(-5, 5));
    return NonlinearFunction::quadratic(std::move(q), std::move(lin), 0.0);
}

/// Rows anchored at a given binary point so K cap {0,1}^n is nonempty.
inline LinearPolyhedron random_polyhedron(int n, int rows, const BinaryVector& anchor,
                                          SplitMix64& rng) {
    LinearPolyhedron poly;
    poly.a = Matrix(rows, n);
    poly.b.assign(rows, 0.0);
    for (int i = 0; i < rows; ++i) {
        double at_anchor = 0.0;
        for (int j = 0; j < n; ++j) {
            poly.a(i, j) = static_cast<double>(rng.uniform(-3, 3));
            if (anchor[j]) at_anchor += poly.a(i, j);
        }
        poly.b[i] = at_anchor + static_cast<double>(rng.uniform(0, 3));
    }
    return poly;
}

/// Concave quadratic objective, linear constraints only. The anchor is a
/// guaranteed feasible starting point. Condition 1 holds (concave objective).
inline Problem concave_linear_instance(int n, SplitMix64& rng, BinaryVector* start = nullptr) {
    const BinaryVector anchor = random_binary(n, rng);
    Problem p;
    p.n = n;
    p.objective = random_concave_quadratic(n, rng);
    p.polyhedron = random_polyhedron(n, 1 + static_cast<int>(rng.uniform(0, 2)), anchor, rng);
    if (start) *start = anchor;
    return p;
}

/// Convex quadratic g with g(anchor) = -slack < 0.
inline NonlinearFunction random_convex_constraint(int n, const BinaryVector& anchor,
                                                  SplitMix64& rng) {
    Matrix q = random_negative_semidefinite(n, rng);
    for (double& v : q.data()) v = -v; // positive semidefinite
    std::vector<double> lin(n);
    for (int i = 0; i < n; ++i) lin[i] = static_cast<double>(rng.uniform(-4, 4));
    NonlinearFunction raw = NonlinearFunction::quadratic(q, lin, 0.0);
    const double at_anchor = eval(raw, anchor);
    const double slack = static_cast<double>(rng.uniform(1, 5));
    return NonlinearFunction::quadratic(std::move(q), std::move(lin), -at_anchor - slack);
}

/// Concave objective plus one or two convex quadratic constraints; the anchor
/// is feasible. Condition 1 holds (concave objective, convex constraints).
inline Problem concave_convex_instance(int n, SplitMix64& rng, BinaryVector* start = nullptr) {
    const BinaryVector anchor = random_binary(n, rng);
    Problem p;
    p.n = n;
    p.objective = random_concave_quadratic(n, rng);
    p.polyhedron = random_polyhedron(n, 1, anchor, rng);
    const int m = 1 + static_cast<int>(rng.uniform(0, 1));
    for (int j = 0; j < m; ++j)
        p.constraints.push_back(random_convex_constraint(n, anchor, rng));
    if (start) *start = anchor;
    return p;
}

/// Linear objective (concave, -f pseudoconvex) with one convex quadratic ball
/// constraint placed around the objective's own maximizer over K, so the
/// constrained optimum coincides with the K-wide maximizer of c.x and the
/// zero-multiplier KKT certificate provably passes there. Cbar is nonempty,
/// so the shifted-cut epsilon bound is finite and positive.
inline std::optional<Problem> pseudoconvex_instance(int n, SplitMix64& rng,
                                                    BinaryVector* start = nullptr) {
    const BinaryVector anchor = random_binary(n, rng);
    Problem base;
    base.n = n;
    std::vector<double> c(n);
    for (int i = 0; i < n; ++i) c[i] = static_cast<double>(rng.uniform(1, 10));
    base.objective = NonlinearFunction::quadratic(Matrix(n, n), c, 0.0);
    base.polyhedron = random_polyhedron(n, 1, anchor, rng);

    const BinaryVector target = brute_force_solve(base).x;

    // g(x) = |x - target|^2 - 1.5 <= 0 keeps target and its K-neighbors
    Matrix q = Matrix(n, n);
    std::vector<double> lin(n);
    double t_norm = 0.0;
    for (int i = 0; i < n; ++i) {
        q(i, i) = 2.0;
        lin[i] = -2.0 * static_cast<double>(target[i]);
        t_norm += target[i];
    }
    Problem p = base;
    p.constraints.push_back(
        NonlinearFunction::quadratic(std::move(q), std::move(lin), t_norm - 1.5));

    std::vector<BinaryVector> c_set, cbar_set;
    enumerate_classified(p, c_set, cbar_set);
    if (cbar_set.empty() || c_set.empty()) return std::nullopt; // degenerate draw
    if (start) {
        *start = c_set.front();
        for (const BinaryVector& x : c_set)
            if (x != target) {
                *start = x;
                break;
            }
    }
    return p;
}

/// Convex quadratic objective (hence quasiconvex), linear constraints only.
inline Problem quasiconvex_linear_instance(int n, SplitMix64& rng) {
    const BinaryVector anchor = random_binary(n, rng);
    Matrix q = random_negative_semidefinite(n, rng);
    for (double& v : q.data()) v = -v;
    std::vector<double> lin(n);
    for (int i = 0; i < n; ++i) lin[i] = static_cast<double>(rng.uniform(-5, 5));
    Problem p;
    p.n = n;
    p.objective = NonlinearFunction::quadratic(std::move(q), std::move(lin), 0.0);
    p.polyhedron = random_polyhedron(n, 1 + static_cast<int>(rng.uniform(0, 1)), anchor, rng);
    return p;
}

/// The worked four-variable example: 2 x1 x2 x3 + x1 x3 + 2 x2 + 3 x3 + 4 x4
/// over 2x1 + x2 + 2x3 + 2x4 <= 5 and 2x1 + 2x2 + x3 + 2x4 <= 5.
inline Problem example1_problem() {
    Problem p;
    p.n = 4;
    p.objective = parse_expression("2*x1*x2*x3 + x1*x3 + 2*x2 + 3*x3 + 4*x4", 4);
    p.polyhedron.a = Matrix(2, 4);
    const double rows[2][4] = {{2, 1, 2, 2}, {2, 2, 1, 2}};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 4; ++j) p.polyhedron.a(i, j) = rows[i][j];
    p.polyhedron.b = {5.0, 5.0};
    return p;
}

/// random master model with integer data in [-10, 10]
inline MasterModel random_master(int n, SplitMix64& rng) {
    const BinaryVector anchor = random_binary(n, rng);
    LinearPolyhedron poly;
    const int rows = 1 + static_cast<int>(rng.uniform(0, 2));
    poly.a = Matrix(rows, n);
    poly.b.assign(rows, 0.0);
    for (int i = 0; i < rows; ++i) {
        double at = 0.0;
        for (int j = 0; j < n; ++j) {
            poly.a(i, j) = static_cast<double>(rng.uniform(-10, 10));
            if (anchor[j]) at += poly.a(i, j);
        }
        // anchor kept feasible most of the time; sometimes deliberately not
        poly.b[i] = rng.uniform(0, 9) == 0 ? static_cast<double>(rng.uniform(-10, 10))
                                           : at + static_cast<double>(rng.uniform(0, 4));
    }

    const bool linear_mode = rng.uniform(0, 3) == 0;
    std::vector<Cut> opt_cuts, feas_cuts;
    std::vector<double> c;
    if (linear_mode) {
        c.resize(n);
        for (int j = 0; j < n; ++j) c[j] = static_cast<double>(rng.uniform(-10, 10));
    } else {
        const int n_opt = 1 + static_cast<int>(rng.uniform(0, 5));
        for (int k = 0; k < n_opt; ++k) {
            Cut cut;
            cut.family = CutFamily::OptTangent;
            cut.a.resize(n);
            for (int j = 0; j < n; ++j) cut.a[j] = static_cast<double>(rng.uniform(-10, 10));
            cut.rhs = static_cast<double>(rng.uniform(-10, 10));
            opt_cuts.push_back(std::move(cut));
        }
    }
    const int n_feas = static_cast<int>(rng.uniform(0, 3));
    for (int k = 0; k < n_feas; ++k) {
        Cut cut;
        cut.family = CutFamily::FeasTangent;
        cut.a.resize(n);
        for (int j = 0; j < n; ++j) cut.a[j] = static_cast<double>(rng.uniform(-6, 6));
        cut.rhs = -static_cast<double>(rng.uniform(0, 8));
        feas_cuts.push_back(std::move(cut));
    }
    std::map<int, int> fixings;
    if (rng.uniform(0, 3) == 0) fixings[static_cast<int>(rng.uniform(0, n - 1))] =
        static_cast<int>(rng.uniform(0, 1));

    return build_master(std::move(poly), std::move(opt_cuts), std::move(feas_cuts),
                        std::move(fixings), linear_mode ? ObjectiveMode::Linear : ObjectiveMode::Theta,
                        std::move(c));
}

} // namespace testgen
