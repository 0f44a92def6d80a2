#include <doctest.h>

#include <cmath>

#include "cutplane/analysis.hpp"
#include "cutplane/convexify.hpp"
#include "cutplane/engine.hpp"
#include "cutplane/errors.hpp"
#include "generators.hpp"

using namespace cutplane;

TEST_CASE("penalty transform reproduces the worked-example gradient") {
    Problem p = testgen::example1_problem();
    PenaltyConfig cfg;
    cfg.mu = 2.5;

    const Problem t = penalty_transform(p, cfg);
    const std::vector<double> g0 = gradient(t.objective, from_bitstring("1110"));
    CHECK(g0 == std::vector<double>{0.5, 1.5, 3.5, 4.0});
    const std::vector<double> g1 = gradient(t.objective, from_bitstring("0111"));
    CHECK(g1 == std::vector<double>{5.5, -0.5, 0.5, 4.0});
    CHECK(eval(t.objective, from_bitstring("1110")) == 8.0);
    CHECK(eval(t.objective, from_bitstring("0111")) == 9.0);
}

TEST_CASE("zero penalties are the identity transform") {
    SplitMix64 rng(3);
    const Problem p = testgen::concave_convex_instance(5, rng);
    PenaltyConfig cfg;
    cfg.lambdas.assign(p.num_constraints(), 0.0);
    const Problem t = penalty_transform(p, cfg);
    for (int trial = 0; trial < 20; ++trial) {
        const BinaryVector x = testgen::random_binary(5, rng);
        CHECK(eval(t.objective, x) == eval(p.objective, x));
        CHECK(gradient(t.objective, x) == gradient(p.objective, x));
        for (int j = 0; j < p.num_constraints(); ++j)
            CHECK(eval(t.constraints[j], x) == eval(p.constraints[j], x));
    }
}

TEST_CASE("row-sum penalty makes the quadratic objective concave") {
    SplitMix64 rng(9);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 3 + static_cast<int>(rng.uniform(0, 5));
        Matrix q(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) q(i, j) = q(j, i) = static_cast<double>(rng.uniform(-5, 5));
        Problem p;
        p.n = n;
        p.objective = NonlinearFunction::quadratic(q, std::vector<double>(n, 1.0), 0.0);
        p.polyhedron.a = Matrix(0, n);

        const PenaltyConfig cfg = auto_penalties(p);
        CHECK(cfg.mu == 0.5 * hessian_row_sum_bound(p.objective));
        const Problem t = penalty_transform(p, cfg);

        double lmax = -1e300;
        for (double e : jacobi_eigenvalues(t.objective.quad())) lmax = std::max(lmax, e);
        CHECK(lmax <= 1e-9);
    }
}

TEST_CASE("auto penalties: worked example, linear objective, collinear-points QKP") {
    CHECK(auto_penalties(testgen::example1_problem()).mu == 2.5);

    Problem lin;
    lin.n = 3;
    lin.objective = NonlinearFunction::quadratic(Matrix(3, 3), {1.0, 2.0, 3.0}, 0.0);
    lin.polyhedron.a = Matrix(0, 3);
    CHECK(auto_penalties(lin).mu == 0.0);

    // points (0), (3), (4) on the line: Q = [[0,9,16],[9,0,1],[16,1,0]]
    Matrix q(3, 3);
    q(0, 1) = q(1, 0) = 9.0;
    q(0, 2) = q(2, 0) = 16.0;
    q(1, 2) = q(2, 1) = 1.0;
    Problem qkp;
    qkp.n = 3;
    qkp.objective = NonlinearFunction::quadratic(q, {1.0, 1.0, 1.0}, 0.0);
    qkp.polyhedron.a = Matrix(0, 3);
    CHECK(auto_penalties(qkp).mu == 12.5); // max row sum 25

    Problem sine;
    sine.n = 1;
    sine.objective = parse_expression("sin(x1)", 1);
    sine.polyhedron.a = Matrix(0, 1);
    CHECK_THROWS_AS(auto_penalties(sine), Error);
}

TEST_CASE("values on binary points are preserved by the transform") {
    SplitMix64 rng(13);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 3 + static_cast<int>(rng.uniform(0, 5));
        Problem p = testgen::concave_convex_instance(n, rng);
        // perturb the objective so it is genuinely indefinite
        Matrix q = p.objective.quad();
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                const double v = static_cast<double>(rng.uniform(-3, 3));
                q(i, j) = q(j, i) = q(i, j) + v;
            }
        p.objective = NonlinearFunction::quadratic(q, p.objective.linear(), 0.0);

        const Problem t = penalty_transform(p, auto_penalties(p));
        for (int rep = 0; rep < 10; ++rep) {
            const BinaryVector x = testgen::random_binary(n, rng);
            CHECK(std::fabs(eval(t.objective, x) - eval(p.objective, x)) <= 1e-10);
            for (int j = 0; j < p.num_constraints(); ++j)
                CHECK(std::fabs(eval(t.constraints[j], x) - eval(p.constraints[j], x)) <= 1e-10);
        }
    }
}

TEST_CASE("expression penalties only touch variables in the Hessian") {
    Problem p;
    p.n = 3;
    p.objective = parse_expression("x1*x2 + 5*x3", 3);
    p.polyhedron.a = Matrix(0, 3);
    PenaltyConfig cfg;
    cfg.mu = 2.0;
    const Problem t = penalty_transform(p, cfg);
    // x3 stays linear after the transform: its gradient entry is constant
    const std::vector<double> ga = gradient(t.objective, std::vector<double>{0.0, 0.0, 0.0});
    const std::vector<double> gb = gradient(t.objective, std::vector<double>{0.0, 0.0, 1.0});
    CHECK(ga[2] == 5.0);
    CHECK(gb[2] == 5.0);
    // but x1 got the penalty: gradient changes between x1 = 0 and 1
    const std::vector<double> gc = gradient(t.objective, std::vector<double>{1.0, 0.0, 0.0});
    CHECK(ga[0] != gc[0]);
}

TEST_CASE("tangent domination holds after the transform") {
    SplitMix64 rng(29);
    for (int trial = 0; trial < 5; ++trial) {
        const int n = 8;
        Matrix q(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) q(i, j) = q(j, i) = static_cast<double>(rng.uniform(-4, 4));
        Problem p;
        p.n = n;
        p.objective = NonlinearFunction::quadratic(q, std::vector<double>(n, 1.0), 0.0);
        p.polyhedron.a = Matrix(0, n);
        const Problem t = penalty_transform(p, auto_penalties(p));
        CHECK(check_tangent_domination(t).holds);
    }
}

TEST_CASE("algorithm 1 on the transformed problem matches brute force") {
    SplitMix64 rng(71);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 4 + static_cast<int>(rng.uniform(0, 8));
        BinaryVector start;
        Problem p = testgen::concave_linear_instance(n, rng, &start);
        // make it mildly indefinite, then convexify; a heavy perturbation would
        // only inflate mu and with it the iteration count, not the coverage
        Matrix q = p.objective.quad();
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                const double v = static_cast<double>(rng.uniform(0, 2));
                q(i, j) = q(j, i) = q(i, j) + v;
            }
        p.objective = NonlinearFunction::quadratic(q, p.objective.linear(), 0.0);

        const Problem t = penalty_transform(p, auto_penalties(p));
        const SolveResult res = solve_algorithm1(t, start, SolveOptions{});
        REQUIRE(res.status == SolveStatus::OptimalGapClosed);
        CHECK(res.best_value == doctest::Approx(brute_force_solve(p).value).epsilon(1e-9));
    }
}

TEST_CASE("lipschitz linearization factory guards and tight linear case") {
    Problem p;
    p.n = 2;
    p.objective = NonlinearFunction::quadratic(Matrix(2, 2), {3.0, 1.0}, 0.0);
    p.polyhedron.a = Matrix(0, 2);
    CHECK_THROWS_AS(lipschitz_linearization(p, 0.0, {}), Error);

    const LipschitzCutFactory fac = lipschitz_linearization(p, 1.0, {});
    const Cut c = fac.optimality(p.objective, from_bitstring("00"));
    CHECK(c.family == CutFamily::OptLipschitz);
    // the cut is exact at its own source point
    CHECK(evaluate_cut(c, from_bitstring("00"), eval(p.objective, from_bitstring("00"))) == 0.0);
}
