#include <doctest.h>

#include <cmath>

#include "cutplane/analysis.hpp"
#include "cutplane/engine.hpp"
#include "cutplane/errors.hpp"
#include "cutplane/qkp.hpp"
#include "generators.hpp"

using namespace cutplane;

TEST_CASE("instance generation is deterministic and well-formed") {
    const QkpInstance a = generate_instance(8, 42);
    const QkpInstance b = generate_instance(8, 42);
    CHECK(a.q_matrix == b.q_matrix);
    CHECK(a.q_linear == b.q_linear);
    CHECK(a.capacity == b.capacity);
    CHECK(a.points == b.points);

    const QkpInstance c = generate_instance(8, 43);
    CHECK(a.q_matrix.data() != c.q_matrix.data());

    CHECK(a.capacity >= 2);
    CHECK(a.capacity <= 8);
    for (int i = 0; i < a.n; ++i) {
        CHECK(a.q_matrix(i, i) == 0.0);
        CHECK(a.q_linear[i] >= 1.0);
        CHECK(a.q_linear[i] <= 10000.0);
        for (int j = 0; j < a.n; ++j)
            if (i != j) CHECK(a.q_matrix(i, j) > 0.0);
    }
    CHECK_THROWS_AS(generate_instance(1, 1), Error);
}

TEST_CASE("squared-distance matrix from collinear points") {
    // points (0), (3), (4) on the line give Q = [[0,9,16],[9,0,1],[16,1,0]]
    Matrix pts(3, 1);
    pts(0, 0) = 0.0;
    pts(1, 0) = 3.0;
    pts(2, 0) = 4.0;
    Matrix q(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            const double d = pts(i, 0) - pts(j, 0);
            q(i, j) = d * d;
        }
    CHECK(q(0, 1) == 9.0);
    CHECK(q(0, 2) == 16.0);
    CHECK(q(1, 2) == 1.0);
    CHECK(cnd_check(q));
}

TEST_CASE("cnd check: exact small cases and generated instances") {
    Matrix pm(2, 2);
    pm(0, 1) = pm(1, 0) = 1.0;
    CHECK(cnd_check(pm)); // eigenvalues +-1: exactly one positive

    CHECK_FALSE(cnd_check(Matrix::identity(3))); // three positive eigenvalues

    for (std::uint64_t seed = 1; seed <= 20; ++seed)
        CHECK(cnd_check(generate_instance(6 + static_cast<int>(seed % 5), seed).q_matrix));

    Matrix asym(2, 2);
    asym(0, 1) = 1.0;
    CHECK_THROWS_AS(cnd_check(asym), Error);
}

TEST_CASE("problem forms: capacity row(s), equal optima, optimum on the slice") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const int n = 6 + static_cast<int>(seed % 7); // up to 12
        const QkpInstance inst = generate_instance(n, seed);
        const Problem ineq = qkp_to_problem(inst, QkpForm::Inequality);
        const Problem eq = qkp_to_problem(inst, QkpForm::Equality);
        CHECK(ineq.polyhedron.rows() == 1);
        CHECK(eq.polyhedron.rows() == 2);

        // the equality form's feasible set is exactly the capacity slice
        for (const BinaryVector& x : enumerate_binary_points(eq.polyhedron)) {
            int ones = 0;
            for (auto b : x) ones += b;
            CHECK(ones == inst.capacity);
        }

        const BruteForceResult bi = brute_force_solve(ineq);
        const BruteForceResult be = brute_force_solve(eq);
        CHECK(bi.value == be.value);

        // positive profits force the inequality optimum onto the slice
        int ones = 0;
        for (auto b : bi.x) ones += b;
        CHECK(ones == inst.capacity);
    }
}

TEST_CASE("greedy start picks the largest profits with index ties") {
    QkpInstance inst;
    inst.n = 3;
    inst.capacity = 2;
    inst.q_linear = {5.0, 1.0, 9.0};
    CHECK(to_bitstring(greedy_start(inst)) == "101");

    inst.q_linear = {3.0, 3.0, 3.0};
    CHECK(to_bitstring(greedy_start(inst)) == "110"); // first m indices on ties

    const QkpInstance gen = generate_instance(9, 7);
    const Problem eq = qkp_to_problem(gen, QkpForm::Equality);
    CHECK(classify_point(eq, greedy_start(gen)).status == FeasStatus::FeasibleC);
}

TEST_CASE("optimality gap formula") {
    CHECK(optimality_gap(7.0, 7.0) == 0.0);
    CHECK(optimality_gap(200.0, 150.0) == 25.0);
    CHECK_THROWS_AS(optimality_gap(0.0, -1.0), Error);
    CHECK_THROWS_AS(optimality_gap(1.0, 2.0), Error);
}

TEST_CASE("condition-1 dichotomy between the two forms") {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        const int n = 6 + static_cast<int>(seed); // 7..12
        const QkpInstance inst = generate_instance(n, seed);
        REQUIRE(cnd_check(inst.q_matrix));

        // zero vector is feasible for the inequality form, so the tangent at it
        // caps theta at q.x below the true optimum
        const ConditionReport ineq = check_condition1(qkp_to_problem(inst, QkpForm::Inequality));
        CHECK_FALSE(ineq.holds);

        const ConditionReport eq = check_condition1(qkp_to_problem(inst, QkpForm::Equality));
        CHECK(eq.holds);
    }
}

TEST_CASE("iterate confinement to the capacity slice from a greedy start") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const int n = 8 + static_cast<int>(seed % 9); // up to 16
        const QkpInstance inst = generate_instance(n, seed);
        const Problem ineq = qkp_to_problem(inst, QkpForm::Inequality);

        const SolveResult res = solve_algorithm1(ineq, greedy_start(inst), SolveOptions{});
        REQUIRE(res.status == SolveStatus::OptimalGapClosed);
        for (const TraceRecord& r : res.state.trace) {
            int ones = 0;
            for (auto b : r.x) ones += b;
            CHECK(ones == inst.capacity);
        }
        if (n <= 14) CHECK(res.best_value == brute_force_solve(ineq).value);
    }
}

TEST_CASE("tangent gap on the slice equals the conditionally-negative form") {
    for (std::uint64_t seed = 3; seed <= 5; ++seed) {
        const int n = 10;
        const QkpInstance inst = generate_instance(n, seed);
        const Problem eq = qkp_to_problem(inst, QkpForm::Equality);
        const std::vector<BinaryVector> slice = enumerate_binary_points(eq.polyhedron);

        SplitMix64 pick(seed);
        for (int rep = 0; rep < 30; ++rep) {
            const BinaryVector& x =
                slice[static_cast<std::size_t>(pick.uniform(0, static_cast<std::int64_t>(slice.size()) - 1))];
            const BinaryVector& y =
                slice[static_cast<std::size_t>(pick.uniform(0, static_cast<std::int64_t>(slice.size()) - 1))];
            const Cut cut = optimality_cut(eq.objective, y);
            const double hf = evaluate_cut(cut, x, 0.0);
            const double fx = eval(eq.objective, x);
            // h_f(x,y) - f(x) = -(x-y)^T Q (x-y) / 2 >= 0 on the slice
            std::vector<double> d(n);
            for (int i = 0; i < n; ++i)
                d[i] = static_cast<double>(x[i]) - static_cast<double>(y[i]);
            double quad = 0.0;
            for (int i = 0; i < n; ++i) quad += d[i] * dot(eq.objective.quad().row(i), d);
            CHECK(hf - fx == doctest::Approx(-0.5 * quad).epsilon(1e-12));
            CHECK(hf - fx >= -1e-9);
        }
    }
}

TEST_CASE("qkp serialization round-trips exactly") {
    const QkpInstance inst = generate_instance(10, 7);
    const QkpInstance back = parse_qkp(serialize_qkp(inst));
    CHECK(back.n == inst.n);
    CHECK(back.capacity == inst.capacity);
    CHECK(back.seed == inst.seed);
    CHECK(back.q_matrix == inst.q_matrix);
    CHECK(back.q_linear == inst.q_linear);
    CHECK(back.points == inst.points);

    CHECK_THROWS_AS(parse_qkp("not a qkp file"), Error);
}
