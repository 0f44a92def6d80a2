#include <doctest.h>

#include "cutplane/errors.hpp"
#include "cutplane/model.hpp"
#include "generators.hpp"

using namespace cutplane;

TEST_CASE("validate_problem: worked example, dimension mismatch, empty region") {
    CHECK(validate_problem(testgen::example1_problem()).ok());

    Problem bad = testgen::example1_problem();
    bad.polyhedron.a = Matrix(2, 3); // wrong column count
    bad.polyhedron.b = {5.0, 5.0};
    const ValidationReport rep = validate_problem(bad);
    CHECK_FALSE(rep.ok());
    CHECK(rep.issues[0].find("columns") != std::string::npos);

    Problem empty;
    empty.n = 2;
    empty.objective = NonlinearFunction::quadratic(Matrix(2, 2), {1.0, 1.0}, 0.0);
    empty.polyhedron.a = Matrix(1, 2);
    empty.polyhedron.a(0, 0) = 1.0; // x1 <= -1 has no binary solution
    empty.polyhedron.b = {-1.0};
    const ValidationReport rep2 = validate_problem(empty);
    CHECK_FALSE(rep2.ok());
    CHECK(rep2.issues[0].find("empty feasible region") != std::string::npos);
}

TEST_CASE("classify_point on the worked example and edge cases") {
    const Problem p = testgen::example1_problem();
    // 2*0+1+2+2 = 5 <= 5 and 0+2+1+2 = 5 <= 5, no nonlinear constraints
    const Classification c = classify_point(p, from_bitstring("0111"));
    CHECK(c.status == FeasStatus::FeasibleC);
    CHECK_FALSE(c.linear_violation);
    CHECK(c.active_set.empty());
    CHECK(c.max_violation == 0.0);

    // g1(x) = x1 - 0.5 violated by 0.5 at x = (1,0)
    Problem q;
    q.n = 2;
    q.objective = NonlinearFunction::quadratic(Matrix(2, 2), {1.0, 1.0}, 0.0);
    q.polyhedron.a = Matrix(0, 2);
    q.constraints.push_back(parse_expression("x1 - 0.5", 2));
    const Classification c2 = classify_point(q, from_bitstring("10"));
    CHECK(c2.status == FeasStatus::InfeasibleCbar);
    CHECK(c2.max_violation == 0.5);
    CHECK(c2.active_set == std::vector<int>{0});
    CHECK_FALSE(c2.linear_violation);

    // linear violation is flagged separately
    const Classification c3 = classify_point(p, from_bitstring("1111"));
    CHECK(c3.status == FeasStatus::InfeasibleCbar);
    CHECK(c3.linear_violation);
}

TEST_CASE("classify_point is pure and deterministic") {
    const Problem p = testgen::example1_problem();
    const BinaryVector x = from_bitstring("1110");
    const Classification a = classify_point(p, x);
    const Classification b = classify_point(p, x);
    CHECK(a.status == b.status);
    CHECK(a.max_violation == b.max_violation);
    CHECK(a.active_set == b.active_set);
}

TEST_CASE("active set is never empty when constraints exist") {
    SplitMix64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + static_cast<int>(rng.uniform(0, 4));
        const Problem p = testgen::concave_convex_instance(n, rng);
        const BinaryVector x = testgen::random_binary(n, rng);
        CHECK_FALSE(classify_point(p, x).active_set.empty());
    }
}

TEST_CASE("enumerate_binary_points: order, worked example count, guard") {
    LinearPolyhedron poly;
    poly.a = Matrix(1, 2);
    poly.a(0, 0) = poly.a(0, 1) = 1.0;
    poly.b = {1.0};
    const std::vector<BinaryVector> pts = enumerate_binary_points(poly);
    REQUIRE(pts.size() == 3);
    CHECK(to_bitstring(pts[0]) == "00");
    CHECK(to_bitstring(pts[1]) == "01");
    CHECK(to_bitstring(pts[2]) == "10");

    CHECK(enumerate_binary_points(testgen::example1_problem().polyhedron).size() == 13);

    LinearPolyhedron big;
    big.a = Matrix(0, 30);
    big.b = {};
    CHECK_THROWS_AS(enumerate_binary_points(big), DimensionTooLarge);
}

TEST_CASE("enumeration output is closed under exact row checks") {
    SplitMix64 rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + static_cast<int>(rng.uniform(0, 6));
        const BinaryVector anchor = testgen::random_binary(n, rng);
        const LinearPolyhedron poly = testgen::random_polyhedron(n, 2, anchor, rng);
        for (const BinaryVector& x : enumerate_binary_points(poly)) {
            // integral rows: recompute with exact integer sums
            for (int i = 0; i < poly.rows(); ++i) {
                long lhs = 0;
                for (int j = 0; j < n; ++j)
                    if (x[j]) lhs += static_cast<long>(poly.a(i, j));
                CHECK(lhs <= static_cast<long>(poly.b[i]));
            }
        }
    }
}
