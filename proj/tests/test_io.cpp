#include <doctest.h>

#include "cutplane/errors.hpp"
#include "cutplane/instance_io.hpp"
#include "generators.hpp"

using namespace cutplane;

namespace {

const char* kExample1File = R"(# worked four-variable example
DIM 4
OBJECTIVE EXPR 2*x1*x2*x3 + x1*x3 + 2*x2 + 3*x3 + 4*x4
LINEAR 2 1 2 2 <= 5
LINEAR 2 2 1 2 <= 5
START 1110
)";

bool same_function(const NonlinearFunction& a, const NonlinearFunction& b) {
    if (a.kind() != b.kind() || a.dimension() != b.dimension()) return false;
    if (a.kind() == FunctionKind::Quadratic)
        return a.quad() == b.quad() && a.linear() == b.linear() && a.constant() == b.constant();
    return to_string(a) == to_string(b);
}

bool same_problem(const Problem& a, const Problem& b) {
    if (a.n != b.n || a.num_constraints() != b.num_constraints()) return false;
    if (!(a.polyhedron.a == b.polyhedron.a) || a.polyhedron.b != b.polyhedron.b) return false;
    if (!same_function(a.objective, b.objective)) return false;
    for (int j = 0; j < a.num_constraints(); ++j)
        if (!same_function(a.constraints[j], b.constraints[j])) return false;
    return true;
}

} // namespace

TEST_CASE("instance files parse into the expected problem") {
    const InstanceFile inst = parse_instance(kExample1File);
    CHECK(inst.problem.n == 4);
    CHECK(inst.problem.polyhedron.rows() == 2);
    CHECK(inst.problem.num_constraints() == 0);
    REQUIRE(inst.start.has_value());
    CHECK(to_bitstring(*inst.start) == "1110");
    CHECK(eval(inst.problem.objective, from_bitstring("0111")) == 9.0);
}

TEST_CASE("quadratic blocks, constraints and lipschitz sections") {
    const char* text = R"(DIM 2
OBJECTIVE QUADRATIC
Q 0 1
Q 1 0
q 0.5 -1
c 2
CONSTRAINT EXPR x1^2 + x2^2 - 1.5
CONSTRAINT QUADRATIC
Q 2 0
Q 0 2
q -1 -1
c 0
LINEAR 1 1 <= 2
LIPSCHITZ F 4.5
LIPSCHITZ G 1 3
LIPSCHITZ G 2 2
)";
    const InstanceFile inst = parse_instance(text);
    CHECK(inst.problem.num_constraints() == 2);
    CHECK(inst.problem.objective.kind() == FunctionKind::Quadratic);
    CHECK(inst.problem.objective.quad()(0, 1) == 1.0);
    CHECK(inst.problem.objective.constant() == 2.0);
    CHECK(inst.problem.constraints[1].quad()(0, 0) == 2.0);
    REQUIRE(inst.lipschitz_f.has_value());
    CHECK(*inst.lipschitz_f == 4.5);
    REQUIRE(inst.lipschitz_g.size() == 2);
    CHECK(inst.lipschitz_g[0] == std::pair<int, double>{0, 3.0});
    CHECK(inst.lipschitz_g[1] == std::pair<int, double>{1, 2.0});
}

TEST_CASE("parse errors: unknown sections, bad dimensions, missing parts") {
    CHECK_THROWS_AS(parse_instance("DIM 2\nOBJECTIVE EXPR x1\nNONSENSE 1\n"), Error);
    CHECK_THROWS_AS(parse_instance("OBJECTIVE EXPR x1\n"), Error); // DIM must come first
    CHECK_THROWS_AS(parse_instance("DIM 2\n"), Error);             // no objective
    CHECK_THROWS_AS(parse_instance("DIM 2\nOBJECTIVE EXPR x3\n"), Error);
    CHECK_THROWS_AS(parse_instance("DIM 2\nOBJECTIVE EXPR x1\nLINEAR 1 1 2\n"), Error);
    CHECK_THROWS_AS(parse_instance("DIM 2\nOBJECTIVE EXPR x1\nSTART 101\n"), Error);
    CHECK_THROWS_AS(parse_instance("DIM 2\nOBJECTIVE QUADRATIC\nQ 0 1\n"), Error);
}

TEST_CASE("round trip: parse, serialize, parse yields the identical problem") {
    SplitMix64 rng(515);
    // expression objective file
    const InstanceFile a = parse_instance(kExample1File);
    const InstanceFile a2 = parse_instance(serialize_instance(a));
    CHECK(same_problem(a.problem, a2.problem));
    CHECK(a2.start == a.start);

    // quadratic objective with constraints, generated randomly
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 3 + static_cast<int>(rng.uniform(0, 4));
        InstanceFile inst;
        inst.problem = testgen::concave_convex_instance(n, rng);
        inst.start = testgen::random_binary(n, rng);
        inst.lipschitz_f = 3.25;
        inst.lipschitz_g.emplace_back(0, 1.5);
        const InstanceFile back = parse_instance(serialize_instance(inst));
        CHECK(same_problem(inst.problem, back.problem));
        CHECK(back.start == inst.start);
        CHECK(back.lipschitz_f == inst.lipschitz_f);
        CHECK(back.lipschitz_g == inst.lipschitz_g);
    }
}
