#include <doctest.h>

#include <cmath>

#include "cutplane/simplex.hpp"

using namespace cutplane;

namespace {

Matrix make_matrix(int rows, int cols, std::initializer_list<double> vals) {
    Matrix m(rows, cols);
    int k = 0;
    for (double v : vals) m.data()[k++] = v;
    return m;
}

} // namespace

TEST_CASE("simplex solves a textbook LP") {
    // max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18
    const Matrix a = make_matrix(3, 2, {1, 0, 0, 2, 3, 2});
    const LpResult r = simplex_maximize(a, {4, 12, 18}, {3, 5});
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(r.value == doctest::Approx(36.0));
    CHECK(r.x[0] == doctest::Approx(2.0));
    CHECK(r.x[1] == doctest::Approx(6.0));
}

TEST_CASE("simplex phase 1 handles negative right-hand sides") {
    // max -x - y s.t. -x - y <= -2, x <= 3, y <= 3 (i.e. x + y >= 2)
    const Matrix a = make_matrix(3, 2, {-1, -1, 1, 0, 0, 1});
    const LpResult r = simplex_maximize(a, {-2, 3, 3}, {-1, -1});
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(r.value == doctest::Approx(-2.0));
}

TEST_CASE("simplex reports infeasible and unbounded problems") {
    // x <= 1 and -x <= -2 (x >= 2): infeasible
    const Matrix a = make_matrix(2, 1, {1, -1});
    CHECK(simplex_maximize(a, {1, -2}, {1}).status == LpStatus::Infeasible);

    // max x with no constraints binding from above
    const Matrix b = make_matrix(1, 1, {-1});
    CHECK(simplex_maximize(b, {0}, {1}).status == LpStatus::Unbounded);
}

TEST_CASE("simplex with Bland's rule finishes on the classic cycling example") {
    // Beale's cycling example for steepest-descent pivoting; Bland must terminate
    const Matrix a = make_matrix(3, 4,
                                 {0.25, -8.0, -1.0, 9.0,
                                  0.5, -12.0, -0.5, 3.0,
                                  0.0, 0.0, 1.0, 0.0});
    const LpResult r = simplex_maximize(a, {0, 0, 1}, {0.75, -20.0, 0.5, -6.0});
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(r.value == doctest::Approx(1.25));
}

TEST_CASE("degenerate ties break deterministically") {
    // multiple optimal bases; value must be stable at 1
    const Matrix a = make_matrix(3, 2, {1, 1, 1, 0, 0, 1});
    const LpResult r = simplex_maximize(a, {1, 1, 1}, {1, 1});
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(r.value == doctest::Approx(1.0));
}
