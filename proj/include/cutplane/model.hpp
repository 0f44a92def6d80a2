#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cutplane/expr.hpp"
#include "cutplane/linalg.hpp"

namespace cutplane {

/// A point of {0,1}^n. Entries are 0 or 1; lexicographic order is the
/// container's operator< with x1 most significant.
using BinaryVector = std::vector<std::uint8_t>;

std::string to_bitstring(const BinaryVector& x);
BinaryVector from_bitstring(const std::string& bits);
std::vector<double> to_doubles(const BinaryVector& x);

/// Feasibility tolerance for nonlinear constraints g_j(x) <= 0.
inline constexpr double kFeasTol = 1e-9;
/// Relative tolerance for membership in the active set J(y).
inline constexpr double kTieTol = 1e-9;
/// Default cap on enumeration-backed operations.
inline constexpr int kEnumerationLimit = 24;

/// The bounded polyhedron K as A x <= b intersected with [0,1]^n.
struct LinearPolyhedron {
    Matrix a;              // rows x n
    std::vector<double> b; // one entry per row

    int rows() const { return a.rows(); }
    int dimension() const { return a.cols(); }
    bool contains(const BinaryVector& x, double tol = kFeasTol) const;
};

/// max f(x) s.t. x in K, g_j(x) <= 0, x binary.
struct Problem {
    int n = 0;
    NonlinearFunction objective;
    std::vector<NonlinearFunction> constraints;
    LinearPolyhedron polyhedron;

    int num_constraints() const { return static_cast<int>(constraints.size()); }
};

enum class FeasStatus { FeasibleC, InfeasibleCbar };

struct Classification {
    FeasStatus status = FeasStatus::FeasibleC;
    double max_violation = 0.0;   // max_j g_j(x); 0 when there are no constraints
    std::vector<int> active_set;  // J(x), empty iff no nonlinear constraints
    bool linear_violation = false; // A x <= b failed (callers never generate such x)
};

struct ValidationReport {
    std::vector<std::string> issues;
    bool ok() const { return issues.empty(); }
};

/// Structural checks: dimension mismatches, non-finite coefficients, empty
/// K intersect {0,1}^n (probed by enumeration when n is small). Never throws.
ValidationReport validate_problem(const Problem& p);

Classification classify_point(const Problem& p, const BinaryVector& x);

/// All points of {0,1}^n with A x <= b, in lexicographic order.
std::vector<BinaryVector> enumerate_binary_points(const LinearPolyhedron& poly,
                                                  int limit = kEnumerationLimit);

/// Splits an enumeration of K into (C, Cbar) under the problem's nonlinear
/// constraints. Desk-scale helper shared by the analysis module.
void enumerate_classified(const Problem& p, std::vector<BinaryVector>& feasible,
                          std::vector<BinaryVector>& infeasible, int limit = kEnumerationLimit);

} // namespace cutplane
