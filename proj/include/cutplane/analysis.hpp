#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cutplane/linalg.hpp"
#include "cutplane/model.hpp"
#include "cutplane/trace.hpp"

namespace cutplane {

struct BruteForceResult {
    BinaryVector x;             // lexicographically smallest optimum
    double value = 0.0;         // M1 = max f over C
    double second_value = 0.0;  // M2: best strictly-worse value; -inf if none
    bool constant_on_c = false; // f takes a single value on a multi-point C (gap 0)
};

/// Exact maximum of f over C by enumeration (with incremental evaluation for
/// quadratics). Throws on empty C or when n exceeds the limit.
BruteForceResult brute_force_solve(const Problem& p, int limit = kEnumerationLimit);

struct ConditionReport {
    bool holds = false;
    double lp_value = 0.0;     // optimum of the fully-cut master LP_{C,Cbar}
    double true_optimum = 0.0; // max f over C
    // first violating pair for the sufficient-condition checks
    std::optional<std::pair<BinaryVector, BinaryVector>> witness;
    std::string note;
};

/// Builds every tangent cut over C and Cbar, solves LP_{C,Cbar} and compares
/// with brute force (no gap within 1e-9 relative).
ConditionReport check_condition1(const Problem& p, int limit = kEnumerationLimit);

/// Verifies f(x) <= h_f(x,y) on C x C and h_{g_j}(x,y) <= 0 for x in C,
/// y in Cbar, j in J(y); reports the first violating pair.
ConditionReport check_tangent_domination(const Problem& p, int limit = kEnumerationLimit);

/// First-order robust-quasiconvexity test with modulus tau over the given
/// points: fn(x) <= fn(y) must imply
/// <grad fn(y), x-y> <= -min(tau |y-x|, fn(y)-fn(x)). Returns the first
/// violating (x, y) pair, or nullopt when the test passes.
std::optional<std::pair<BinaryVector, BinaryVector>>
check_robust_quasiconvex_binary(const NonlinearFunction& fn, double tau,
                                const std::vector<BinaryVector>& points);

struct EpsilonBar {
    double value = 0.0; // +inf when Cbar is empty
    bool degenerate = false; // value <= 0: the pseudoconvexity premise fails
};

/// min over (x,y) in C x Cbar and j in J(y) of <grad g_j(y), y-x>; any
/// epsilon in (0, value] keeps all of C feasible for the shifted cuts.
EpsilonBar compute_epsilon_bar(const Problem& p, int limit = kEnumerationLimit);

/// (optimal - f(x^k)) / |grad|, or 0 at stationary points.
double delta_k(double optimal_value, double f_xk, const std::vector<double>& grad);

/// Number of m-cube vertices within distance sqrt(M) of a fixed vertex:
/// the sum of the first M+1 binomial coefficients. Exact integers.
std::uint64_t u_count(int m_radius, int m_dim);

/// Lower bound on binary points removed by an optimality cut with ratio
/// delta: u_count(N, n) for the largest N with delta > sqrt(N); 0 when
/// delta = 0 (no claim).
std::uint64_t removal_lower_bound(double delta, int n);

/// At most 2^(n-N) iterations can satisfy delta_k > sqrt(N).
std::uint64_t iteration_bound(int n, int big_n);

/// Distance from v to the normal cone of the feasible set at x, computed as
/// the norm of the projection of v onto the tangent cone generated by
/// {y - x} (Moreau decomposition), with the projection found by nonnegative
/// least squares.
double tangent_cone_distance(const std::vector<double>& v, const BinaryVector& x,
                             const std::vector<BinaryVector>& feasible_points);

/// min |G w - v| over w >= 0 by the Lawson-Hanson active-set iteration;
/// returns w. Exposed for the diagnostics tests.
std::vector<double> nnls(const Matrix& g, const std::vector<double>& v, double tol = 1e-10);

enum class CertificateKind { KktLp, NormalConeMembership, GradientNorm, TangentDistance };

struct Certificate {
    CertificateKind kind = CertificateKind::KktLp;
    bool passed = false;
    double slack = 0.0; // max c.x - c.x* for the KKT LP; distance for cone kinds
    std::vector<double> multipliers;
    double m1 = 0.0, m2 = 0.0;
};

/// Kuhn-Tucker style sufficient certificate: with lambda >= 0 complementary
/// at x*, passes iff x* maximizes <grad f(x*) - sum lambda_j grad g_j(x*), x>
/// over K cap {0,1}^n. Certifies optimality when -f is pseudoconvex and the
/// g_j are quasiconvex (premises asserted by the caller).
Certificate kkt_certificate(const Problem& p, const BinaryVector& xstar,
                            const std::vector<double>& lambda);

/// Searches for complementary multipliers that make kkt_certificate pass:
/// lambda = 0 first, then a simplex feasibility problem over the active
/// constraints (desk scale). nullopt when none is found.
std::optional<std::vector<double>> find_kkt_multipliers(const Problem& p,
                                                        const BinaryVector& xstar,
                                                        int limit = kEnumerationLimit);

/// Largest gradient-Lipschitz constant for g_j that keeps every iterate after
/// the infeasible x^k feasible for g_j:
/// 2 min{g_j(x) > 0} / max{|x - x^k|^2 : g_j(x) > 0, x != x^k}; +inf when the
/// denominator set is empty.
double lipschitz_threshold(const Problem& p, int j, const BinaryVector& xk,
                           int limit = kEnumerationLimit);

struct TraceCheckReport {
    long violations = 0;
    std::vector<std::string> details;
    bool descent_check_skipped = false; // no Lipschitz constants available
};

/// Replays a recorded run against the two per-iteration inequalities: the
/// descent bound g_j(x^l) <= L(g_j)/2 |x^k - x^l|^2 after each infeasible
/// x^k, and optimal <= theta^l <= f(x^k) + <grad f(x^k), x^l - x^k> after
/// each feasible x^k. Violations mean the zero-gap condition failed.
TraceCheckReport verify_trace_inequalities(const std::vector<TraceRecord>& trace,
                                           const Problem& p, double optimal_value,
                                           const std::vector<double>& lipschitz_g = {});

} // namespace cutplane
