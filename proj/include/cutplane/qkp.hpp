#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cutplane/model.hpp"

namespace cutplane {

/// SplitMix64: seedable 64-bit generator with a fully specified algorithm, so
/// generated instances reproduce bit-exactly across platforms. Bounded draws
/// use the multiply-shift range reduction.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// uniform in {lo, ..., hi}
    std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo + 1);
        const auto wide = static_cast<unsigned __int128>(next()) * span;
        return lo + static_cast<std::int64_t>(wide >> 64);
    }

private:
    std::uint64_t state_;
};

/// Equal-weight quadratic knapsack instance:
/// max 1/2 x^T Q x + q.x  s.t.  sum x_i <= m, with Q the squared Euclidean
/// distance matrix of generator points (zero diagonal, positive off-diagonal).
struct QkpInstance {
    int n = 0;
    Matrix q_matrix;            // symmetric, zero diagonal
    std::vector<double> q_linear;
    int capacity = 0;           // 2 <= m <= n
    int point_dim = 0;          // s
    Matrix points;              // n x s generator points
    std::uint64_t seed = 0;
};

/// Draws s in [1,10], integer points in [1,10000]^s, Q_ij = |v_i - v_j|^2,
/// q in [1,10000], m in {2..n}. Deterministic in (n, seed).
QkpInstance generate_instance(int n, std::uint64_t seed);

/// Conditionally negative definite test: Jacobi eigenvalues must show exactly
/// one positive eigenvalue (relative threshold), cross-checked with random
/// sum-zero quadratic-form samples.
bool cnd_check(const Matrix& q);

enum class QkpForm { Inequality, Equality };

/// Inequality: one row  sum x_i <= m.  Equality: the slice sum x_i = m,
/// encoded as two opposing inequality rows.
Problem qkp_to_problem(const QkpInstance& inst, QkpForm form);

/// The m items with the largest linear profits (ties: lower index).
BinaryVector greedy_start(const QkpInstance& inst);

/// (UB - LB) / UB * 100; requires UB >= LB and UB > 0.
double optimality_gap(double ub, double lb);

std::string serialize_qkp(const QkpInstance& inst);
QkpInstance parse_qkp(const std::string& text);

} // namespace cutplane
