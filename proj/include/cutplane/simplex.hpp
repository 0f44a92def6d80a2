#pragma once

#include <vector>

#include "cutplane/linalg.hpp"

namespace cutplane {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
    LpStatus status = LpStatus::Optimal;
    double value = 0.0;
    std::vector<double> x;
};

/// max c.z  s.t.  A z <= b, z >= 0.
/// Dense two-phase tableau simplex with Bland's rule (entering: lowest index
/// with improving reduced cost; leaving: lowest basic index among ratio ties),
/// which terminates under degeneracy. Rows are scaled to unit max-abs before
/// solving.
LpResult simplex_maximize(const Matrix& a, const std::vector<double>& b,
                          const std::vector<double>& c);

} // namespace cutplane
