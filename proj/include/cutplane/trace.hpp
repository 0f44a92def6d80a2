#pragma once

#include <string>
#include <vector>

#include "cutplane/cuts.hpp"
#include "cutplane/model.hpp"

namespace cutplane {

/// One record per master solve.
struct TraceRecord {
    long k = 0;
    BinaryVector x;
    double theta = 0.0;
    bool feasible = false;
    double max_violation = 0.0;
    CutFamily cut_family = CutFamily::OptTangent; // family of the cut(s) added at this step
    double lb = 0.0;
    double ub = 0.0;
    double grad_norm = 0.0; // |grad f(x^k)|
};

/// CSV with header k,x_bits,theta,feasible,max_violation,cut_family,LB,UB,grad_norm.
std::string trace_to_csv(const std::vector<TraceRecord>& trace);

} // namespace cutplane
