#include "cutplane/trace.hpp"

#include <sstream>

#include "cutplane/linalg.hpp"

namespace cutplane {

std::string trace_to_csv(const std::vector<TraceRecord>& trace) {
    std::ostringstream out;
    out << "k,x_bits,theta,feasible,max_violation,cut_family,LB,UB,grad_norm\n";
    for (const TraceRecord& r : trace) {
        out << r.k << ',' << to_bitstring(r.x) << ',' << format_double(r.theta) << ','
            << (r.feasible ? 1 : 0) << ',' << format_double(r.max_violation) << ','
            << to_string(r.cut_family) << ',' << format_double(r.lb) << ','
            << format_double(r.ub) << ',' << format_double(r.grad_norm) << '\n';
    }
    return out.str();
}

} // namespace cutplane
