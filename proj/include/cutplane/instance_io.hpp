#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cutplane/model.hpp"

namespace cutplane {

/// A parsed instance file: the problem plus the optional extras the solver
/// accepts (a starting point and user-supplied gradient-Lipschitz constants).
struct InstanceFile {
    Problem problem;
    std::optional<BinaryVector> start;
    std::optional<double> lipschitz_f;
    std::vector<std::pair<int, double>> lipschitz_g; // (constraint index, constant)
};

/// Line-oriented textual format.
///   DIM n
///   OBJECTIVE EXPR <expression>        (or OBJECTIVE QUADRATIC block)
///   CONSTRAINT EXPR <expression>       (g(x) <= 0; repeatable)
///   LINEAR a1 ... an <= b              (repeatable)
///   START 1010
///   LIPSCHITZ F <value>
///   LIPSCHITZ G <j> <value>
/// A QUADRATIC block holds n lines "Q v1 ... vn", optionally "q v1 ... vn"
/// and "c v". Lines starting with # are comments; unknown sections are
/// rejected.
InstanceFile parse_instance(const std::string& text);
InstanceFile load_instance(const std::string& path);

std::string serialize_instance(const InstanceFile& inst);

} // namespace cutplane
