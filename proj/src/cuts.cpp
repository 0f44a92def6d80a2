#include "cutplane/cuts.hpp"

#include <cmath>

#include "cutplane/errors.hpp"

namespace cutplane {

bool is_optimality_family(CutFamily f) {
    return f == CutFamily::OptTangent || f == CutFamily::OptShifted ||
           f == CutFamily::OptLipschitz;
}

std::string to_string(CutFamily f) {
    switch (f) {
    case CutFamily::OptTangent: return "OPT_TANGENT";
    case CutFamily::FeasTangent: return "FEAS_TANGENT";
    case CutFamily::OptShifted: return "OPT_SHIFTED";
    case CutFamily::FeasShifted: return "FEAS_SHIFTED";
    case CutFamily::OptLipschitz: return "OPT_LIPSCHITZ";
    case CutFamily::FeasLipschitz: return "FEAS_LIPSCHITZ";
    }
    return "?";
}

namespace {

double dot_binary(std::span<const double> a, const BinaryVector& x) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i]) s += a[i];
    return s;
}

void check_active(const Problem& p, int j, const BinaryVector& y) {
    if (j < 0 || j >= p.num_constraints())
        throw Error("feasibility cut: constraint index out of range");
    const Classification c = classify_point(p, y);
    bool in_active = false;
    for (int a : c.active_set) in_active |= (a == j);
    if (!in_active)
        throw Error("feasibility cut: constraint " + std::to_string(j + 1) +
                    " is not in the active set J(y) at " + to_bitstring(y));
}

} // namespace

Cut optimality_cut(const NonlinearFunction& f, const BinaryVector& y) {
    Cut c;
    c.family = CutFamily::OptTangent;
    c.a = gradient(f, y);
    c.rhs = eval(f, y) - dot_binary(c.a, y);
    c.source_point = y;
    return c;
}

Cut feasibility_cut(const Problem& p, int j, const BinaryVector& y) {
    check_active(p, j, y);
    const NonlinearFunction& g = p.constraints[j];
    Cut c;
    c.family = CutFamily::FeasTangent;
    c.a = gradient(g, y);
    c.rhs = eval(g, y) - dot_binary(c.a, y);
    c.source_point = y;
    c.source_constraint = j;
    return c;
}

Cut shifted_optimality_cut(const NonlinearFunction& f, const BinaryVector& y) {
    Cut c;
    c.family = CutFamily::OptShifted;
    c.a = gradient(f, y);
    c.rhs = -dot_binary(c.a, y);
    c.source_point = y;
    return c;
}

Cut shifted_feasibility_cut(const Problem& p, int j, const BinaryVector& y, double epsilon) {
    if (!(epsilon > 0.0)) throw Error("shifted feasibility cut requires epsilon > 0");
    check_active(p, j, y);
    Cut c;
    c.family = CutFamily::FeasShifted;
    c.a = gradient(p.constraints[j], y);
    c.rhs = epsilon - dot_binary(c.a, y);
    c.source_point = y;
    c.source_constraint = j;
    return c;
}

Cut lipschitz_cut(const NonlinearFunction& fn, const BinaryVector& y, double lipschitz,
                  CutSide side, int constraint_index) {
    if (!(lipschitz > 0.0)) throw Error("lipschitz cut requires L > 0");
    Cut c;
    c.a = gradient(fn, y);
    double ynorm2 = 0.0;
    for (std::uint8_t b : y) ynorm2 += b; // |y|^2 = sum y_i on binaries
    const double base_rhs = eval(fn, y) - dot_binary(c.a, y);
    if (side == CutSide::Objective) {
        c.family = CutFamily::OptLipschitz;
        for (std::size_t i = 0; i < c.a.size(); ++i)
            c.a[i] += 0.5 * lipschitz * (1.0 - 2.0 * y[i]);
        c.rhs = base_rhs + 0.5 * lipschitz * ynorm2;
    } else {
        c.family = CutFamily::FeasLipschitz;
        for (std::size_t i = 0; i < c.a.size(); ++i)
            c.a[i] -= 0.5 * lipschitz * (1.0 - 2.0 * y[i]);
        c.rhs = base_rhs - 0.5 * lipschitz * ynorm2;
    }
    c.source_point = y;
    c.source_constraint = constraint_index;
    return c;
}

double evaluate_cut(const Cut& cut, const BinaryVector& x, std::optional<double> theta) {
    if (x.size() != cut.a.size()) throw Error("evaluate_cut: dimension mismatch");
    const double affine = dot_binary(cut.a, x) + cut.rhs;
    if (is_optimality_family(cut.family)) {
        if (!theta) throw Error("evaluate_cut: optimality cut needs theta");
        return affine - *theta;
    }
    return affine;
}

double cut_affine_value(const Cut& cut, std::span<const double> x) {
    return dot(cut.a, x) + cut.rhs;
}

} // namespace cutplane
