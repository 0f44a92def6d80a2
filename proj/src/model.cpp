#include "cutplane/model.hpp"

#include <cmath>

#include "cutplane/errors.hpp"

namespace cutplane {

std::string to_bitstring(const BinaryVector& x) {
    std::string s(x.size(), '0');
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i]) s[i] = '1';
    return s;
}

BinaryVector from_bitstring(const std::string& bits) {
    BinaryVector x(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] != '0' && bits[i] != '1') throw Error("bitstring must contain only 0/1");
        x[i] = bits[i] == '1';
    }
    return x;
}

std::vector<double> to_doubles(const BinaryVector& x) {
    std::vector<double> v(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) v[i] = x[i];
    return v;
}

bool LinearPolyhedron::contains(const BinaryVector& x, double tol) const {
    for (int r = 0; r < rows(); ++r) {
        double lhs = 0.0;
        for (int j = 0; j < dimension(); ++j)
            if (x[j]) lhs += a(r, j);
        if (lhs > b[r] + tol * std::max(1.0, std::fabs(b[r]))) return false;
    }
    return true;
}

ValidationReport validate_problem(const Problem& p) {
    ValidationReport rep;
    auto issue = [&](std::string s) { rep.issues.push_back(std::move(s)); };

    if (p.n <= 0) issue("dimension must be positive");
    if (p.objective.dimension() != p.n)
        issue("objective expects dimension " + std::to_string(p.objective.dimension()) +
              ", problem has n=" + std::to_string(p.n));
    for (int j = 0; j < p.num_constraints(); ++j)
        if (p.constraints[j].dimension() != p.n)
            issue("constraint " + std::to_string(j + 1) + " expects dimension " +
                  std::to_string(p.constraints[j].dimension()));

    if (p.polyhedron.a.cols() != p.n)
        issue("polyhedron has " + std::to_string(p.polyhedron.a.cols()) +
              " columns, expected " + std::to_string(p.n) +
              " (a constraint-free problem still needs a 0 x n matrix)");
    if (static_cast<int>(p.polyhedron.b.size()) != p.polyhedron.rows())
        issue("polyhedron right-hand side has wrong length");

    auto check_finite = [&](const NonlinearFunction& f, const std::string& what) {
        if (f.kind() == FunctionKind::Quadratic) {
            for (double v : f.quad().data())
                if (!std::isfinite(v)) {
                    issue(what + " has non-finite quadratic coefficients");
                    return;
                }
            for (double v : f.linear())
                if (!std::isfinite(v)) {
                    issue(what + " has non-finite linear coefficients");
                    return;
                }
            if (!std::isfinite(f.constant())) issue(what + " has non-finite constant");
        }
    };
    check_finite(p.objective, "objective");
    for (int j = 0; j < p.num_constraints(); ++j)
        check_finite(p.constraints[j], "constraint " + std::to_string(j + 1));
    for (double v : p.polyhedron.a.data())
        if (!std::isfinite(v)) {
            issue("polyhedron has non-finite coefficients");
            break;
        }
    for (double v : p.polyhedron.b)
        if (!std::isfinite(v)) {
            issue("polyhedron right-hand side has non-finite entries");
            break;
        }

    if (rep.ok() && p.n <= kEnumerationLimit) {
        if (enumerate_binary_points(p.polyhedron).empty())
            issue("empty feasible region: no binary point satisfies A x <= b");
    }
    return rep;
}

Classification classify_point(const Problem& p, const BinaryVector& x) {
    if (static_cast<int>(x.size()) != p.n) throw Error("classify_point: dimension mismatch");
    Classification c;
    c.linear_violation = !p.polyhedron.contains(x);

    if (p.num_constraints() > 0) {
        std::vector<double> g(p.num_constraints());
        const std::vector<double> xd = to_doubles(x);
        double gmax = -std::numeric_limits<double>::infinity();
        for (int j = 0; j < p.num_constraints(); ++j) {
            g[j] = eval(p.constraints[j], std::span<const double>(xd));
            gmax = std::max(gmax, g[j]);
        }
        c.max_violation = gmax;
        const double tie = kTieTol * std::max(1.0, std::fabs(gmax));
        for (int j = 0; j < p.num_constraints(); ++j)
            if (g[j] >= gmax - tie) c.active_set.push_back(j);
    }

    const bool nonlinear_ok = c.max_violation <= kFeasTol;
    c.status = (nonlinear_ok && !c.linear_violation) ? FeasStatus::FeasibleC
                                                     : FeasStatus::InfeasibleCbar;
    return c;
}

std::vector<BinaryVector> enumerate_binary_points(const LinearPolyhedron& poly, int limit) {
    const int n = poly.dimension();
    if (n > limit) throw DimensionTooLarge(n, limit);
    std::vector<BinaryVector> out;
    BinaryVector x(n, 0);
    // running row values r = A x, updated on the bits an increment flips
    std::vector<double> r(poly.rows(), 0.0);
    auto feasible = [&] {
        for (int i = 0; i < poly.rows(); ++i)
            if (r[i] > poly.b[i] + kFeasTol * std::max(1.0, std::fabs(poly.b[i]))) return false;
        return true;
    };
    for (;;) {
        if (feasible()) out.push_back(x);
        // lexicographic increment with x1 most significant
        int j = n - 1;
        while (j >= 0 && x[j] == 1) {
            x[j] = 0;
            for (int i = 0; i < poly.rows(); ++i) r[i] -= poly.a(i, j);
            --j;
        }
        if (j < 0) break;
        x[j] = 1;
        for (int i = 0; i < poly.rows(); ++i) r[i] += poly.a(i, j);
    }
    return out;
}

void enumerate_classified(const Problem& p, std::vector<BinaryVector>& feasible,
                          std::vector<BinaryVector>& infeasible, int limit) {
    feasible.clear();
    infeasible.clear();
    for (BinaryVector& x : enumerate_binary_points(p.polyhedron, limit)) {
        if (classify_point(p, x).status == FeasStatus::FeasibleC)
            feasible.push_back(std::move(x));
        else
            infeasible.push_back(std::move(x));
    }
}

} // namespace cutplane
