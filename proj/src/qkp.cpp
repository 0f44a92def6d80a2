#include "cutplane/qkp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "cutplane/errors.hpp"

namespace cutplane {

QkpInstance generate_instance(int n, std::uint64_t seed) {
    if (n < 2) throw Error("QKP generation requires n >= 2");
    SplitMix64 rng(seed);

    QkpInstance inst;
    inst.n = n;
    inst.seed = seed;
    inst.point_dim = static_cast<int>(rng.uniform(1, 10));
    inst.points = Matrix(n, inst.point_dim);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < inst.point_dim; ++j)
            inst.points(i, j) = static_cast<double>(rng.uniform(1, 10000));

    inst.q_matrix = Matrix(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double d2 = 0.0;
            for (int k = 0; k < inst.point_dim; ++k) {
                const double d = inst.points(i, k) - inst.points(j, k);
                d2 += d * d;
            }
            inst.q_matrix(i, j) = inst.q_matrix(j, i) = d2;
        }

    inst.q_linear.resize(n);
    for (int i = 0; i < n; ++i)
        inst.q_linear[i] = static_cast<double>(rng.uniform(1, 10000));

    // the formulation asserts m >= 2, so the draw starts at 2 rather than 1
    inst.capacity = static_cast<int>(rng.uniform(2, n));
    return inst;
}

bool cnd_check(const Matrix& q) {
    const int n = q.rows();
    if (q.cols() != n) throw Error("cnd_check requires a square matrix");
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (q(i, j) != q(j, i)) throw Error("cnd_check requires a symmetric matrix");

    const std::vector<double> eig = jacobi_eigenvalues(q, 1e-10);
    double spectral = 0.0;
    for (double e : eig) spectral = std::max(spectral, std::fabs(e));
    if (spectral == 0.0) return true; // zero matrix is trivially c.n.d.

    int positive = 0;
    for (double e : eig)
        if (e > 1e-8 * spectral) ++positive;
    if (positive != 1) return false;

    // cross-check the conditional form on random sum-zero directions
    SplitMix64 rng(0x5eedULL * static_cast<std::uint64_t>(n + 1));
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> x(n);
        double mean = 0.0;
        for (int i = 0; i < n; ++i) {
            x[i] = static_cast<double>(rng.uniform(-1000, 1000)) / 1000.0;
            mean += x[i];
        }
        mean /= n;
        double nrm2 = 0.0;
        for (int i = 0; i < n; ++i) {
            x[i] -= mean; // project onto sum-zero subspace
            nrm2 += x[i] * x[i];
        }
        if (nrm2 == 0.0) continue;
        double form = 0.0;
        for (int i = 0; i < n; ++i) form += x[i] * dot(q.row(i), x);
        if (form > 1e-6 * spectral * nrm2) return false;
    }
    return true;
}

Problem qkp_to_problem(const QkpInstance& inst, QkpForm form) {
    Problem p;
    p.n = inst.n;
    p.objective = NonlinearFunction::quadratic(inst.q_matrix, inst.q_linear, 0.0);

    const int rows = form == QkpForm::Inequality ? 1 : 2;
    p.polyhedron.a = Matrix(rows, inst.n);
    p.polyhedron.b.assign(rows, 0.0);
    for (int j = 0; j < inst.n; ++j) p.polyhedron.a(0, j) = 1.0;
    p.polyhedron.b[0] = inst.capacity;
    if (form == QkpForm::Equality) {
        for (int j = 0; j < inst.n; ++j) p.polyhedron.a(1, j) = -1.0;
        p.polyhedron.b[1] = -inst.capacity;
    }
    return p;
}

BinaryVector greedy_start(const QkpInstance& inst) {
    std::vector<int> order(inst.n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return inst.q_linear[a] > inst.q_linear[b];
    });
    BinaryVector x(inst.n, 0);
    for (int i = 0; i < inst.capacity; ++i) x[order[i]] = 1;
    return x;
}

double optimality_gap(double ub, double lb) {
    if (ub < lb) throw Error("optimality_gap requires UB >= LB");
    if (!(ub > 0.0)) throw Error("optimality_gap requires UB > 0");
    return (ub - lb) / ub * 100.0;
}

std::string serialize_qkp(const QkpInstance& inst) {
    std::ostringstream out;
    out << "QKP\n";
    out << "N " << inst.n << "\n";
    out << "M " << inst.capacity << "\n";
    out << "Q\n";
    for (int i = 0; i < inst.n; ++i) {
        for (int j = 0; j < inst.n; ++j)
            out << (j ? " " : "") << format_double(inst.q_matrix(i, j));
        out << "\n";
    }
    out << "q\n";
    for (int i = 0; i < inst.n; ++i) out << (i ? " " : "") << format_double(inst.q_linear[i]);
    out << "\n";
    out << "SEED " << inst.seed << "\n";
    out << "POINTS " << inst.point_dim << "\n";
    for (int i = 0; i < inst.n; ++i) {
        for (int j = 0; j < inst.point_dim; ++j)
            out << (j ? " " : "") << format_double(inst.points(i, j));
        out << "\n";
    }
    return out.str();
}

QkpInstance parse_qkp(const std::string& text) {
    std::istringstream in(text);
    std::string tok;
    if (!(in >> tok) || tok != "QKP") throw Error("QKP file must start with the QKP header");

    QkpInstance inst;
    auto expect = [&](const char* kw) {
        if (!(in >> tok) || tok != kw)
            throw Error(std::string("QKP file: expected section ") + kw);
    };
    expect("N");
    if (!(in >> inst.n) || inst.n < 2) throw Error("QKP file: invalid N");
    expect("M");
    if (!(in >> inst.capacity) || inst.capacity < 2 || inst.capacity > inst.n)
        throw Error("QKP file: capacity must satisfy 2 <= M <= N");
    expect("Q");
    inst.q_matrix = Matrix(inst.n, inst.n);
    for (int i = 0; i < inst.n; ++i)
        for (int j = 0; j < inst.n; ++j)
            if (!(in >> inst.q_matrix(i, j))) throw Error("QKP file: truncated Q matrix");
    expect("q");
    inst.q_linear.resize(inst.n);
    for (int i = 0; i < inst.n; ++i)
        if (!(in >> inst.q_linear[i])) throw Error("QKP file: truncated q vector");
    expect("SEED");
    if (!(in >> inst.seed)) throw Error("QKP file: invalid SEED");
    expect("POINTS");
    if (!(in >> inst.point_dim) || inst.point_dim < 1)
        throw Error("QKP file: invalid point dimension");
    inst.points = Matrix(inst.n, inst.point_dim);
    for (int i = 0; i < inst.n; ++i)
        for (int j = 0; j < inst.point_dim; ++j)
            if (!(in >> inst.points(i, j))) throw Error("QKP file: truncated POINTS section");
    return inst;
}

} // namespace cutplane
