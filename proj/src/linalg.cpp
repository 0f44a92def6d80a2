#include "cutplane/linalg.hpp"

#include <cassert>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace cutplane {

double dot(std::span<const double> a, std::span<const double> b) {
    assert(a.size() == b.size());
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

std::vector<double> mat_vec(const Matrix& m, std::span<const double> x) {
    assert(static_cast<int>(x.size()) == m.cols());
    std::vector<double> y(m.rows(), 0.0);
    for (int i = 0; i < m.rows(); ++i) y[i] = dot(m.row(i), x);
    return y;
}

double norm2(std::span<const double> v) { return std::sqrt(dot(v, v)); }

double max_abs(const Matrix& m) {
    double mx = 0.0;
    for (double v : m.data()) mx = std::max(mx, std::fabs(v));
    return mx;
}

std::vector<double> jacobi_eigenvalues(const Matrix& a, double tol, int max_sweeps) {
    assert(a.rows() == a.cols());
    const int n = a.rows();
    Matrix w = a;

    auto off_norm = [&] {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) s += w(i, j) * w(i, j);
        return std::sqrt(2.0 * s);
    };
    double fro = 0.0;
    for (double v : w.data()) fro += v * v;
    fro = std::sqrt(fro);
    const double stop = tol * std::max(fro, 1e-300);

    for (int sweep = 0; sweep < max_sweeps && off_norm() > stop; ++sweep) {
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                if (std::fabs(w(p, q)) <= 1e-300) continue;
                const double theta = (w(q, q) - w(p, p)) / (2.0 * w(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double tau = s / (1.0 + c);

                const double wpq = w(p, q), wpp = w(p, p), wqq = w(q, q);
                w(p, q) = 0.0;
                w(q, p) = 0.0;
                w(p, p) = wpp - t * wpq;
                w(q, q) = wqq + t * wpq;
                for (int r = 0; r < n; ++r) {
                    if (r == p || r == q) continue;
                    const double wrp = w(r, p), wrq = w(r, q);
                    w(r, p) = w(p, r) = wrp - s * (wrq + tau * wrp);
                    w(r, q) = w(q, r) = wrq + s * (wrp - tau * wrq);
                }
            }
        }
    }

    std::vector<double> eig(n);
    for (int i = 0; i < n; ++i) eig[i] = w(i, i);
    return eig;
}

std::string format_double(double v) {
    char buf[40];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

} // namespace cutplane
