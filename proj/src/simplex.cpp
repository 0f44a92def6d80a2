#include "cutplane/simplex.hpp"

#include <cassert>
#include <cmath>
#include <limits>

#include "cutplane/errors.hpp"

namespace cutplane {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kFeasTol1 = 1e-8; // phase-1 optimum threshold

struct Tableau {
    int m;                  // constraint rows
    int ncols;              // columns excluding rhs
    Matrix t;               // (m+1) x (ncols+1); row m is the objective row
    std::vector<int> basis; // basic column per row
    int art_start;          // first artificial column (== ncols when none)

    double& rhs(int i) { return t(i, ncols); }
    double rhs(int i) const { return t(i, ncols); }

    void pivot(int row, int col) {
        const double piv = t(row, col);
        assert(std::fabs(piv) > 0.0);
        for (int j = 0; j <= ncols; ++j) t(row, j) /= piv;
        t(row, col) = 1.0;
        for (int i = 0; i <= m; ++i) {
            if (i == row) continue;
            const double f = t(i, col);
            if (f == 0.0) continue;
            for (int j = 0; j <= ncols; ++j) t(i, j) -= f * t(row, j);
            t(i, col) = 0.0;
        }
        basis[row] = col;
    }

    // Maximize the current objective row. allowed_cols limits entering columns.
    // Returns false when unbounded.
    bool run(int allowed_cols) {
        for (;;) {
            int enter = -1;
            for (int j = 0; j < allowed_cols; ++j) {
                if (t(m, j) > kPivotTol) { // improving column, Bland: first index
                    enter = j;
                    break;
                }
            }
            if (enter < 0) return true;

            int leave = -1;
            double best_ratio = std::numeric_limits<double>::infinity();
            for (int i = 0; i < m; ++i) {
                if (t(i, enter) > kPivotTol) {
                    const double ratio = rhs(i) / t(i, enter);
                    if (ratio < best_ratio - 1e-12 ||
                        (ratio < best_ratio + 1e-12 &&
                         (leave < 0 || basis[i] < basis[leave]))) {
                        best_ratio = ratio;
                        leave = i;
                    }
                }
            }
            if (leave < 0) return false; // unbounded
            pivot(leave, enter);
        }
    }
};

} // namespace

LpResult simplex_maximize(const Matrix& a, const std::vector<double>& b,
                          const std::vector<double>& c) {
    const int m = a.rows();
    const int n = a.cols();
    if (static_cast<int>(b.size()) != m) throw Error("simplex: b has wrong length");
    if (static_cast<int>(c.size()) != n) throw Error("simplex: c has wrong length");

    // scale each row to unit max-abs for conditioning
    Matrix as = a;
    std::vector<double> bs = b;
    for (int i = 0; i < m; ++i) {
        double mx = std::fabs(bs[i]);
        for (int j = 0; j < n; ++j) mx = std::max(mx, std::fabs(as(i, j)));
        if (mx > 0.0) {
            for (int j = 0; j < n; ++j) as(i, j) /= mx;
            bs[i] /= mx;
        }
    }

    int n_art = 0;
    for (int i = 0; i < m; ++i)
        if (bs[i] < 0) ++n_art;

    Tableau tb;
    tb.m = m;
    tb.art_start = n + m;
    tb.ncols = n + m + n_art;
    tb.t = Matrix(m + 1, tb.ncols + 1);
    tb.basis.assign(m, -1);

    int art = tb.art_start;
    for (int i = 0; i < m; ++i) {
        const double sign = bs[i] < 0 ? -1.0 : 1.0;
        for (int j = 0; j < n; ++j) tb.t(i, j) = sign * as(i, j);
        tb.t(i, n + i) = sign; // slack
        tb.rhs(i) = sign * bs[i];
        if (bs[i] < 0) {
            tb.t(i, art) = 1.0;
            tb.basis[i] = art;
            ++art;
        } else {
            tb.basis[i] = n + i;
        }
    }

    if (n_art > 0) {
        // phase 1: maximize -sum(artificials); reduced-cost row is the sum of
        // the artificial rows over non-artificial columns
        for (int i = 0; i < m; ++i) {
            if (tb.basis[i] < tb.art_start) continue;
            for (int j = 0; j < tb.art_start; ++j) tb.t(m, j) += tb.t(i, j);
            tb.rhs(m) += tb.rhs(i);
        }
        if (!tb.run(tb.art_start)) throw Error("simplex: phase 1 unbounded");
        if (tb.rhs(m) > kFeasTol1) return {LpStatus::Infeasible, 0.0, {}};

        // drive leftover artificials out of the basis where possible
        for (int i = 0; i < m; ++i) {
            if (tb.basis[i] < tb.art_start) continue;
            int col = -1;
            for (int j = 0; j < tb.art_start; ++j)
                if (std::fabs(tb.t(i, j)) > kPivotTol) {
                    col = j;
                    break;
                }
            if (col >= 0) tb.pivot(i, col);
            // otherwise the row is redundant; the artificial stays basic at 0
        }
    }

    // phase 2 objective row: r_j = c_j - sum_i c_basis(i) * T(i,j)
    for (int j = 0; j <= tb.ncols; ++j) tb.t(m, j) = 0.0;
    for (int j = 0; j < n; ++j) tb.t(m, j) = c[j];
    for (int i = 0; i < m; ++i) {
        const int bi = tb.basis[i];
        const double cb = bi < n ? c[bi] : 0.0;
        if (cb == 0.0) continue;
        for (int j = 0; j <= tb.ncols; ++j) tb.t(m, j) -= cb * tb.t(i, j);
    }

    if (!tb.run(tb.art_start)) return {LpStatus::Unbounded, 0.0, {}};

    LpResult res;
    res.status = LpStatus::Optimal;
    res.x.assign(n, 0.0);
    for (int i = 0; i < m; ++i)
        if (tb.basis[i] < n) res.x[tb.basis[i]] = tb.rhs(i);
    res.value = dot(c, res.x);
    return res;
}

} // namespace cutplane
