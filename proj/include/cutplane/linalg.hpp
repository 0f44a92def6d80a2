#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace cutplane {

/// Dense row-major matrix of doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {}

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

    std::span<const double> row(int i) const {
        return {data_.data() + static_cast<std::size_t>(i) * cols_, static_cast<std::size_t>(cols_)};
    }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    bool operator==(const Matrix& other) const = default;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

double dot(std::span<const double> a, std::span<const double> b);

/// y = M x
std::vector<double> mat_vec(const Matrix& m, std::span<const double> x);

double norm2(std::span<const double> v);

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotation sweeps.
/// Off-diagonal mass is driven below tol * frobenius(A); values are returned unsorted.
std::vector<double> jacobi_eigenvalues(const Matrix& a, double tol = 1e-10, int max_sweeps = 64);

double max_abs(const Matrix& m);

/// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double v);

} // namespace cutplane
