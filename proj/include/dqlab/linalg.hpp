#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace dqlab {

// Dense row-major matrix. Dimensions in this library are portfolio sizes
// (n up to a few hundred), so no sparse or blocked machinery is needed.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<const double> row(std::size_t i) const {
        return {data_.data() + i * cols_, cols_};
    }

    const std::vector<double>& data() const { return data_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

bool is_symmetric(const Matrix& a, double tol);

// Lower Cholesky factor tolerating positive semi-definite input: pivots in
// [-neg_tol * scale, 0] are clamped to zero, anything more negative throws.
Matrix cholesky_psd(const Matrix& a, double neg_tol = 1e-10);

// Strict factorization for positive definite systems; throws on a
// non-positive pivot.
Matrix cholesky_spd(const Matrix& a);

// Solve a x = b for symmetric positive definite a.
std::vector<double> solve_spd(const Matrix& a, std::span<const double> b);

double dot(std::span<const double> a, std::span<const double> b);
std::vector<double> mat_vec(const Matrix& a, std::span<const double> x);
double quadratic_form(const Matrix& a, std::span<const double> x);

} // namespace dqlab
