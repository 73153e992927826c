#include "dqlab/linalg.hpp"

#include "dqlab/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace dqlab {

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
}

bool is_symmetric(const Matrix& a, double tol) {
    if (a.rows() != a.cols()) return false;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i + 1; j < a.cols(); ++j)
            if (std::fabs(a.at(i, j) - a.at(j, i)) > tol) return false;
    return true;
}

namespace {

Matrix cholesky_impl(const Matrix& a, double neg_tol, bool strict) {
    if (a.rows() != a.cols())
        throw std::invalid_argument("cholesky: matrix must be square");
    const std::size_t n = a.rows();
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::fabs(a.at(i, i)));
    if (scale == 0.0) scale = 1.0;

    Matrix l(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double sum = a.at(i, j);
            for (std::size_t k = 0; k < j; ++k) sum -= l.at(i, k) * l.at(j, k);
            if (i == j) {
                if (strict) {
                    if (sum <= scale * 1e-14)
                        throw numerical_error("cholesky_spd: matrix is not positive definite");
                    l.at(i, i) = std::sqrt(sum);
                } else {
                    if (sum < -neg_tol * scale)
                        throw std::invalid_argument(
                            "cholesky_psd: matrix is indefinite beyond the jitter tolerance");
                    l.at(i, i) = sum > 0.0 ? std::sqrt(sum) : 0.0;
                }
            } else {
                const double diag = l.at(j, j);
                l.at(i, j) = diag > 0.0 ? sum / diag : 0.0;
            }
        }
    }
    return l;
}

} // namespace

Matrix cholesky_psd(const Matrix& a, double neg_tol) {
    return cholesky_impl(a, neg_tol, /*strict=*/false);
}

Matrix cholesky_spd(const Matrix& a) {
    return cholesky_impl(a, 0.0, /*strict=*/true);
}

std::vector<double> solve_spd(const Matrix& a, std::span<const double> b) {
    const Matrix l = cholesky_spd(a);
    const std::size_t n = a.rows();
    if (b.size() != n)
        throw std::invalid_argument("solve_spd: dimension mismatch");

    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double sum = b[i];
        for (std::size_t k = 0; k < i; ++k) sum -= l.at(i, k) * y[k];
        y[i] = sum / l.at(i, i);
    }
    std::vector<double> x(n);
    for (std::size_t ii = n; ii-- > 0;) {
        double sum = y[ii];
        for (std::size_t k = ii + 1; k < n; ++k) sum -= l.at(k, ii) * x[k];
        x[ii] = sum / l.at(ii, ii);
    }
    return x;
}

double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw std::invalid_argument("dot: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

std::vector<double> mat_vec(const Matrix& a, std::span<const double> x) {
    if (a.cols() != x.size())
        throw std::invalid_argument("mat_vec: dimension mismatch");
    std::vector<double> y(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) s += a.at(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

double quadratic_form(const Matrix& a, std::span<const double> x) {
    return dot(mat_vec(a, x), x);
}

} // namespace dqlab
