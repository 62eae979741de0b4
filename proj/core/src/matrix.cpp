#include "ipsae/matrix.hpp"

#include <cmath>
#include <string>

namespace ipsae {

namespace {

void check_finite(const std::vector<double>& v) {
    for (double x : v) {
        if (!std::isfinite(x)) {
            throw NonFinite("matrix entry is NaN or infinite");
        }
    }
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {
    if (rows == 0 || cols == 0) {
        throw DimensionMismatch("matrix dimensions must be positive");
    }
    if (!std::isfinite(fill)) {
        throw NonFinite("matrix fill value is not finite");
    }
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (rows == 0 || cols == 0) {
        throw DimensionMismatch("matrix dimensions must be positive");
    }
    if (data_.size() != rows * cols) {
        throw DimensionMismatch("entry count " + std::to_string(data_.size()) +
                                " does not match " + std::to_string(rows) + "x" +
                                std::to_string(cols));
    }
    check_finite(data_);
}

std::vector<double> Matrix::col(std::size_t j) const {
    if (j >= cols_) {
        throw IndexOutOfRange("column index out of range");
    }
    std::vector<double> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        out[i] = (*this)(i, j);
    }
    return out;
}

void Matrix::set_col(std::size_t j, const std::vector<double>& v) {
    if (j >= cols_) {
        throw IndexOutOfRange("column index out of range");
    }
    if (v.size() != rows_) {
        throw DimensionMismatch("column length does not match row count");
    }
    for (std::size_t i = 0; i < rows_; ++i) {
        (*this)(i, j) = v[i];
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

Matrix Matrix::diag(const std::vector<double>& d) {
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        m(i, i) = d[i];
    }
    return m;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) {
        throw DimensionMismatch("matmul: " + std::to_string(a.rows()) + "x" +
                                std::to_string(a.cols()) + " * " + std::to_string(b.rows()) +
                                "x" + std::to_string(b.cols()));
    }
    Matrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t p = 0; p < a.cols(); ++p) {
            const double aip = a(i, p);
            if (aip == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) {
                out(i, j) += aip * b(p, j);
            }
        }
    }
    return out;
}

Matrix transpose(const Matrix& m) {
    Matrix out(m.cols(), m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            out(j, i) = m(i, j);
        }
    }
    return out;
}

double frobenius_norm(const Matrix& m) {
    double sum = 0.0;
    for (double x : m.data()) {
        sum += x * x;
    }
    return std::sqrt(sum);
}

Matrix concat_rows(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.cols()) {
        throw DimensionMismatch("concat_rows: column counts differ");
    }
    std::vector<double> entries;
    entries.reserve(a.data().size() + b.data().size());
    entries.insert(entries.end(), a.data().begin(), a.data().end());
    entries.insert(entries.end(), b.data().begin(), b.data().end());
    return Matrix(a.rows() + b.rows(), a.cols(), std::move(entries));
}

Matrix slice_rows(const Matrix& m, std::size_t begin, std::size_t end) {
    if (begin >= end || end > m.rows()) {
        throw IndexOutOfRange("slice_rows: bad row range");
    }
    std::vector<double> entries(m.data().begin() + static_cast<std::ptrdiff_t>(begin * m.cols()),
                                m.data().begin() + static_cast<std::ptrdiff_t>(end * m.cols()));
    return Matrix(end - begin, m.cols(), std::move(entries));
}

Matrix add(const Matrix& a, const Matrix& b) {
    if (!a.same_shape(b)) {
        throw DimensionMismatch("add: shapes differ");
    }
    Matrix out = a;
    for (std::size_t i = 0; i < out.data().size(); ++i) {
        out.data()[i] += b.data()[i];
    }
    return out;
}

Matrix subtract(const Matrix& a, const Matrix& b) {
    if (!a.same_shape(b)) {
        throw DimensionMismatch("subtract: shapes differ");
    }
    Matrix out = a;
    for (std::size_t i = 0; i < out.data().size(); ++i) {
        out.data()[i] -= b.data()[i];
    }
    return out;
}

Matrix scale(const Matrix& m, double s) {
    Matrix out = m;
    for (double& x : out.data()) {
        x *= s;
    }
    return out;
}

double symmetry_defect(const Matrix& m) {
    double sum = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            const double d = m(i, j) - m(j, i);
            sum += d * d;
        }
    }
    return std::sqrt(sum);
}

}  // namespace ipsae
