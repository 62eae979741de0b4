#pragma once

#include <cstddef>
#include <vector>

#include "ipsae/errors.hpp"

namespace ipsae {

/// Dense real matrix, row-major, double precision. The substrate for every
/// space in the pipeline (features, attributes, enriched space, weights).
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    bool same_shape(const Matrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }
    bool operator==(const Matrix& other) const = default;

    std::vector<double> col(std::size_t j) const;
    void set_col(std::size_t j, const std::vector<double>& v);

    static Matrix identity(std::size_t n);
    static Matrix diag(const std::vector<double>& d);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& m);
double frobenius_norm(const Matrix& m);

/// Stacks a on top of b (columns must agree).
Matrix concat_rows(const Matrix& a, const Matrix& b);
/// Rows [begin, end) of m.
Matrix slice_rows(const Matrix& m, std::size_t begin, std::size_t end);

Matrix add(const Matrix& a, const Matrix& b);
Matrix subtract(const Matrix& a, const Matrix& b);
Matrix scale(const Matrix& m, double s);

/// ‖M − Mᵀ‖_F; 0 for non-square is not defined, caller checks squareness.
double symmetry_defect(const Matrix& m);

}  // namespace ipsae
