#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mdplab {

using Vector = std::vector<double>;

/// Dense row-major matrix of doubles. The workhorse carrier for transition
/// matrices, resolvents, group inverses and reward tables.
class Matrix {
  public:
    Matrix() = default;
    Matrix(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, fill) {
        if (rows < 0 || cols < 0) throw std::invalid_argument("Matrix: negative dimension");
    }

    /// Builds a matrix from nested initializer rows; all rows must have equal length.
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(int n);
    /// Rank-one matrix with every row equal to `row` (e row^T).
    static Matrix rows_equal_to(const Vector& row);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    double& operator()(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return data_[static_cast<size_t>(i) * cols_ + j]; }

    std::span<double> row(int i) { return {data_.data() + static_cast<size_t>(i) * cols_, static_cast<size_t>(cols_)}; }
    std::span<const double> row(int i) const {
        return {data_.data() + static_cast<size_t>(i) * cols_, static_cast<size_t>(cols_)};
    }

    const std::vector<double>& data() const { return data_; }

    Matrix& operator+=(const Matrix& other);
    Matrix& operator-=(const Matrix& other);
    Matrix& operator*=(double scalar);

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(Matrix a, double s) { return a *= s; }
    friend Matrix operator*(double s, Matrix a) { return a *= s; }

  private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);

/// y = A x
Vector mat_vec(const Matrix& a, const Vector& x);
/// y^T = x^T A  (equivalently y = A^T x)
Vector vec_mat(const Vector& x, const Matrix& a);

Matrix transpose(const Matrix& a);
double trace(const Matrix& a);

double max_abs(const Matrix& a);
double max_abs_diff(const Matrix& a, const Matrix& b);
/// Largest absolute row sum.
double inf_norm(const Matrix& a);

double l1_norm(const Vector& v);
double linf_norm(const Vector& v);
double dot(const Vector& a, const Vector& b);
double l1_diff(const Vector& a, const Vector& b);
double linf_diff(const Vector& a, const Vector& b);
double sum(const Vector& v);

} // namespace mdplab
