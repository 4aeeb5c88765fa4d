#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace iterboot {

/// A point of the parameter space: a flat vector of finite doubles whose
/// length is fixed at construction.
class ParamVector {
 public:
  ParamVector() = default;
  /// Zero vector of length `dim`.
  explicit ParamVector(std::size_t dim);
  ParamVector(std::size_t dim, double fill);
  ParamVector(std::initializer_list<double> values);
  explicit ParamVector(std::vector<double> values);

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  std::span<const double> view() const noexcept { return values_; }
  std::span<double> view() noexcept { return values_; }
  const std::vector<double>& values() const noexcept { return values_; }

  /// True when every entry is finite.
  bool all_finite() const noexcept;

  friend bool operator==(const ParamVector&, const ParamVector&) = default;

 private:
  std::vector<double> values_;
};

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);
double squared_norm(std::span<const double> a);
ParamVector operator+(const ParamVector& a, const ParamVector& b);
ParamVector operator-(const ParamVector& a, const ParamVector& b);
ParamVector operator*(double s, const ParamVector& a);

/// Dense row-major real matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> diag);
  static Matrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  Matrix transpose() const;
  /// Largest absolute entry.
  double max_abs() const noexcept;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);

/// Symmetric positive semi-definite covariance. Symmetry is checked on
/// construction; positive semi-definiteness only through `check_psd`.
class CovMatrix {
 public:
  CovMatrix() = default;
  explicit CovMatrix(Matrix m);
  static CovMatrix identity(std::size_t n) { return CovMatrix(Matrix::identity(n)); }

  std::size_t dim() const noexcept { return m_.rows(); }
  double operator()(std::size_t r, std::size_t c) const { return m_(r, c); }
  const Matrix& matrix() const noexcept { return m_; }
  double trace() const noexcept;

  /// Throws NumericalError when the smallest eigenvalue is below
  /// -1e-10 * max|entry|.
  void check_psd() const;

 private:
  Matrix m_;
};

ParamVector mat_vec(const Matrix& m, const ParamVector& v);
ParamVector mat_vec(const CovMatrix& m, const ParamVector& v);
/// out = m * v without allocating; `out` must already have m.rows() entries.
void mat_vec_into(const Matrix& m, std::span<const double> v, std::span<double> out);

struct SymmetricEigen {
  std::vector<double> values;  // ascending
  Matrix vectors;              // column j is the eigenvector of values[j]
};

/// Cyclic Jacobi eigendecomposition of a symmetric matrix.
SymmetricEigen symmetric_eigen(const Matrix& m);

/// Symmetric square root via eigendecomposition, negative eigenvalues
/// clamped to zero. Throws NumericalError when an eigenvalue is below
/// -1e-8 * scale.
Matrix symmetric_sqrt(const CovMatrix& m);

}  // namespace iterboot
