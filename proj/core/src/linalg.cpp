#include "iterboot/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "iterboot/errors.hpp"

namespace iterboot {

namespace {

void require_finite(std::span<const double> v) {
  for (double x : v) {
    if (!std::isfinite(x)) throw DomainError("ParamVector entries must be finite");
  }
}

void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": size " + std::to_string(a) +
                         " vs " + std::to_string(b));
  }
}

}  // namespace

ParamVector::ParamVector(std::size_t dim) : values_(dim, 0.0) {}

ParamVector::ParamVector(std::size_t dim, double fill) : values_(dim, fill) {
  require_finite(values_);
}

ParamVector::ParamVector(std::initializer_list<double> values) : values_(values) {
  require_finite(values_);
}

ParamVector::ParamVector(std::vector<double> values) : values_(std::move(values)) {
  require_finite(values_);
}

bool ParamVector::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double x) { return std::isfinite(x); });
}

double dot(std::span<const double> a, std::span<const double> b) {
  require_same_size(a.size(), b.size(), "dot");
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double squared_norm(std::span<const double> a) { return dot(a, a); }

double norm(std::span<const double> a) { return std::sqrt(squared_norm(a)); }

ParamVector operator+(const ParamVector& a, const ParamVector& b) {
  require_same_size(a.size(), b.size(), "operator+");
  ParamVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

ParamVector operator-(const ParamVector& a, const ParamVector& b) {
  require_same_size(a.size(), b.size(), "operator-");
  ParamVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

ParamVector operator*(double s, const ParamVector& a) {
  ParamVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = s * a[i];
  return out;
}

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> diag) {
  Matrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return {};
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    require_same_size(rows[r].size(), m.cols(), "Matrix::from_rows");
    for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = rows[r][c];
  }
  return m;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

double Matrix::max_abs() const noexcept {
  double m = 0.0;
  for (double x : data_) m = std::max(m, std::abs(x));
  return m;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  require_same_size(a.cols(), b.rows(), "Matrix product");
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  require_same_size(a.rows(), b.rows(), "Matrix sum");
  require_same_size(a.cols(), b.cols(), "Matrix sum");
  Matrix out = a;
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) out(r, c) += b(r, c);
  return out;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  require_same_size(a.rows(), b.rows(), "Matrix difference");
  require_same_size(a.cols(), b.cols(), "Matrix difference");
  Matrix out = a;
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) out(r, c) -= b(r, c);
  return out;
}

CovMatrix::CovMatrix(Matrix m) : m_(std::move(m)) {
  require_same_size(m_.rows(), m_.cols(), "CovMatrix must be square");
  const double scale = std::max(1.0, m_.max_abs());
  for (std::size_t r = 0; r < m_.rows(); ++r)
    for (std::size_t c = r + 1; c < m_.cols(); ++c)
      if (std::abs(m_(r, c) - m_(c, r)) > 1e-12 * scale)
        throw NumericalError("CovMatrix is not symmetric");
}

double CovMatrix::trace() const noexcept {
  double t = 0.0;
  for (std::size_t i = 0; i < m_.rows(); ++i) t += m_(i, i);
  return t;
}

void CovMatrix::check_psd() const {
  if (dim() == 0) return;
  const auto eig = symmetric_eigen(m_);
  if (eig.values.front() < -1e-10 * m_.max_abs())
    throw NumericalError("CovMatrix is not positive semi-definite");
}

void mat_vec_into(const Matrix& m, std::span<const double> v, std::span<double> out) {
  require_same_size(m.cols(), v.size(), "mat_vec");
  require_same_size(m.rows(), out.size(), "mat_vec output");
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto row = m.row(r);
    out[r] = std::inner_product(row.begin(), row.end(), v.begin(), 0.0);
  }
}

ParamVector mat_vec(const Matrix& m, const ParamVector& v) {
  ParamVector out(m.rows());
  mat_vec_into(m, v.view(), out.view());
  return out;
}

ParamVector mat_vec(const CovMatrix& m, const ParamVector& v) { return mat_vec(m.matrix(), v); }

SymmetricEigen symmetric_eigen(const Matrix& input) {
  require_same_size(input.rows(), input.cols(), "symmetric_eigen");
  const std::size_t n = input.rows();
  Matrix a = input;
  Matrix v = Matrix::identity(n);

  auto off_diagonal = [&] {
    double s = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) s += a(p, q) * a(p, q);
    return s;
  };
  const double total = [&] {
    double s = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = 0; q < n; ++q) s += a(p, q) * a(p, q);
    return s;
  }();

  for (int sweep = 0; sweep < 100; ++sweep) {
    if (off_diagonal() <= 1e-30 * std::max(total, 1e-300)) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });

  SymmetricEigen out{std::vector<double>(n), Matrix(n, n)};
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = a(order[j], order[j]);
    for (std::size_t k = 0; k < n; ++k) out.vectors(k, j) = v(k, order[j]);
  }
  return out;
}

Matrix symmetric_sqrt(const CovMatrix& m) {
  const std::size_t n = m.dim();
  const auto eig = symmetric_eigen(m.matrix());
  const double scale = std::max(1e-300, m.matrix().max_abs());
  Matrix out(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double lambda = eig.values[j];
    if (lambda < -1e-8 * scale) throw NumericalError("covariance has a negative eigenvalue");
    const double root = std::sqrt(std::max(lambda, 0.0));
    if (root == 0.0) continue;
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c)
        out(r, c) += root * eig.vectors(r, j) * eig.vectors(c, j);
  }
  return out;
}

}  // namespace iterboot
