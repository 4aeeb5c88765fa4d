#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "iterboot/errors.hpp"
#include "iterboot/linalg.hpp"
#include "test_support.hpp"

using namespace iterboot;

TEST(ParamVector, RejectsNonFinite) {
  EXPECT_THROW(ParamVector({1.0, std::numeric_limits<double>::quiet_NaN()}), DomainError);
  EXPECT_THROW(ParamVector(std::vector<double>{std::numeric_limits<double>::infinity()}), DomainError);
  EXPECT_NO_THROW(ParamVector(3, 2.0));
}

TEST(ParamVector, Arithmetic) {
  ParamVector a{1, 2, 3}, b{4, 5, 6};
  EXPECT_EQ(a + b, (ParamVector{5, 7, 9}));
  EXPECT_EQ(b - a, (ParamVector{3, 3, 3}));
  EXPECT_EQ(2.0 * a, (ParamVector{2, 4, 6}));
  EXPECT_DOUBLE_EQ(dot(a.view(), b.view()), 32.0);
  EXPECT_DOUBLE_EQ(squared_norm(a.view()), 14.0);
  EXPECT_THROW(a + ParamVector{1.0}, DimensionError);
}

TEST(MatVec, IdentityZeroDiagonal) {
  ParamVector v{1.5, -2.0, 3.25};
  EXPECT_EQ(mat_vec(CovMatrix::identity(3), v), v);
  EXPECT_EQ(mat_vec(Matrix(3, 3, 0.0), v), ParamVector(3));
  const double diag[] = {1, 2, 3};
  EXPECT_EQ(mat_vec(Matrix::diagonal(diag), ParamVector(3, 1.0)), (ParamVector{1, 2, 3}));
  EXPECT_THROW(mat_vec(Matrix(2, 3), ParamVector(2)), DimensionError);
}

TEST(CovMatrix, SymmetryAndPsd) {
  EXPECT_THROW(CovMatrix(Matrix::from_rows({{1, 0.5}, {0.4, 1}})), NumericalError);
  CovMatrix ok(Matrix::from_rows({{2, 1}, {1, 2}}));
  EXPECT_NO_THROW(ok.check_psd());
  EXPECT_DOUBLE_EQ(ok.trace(), 4.0);
  CovMatrix indefinite(Matrix::from_rows({{1, 2}, {2, 1}}));
  EXPECT_THROW(indefinite.check_psd(), NumericalError);
}

TEST(SymmetricEigen, ReconstructsRandomMatrices) {
  Stream rng(7, 0, 0);
  for (std::size_t d : {1u, 2u, 5u, 12u, 30u}) {
    Matrix g(d, d);
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < d; ++c) g(r, c) = rng.uniform_open() - 0.5;
    const Matrix s = g + g.transpose();
    const auto eig = symmetric_eigen(s);
    for (std::size_t i = 1; i < d; ++i) EXPECT_LE(eig.values[i - 1], eig.values[i]);
    Matrix lambda = Matrix::diagonal(eig.values);
    const Matrix back = eig.vectors * lambda * eig.vectors.transpose();
    EXPECT_LT((back - s).max_abs(), 1e-11) << "d=" << d;
    const Matrix gram = eig.vectors.transpose() * eig.vectors;
    EXPECT_LT((gram - Matrix::identity(d)).max_abs(), 1e-12);
  }
}

TEST(SymmetricSqrt, SquaresBack) {
  Stream rng(8, 0, 0);
  const std::size_t d = 6;
  Matrix g(d, d);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) g(r, c) = rng.uniform_open() - 0.5;
  const CovMatrix cov(g * g.transpose());
  const Matrix root = symmetric_sqrt(cov);
  EXPECT_LT((root * root - cov.matrix()).max_abs(), 1e-12);
  EXPECT_LT((root - root.transpose()).max_abs(), 1e-14);
}

TEST(SymmetricSqrt, RejectsClearlyNegative) {
  EXPECT_THROW(symmetric_sqrt(CovMatrix(Matrix::from_rows({{1, 0}, {0, -1}}))), NumericalError);
  const Matrix root = symmetric_sqrt(CovMatrix(Matrix::from_rows({{1, 0}, {0, -1e-14}})));
  EXPECT_DOUBLE_EQ(root(1, 1), 0.0);
}
