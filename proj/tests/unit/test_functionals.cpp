#include <gtest/gtest.h>

#include <cmath>

#include "iterboot/errors.hpp"
#include "iterboot/functionals.hpp"
#include "iterboot/gaussian.hpp"
#include "iterboot/models.hpp"
#include "test_support.hpp"

using namespace iterboot;
using namespace iterboot::functionals;

TEST(Functional, ValueExamples) {
  EXPECT_DOUBLE_EQ(Functional::linear(ParamVector{1, 0}).value(ParamVector{3, 0}), 3.0);
  const auto flat = Functional::exp_linear(ParamVector(3));
  EXPECT_DOUBLE_EQ(flat.value(ParamVector{5, -2, 1}), 1.0);
  EXPECT_DOUBLE_EQ(Functional::power(ParamVector{1, 1}, 3).value(ParamVector{1, 2}), 27.0);
  EXPECT_DOUBLE_EQ(Functional::squared_norm(2).value(ParamVector{3, 4}), 25.0);
  EXPECT_DOUBLE_EQ(Functional::quadratic_form(Matrix::from_rows({{1, 2}, {0, 3}})).value(ParamVector{1, 1}), 6.0);
  EXPECT_DOUBLE_EQ(Functional::radial(2, RadialProfile::neg_exp).value(ParamVector{1, 1}), std::exp(-2.0));
  EXPECT_DOUBLE_EQ(Functional::radial(2, RadialProfile::log1p).value(ParamVector{1, 1}), std::log(3.0));
}

TEST(Functional, GradExamples) {
  const ParamVector u{0.3, -2.0};
  EXPECT_EQ(Functional::linear(u).grad(ParamVector{7, 8}), u);
  EXPECT_EQ(Functional::squared_norm(2).grad(ParamVector{1, 2}), (ParamVector{2, 4}));
  EXPECT_EQ(Functional::power(ParamVector{1, 0}, 2).grad(ParamVector{3, 5}), (ParamVector{6, 0}));
  // Non-symmetric Q uses (Q + Q^T) theta.
  EXPECT_EQ(Functional::quadratic_form(Matrix::from_rows({{1, 2}, {0, 3}})).grad(ParamVector{1, 1}),
            (ParamVector{4, 8}));
}

TEST(Functional, DimensionMismatch) {
  EXPECT_THROW(Functional::linear(ParamVector{1, 0}).value(ParamVector{1}), DimensionError);
  EXPECT_THROW(Functional::power(ParamVector{1}, 0), std::invalid_argument);
}

TEST(GradCheck, Examples) {
  Stream rng(1, 0, 0);
  const auto theta = tu::random_point(4, 3.0, rng);
  EXPECT_LE(grad_check(Functional::linear(ParamVector{1, -1, 2, 0.5}), theta), 1e-9);
  EXPECT_LE(grad_check(Functional::exp_linear(tu::uniform_direction(4)), ParamVector(4)), 1e-7);
  EXPECT_LE(grad_check(Functional::squared_norm(4), theta), 1e-8);
}

TEST(GradCheck, AllBuiltinsOnRandomPoints) {
  const std::size_t d = 4;
  const ParamVector u = tu::uniform_direction(d);
  Matrix q(d, d);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) q(r, c) = std::sin(1.0 + r + 3.0 * c);
  const std::vector<Functional> fs = {
      Functional::linear(u),         Functional::power(u, 3),
      Functional::power(u, 4),       Functional::quadratic_form(q),
      Functional::squared_norm(d),   Functional::exp_linear(0.3 * u),
      Functional::radial(d, RadialProfile::neg_exp), Functional::radial(d, RadialProfile::log1p)};
  Stream rng(2, 0, 0);
  for (const auto& f : fs) {
    EXPECT_TRUE(std::isinf(f.smoothness()));
    for (int i = 0; i < 100; ++i) {
      const auto theta = tu::random_point(d, 10.0, rng);
      ASSERT_LE(grad_check(f, theta), 1e-6) << f.name() << " at i=" << i;
    }
  }
}

TEST(SigmaF, NonnegativeAndNormOfGradientUnderIdentity) {
  const std::size_t d = 3;
  const auto model = models::ModelSpec::gaussian_shift(models::ScalingMap::scalar(d, 1.0));
  const auto tanh_model = models::ModelSpec::gaussian_shift(models::ScalingMap::diagonal_tanh({1, 2, 3}, {0.5, 1, -2}));
  Stream rng(3, 0, 0);
  for (const auto& f : {Functional::power(tu::uniform_direction(d), 3), Functional::squared_norm(d),
                        Functional::radial(d, RadialProfile::log1p)}) {
    for (int i = 0; i < 50; ++i) {
      const auto theta = tu::random_point(d, 2.0, rng);
      EXPECT_NEAR(gaussian::sigma_f(model, f, theta), norm(f.grad(theta).view()), 1e-12);
      EXPECT_GE(gaussian::sigma_f(tanh_model, f, theta), 0.0);
    }
  }
}
