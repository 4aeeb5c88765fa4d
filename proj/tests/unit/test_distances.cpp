#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "iterboot/distances.hpp"
#include "iterboot/errors.hpp"
#include "test_support.hpp"

using namespace iterboot;
using namespace iterboot::distances;

namespace {

std::vector<double> normals(std::size_t n, double mean, double sd, std::uint64_t seed) {
  Stream rng(seed, 0, 0);
  std::normal_distribution<double> z(mean, sd);
  std::vector<double> out(n);
  for (auto& x : out) x = z(rng);
  return out;
}

std::vector<double> uniforms(std::size_t n, double hi, std::uint64_t seed) {
  Stream rng(seed, 0, 0);
  std::vector<double> out(n);
  for (auto& x : out) x = hi * rng.uniform_open();
  return out;
}

}  // namespace

TEST(NormalCdf, ReferenceValues) {
  // Values from standard tables (computed at high precision).
  EXPECT_NEAR(std_normal_cdf(0.0), 0.5, 1e-15);
  EXPECT_NEAR(std_normal_cdf(1.0), 0.8413447460685429, 1e-12);
  EXPECT_NEAR(std_normal_cdf(-1.96), 0.024997895148220435, 1e-12);
  EXPECT_NEAR(std_normal_cdf(3.0), 0.9986501019683699, 1e-12);
  EXPECT_NEAR(std_normal_cdf(-8.0), 6.220960574271785e-16, 1e-25);
  EXPECT_NEAR(std_normal_cdf(0.5) * 2 - 1, 0.38292492254802624, 1e-12);
}

TEST(Kolmogorov, ExactNormalSample) {
  const auto x = normals(10000, 0, 1, 1);
  EXPECT_LE(kolmogorov_to_std_normal(x), 1.95 / std::sqrt(10000.0));
}

TEST(Kolmogorov, DegenerateFarRight) {
  const std::vector<double> x(100, 10.0);
  EXPECT_GE(kolmogorov_to_std_normal(x), 0.999);
}

TEST(Kolmogorov, ShiftedNormal) {
  const auto x = normals(10000, 1, 1, 2);
  EXPECT_NEAR(kolmogorov_to_std_normal(x), 2 * std_normal_cdf(0.5) - 1, 0.02);
}

TEST(Kolmogorov, HandComputedTwoPoints) {
  // Points 0 and 1: max(|0.5 - 0.5|, |0 - 0.5|, |1 - Phi(1)|, |0.5 - Phi(1)|) = 0.5.
  const std::vector<double> x{1.0, 0.0};
  EXPECT_NEAR(kolmogorov_to_std_normal(x), 0.5, 1e-15);
  // Points 2 and 3: the jump at 2 dominates, 0.5 - (1 - Phi(2)) is below Phi(2) - 0.5.
  const std::vector<double> y{3.0, 2.0};
  EXPECT_NEAR(kolmogorov_to_std_normal(y), std_normal_cdf(2.0), 1e-15);
}

TEST(Kolmogorov, OrderInvariant) {
  auto x = normals(500, 0.2, 1.3, 3);
  const double base = kolmogorov_to_std_normal(x);
  std::reverse(x.begin(), x.end());
  EXPECT_EQ(kolmogorov_to_std_normal(x), base);
  std::sort(x.begin(), x.end());
  EXPECT_EQ(kolmogorov_to_std_normal(x), base);
}

TEST(Kolmogorov, Preconditions) {
  EXPECT_THROW(kolmogorov_to_std_normal(std::vector<double>{1.0}), std::invalid_argument);
  EXPECT_THROW(kolmogorov_to_std_normal(std::vector<double>{1.0, NAN}), DomainError);
}

TEST(Wasserstein, IdentityAndShift) {
  const auto a = normals(1000, 0, 1, 4);
  EXPECT_EQ(wasserstein1(a, a), 0.0);
  EXPECT_EQ(wasserstein2(a, a), 0.0);
  auto b = a;
  for (auto& x : b) x += 0.75;
  EXPECT_NEAR(wasserstein1(a, b), 0.75, 1e-12);
  EXPECT_NEAR(wasserstein2(b, a), 0.75, 1e-12);
}

TEST(Wasserstein, UniformClosedForm) {
  const auto a = uniforms(100000, 1.0, 5), b = uniforms(100000, 2.0, 6);
  EXPECT_NEAR(wasserstein1(a, b), 0.5, 0.01);
}

TEST(Wasserstein, CenteredNormalsClosedForm) {
  const auto a = normals(100000, 0, 1, 7), b = normals(100000, 0, 2, 8);
  EXPECT_NEAR(wasserstein2(a, b), 1.0, 0.02);
}

TEST(Wasserstein, LengthMismatch) {
  EXPECT_THROW(wasserstein1(std::vector<double>{1, 2}, std::vector<double>{1}), DimensionError);
  EXPECT_THROW(wasserstein2(std::vector<double>{1, 2}, std::vector<double>{1}), DimensionError);
}

TEST(Wasserstein, MetricAxiomsOnRandomTriples) {
  Stream rng(9, 0, 0);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 5 + t;
    std::vector<double> a(n), b(n), c(n);
    std::normal_distribution<double> z;
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = z(rng);
      b[i] = 2 * z(rng) + 0.5;
      c[i] = std::exp(z(rng));
    }
    for (auto w : {&wasserstein1, &wasserstein2}) {
      EXPECT_EQ((*w)(a, b), (*w)(b, a));
      EXPECT_LE((*w)(a, c), (*w)(a, b) + (*w)(b, c) + 1e-12);
    }
    EXPECT_LE(wasserstein1(a, b), wasserstein2(a, b) + 1e-15);
    EXPECT_LE(wasserstein1(a, c), wasserstein2(a, c) + 1e-15);
  }
}

TEST(Wasserstein, BootstrapSeScalesWithSampleSize) {
  Stream rng(10, 0, 0);
  auto a = normals(1000, 0, 1, 11), b = normals(1000, 0, 1, 12);
  auto big_a = normals(16000, 0, 1, 13), big_b = normals(16000, 0, 1, 14);
  const double small = wasserstein1_bootstrap_se(a, b, 200, rng);
  const double big = wasserstein1_bootstrap_se(big_a, big_b, 200, rng);
  EXPECT_GT(small, 0.0);
  EXPECT_LT(big, small);
}
