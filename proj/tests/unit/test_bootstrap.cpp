#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "iterboot/bootstrap.hpp"
#include "iterboot/distances.hpp"
#include "iterboot/errors.hpp"
#include "test_support.hpp"

using namespace iterboot;
using namespace iterboot::bootstrap;
using functionals::Functional;
using models::ModelSpec;
using models::ScalingMap;

namespace {

// Binomial coefficient by the multiplicative formula, independent of the table.
std::int64_t choose(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

ModelSpec shift(std::size_t d, double sigma) { return ModelSpec::gaussian_shift(ScalingMap::scalar(d, sigma)); }

std::vector<ChainPath> chains_from(const ModelSpec& model, const ParamVector& start, int k, std::size_t n,
                                   std::size_t count, std::uint64_t seed) {
  std::vector<ChainPath> out;
  for (std::size_t c = 0; c < count; ++c) {
    Stream rng = derive_stream(seed, 0, c);
    out.push_back(simulate_chain(model, start, k, n, rng));
  }
  return out;
}

}  // namespace

TEST(Weights, Examples) {
  EXPECT_EQ(difference_weights(1).weights, (std::vector<std::int64_t>{-1, 1}));
  EXPECT_EQ(difference_weights(2).weights, (std::vector<std::int64_t>{1, -2, 1}));
  EXPECT_EQ(collapsed_weights(2).weights, (std::vector<std::int64_t>{3, -3, 1}));
  EXPECT_EQ(collapsed_weights(0).weights, (std::vector<std::int64_t>{1}));
  EXPECT_THROW(difference_weights(-1), std::out_of_range);
  EXPECT_THROW(collapsed_weights(kMaxOrder + 1), std::out_of_range);
}

TEST(Weights, MatchDirectDoubleSum) {
  for (int k = 0; k <= kMaxOrder; ++k) {
    const auto w = difference_weights(k).weights;
    const auto v = collapsed_weights(k).weights;
    std::int64_t wsum = 0, vsum = 0;
    for (int j = 0; j <= k; ++j) {
      EXPECT_EQ(w[j], ((k - j) % 2 ? -1 : 1) * choose(k, j));
      wsum += w[j];
    }
    if (k >= 1) EXPECT_EQ(wsum, 0) << k;
    for (int i = 0; i <= k; ++i) {
      // sum_j (-1)^j * [coefficient of f(theta^(i)) in the order-j difference]
      std::int64_t direct = 0;
      for (int j = i; j <= k; ++j) direct += (j % 2 ? -1 : 1) * ((j - i) % 2 ? -1 : 1) * choose(j, i);
      EXPECT_EQ(v[i], direct) << "k=" << k << " i=" << i;
      EXPECT_EQ(v[i], (i % 2 ? -1 : 1) * choose(k + 1, i + 1));
      vsum += v[i];
    }
    EXPECT_EQ(vsum, 1) << k;
  }
}

TEST(SimulateChain, DegenerateCases) {
  const ParamVector start{0.5, -0.5};
  Stream rng(1, 0, 0);
  const auto p0 = simulate_chain(shift(2, 1.0), start, 0, 10, rng);
  ASSERT_EQ(p0.length(), 0u);
  EXPECT_EQ(p0.start(), start);
  const auto frozen = simulate_chain(shift(2, 0.0), start, 4, 10, rng);
  ASSERT_EQ(frozen.length(), 4u);
  for (const auto& s : frozen.states) EXPECT_EQ(s, start);
}

TEST(SimulateChain, GaussianIncrementVariance) {
  const std::size_t n = 50, d = 2;
  const auto paths = chains_from(shift(d, 1.0), ParamVector{1.0, 2.0}, 3, n, 10000, 2);
  for (std::size_t step = 0; step < 3; ++step)
    for (std::size_t i = 0; i < d; ++i) {
      std::vector<double> sq;
      for (const auto& p : paths) {
        const double inc = p.states[step + 1][i] - p.states[step][i];
        sq.push_back(inc * inc);
      }
      const auto ms = tu::mean_se(sq);
      EXPECT_NEAR(ms.mean, 1.0 / n, 5 * ms.se);
    }
}

TEST(EstimateBjf, QuadraticAndLinearOracles) {
  const std::size_t d = 4, n = 25;
  const double s = 1.5;
  const auto model = shift(d, s);
  const ParamVector theta = tu::sine_theta(d);
  Stream rng(3, 0, 0);
  const auto b1 = estimate_Bjf(model, Functional::squared_norm(d), theta, 1, n, 20000, rng);
  EXPECT_NEAR(b1.mean, s * s * d / n, 4 * b1.se);
  const auto b2 = estimate_Bjf(model, Functional::squared_norm(d), theta, 2, n, 20000, rng);
  EXPECT_NEAR(b2.mean, 0.0, 4 * b2.se);
  for (int j = 1; j <= 3; ++j) {
    const auto bl = estimate_Bjf(model, Functional::linear(tu::uniform_direction(d)), theta, j, n, 5000, rng);
    EXPECT_NEAR(bl.mean, 0.0, 4 * bl.se + 1e-15) << j;
  }
  EXPECT_THROW(estimate_Bjf(model, Functional::squared_norm(d), theta, 1, n, 1, rng), std::invalid_argument);
}

TEST(FkEstimate, TelescopingEquivalence) {
  const std::size_t d = 3;
  const auto f = Functional::exp_linear(tu::uniform_direction(d));
  const auto model = ModelSpec::gaussian_shift(ScalingMap::diagonal_tanh({1, 1.5, 2}, {0.5, -0.5, 1}));
  for (int k = 0; k <= 6; ++k) {
    const auto paths = chains_from(model, tu::sine_theta(d), k, 20, 300, 4 + k);
    const double collapsed = fk_from_chains(f, paths, k);
    const double per_order = neumann_sum_from_chains(f, paths, k);
    EXPECT_NEAR(collapsed, per_order, 1e-12 * std::max(1.0, std::abs(collapsed))) << k;
  }
}

TEST(FkEstimate, KZeroIsPlugIn) {
  const auto f = Functional::squared_norm(2);
  Stream rng(5, 0, 0);
  const ParamVector at{1.0, 3.0};
  const auto r = fk_estimate_at(shift(2, 1.0), f, at, 0, 100, 50, rng);
  EXPECT_EQ(r.value, 10.0);
  EXPECT_EQ(r.chains_used, 0u);
  models::Data data{100, at, {at}};
  EXPECT_EQ(fk_estimate(shift(2, 1.0), f, data, 0, 100, 50, rng).value, 10.0);
}

TEST(FkEstimate, QuadraticKOneClosedForm) {
  const std::size_t d = 5, n = 40, M = 10000;
  const double s = 0.8;
  const auto model = shift(d, s);
  const auto f = Functional::squared_norm(d);
  const ParamVector theta_hat = tu::sine_theta(d, 1.3);
  Stream rng(6, 0, 0);
  const auto est = fk_estimate_at(model, f, theta_hat, 1, n, M, rng);
  EXPECT_EQ(est.chains_used, M);
  // Replay the exact chains to get the per-chain spread.
  std::vector<double> per_chain;
  for (std::size_t c = 0; c < M; ++c) {
    Stream crng = rng.fork(static_cast<std::uint32_t>(c + 1));
    const auto p = simulate_chain(model, theta_hat, 1, n, crng);
    per_chain.push_back(2 * f.value(p.states[0]) - f.value(p.states[1]));
  }
  const auto ms = tu::mean_se(per_chain);
  EXPECT_NEAR(ms.mean, est.value, 1e-12);
  EXPECT_NEAR(est.value, f.value(theta_hat) - s * s * d / n, 4 * ms.se);
}

TEST(FkEstimate, DeterministicForFixedStream) {
  const auto model = shift(3, 1.0);
  const auto f = Functional::power(tu::uniform_direction(3), 3);
  Stream a(7, 4, 0), b(7, 4, 0);
  EXPECT_EQ(fk_estimate_at(model, f, ParamVector{0.1, 0.2, 0.3}, 3, 30, 100, a).value,
            fk_estimate_at(model, f, ParamVector{0.1, 0.2, 0.3}, 3, 30, 100, b).value);
}

TEST(FkEstimate, AbortsBeyondOnePercentThrow) {
  const auto model = ModelSpec::exponential_family(models::ExpFamily::poisson_product, 1);
  const auto f = Functional::linear(ParamVector{1.0});
  Stream rng(8, 0, 0);
  // n * exp(theta) far beyond the sampler range: every chain aborts on its first step.
  EXPECT_THROW(fk_estimate_at(model, f, ParamVector{30.0}, 1, 100000, 50, rng), EstimationError);
}

// E f_k(theta_hat) = f(theta) exactly whenever B^{k+1} f = 0.
struct UnbiasedCase {
  const char* name;
  int power;  // 2 means |theta|^2, otherwise <u, theta>^power
  int k;
};

class ExactUnbiasedness : public ::testing::TestWithParam<UnbiasedCase> {};

TEST_P(ExactUnbiasedness, MeanErrorWithinFourSe) {
  const auto c = GetParam();
  const std::size_t d = 3, n = 50, R = 20000, M = 20;
  const auto model = shift(d, 1.0);
  const ParamVector theta = tu::sine_theta(d);
  const auto f = c.power == 2 ? Functional::squared_norm(d) : Functional::power(tu::uniform_direction(d), c.power);
  std::vector<double> errs(R);
  for (std::size_t r = 0; r < R; ++r) {
    Stream rng = derive_stream(9, r, 0);
    const auto data = models::sample_data(model, theta, n, rng, {.keep_observations = false});
    errs[r] = fk_estimate(model, f, data, c.k, n, M, rng).value - f.value(theta);
  }
  const auto ms = tu::mean_se(errs);
  EXPECT_NEAR(ms.mean, 0.0, 4 * ms.se) << c.name;
}

INSTANTIATE_TEST_SUITE_P(Battery, ExactUnbiasedness,
                         ::testing::Values(UnbiasedCase{"quadratic", 2, 1}, UnbiasedCase{"cubic", 3, 1},
                                           UnbiasedCase{"quartic", 4, 2}));

TEST(ChainReuse, PrefixMatchesFreshChain) {
  const std::size_t d = 3, n = 30, M = 20000;
  const auto model = ModelSpec::gaussian_shift(ScalingMap::diagonal_tanh({1, 1, 1}, {0.6, -0.6, 0.3}));
  const ParamVector theta = tu::sine_theta(d);
  const auto f = Functional::radial(d, functionals::RadialProfile::log1p);
  const auto long_chains = chains_from(model, theta, 3, n, M, 10);
  for (int j = 1; j <= 2; ++j) {
    const auto fresh = chains_from(model, theta, j, n, M, 20 + j);
    std::vector<double> a(M), b(M);
    for (std::size_t c = 0; c < M; ++c) {
      a[c] = f.value(long_chains[c].states[j]);
      b[c] = f.value(fresh[c].end());
    }
    Stream brng(30, 0, 0);
    const double band = 0.01 + 3 * distances::wasserstein1_bootstrap_se(a, b, 200, brng);
    EXPECT_LE(distances::wasserstein1(a, b), band) << j;
  }
}

TEST(BiasOracleExp, ClosedFormValues) {
  const ParamVector u{1.0, 0.0, 0.0};
  const ParamVector zero(3);
  EXPECT_NEAR(bias_oracle_exp(zero, u, 1.0, 100, 0), 5.0125e-3, 1e-7);
  EXPECT_NEAR(bias_oracle_exp(zero, u, 1.0, 100, 0), std::expm1(0.005), 1e-18);
  EXPECT_NEAR(bias_oracle_exp(zero, u, 1.0, 100, 1), 2.5125e-5, 1e-9);
  EXPECT_EQ(bias_oracle_exp(zero, u, 0.0, 100, 3), 0.0);
  const ParamVector theta{0.5, 1.0, -1.0};
  EXPECT_NEAR(bias_oracle_exp(theta, u, 2.0, 10, 2), std::exp(0.5) * std::pow(std::expm1(0.1), 3), 1e-15);
}

TEST(BiasOracleExp, OneDimensionalMgfCheck) {
  // Tf(theta) = E exp(u (theta + sigma Z / sqrt n)) = f(theta) e^a.
  const double u = 1.0, sigma = 1.0, theta = 0.2;
  const std::size_t n = 100, draws = 1000000;
  Stream rng(11, 0, 0);
  std::normal_distribution<double> z;
  std::vector<double> xs(draws);
  for (auto& x : xs) x = std::exp(u * (theta + sigma * z(rng) / std::sqrt(double(n))));
  const auto ms = tu::mean_se(xs);
  const double tf = std::exp(u * theta) * std::exp(sigma * sigma * u * u / (2.0 * n));
  EXPECT_NEAR(ms.mean, tf, 4 * ms.se);
  // The bias oracle is Tf - f.
  EXPECT_NEAR(ms.mean - std::exp(u * theta), bias_oracle_exp(ParamVector{theta}, ParamVector{u}, 1.0, n, 0),
              4 * ms.se);
}

TEST(BiasDecay, RatioMatchesGeometry) {
  // a = sigma^2 |u|^2 / (2n) = 0.5 so the biases are large enough to measure.
  const double sigma = 1.0;
  const std::size_t n = 1, R = 100000, M = 10;
  const auto model = shift(1, sigma);
  const ParamVector u{1.0}, theta{0.0};
  const auto f = Functional::exp_linear(u);
  const double ea = std::exp(0.5) - 1.0;
  std::vector<std::vector<double>> errs(3, std::vector<double>(R));
  for (std::size_t r = 0; r < R; ++r) {
    Stream rng = derive_stream(12, r, 0);
    const auto data = models::sample_data(model, theta, n, rng, {.keep_observations = false});
    for (int k = 0; k <= 2; ++k) errs[k][r] = fk_estimate(model, f, data, k, n, M, rng).value - f.value(theta);
  }
  std::vector<tu::MeanSe> ms;
  for (const auto& e : errs) ms.push_back(tu::mean_se(e));
  for (int k = 0; k <= 2; ++k) {
    const double oracle = (k % 2 ? -1.0 : 1.0) * bias_oracle_exp(theta, u, sigma * sigma, n, k);
    EXPECT_NEAR(ms[k].mean, oracle, 4 * ms[k].se) << k;
  }
  for (int k = 1; k <= 2; ++k) {
    const double ratio = std::abs(ms[k].mean) / std::abs(ms[k - 1].mean);
    EXPECT_GE(ratio, 0.5 * ea) << k;
    EXPECT_LE(ratio, 2.0 * ea) << k;
  }
}
