#include <gtest/gtest.h>

#include <cmath>

#include "iterboot/experiments.hpp"
#include "iterboot/gaussian.hpp"
#include "test_support.hpp"

using namespace iterboot;
using namespace iterboot::experiments;

namespace {

ExperimentConfig base_config() {
  ExperimentConfig cfg;
  cfg.model.kind = ModelRecipe::Kind::gaussian_shift;
  cfg.functional.kind = functionals::Kind::quadratic_form;
  cfg.k = 1;
  cfg.ns = {100};
  cfg.dimension.fixed = 4;
  cfg.chains = 50;
  cfg.replicates = 2000;
  cfg.seed = 2024;
  return cfg;
}

void expect_same(const TrialSummary& a, const TrialSummary& b) {
  EXPECT_EQ(a.n, b.n);
  EXPECT_EQ(a.d, b.d);
  EXPECT_EQ(a.k, b.k);
  EXPECT_EQ(a.bias, b.bias);
  EXPECT_EQ(a.se_bias, b.se_bias);
  EXPECT_EQ(a.sd, b.sd);
  EXPECT_EQ(a.rmse, b.rmse);
  EXPECT_EQ(a.sigma_f, b.sigma_f);
  EXPECT_EQ(a.d_k, b.d_k);
  EXPECT_EQ(a.aborts, b.aborts);
}

}  // namespace

TEST(Summarize, RmseDecomposition) {
  Stream rng(1, 0, 0);
  std::vector<double> errs(777);
  for (auto& e : errs) e = 0.3 + rng.uniform_open();
  const auto s = summarize(errs, 100, 3, 1, 2.0, 0, errs.size());
  const double R = errs.size();
  EXPECT_NEAR(s.rmse * s.rmse, s.bias * s.bias + s.sd * s.sd * (R - 1) / R, 1e-12);
  EXPECT_NEAR(s.se_bias, s.sd / std::sqrt(R), 1e-15);
  EXPECT_NEAR(s.sqrt_n_rmse, 10 * s.rmse, 1e-14);
  EXPECT_FALSE(s.failed);
}

TEST(Summarize, AbortThreshold) {
  const std::vector<double> errs(990, 0.1);
  EXPECT_FALSE(summarize(errs, 10, 1, 0, 1.0, 10, 1000).failed);
  EXPECT_TRUE(summarize(errs, 10, 1, 0, 1.0, 11, 1000).failed);
}

TEST(RateFit, ExactPowerLaws) {
  const std::vector<double> ns{100, 200, 400, 800, 1600};
  std::vector<double> half, one;
  for (double n : ns) {
    half.push_back(3.0 / std::sqrt(n));
    one.push_back(0.5 / n);
  }
  const auto a = rate_fit(ns, half);
  EXPECT_NEAR(a.slope, -0.5, 1e-10);
  EXPECT_NEAR(a.r2, 1.0, 1e-10);
  EXPECT_NEAR(std::exp(a.intercept), 3.0, 1e-9);
  EXPECT_NEAR(rate_fit(ns, one).slope, -1.0, 1e-10);
  EXPECT_THROW(rate_fit(std::vector<double>{1, 2}, std::vector<double>{1, 1}), std::invalid_argument);
  EXPECT_THROW(rate_fit(ns, std::vector<double>{1, 1, 0, 1, 1}), std::invalid_argument);
  EXPECT_NEAR(log_log_fit(std::vector<double>{4, 16}, std::vector<double>{1, 0.5}).slope, -0.5, 1e-12);
}

TEST(DimensionRule, CeilingWithExactPowers) {
  DimensionRule r;
  r.alpha = 0.4;
  EXPECT_EQ(r.dim_for(250), 10u);   // 250^0.4 = 9.11
  EXPECT_EQ(r.dim_for(1024), 16u);  // exact
  EXPECT_EQ(r.dim_for(4000), 28u);  // 27.5
  r.alpha.reset();
  r.fixed = 7;
  EXPECT_EQ(r.dim_for(5), 7u);
}

TEST(ThetaRule, SineRuleHasRequestedNorm) {
  ThetaRule t;
  t.norm = 2.5;
  const auto theta = t.build(9);
  EXPECT_NEAR(norm(theta.view()), 2.5, 1e-12);
  const auto expected = tu::sine_theta(9, 2.5);
  for (std::size_t i = 0; i < 9; ++i) EXPECT_NEAR(theta[i], expected[i], 1e-14);
}

TEST(Validate, Preconditions) {
  auto cfg = base_config();
  EXPECT_NO_THROW(validate(cfg, "risk"));
  EXPECT_THROW(validate(cfg, "bogus"), ConfigError);
  EXPECT_THROW(validate(cfg, "sweep"), ConfigError);
  EXPECT_THROW(validate(cfg, "normality"), ConfigError);  // sigma0 missing
  cfg.ns = {200, 100};
  EXPECT_THROW(validate(cfg, "risk"), ConfigError);
  cfg = base_config();
  cfg.dimension.alpha = 0.5;
  EXPECT_THROW(validate(cfg, "risk"), ConfigError);
  cfg = base_config();
  cfg.k = 13;
  EXPECT_THROW(validate(cfg, "risk"), ConfigError);
  EXPECT_THROW(validate(base_config(), "oracle-check"), ConfigError);
}

TEST(RiskExperiment, PlugInLinearIsExactlyNormal) {
  auto cfg = base_config();
  cfg.functional.kind = functionals::Kind::linear;
  cfg.k = 0;
  cfg.replicates = 10000;
  const auto rows = run_risk_experiment(cfg);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_NEAR(rows[0].bias, 0.0, 4 * rows[0].se_bias);
  EXPECT_NEAR(rows[0].sqrt_n_rmse, 1.0, 0.05);
  EXPECT_DOUBLE_EQ(rows[0].sigma_f, 1.0);
}

TEST(RiskExperiment, QuadraticKOneUnbiasedAndPlugInBiased) {
  auto cfg = base_config();
  cfg.compare_plugin = true;
  cfg.replicates = 10000;
  const auto rows = run_risk_experiment(cfg);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].k, 0);
  EXPECT_EQ(rows[1].k, 1);
  EXPECT_NEAR(rows[1].bias, 0.0, 4 * rows[1].se_bias);
  EXPECT_NEAR(rows[0].bias, 4.0 / 100.0, 4 * rows[0].se_bias);
}

TEST(RiskExperiment, PlugInQuadraticBiasInHighDimension) {
  auto cfg = base_config();
  cfg.k = 0;
  cfg.ns = {200};
  cfg.dimension.fixed.reset();
  cfg.dimension.alpha = 0.8;  // d = 70, bias d/n = 0.35
  cfg.replicates = 4000;
  const auto rows = run_risk_experiment(cfg);
  const double target = double(rows[0].d) / 200.0;
  EXPECT_NEAR(rows[0].bias, target, 0.1 * target);
}

TEST(RiskExperiment, ThreadCountDoesNotChangeResults) {
  auto cfg = base_config();
  cfg.ns = {50, 100};
  cfg.replicates = 300;
  cfg.functional.kind = functionals::Kind::exp_linear;
  const auto one = run_risk_experiment(cfg, 1);
  const auto eight = run_risk_experiment(cfg, 8);
  ASSERT_EQ(one.size(), eight.size());
  for (std::size_t i = 0; i < one.size(); ++i) expect_same(one[i], eight[i]);
}

TEST(RiskExperiment, SurrogateChains) {
  auto cfg = base_config();
  cfg.chain_kind = ChainKind::surrogate;
  cfg.replicates = 4000;
  const auto rows = run_risk_experiment(cfg);
  EXPECT_NEAR(rows[0].bias, 0.0, 4 * rows[0].se_bias);
  EXPECT_EQ(rows[0].aborts, 0u);
}

TEST(RiskExperiment, PoissonModelRuns) {
  auto cfg = base_config();
  cfg.model.kind = ModelRecipe::Kind::exponential_family;
  cfg.functional.kind = functionals::Kind::linear;
  cfg.theta.norm = 0.5;
  cfg.replicates = 500;
  const auto rows = run_risk_experiment(cfg);
  EXPECT_FALSE(rows[0].failed);
  EXPECT_TRUE(std::isfinite(rows[0].rmse));
}

TEST(NormalityExperiment, LinearWithinKsBand) {
  auto cfg = base_config();
  cfg.functional.kind = functionals::Kind::linear;
  cfg.k = 0;
  cfg.sigma0 = 0.5;
  cfg.replicates = 5000;
  const auto rows = run_normality_experiment(cfg);
  EXPECT_LE(rows[0].d_k, 1.95 / std::sqrt(5000.0));
}

TEST(NormalityExperiment, RejectsDegenerateSigmaF) {
  auto cfg = base_config();
  cfg.theta.kind = ThetaRule::Kind::zero;  // quadratic gradient vanishes
  cfg.sigma0 = 0.1;
  EXPECT_THROW(run_normality_experiment(cfg), ConfigError);
}

TEST(CltDiagnostic, GaussianShiftNearZero) {
  auto cfg = base_config();
  cfg.ns = {100};
  cfg.clt_samples = 20000;
  const auto rows = run_clt_diagnostic(cfg);
  EXPECT_LT(rows[0].w1, 0.03);
  EXPECT_LT(rows[0].w2, 0.04);
}

TEST(CltDiagnostic, ComponentModelsImproveWithN) {
  auto cfg = base_config();
  cfg.model.kind = ModelRecipe::Kind::independent_components;
  cfg.dimension.fixed = 2;
  cfg.ns = {100, 400, 1600};
  cfg.clt_samples = 100000;
  cfg.model.component_noise = models::ComponentNoise::rademacher;
  std::vector<double> w2;
  for (const auto& r : run_clt_diagnostic(cfg)) w2.push_back(r.w2);
  EXPECT_LE(tu::inversions(w2), 1);

  cfg.model.component_noise = models::ComponentNoise::centered_exponential;
  const auto rows = run_clt_diagnostic(cfg);
  EXPECT_LT(rows.back().w1, rows.front().w1);
}

TEST(XiSecondMoment, MatchesTrace) {
  const auto model = models::ModelSpec::gaussian_shift(models::ScalingMap::diagonal_tanh({1, 2, 3}, {0.5, 1, -1}));
  Stream rng(3, 0, 0);
  const auto m = xi_second_moment(model, ParamVector{0.1, 0.2, 0.3}, 10000, rng);
  EXPECT_NEAR(m.mean, m.trace, 5 * m.se);
  EXPECT_NEAR(m.trace, models::sigma(model, ParamVector{0.1, 0.2, 0.3}).trace(), 1e-12);
}

TEST(OracleCheck, MonotoneImprovement) {
  ExperimentConfig cfg = base_config();
  cfg.functional.kind = functionals::Kind::exp_linear;
  cfg.theta.kind = ThetaRule::Kind::zero;
  cfg.ns = {2};
  cfg.dimension.fixed = 1;
  cfg.model.scale = 1.0;
  cfg.chains = 10;
  cfg.replicates = 20000;
  const auto rows = run_oracle_check(cfg);
  ASSERT_EQ(rows.size(), 2u);
  for (const auto& r : rows) EXPECT_TRUE(r.pass) << r.k << " " << r.measured_bias << " vs " << r.oracle;
  if (std::abs(rows[0].measured_bias) > 5 * rows[0].se && std::abs(rows[1].measured_bias) > 5 * rows[1].se)
    EXPECT_LT(std::abs(rows[1].measured_bias), std::abs(rows[0].measured_bias));
}

TEST(GridSeed, DistinctPerGridPoint) {
  EXPECT_EQ(grid_seed(5, 0), 5u);
  EXPECT_NE(grid_seed(5, 1), grid_seed(5, 2));
}
