#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "iterboot/functionals.hpp"
#include "iterboot/models.hpp"
#include "iterboot/random.hpp"

namespace iterboot::experiments {

/// A configuration violates an experiment precondition.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Dimension-generic description of a model; `build(d)` instantiates it for
/// one grid point.
struct ModelRecipe {
  enum class Kind { gaussian_shift, independent_components, exponential_family, log_concave_location };
  enum class Scaling { scalar, diagonal_tanh, constant };

  Kind kind = Kind::gaussian_shift;
  Scaling scaling = Scaling::scalar;
  double scale = 1.0;                  // scalar: A = scale * I
  double tanh_a = 1.0, tanh_b = 0.0;   // diagonal_tanh, broadcast to every coordinate
  std::optional<Matrix> matrix;        // constant (fixes d)
  models::ComponentNoise component_noise = models::ComponentNoise::gaussian;
  std::optional<std::vector<ParamVector>> directions;  // default: standard basis
  models::ExpFamily family = models::ExpFamily::poisson_product;
  double family_scale = 1.0;           // gaussian_mean standard deviation
  std::optional<ParamVector> fallback;
  models::LocationNoise location_noise = models::LocationNoise::gaussian;
  double location_scale = 1.0;

  models::ModelSpec build(std::size_t d) const;
};

struct FunctionalRecipe {
  enum class Direction { uniform, first_axis, explicit_values };

  functionals::Kind kind = functionals::Kind::quadratic_form;
  Direction direction = Direction::uniform;  // uniform: (1, ..., 1) / sqrt(d)
  std::optional<ParamVector> u;
  int power = 2;
  std::optional<Matrix> form;                // default identity
  functionals::RadialProfile profile = functionals::RadialProfile::neg_exp;

  ParamVector direction_for(std::size_t d) const;
  functionals::Functional build(std::size_t d) const;
};

struct ThetaRule {
  enum class Kind { sine, zero, explicit_values };
  Kind kind = Kind::sine;
  double norm = 1.0;  // sine rule: theta_i proportional to sin(i), scaled to this norm
  std::optional<ParamVector> values;

  ParamVector build(std::size_t d) const;
};

struct DimensionRule {
  std::optional<std::size_t> fixed;
  std::optional<double> alpha;  // d = ceil(n^alpha)

  std::size_t dim_for(std::size_t n) const;
};

enum class ChainKind { bootstrap, surrogate };

enum class DeltaRule { none, automatic, fixed };

struct ExperimentConfig {
  ModelRecipe model;
  FunctionalRecipe functional;
  ThetaRule theta;
  int k = 1;
  std::vector<std::size_t> ns;
  DimensionRule dimension;
  std::size_t chains = 1000;      // inner chains M per f_k evaluation
  std::size_t replicates = 2000;  // outer replicates R
  DeltaRule delta_rule = DeltaRule::automatic;
  double delta = 0.0;             // used when delta_rule == fixed
  std::uint64_t seed = 0;
  ChainKind chain_kind = ChainKind::bootstrap;
  bool compare_plugin = false;    // also report k = 0 from the same data
  double sigma0 = 0.0;            // normality precondition sigma_f >= sigma0 > 0
  std::size_t clt_samples = 20000;
  std::optional<ParamVector> projection;  // CLT projection, default uniform
  bool record_timing = true;
  bool keep_errors = false;
};

/// Aggregates for one (n, d) grid point.
struct TrialSummary {
  std::size_t n = 0;
  std::size_t d = 0;
  int k = 0;
  double bias = 0.0;
  double se_bias = 0.0;
  double sd = 0.0;
  double rmse = 0.0;
  double sqrt_n_rmse = 0.0;
  double sigma_f = 0.0;
  double d_k = 0.0;
  std::size_t aborts = 0;
  double seconds = 0.0;
  bool failed = false;
  std::vector<double> errors;  // only when keep_errors
};

/// Aggregates replicate errors. `replicates` counts attempted replicates so
/// the abort rate can be judged.
TrialSummary summarize(std::span<const double> errors, std::size_t n, std::size_t d, int k, double sigma_f,
                       std::size_t aborts, std::size_t replicates);

struct CltSummary {
  std::size_t n = 0;
  std::size_t d = 0;
  double w1 = 0.0;
  double w2 = 0.0;
  std::size_t samples = 0;
  double xi_second_moment = 0.0;     // MC estimate of E|xi(theta)|^2
  double xi_second_moment_se = 0.0;
  double trace_sigma = 0.0;
  double seconds = 0.0;
};

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

struct OracleRow {
  std::size_t n = 0;
  int k = 0;
  double measured_bias = 0.0;
  double se = 0.0;
  double oracle = 0.0;  // signed: (-1)^k |B^{k+1} f|
  bool pass = false;
};

struct SecondMoment {
  double mean = 0.0;
  double se = 0.0;
  double trace = 0.0;
};

/// Runs `body(i)` for i in [0, count) on `threads` workers. Work items must
/// write only to their own slot.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

/// R replicates per grid point of f_k(theta_hat) - f(theta). One summary per
/// grid point (two when compare_plugin is set: k = 0 first).
std::vector<TrialSummary> run_risk_experiment(const ExperimentConfig& cfg, unsigned threads = 1);

/// Risk experiment plus the sigma_f >= sigma0 > 0 precondition; d_k holds
/// the Kolmogorov distance of sqrt(n) err / sigma_f to N(0, 1).
std::vector<TrialSummary> run_normality_experiment(const ExperimentConfig& cfg, unsigned threads = 1);

/// W1 and W2 between <u, sqrt(n)(theta_hat - theta)> and <u, xi(theta)>.
std::vector<CltSummary> run_clt_diagnostic(const ExperimentConfig& cfg, unsigned threads = 1);

/// Measured bias of f_j for j = 0..k against the exact exp-functional
/// oracle; requires a scalar gaussian_shift and an exp_linear functional.
std::vector<OracleRow> run_oracle_check(const ExperimentConfig& cfg, unsigned threads = 1);

/// OLS of log(rmse) on log(n); needs >= 3 positive points.
RateFit rate_fit(std::span<const double> ns, std::span<const double> rmses);

/// Same fit with only >= 2 points required.
RateFit log_log_fit(std::span<const double> xs, std::span<const double> ys);

/// Monte Carlo E|xi(theta)|^2 next to tr Sigma(theta).
SecondMoment xi_second_moment(const models::ModelSpec& model, const ParamVector& theta, std::size_t draws,
                              Stream& rng);

/// Seed for grid point `grid_index` of a run with `master_seed`.
std::uint64_t grid_seed(std::uint64_t master_seed, std::size_t grid_index) noexcept;

/// Checks the config against the preconditions of `kind`
/// ("risk", "normality", "clt", "sweep", "oracle-check"). Throws ConfigError.
void validate(const ExperimentConfig& cfg, const std::string& kind);

}  // namespace iterboot::experiments
