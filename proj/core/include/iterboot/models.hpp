#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "iterboot/linalg.hpp"
#include "iterboot/random.hpp"

namespace iterboot::models {

/// theta -> A(theta), a d x d matrix-valued map.
class ScalingMap {
 public:
  enum class Kind { scalar, constant, diagonal_tanh };

  /// s * I.
  static ScalingMap scalar(std::size_t dim, double s);
  static ScalingMap constant(Matrix a);
  /// diag(a_i + b_i tanh(theta_i)); requires a_i > |b_i|.
  static ScalingMap diagonal_tanh(std::vector<double> a, std::vector<double> b);

  Kind kind() const noexcept { return kind_; }
  std::size_t dim() const noexcept { return dim_; }

  Matrix at(std::span<const double> theta) const;
  /// out = A(theta) v.
  void apply(std::span<const double> theta, std::span<const double> v, std::span<double> out) const;
  /// True when A(theta) is identically zero.
  bool is_zero() const noexcept;

 private:
  Kind kind_ = Kind::scalar;
  std::size_t dim_ = 0;
  double scalar_ = 0.0;
  Matrix constant_;
  std::vector<double> a_, b_;
};

/// Unit-variance, mean-zero coordinate noise for independent-components models.
enum class ComponentNoise { rademacher, uniform, centered_exponential, gaussian };

/// Mean-zero location noise; `scale` is b for laplace, s for logistic and
/// the standard deviation for gaussian.
enum class LocationNoise { laplace, logistic, gaussian };

enum class ExpFamily { poisson_product, gaussian_mean };

/// Closed-form first two moments; used to validate the built-in noises.
struct NoiseMoments {
  double mean;
  double variance;
  double third;
};
NoiseMoments moments(ComponentNoise kind) noexcept;
NoiseMoments moments(LocationNoise kind, double scale) noexcept;

/// Documented Poincare constant (an upper bound for logistic). Informational
/// only; no computation depends on it.
double poincare_constant(LocationNoise kind, double scale) noexcept;

struct GaussianShiftSpec {
  ScalingMap noise_map;
};

struct IndependentComponentsSpec {
  std::vector<ParamVector> directions;
  std::vector<ComponentNoise> noise;
  ScalingMap scaling;
};

struct ExponentialFamilySpec {
  ExpFamily family = ExpFamily::poisson_product;
  /// Per-coordinate standard deviations (gaussian_mean only).
  std::vector<double> scales;
  /// Returned when the sample mean leaves Psi(T). When absent, the estimate
  /// falls back to Psi^{-1}(clamp(mean, 1e-6, inf)) coordinatewise.
  std::optional<ParamVector> fallback;
};

struct LogConcaveLocationSpec {
  std::vector<LocationNoise> noise;
  std::vector<double> scales;
};

/// A validated statistical family P_theta with its estimator and Gaussian
/// surrogate. Immutable after construction.
class ModelSpec {
 public:
  using Variant = std::variant<GaussianShiftSpec, IndependentComponentsSpec, ExponentialFamilySpec,
                               LogConcaveLocationSpec>;

  static ModelSpec gaussian_shift(ScalingMap noise_map);
  static ModelSpec independent_components(std::vector<ParamVector> directions,
                                          std::vector<ComponentNoise> noise, ScalingMap scaling);
  static ModelSpec exponential_family(ExpFamily family, std::size_t dim, std::vector<double> scales = {},
                                      std::optional<ParamVector> fallback = std::nullopt);
  static ModelSpec log_concave_location(std::vector<LocationNoise> noise, std::vector<double> scales);

  std::size_t dim() const noexcept { return dim_; }
  const Variant& variant() const noexcept { return spec_; }
  std::string_view name() const noexcept;

 private:
  ModelSpec(Variant spec, std::size_t dim) : spec_(std::move(spec)), dim_(dim) {}
  Variant spec_;
  std::size_t dim_;
};

/// Observations from P_theta^(n). `mean` is always populated; `observations`
/// holds the raw draws only when requested and n <= kRawLimit.
struct Data {
  std::size_t n = 0;
  ParamVector mean;
  std::vector<ParamVector> observations;
};

inline constexpr std::size_t kRawLimit = 100000;

struct SampleOptions {
  bool keep_observations = true;
};

/// gaussian_shift: the single vector X = theta + A(theta) z / sqrt(n).
/// Other models: n i.i.d. copies (or their exact sufficient statistic when
/// observations are not kept).
Data sample_data(const ModelSpec& model, const ParamVector& theta, std::size_t n, Stream& rng,
                 SampleOptions options = {});

/// gaussian_shift: X. independent_components / log_concave_location: sample
/// mean. exponential_family: Psi^{-1}(mean) if the mean lies in Psi(T), else
/// the fallback point.
ParamVector estimate(const ModelSpec& model, const Data& data);

/// estimate(sample_data(theta)) via sufficient statistics only. One step of
/// the bootstrap chain.
ParamVector bootstrap_step(const ModelSpec& model, const ParamVector& theta, std::size_t n, Stream& rng);

/// One draw of the mean-zero Gaussian surrogate xi(theta) with covariance
/// sigma(model, theta).
ParamVector sample_xi(const ModelSpec& model, const ParamVector& theta, Stream& rng);

/// Exact covariance of xi(theta).
CovMatrix sigma(const ModelSpec& model, const ParamVector& theta);

/// Mean map and its inverse for exponential families (canonical parameter).
ParamVector mean_map(const ExponentialFamilySpec& spec, const ParamVector& theta);
/// Returns nullopt when `mean` is outside Psi(T).
std::optional<ParamVector> inverse_mean_map(const ExponentialFamilySpec& spec, const ParamVector& mean);

/// Throws DomainError when theta is outside the model's parameter domain.
void check_domain(const ModelSpec& model, const ParamVector& theta);

}  // namespace iterboot::models
