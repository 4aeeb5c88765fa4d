#include "iterboot/models.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "iterboot/errors.hpp"

namespace iterboot::models {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr double kFallbackClamp = 1e-6;
constexpr double kMaxPoissonRate = 1e15;

void require_dim(const ModelSpec& model, std::size_t size) {
  if (size != model.dim())
    throw DimensionError("parameter has dimension " + std::to_string(size) + ", model expects " +
                         std::to_string(model.dim()));
}

double draw_component(ComponentNoise kind, Stream& rng, std::normal_distribution<double>& normal) {
  switch (kind) {
    case ComponentNoise::rademacher: return (rng() >> 63) ? 1.0 : -1.0;
    case ComponentNoise::uniform: return std::sqrt(3.0) * (2.0 * rng.uniform_open() - 1.0);
    case ComponentNoise::centered_exponential: return -std::log(rng.uniform_open()) - 1.0;
    case ComponentNoise::gaussian: return normal(rng);
  }
  return 0.0;
}

/// Mean of n i.i.d. draws, via the exact law of the sum where one exists.
double mean_of_components(ComponentNoise kind, std::size_t n, Stream& rng,
                          std::normal_distribution<double>& normal) {
  const double dn = static_cast<double>(n);
  switch (kind) {
    case ComponentNoise::rademacher: {
      std::binomial_distribution<long long> binom(static_cast<long long>(n), 0.5);
      return (2.0 * static_cast<double>(binom(rng)) - dn) / dn;
    }
    case ComponentNoise::centered_exponential: {
      std::gamma_distribution<double> gamma(dn, 1.0);
      return gamma(rng) / dn - 1.0;
    }
    case ComponentNoise::gaussian: return normal(rng) / std::sqrt(dn);
    case ComponentNoise::uniform: {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += draw_component(kind, rng, normal);
      return s / dn;
    }
  }
  return 0.0;
}

double draw_location(LocationNoise kind, double scale, Stream& rng, std::normal_distribution<double>& normal) {
  switch (kind) {
    case LocationNoise::laplace: {
      const double u = rng.uniform_open() - 0.5;
      return -scale * std::copysign(std::log1p(-2.0 * std::abs(u)), u);
    }
    case LocationNoise::logistic: {
      const double u = rng.uniform_open();
      return scale * std::log(u / (1.0 - u));
    }
    case LocationNoise::gaussian: return scale * normal(rng);
  }
  return 0.0;
}

double mean_of_location(LocationNoise kind, double scale, std::size_t n, Stream& rng,
                        std::normal_distribution<double>& normal) {
  if (kind == LocationNoise::gaussian) return scale * normal(rng) / std::sqrt(static_cast<double>(n));
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += draw_location(kind, scale, rng, normal);
  return s / static_cast<double>(n);
}

double poisson_draw(double rate, Stream& rng) {
  if (rate < 1e-300) return 0.0;
  std::poisson_distribution<long long> pois(rate);
  return static_cast<double>(pois(rng));
}

ParamVector finite_or_throw(std::vector<double> v, const char* what) {
  for (double x : v)
    if (!std::isfinite(x)) throw DomainError(std::string(what) + ": non-finite value");
  return ParamVector(std::move(v));
}

// X - theta for one observation of the independent-components model.
void ic_noise(const IndependentComponentsSpec& spec, std::span<const double> theta,
              std::span<const double> etas, std::span<double> scratch, std::span<double> out) {
  std::fill(scratch.begin(), scratch.end(), 0.0);
  for (std::size_t j = 0; j < spec.directions.size(); ++j) {
    const auto x = spec.directions[j].view();
    for (std::size_t i = 0; i < scratch.size(); ++i) scratch[i] += etas[j] * x[i];
  }
  spec.scaling.apply(theta, scratch, out);
}

}  // namespace

// ---------------------------------------------------------------- ScalingMap

ScalingMap ScalingMap::scalar(std::size_t dim, double s) {
  if (dim == 0) throw DimensionError("ScalingMap: dimension must be >= 1");
  if (!std::isfinite(s)) throw DomainError("ScalingMap: scale must be finite");
  ScalingMap m;
  m.kind_ = Kind::scalar;
  m.dim_ = dim;
  m.scalar_ = s;
  return m;
}

ScalingMap ScalingMap::constant(Matrix a) {
  if (a.rows() == 0 || a.rows() != a.cols()) throw DimensionError("ScalingMap: matrix must be square, nonempty");
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c)
      if (!std::isfinite(a(r, c))) throw DomainError("ScalingMap: matrix entries must be finite");
  ScalingMap m;
  m.kind_ = Kind::constant;
  m.dim_ = a.rows();
  m.constant_ = std::move(a);
  return m;
}

ScalingMap ScalingMap::diagonal_tanh(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || a.size() != b.size()) throw DimensionError("ScalingMap: a and b must be nonempty, equal length");
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!(std::isfinite(a[i]) && std::isfinite(b[i]) && a[i] > std::abs(b[i])))
      throw DomainError("ScalingMap: diagonal_tanh requires a_i > |b_i|");
  ScalingMap m;
  m.kind_ = Kind::diagonal_tanh;
  m.dim_ = a.size();
  m.a_ = std::move(a);
  m.b_ = std::move(b);
  return m;
}

Matrix ScalingMap::at(std::span<const double> theta) const {
  if (theta.size() != dim_) throw DimensionError("ScalingMap::at: dimension mismatch");
  switch (kind_) {
    case Kind::scalar: {
      Matrix m(dim_, dim_);
      for (std::size_t i = 0; i < dim_; ++i) m(i, i) = scalar_;
      return m;
    }
    case Kind::constant: return constant_;
    case Kind::diagonal_tanh: {
      Matrix m(dim_, dim_);
      for (std::size_t i = 0; i < dim_; ++i) m(i, i) = a_[i] + b_[i] * std::tanh(theta[i]);
      return m;
    }
  }
  return {};
}

void ScalingMap::apply(std::span<const double> theta, std::span<const double> v, std::span<double> out) const {
  if (theta.size() != dim_ || v.size() != dim_ || out.size() != dim_)
    throw DimensionError("ScalingMap::apply: dimension mismatch");
  switch (kind_) {
    case Kind::scalar:
      for (std::size_t i = 0; i < dim_; ++i) out[i] = scalar_ * v[i];
      return;
    case Kind::constant: mat_vec_into(constant_, v, out); return;
    case Kind::diagonal_tanh:
      for (std::size_t i = 0; i < dim_; ++i) out[i] = (a_[i] + b_[i] * std::tanh(theta[i])) * v[i];
      return;
  }
}

bool ScalingMap::is_zero() const noexcept {
  switch (kind_) {
    case Kind::scalar: return scalar_ == 0.0;
    case Kind::constant: return constant_.max_abs() == 0.0;
    case Kind::diagonal_tanh: return false;
  }
  return false;
}

// ---------------------------------------------------------------- noise facts

NoiseMoments moments(ComponentNoise kind) noexcept {
  switch (kind) {
    case ComponentNoise::rademacher: return {0.0, 1.0, 0.0};
    case ComponentNoise::uniform: return {0.0, 1.0, 0.0};  // U(-sqrt3, sqrt3): 3/3
    case ComponentNoise::centered_exponential: return {0.0, 1.0, 2.0};
    case ComponentNoise::gaussian: return {0.0, 1.0, 0.0};
  }
  return {0.0, 0.0, 0.0};
}

NoiseMoments moments(LocationNoise kind, double scale) noexcept {
  switch (kind) {
    case LocationNoise::laplace: return {0.0, 2.0 * scale * scale, 0.0};
    case LocationNoise::logistic: return {0.0, std::numbers::pi * std::numbers::pi * scale * scale / 3.0, 0.0};
    case LocationNoise::gaussian: return {0.0, scale * scale, 0.0};
  }
  return {0.0, 0.0, 0.0};
}

double poincare_constant(LocationNoise kind, double scale) noexcept {
  switch (kind) {
    case LocationNoise::laplace: return 4.0 * scale * scale;
    case LocationNoise::logistic: return 4.0 * scale * scale;
    case LocationNoise::gaussian: return scale * scale;
  }
  return 0.0;
}

// ---------------------------------------------------------------- ModelSpec

ModelSpec ModelSpec::gaussian_shift(ScalingMap noise_map) {
  const std::size_t d = noise_map.dim();
  if (d == 0) throw DimensionError("gaussian_shift: dimension must be >= 1");
  return ModelSpec(GaussianShiftSpec{std::move(noise_map)}, d);
}

ModelSpec ModelSpec::independent_components(std::vector<ParamVector> directions,
                                            std::vector<ComponentNoise> noise, ScalingMap scaling) {
  const std::size_t d = scaling.dim();
  if (d == 0) throw DimensionError("independent_components: dimension must be >= 1");
  if (directions.empty()) throw DimensionError("independent_components: need at least one direction");
  if (noise.size() != directions.size())
    throw DimensionError("independent_components: one noise tag per direction required");
  for (const auto& x : directions)
    if (x.size() != d) throw DimensionError("independent_components: direction dimension mismatch");
  if (directions.size() == d) {
    Matrix x(d, d);
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t i = 0; i < d; ++i) x(i, j) = directions[j][i];
    const auto eig = symmetric_eigen(x.transpose() * x);
    if (eig.values.front() <= 1e-12 * std::max(1.0, eig.values.back()))
      throw DomainError("independent_components: directions are linearly dependent");
  }
  return ModelSpec(IndependentComponentsSpec{std::move(directions), std::move(noise), std::move(scaling)}, d);
}

ModelSpec ModelSpec::exponential_family(ExpFamily family, std::size_t dim, std::vector<double> scales,
                                        std::optional<ParamVector> fallback) {
  if (dim == 0) throw DimensionError("exponential_family: dimension must be >= 1");
  if (family == ExpFamily::gaussian_mean) {
    if (scales.empty()) scales.assign(dim, 1.0);
    if (scales.size() != dim) throw DimensionError("exponential_family: one scale per coordinate");
    for (double s : scales)
      if (!(s > 0.0 && std::isfinite(s))) throw DomainError("exponential_family: scales must be positive");
  } else if (!scales.empty()) {
    throw DomainError("exponential_family: poisson_product takes no scales");
  }
  if (fallback && fallback->size() != dim) throw DimensionError("exponential_family: fallback dimension mismatch");
  ExponentialFamilySpec spec{family, std::move(scales), std::move(fallback)};
  ModelSpec model(std::move(spec), dim);
  if (const auto& fb = std::get<ExponentialFamilySpec>(model.spec_).fallback) check_domain(model, *fb);
  return model;
}

ModelSpec ModelSpec::log_concave_location(std::vector<LocationNoise> noise, std::vector<double> scales) {
  if (noise.empty()) throw DimensionError("log_concave_location: dimension must be >= 1");
  if (noise.size() != scales.size()) throw DimensionError("log_concave_location: one scale per coordinate");
  for (double s : scales)
    if (!(s > 0.0 && std::isfinite(s))) throw DomainError("log_concave_location: scales must be positive");
  const std::size_t d = noise.size();
  return ModelSpec(LogConcaveLocationSpec{std::move(noise), std::move(scales)}, d);
}

std::string_view ModelSpec::name() const noexcept {
  return std::visit(Overloaded{[](const GaussianShiftSpec&) { return std::string_view("gaussian_shift"); },
                               [](const IndependentComponentsSpec&) { return std::string_view("independent_components"); },
                               [](const ExponentialFamilySpec&) { return std::string_view("exponential_family"); },
                               [](const LogConcaveLocationSpec&) { return std::string_view("log_concave_location"); }},
                    spec_);
}

// ---------------------------------------------------------------- mean map

ParamVector mean_map(const ExponentialFamilySpec& spec, const ParamVector& theta) {
  std::vector<double> out(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i)
    out[i] = spec.family == ExpFamily::poisson_product ? std::exp(theta[i])
                                                       : spec.scales[i] * spec.scales[i] * theta[i];
  return finite_or_throw(std::move(out), "mean_map");
}

std::optional<ParamVector> inverse_mean_map(const ExponentialFamilySpec& spec, const ParamVector& mean) {
  std::vector<double> out(mean.size());
  for (std::size_t i = 0; i < mean.size(); ++i) {
    if (spec.family == ExpFamily::poisson_product) {
      if (!(mean[i] > 0.0)) return std::nullopt;
      out[i] = std::log(mean[i]);
    } else {
      out[i] = mean[i] / (spec.scales[i] * spec.scales[i]);
    }
  }
  return ParamVector(std::move(out));
}

void check_domain(const ModelSpec& model, const ParamVector& theta) {
  require_dim(model, theta.size());
  if (!theta.all_finite()) throw DomainError("parameter has non-finite entries");
  if (const auto* ef = std::get_if<ExponentialFamilySpec>(&model.variant());
      ef && ef->family == ExpFamily::poisson_product) {
    for (std::size_t i = 0; i < theta.size(); ++i)
      if (!(std::exp(theta[i]) <= kMaxPoissonRate))
        throw DomainError("poisson_product: exp(theta) overflows the sampler");
  }
}

// ---------------------------------------------------------------- sampling

Data sample_data(const ModelSpec& model, const ParamVector& theta, std::size_t n, Stream& rng,
                 SampleOptions options) {
  if (n == 0) throw std::invalid_argument("sample_data: n must be >= 1");
  check_domain(model, theta);
  const std::size_t d = model.dim();
  const bool keep = options.keep_observations && n <= kRawLimit;
  std::normal_distribution<double> normal;
  Data data;
  data.n = n;

  std::visit(
      Overloaded{
          [&](const GaussianShiftSpec& spec) {
            std::vector<double> z(d), az(d), x(d);
            for (auto& v : z) v = normal(rng);
            spec.noise_map.apply(theta.view(), z, az);
            const double inv = 1.0 / std::sqrt(static_cast<double>(n));
            for (std::size_t i = 0; i < d; ++i) x[i] = theta[i] + az[i] * inv;
            data.mean = finite_or_throw(std::move(x), "gaussian_shift sample");
            if (options.keep_observations) data.observations.push_back(data.mean);
          },
          [&](const IndependentComponentsSpec& spec) {
            const std::size_t m = spec.directions.size();
            std::vector<double> etas(m), scratch(d), noise(d), sum(d, 0.0);
            if (keep) {
              data.observations.reserve(n);
              for (std::size_t obs = 0; obs < n; ++obs) {
                for (std::size_t j = 0; j < m; ++j) etas[j] = draw_component(spec.noise[j], rng, normal);
                ic_noise(spec, theta.view(), etas, scratch, noise);
                std::vector<double> x(d);
                for (std::size_t i = 0; i < d; ++i) {
                  x[i] = theta[i] + noise[i];
                  sum[i] += noise[i];
                }
                data.observations.push_back(finite_or_throw(std::move(x), "independent_components sample"));
              }
              for (auto& s : sum) s /= static_cast<double>(n);
            } else {
              for (std::size_t j = 0; j < m; ++j) etas[j] = mean_of_components(spec.noise[j], n, rng, normal);
              ic_noise(spec, theta.view(), etas, scratch, sum);
            }
            for (std::size_t i = 0; i < d; ++i) sum[i] += theta[i];
            data.mean = finite_or_throw(std::move(sum), "independent_components mean");
          },
          [&](const ExponentialFamilySpec& spec) {
            const ParamVector mu = mean_map(spec, theta);
            std::vector<double> sum(d, 0.0);
            const bool poisson = spec.family == ExpFamily::poisson_product;
            if (poisson) {
              for (std::size_t i = 0; i < d; ++i)
                if (mu[i] * static_cast<double>(n) > kMaxPoissonRate)
                  throw DomainError("poisson_product: n * exp(theta) exceeds the sampler range");
            }
            if (keep) {
              data.observations.reserve(n);
              for (std::size_t obs = 0; obs < n; ++obs) {
                std::vector<double> x(d);
                for (std::size_t i = 0; i < d; ++i) {
                  x[i] = poisson ? poisson_draw(mu[i], rng) : mu[i] + spec.scales[i] * normal(rng);
                  sum[i] += x[i];
                }
                data.observations.emplace_back(std::move(x));
              }
              for (auto& s : sum) s /= static_cast<double>(n);
            } else {
              const double dn = static_cast<double>(n);
              for (std::size_t i = 0; i < d; ++i)
                sum[i] = poisson ? poisson_draw(mu[i] * dn, rng) / dn
                                 : mu[i] + spec.scales[i] * normal(rng) / std::sqrt(dn);
            }
            data.mean = finite_or_throw(std::move(sum), "exponential_family mean");
          },
          [&](const LogConcaveLocationSpec& spec) {
            std::vector<double> sum(d, 0.0);
            if (keep) {
              data.observations.reserve(n);
              for (std::size_t obs = 0; obs < n; ++obs) {
                std::vector<double> x(d);
                for (std::size_t i = 0; i < d; ++i) {
                  const double eta = draw_location(spec.noise[i], spec.scales[i], rng, normal);
                  x[i] = theta[i] + eta;
                  sum[i] += eta;
                }
                data.observations.push_back(finite_or_throw(std::move(x), "log_concave_location sample"));
              }
              for (auto& s : sum) s /= static_cast<double>(n);
            } else {
              for (std::size_t i = 0; i < d; ++i)
                sum[i] = mean_of_location(spec.noise[i], spec.scales[i], n, rng, normal);
            }
            for (std::size_t i = 0; i < d; ++i) sum[i] += theta[i];
            data.mean = finite_or_throw(std::move(sum), "log_concave_location mean");
          }},
      model.variant());
  return data;
}

ParamVector estimate(const ModelSpec& model, const Data& data) {
  require_dim(model, data.mean.size());
  if (const auto* ef = std::get_if<ExponentialFamilySpec>(&model.variant())) {
    if (auto inv = inverse_mean_map(*ef, data.mean)) return *std::move(inv);
    if (ef->fallback) return *ef->fallback;
    std::vector<double> out(data.mean.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::log(std::max(data.mean[i], kFallbackClamp));
    return ParamVector(std::move(out));
  }
  return data.mean;
}

ParamVector bootstrap_step(const ModelSpec& model, const ParamVector& theta, std::size_t n, Stream& rng) {
  return estimate(model, sample_data(model, theta, n, rng, SampleOptions{.keep_observations = false}));
}

// ---------------------------------------------------------------- surrogate

ParamVector sample_xi(const ModelSpec& model, const ParamVector& theta, Stream& rng) {
  check_domain(model, theta);
  const std::size_t d = model.dim();
  std::normal_distribution<double> normal;
  std::vector<double> out(d);

  std::visit(Overloaded{
                 [&](const GaussianShiftSpec& spec) {
                   std::vector<double> z(d);
                   for (auto& v : z) v = normal(rng);
                   spec.noise_map.apply(theta.view(), z, out);
                 },
                 [&](const IndependentComponentsSpec& spec) {
                   std::vector<double> z(spec.directions.size()), scratch(d);
                   for (auto& v : z) v = normal(rng);
                   ic_noise(spec, theta.view(), z, scratch, out);
                 },
                 [&](const ExponentialFamilySpec& spec) {
                   const ParamVector var = spec.family == ExpFamily::poisson_product
                                               ? mean_map(spec, theta)
                                               : ParamVector([&] {
                                                   std::vector<double> s2(d);
                                                   for (std::size_t i = 0; i < d; ++i)
                                                     s2[i] = spec.scales[i] * spec.scales[i];
                                                   return s2;
                                                 }());
                   for (std::size_t i = 0; i < d; ++i) out[i] = std::sqrt(var[i]) * normal(rng);
                 },
                 [&](const LogConcaveLocationSpec& spec) {
                   for (std::size_t i = 0; i < d; ++i)
                     out[i] = std::sqrt(moments(spec.noise[i], spec.scales[i]).variance) * normal(rng);
                 }},
             model.variant());
  return finite_or_throw(std::move(out), "sample_xi");
}

CovMatrix sigma(const ModelSpec& model, const ParamVector& theta) {
  check_domain(model, theta);
  const std::size_t d = model.dim();
  return std::visit(
      Overloaded{
          [&](const GaussianShiftSpec& spec) {
            const Matrix a = spec.noise_map.at(theta.view());
            Matrix s = a * a.transpose();
            for (std::size_t r = 0; r < d; ++r)
              for (std::size_t c = r + 1; c < d; ++c) s(c, r) = s(r, c);
            return CovMatrix(std::move(s));
          },
          [&](const IndependentComponentsSpec& spec) {
            Matrix s(d, d);
            std::vector<double> ax(d);
            for (const auto& x : spec.directions) {
              spec.scaling.apply(theta.view(), x.view(), ax);
              for (std::size_t r = 0; r < d; ++r)
                for (std::size_t c = 0; c < d; ++c) s(r, c) += ax[r] * ax[c];
            }
            return CovMatrix(std::move(s));
          },
          [&](const ExponentialFamilySpec& spec) {
            std::vector<double> diag(d);
            for (std::size_t i = 0; i < d; ++i)
              diag[i] = spec.family == ExpFamily::poisson_product ? std::exp(theta[i])
                                                                  : spec.scales[i] * spec.scales[i];
            return CovMatrix(Matrix::diagonal(diag));
          },
          [&](const LogConcaveLocationSpec& spec) {
            std::vector<double> diag(d);
            for (std::size_t i = 0; i < d; ++i) diag[i] = moments(spec.noise[i], spec.scales[i]).variance;
            return CovMatrix(Matrix::diagonal(diag));
          }},
      model.variant());
}

}  // namespace iterboot::models
