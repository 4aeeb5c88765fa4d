#include "iterboot/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "iterboot/bootstrap.hpp"
#include "iterboot/distances.hpp"
#include "iterboot/errors.hpp"
#include "iterboot/gaussian.hpp"

namespace iterboot::experiments {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<ParamVector> standard_basis(std::size_t d) {
  std::vector<ParamVector> basis;
  basis.reserve(d);
  for (std::size_t j = 0; j < d; ++j) {
    ParamVector e(d);
    e[j] = 1.0;
    basis.push_back(std::move(e));
  }
  return basis;
}

struct GridPoint {
  std::size_t n;
  std::size_t d;
  models::ModelSpec model;
  functionals::Functional f;
  ParamVector theta;
  double f_theta;
  double sigma_f;
  std::uint64_t seed;
};

GridPoint make_grid_point(const ExperimentConfig& cfg, std::size_t index) {
  const std::size_t n = cfg.ns[index];
  const std::size_t d = cfg.dimension.dim_for(n);
  auto model = cfg.model.build(d);
  auto f = cfg.functional.build(d);
  auto theta = cfg.theta.build(d);
  models::check_domain(model, theta);
  const double fv = f.value(theta);
  const double sf = gaussian::sigma_f(model, f, theta);
  return {n, d, std::move(model), std::move(f), std::move(theta), fv, sf, grid_seed(cfg.seed, index)};
}

std::optional<double> delta_for(const ExperimentConfig& cfg, const GridPoint& gp) {
  switch (cfg.delta_rule) {
    case DeltaRule::none: return std::nullopt;
    case DeltaRule::fixed: return cfg.delta;
    case DeltaRule::automatic: return gaussian::default_delta(gp.model, gp.theta, gp.n);
  }
  return std::nullopt;
}

/// Per-replicate outcome: errors for each requested order, or abort.
struct ReplicateResult {
  std::vector<double> errors;
  bool aborted = false;
};

}  // namespace

// ---------------------------------------------------------------- recipes

models::ModelSpec ModelRecipe::build(std::size_t d) const {
  if (d == 0) throw ConfigError("model: dimension must be >= 1");
  auto scaling_map = [&]() {
    switch (scaling) {
      case Scaling::scalar: return models::ScalingMap::scalar(d, scale);
      case Scaling::diagonal_tanh:
        return models::ScalingMap::diagonal_tanh(std::vector<double>(d, tanh_a), std::vector<double>(d, tanh_b));
      case Scaling::constant:
        if (!matrix || matrix->rows() != d)
          throw ConfigError("model: constant scaling matrix must be " + std::to_string(d) + "x" + std::to_string(d));
        return models::ScalingMap::constant(*matrix);
    }
    throw ConfigError("model: unknown scaling");
  };
  switch (kind) {
    case Kind::gaussian_shift: return models::ModelSpec::gaussian_shift(scaling_map());
    case Kind::independent_components: {
      auto dirs = directions ? *directions : standard_basis(d);
      std::vector<models::ComponentNoise> noise(dirs.size(), component_noise);
      return models::ModelSpec::independent_components(std::move(dirs), std::move(noise), scaling_map());
    }
    case Kind::exponential_family: {
      std::vector<double> scales;
      if (family == models::ExpFamily::gaussian_mean) scales.assign(d, family_scale);
      return models::ModelSpec::exponential_family(family, d, std::move(scales), fallback);
    }
    case Kind::log_concave_location:
      return models::ModelSpec::log_concave_location(std::vector<models::LocationNoise>(d, location_noise),
                                                     std::vector<double>(d, location_scale));
  }
  throw ConfigError("model: unknown kind");
}

ParamVector FunctionalRecipe::direction_for(std::size_t d) const {
  switch (direction) {
    case Direction::uniform: return ParamVector(d, 1.0 / std::sqrt(static_cast<double>(d)));
    case Direction::first_axis: {
      ParamVector e(d);
      e[0] = 1.0;
      return e;
    }
    case Direction::explicit_values:
      if (!u || u->size() != d) throw ConfigError("functional: explicit direction must have dimension " + std::to_string(d));
      return *u;
  }
  throw ConfigError("functional: unknown direction rule");
}

functionals::Functional FunctionalRecipe::build(std::size_t d) const {
  using functionals::Functional;
  switch (kind) {
    case functionals::Kind::linear: return Functional::linear(direction_for(d));
    case functionals::Kind::power: return Functional::power(direction_for(d), power);
    case functionals::Kind::exp_linear: return Functional::exp_linear(direction_for(d));
    case functionals::Kind::radial: return Functional::radial(d, profile);
    case functionals::Kind::quadratic_form:
      if (!form) return Functional::squared_norm(d);
      if (form->rows() != d) throw ConfigError("functional: form matrix must be " + std::to_string(d) + "x" + std::to_string(d));
      return Functional::quadratic_form(*form);
  }
  throw ConfigError("functional: unknown kind");
}

ParamVector ThetaRule::build(std::size_t d) const {
  switch (kind) {
    case Kind::zero: return ParamVector(d);
    case Kind::explicit_values:
      if (!values || values->size() != d) throw ConfigError("theta: explicit values must have dimension " + std::to_string(d));
      return *values;
    case Kind::sine: {
      ParamVector t(d);
      for (std::size_t i = 0; i < d; ++i) t[i] = std::sin(static_cast<double>(i + 1)) / std::sqrt(static_cast<double>(d));
      const double current = iterboot::norm(t.view());
      return (norm / current) * t;
    }
  }
  throw ConfigError("theta: unknown rule");
}

std::size_t DimensionRule::dim_for(std::size_t n) const {
  if (fixed) return *fixed;
  if (alpha) {
    // Exact powers (e.g. 1024^0.4 = 16) must not round up past the integer.
    const double raw = std::pow(static_cast<double>(n), *alpha);
    const double nearest = std::round(raw);
    const double d = std::abs(raw - nearest) < 1e-9 * std::max(1.0, raw) ? nearest : std::ceil(raw);
    return std::max<std::size_t>(1, static_cast<std::size_t>(d));
  }
  throw ConfigError("dimension: neither fixed d nor alpha given");
}

// ---------------------------------------------------------------- plumbing

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body) {
  threads = std::max(1u, threads);
  if (threads == 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> workers;
  const unsigned used = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  workers.reserve(used);
  for (unsigned w = 0; w < used; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = count;
        }
      }
    });
  }
  workers.clear();
  if (failure) std::rethrow_exception(failure);
}

std::uint64_t grid_seed(std::uint64_t master_seed, std::size_t grid_index) noexcept {
  return master_seed ^ (static_cast<std::uint64_t>(grid_index) * 0x9E3779B97F4A7C15ull);
}

TrialSummary summarize(std::span<const double> errors, std::size_t n, std::size_t d, int k, double sigma_f,
                       std::size_t aborts, std::size_t replicates) {
  TrialSummary s;
  s.n = n;
  s.d = d;
  s.k = k;
  s.sigma_f = sigma_f;
  s.aborts = aborts;
  s.failed = static_cast<double>(aborts) > bootstrap::kMaxAbortFraction * static_cast<double>(replicates) ||
             errors.size() < 2;
  const double count = static_cast<double>(errors.size());
  if (errors.empty()) {
    s.bias = s.se_bias = s.sd = s.rmse = s.sqrt_n_rmse = s.d_k = std::nan("");
    return s;
  }
  double mean = 0.0, m2 = 0.0, sq = 0.0;
  for (std::size_t i = 0; i < errors.size(); ++i) {
    const double e = errors[i];
    const double delta = e - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (e - mean);
    sq += e * e;
  }
  s.bias = mean;
  s.sd = errors.size() > 1 ? std::sqrt(m2 / (count - 1.0)) : 0.0;
  s.se_bias = s.sd / std::sqrt(count);
  s.rmse = std::sqrt(sq / count);
  s.sqrt_n_rmse = std::sqrt(static_cast<double>(n)) * s.rmse;
  if (sigma_f > 0.0 && errors.size() >= 2) {
    std::vector<double> standardized(errors.size());
    const double scale = std::sqrt(static_cast<double>(n)) / sigma_f;
    for (std::size_t i = 0; i < errors.size(); ++i) standardized[i] = scale * errors[i];
    s.d_k = distances::kolmogorov_to_std_normal(standardized);
  } else {
    s.d_k = std::nan("");
  }
  return s;
}

// ---------------------------------------------------------------- validation

void validate(const ExperimentConfig& cfg, const std::string& kind) {
  const bool known = kind == "risk" || kind == "normality" || kind == "clt" || kind == "sweep" || kind == "oracle-check";
  if (!known) throw ConfigError("experiment: unknown kind '" + kind + "'");
  if (cfg.ns.empty()) throw ConfigError("grid.n: at least one sample size required");
  for (std::size_t i = 0; i < cfg.ns.size(); ++i) {
    if (cfg.ns[i] == 0) throw ConfigError("grid.n: sample sizes must be >= 1");
    if (i > 0 && cfg.ns[i] <= cfg.ns[i - 1]) throw ConfigError("grid.n: sample sizes must be strictly increasing");
  }
  if (cfg.dimension.fixed.has_value() == cfg.dimension.alpha.has_value())
    throw ConfigError("grid: exactly one of d or alpha is required");
  if (cfg.dimension.fixed && *cfg.dimension.fixed == 0) throw ConfigError("grid.d: must be >= 1");
  if (cfg.dimension.alpha && !(*cfg.dimension.alpha > 0.0 && *cfg.dimension.alpha < 1.0))
    throw ConfigError("grid.alpha: must lie in (0, 1)");
  if (cfg.k < 0 || cfg.k > bootstrap::kMaxOrder) throw ConfigError("k: must lie in [0, 12]");
  if (cfg.k >= 1 && cfg.chains < 1) throw ConfigError("mc.M: must be >= 1 when k >= 1");
  if (cfg.delta_rule == DeltaRule::fixed && !(cfg.delta > 0.0)) throw ConfigError("delta: must be > 0");

  if (kind == "clt") {
    if (cfg.clt_samples < 2) throw ConfigError("clt.samples: must be >= 2");
    return;
  }
  if (cfg.replicates < 2) throw ConfigError("mc.R: must be >= 2");
  if (kind == "normality") {
    if (cfg.replicates < 100) throw ConfigError("mc.R: normality diagnostics need R >= 100");
    if (!(cfg.sigma0 > 0.0)) throw ConfigError("sigma0: must be > 0 for normality experiments");
  }
  if (kind == "sweep" && cfg.ns.size() < 3) throw ConfigError("grid.n: a sweep needs at least 3 sample sizes");
  if (kind == "oracle-check") {
    if (cfg.model.kind != ModelRecipe::Kind::gaussian_shift || cfg.model.scaling != ModelRecipe::Scaling::scalar)
      throw ConfigError("oracle-check: requires a gaussian_shift model with scalar scaling");
    if (cfg.functional.kind != functionals::Kind::exp_linear)
      throw ConfigError("oracle-check: requires an exp_linear functional");
    if (cfg.chain_kind != ChainKind::bootstrap) throw ConfigError("oracle-check: requires bootstrap chains");
  }
}

// ---------------------------------------------------------------- runners

namespace {

/// Errors of f_j(theta_hat) - f(theta) for every j in `orders` from one data draw.
ReplicateResult run_replicate(const ExperimentConfig& cfg, const GridPoint& gp, std::size_t r,
                              std::span<const int> orders, std::optional<double> delta) {
  ReplicateResult out;
  Stream rng = derive_stream(gp.seed, r, 0);
  try {
    const auto data = models::sample_data(gp.model, gp.theta, gp.n, rng, {.keep_observations = false});
    const ParamVector theta_hat = models::estimate(gp.model, data);
    for (int k : orders) {
      const auto fk = cfg.chain_kind == ChainKind::bootstrap
                          ? bootstrap::fk_estimate_at(gp.model, gp.f, theta_hat, k, gp.n, cfg.chains, rng)
                          : gaussian::tilde_fk_estimate(gp.model, gp.f, theta_hat, k, gp.n, delta, cfg.chains, rng);
      out.errors.push_back(fk.value - gp.f_theta);
    }
  } catch (const DomainError&) {
    out.aborted = true;
  } catch (const EstimationError&) {
    out.aborted = true;
  }
  return out;
}

std::vector<TrialSummary> summarize_orders(const ExperimentConfig& cfg, const GridPoint& gp,
                                           const std::vector<ReplicateResult>& results, std::span<const int> orders,
                                           double seconds) {
  std::vector<TrialSummary> out;
  std::size_t aborts = 0;
  for (const auto& r : results) aborts += r.aborted ? 1 : 0;
  for (std::size_t o = 0; o < orders.size(); ++o) {
    std::vector<double> errors;
    errors.reserve(results.size());
    for (const auto& r : results)
      if (!r.aborted) errors.push_back(r.errors[o]);
    auto s = summarize(errors, gp.n, gp.d, orders[o], gp.sigma_f, aborts, results.size());
    s.seconds = cfg.record_timing ? seconds : 0.0;
    if (cfg.keep_errors) s.errors = std::move(errors);
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<TrialSummary> run_orders(const ExperimentConfig& cfg, unsigned threads,
                                     const std::function<std::vector<int>(const GridPoint&)>& orders_for,
                                     const std::function<void(const GridPoint&)>& precheck) {
  std::vector<TrialSummary> out;
  for (std::size_t g = 0; g < cfg.ns.size(); ++g) {
    const auto start = Clock::now();
    const GridPoint gp = make_grid_point(cfg, g);
    if (precheck) precheck(gp);
    const auto delta = delta_for(cfg, gp);
    const auto orders = orders_for(gp);
    std::vector<ReplicateResult> results(cfg.replicates);
    parallel_for(cfg.replicates, threads, [&](std::size_t r) { results[r] = run_replicate(cfg, gp, r, orders, delta); });
    auto rows = summarize_orders(cfg, gp, results, orders, elapsed_seconds(start));
    for (auto& row : rows) out.push_back(std::move(row));
  }
  return out;
}

}  // namespace

std::vector<TrialSummary> run_risk_experiment(const ExperimentConfig& cfg, unsigned threads) {
  validate(cfg, "risk");
  return run_orders(
      cfg, threads,
      [&](const GridPoint&) {
        std::vector<int> orders;
        if (cfg.compare_plugin && cfg.k > 0) orders.push_back(0);
        orders.push_back(cfg.k);
        return orders;
      },
      nullptr);
}

std::vector<TrialSummary> run_normality_experiment(const ExperimentConfig& cfg, unsigned threads) {
  validate(cfg, "normality");
  return run_orders(
      cfg, threads, [&](const GridPoint&) { return std::vector<int>{cfg.k}; },
      [&](const GridPoint& gp) {
        if (gp.sigma_f < cfg.sigma0)
          throw ConfigError("normality: sigma_f(theta) = " + std::to_string(gp.sigma_f) + " is below sigma0 = " +
                            std::to_string(cfg.sigma0) + " at n = " + std::to_string(gp.n));
      });
}

std::vector<OracleRow> run_oracle_check(const ExperimentConfig& cfg, unsigned threads) {
  validate(cfg, "oracle-check");
  std::vector<int> orders(static_cast<std::size_t>(cfg.k) + 1);
  for (int j = 0; j <= cfg.k; ++j) orders[j] = j;
  const auto rows = run_orders(cfg, threads, [&](const GridPoint&) { return orders; }, nullptr);

  std::vector<OracleRow> out;
  for (const auto& row : rows) {
    const ParamVector theta = cfg.theta.build(row.d);
    const ParamVector u = cfg.functional.direction_for(row.d);
    const double sigma2 = cfg.model.scale * cfg.model.scale;
    const double magnitude = bootstrap::bias_oracle_exp(theta, u, sigma2, row.n, row.k);
    const double oracle = (row.k % 2 == 0 ? 1.0 : -1.0) * magnitude;
    out.push_back({row.n, row.k, row.bias, row.se_bias, oracle,
                   !row.failed && std::abs(row.bias - oracle) <= 4.0 * row.se_bias});
  }
  return out;
}

std::vector<CltSummary> run_clt_diagnostic(const ExperimentConfig& cfg, unsigned threads) {
  validate(cfg, "clt");
  std::vector<CltSummary> out;
  for (std::size_t g = 0; g < cfg.ns.size(); ++g) {
    const auto start = Clock::now();
    const GridPoint gp = make_grid_point(cfg, g);
    const ParamVector u = cfg.projection ? *cfg.projection : ParamVector(gp.d, 1.0 / std::sqrt(static_cast<double>(gp.d)));
    if (u.size() != gp.d) throw ConfigError("clt.projection: dimension mismatch");
    const double root_n = std::sqrt(static_cast<double>(gp.n));

    std::vector<double> estimator(cfg.clt_samples), surrogate(cfg.clt_samples);
    parallel_for(cfg.clt_samples, threads, [&](std::size_t i) {
      Stream rng = derive_stream(gp.seed, i, 0);
      const ParamVector hat = models::bootstrap_step(gp.model, gp.theta, gp.n, rng);
      double proj = 0.0;
      for (std::size_t c = 0; c < gp.d; ++c) proj += u[c] * root_n * (hat[c] - gp.theta[c]);
      estimator[i] = proj;
      Stream xi_rng = rng.fork(1);
      surrogate[i] = dot(u.view(), models::sample_xi(gp.model, gp.theta, xi_rng).view());
    });

    CltSummary s;
    s.n = gp.n;
    s.d = gp.d;
    s.samples = cfg.clt_samples;
    s.w1 = distances::wasserstein1(estimator, surrogate);
    s.w2 = distances::wasserstein2(estimator, surrogate);
    Stream moment_rng = derive_stream(gp.seed, 0, 1);
    const auto m = xi_second_moment(gp.model, gp.theta, 10000, moment_rng);
    s.xi_second_moment = m.mean;
    s.xi_second_moment_se = m.se;
    s.trace_sigma = m.trace;
    s.seconds = cfg.record_timing ? elapsed_seconds(start) : 0.0;
    out.push_back(s);
  }
  return out;
}

RateFit log_log_fit(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw std::invalid_argument("rate fit: length mismatch");
  if (xs.size() < 2) throw std::invalid_argument("rate fit: need at least 2 points");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0) || !std::isfinite(xs[i]) || !std::isfinite(ys[i]))
      throw std::invalid_argument("rate fit: inputs must be positive and finite");
    lx.push_back(std::log(xs[i]));
    ly.push_back(std::log(ys[i]));
  }
  const double m = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("rate fit: x values must not all coincide");
  RateFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

RateFit rate_fit(std::span<const double> ns, std::span<const double> rmses) {
  if (ns.size() < 3) throw std::invalid_argument("rate_fit: need at least 3 grid points");
  return log_log_fit(ns, rmses);
}

SecondMoment xi_second_moment(const models::ModelSpec& model, const ParamVector& theta, std::size_t draws,
                              Stream& rng) {
  if (draws < 2) throw std::invalid_argument("xi_second_moment: need at least 2 draws");
  double mean = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < draws; ++i) {
    const double x = squared_norm(models::sample_xi(model, theta, rng).view());
    const double delta = x - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (x - mean);
  }
  const double sd = std::sqrt(m2 / static_cast<double>(draws - 1));
  return {mean, sd / std::sqrt(static_cast<double>(draws)), models::sigma(model, theta).trace()};
}

}  // namespace iterboot::experiments
