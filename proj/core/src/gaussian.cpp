#include "iterboot/gaussian.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "iterboot/errors.hpp"

namespace iterboot::gaussian {

TruncationRule::TruncationRule(double delta_, std::size_t n_) : delta(delta_), n(n_) {
  if (!(delta > 0.0) || n == 0) throw std::invalid_argument("TruncationRule: need delta > 0 and n >= 1");
}

double TruncationRule::threshold() const noexcept { return delta * std::sqrt(static_cast<double>(n)); }

HomotopyFlags::HomotopyFlags(std::vector<int> bits) : bits_(std::move(bits)) {
  for (int b : bits_)
    if (b != 0 && b != 1) throw std::invalid_argument("HomotopyFlags: entries must be 0 or 1");
}

std::vector<HomotopyFlags> HomotopyFlags::all(int k) {
  if (k < 0 || k > 20) throw std::out_of_range("HomotopyFlags::all: k out of range");
  std::vector<HomotopyFlags> out;
  for (unsigned mask = 0; mask < (1u << k); ++mask) {
    std::vector<int> bits(k);
    for (int i = 0; i < k; ++i) bits[i] = (mask >> (k - 1 - i)) & 1u;
    out.emplace_back(std::move(bits));
  }
  return out;
}

int HomotopyFlags::ones() const noexcept {
  int c = 0;
  for (int b : bits_) c += b;
  return c;
}

bootstrap::ChainPath simulate_tilde_chain(const models::ModelSpec& model, const ParamVector& start, int k,
                                          std::size_t n, const std::optional<TruncationRule>& trunc, Stream& rng) {
  if (k < 0) throw std::invalid_argument("simulate_tilde_chain: k must be >= 0");
  if (n == 0) throw std::invalid_argument("simulate_tilde_chain: n must be >= 1");
  const double inv_root_n = 1.0 / std::sqrt(static_cast<double>(n));
  bootstrap::ChainPath path;
  path.states.reserve(static_cast<std::size_t>(k) + 1);
  path.states.push_back(start);
  for (int j = 0; j < k; ++j) {
    const ParamVector& current = path.states.back();
    const ParamVector xi = models::sample_xi(model, current, rng);
    if (trunc && norm(xi.view()) >= trunc->threshold()) {
      path.states.push_back(current);
    } else {
      ParamVector next = current;
      for (std::size_t i = 0; i < next.size(); ++i) next[i] += xi[i] * inv_root_n;
      path.states.push_back(std::move(next));
    }
  }
  return path;
}

double sigma_f(const models::ModelSpec& model, const functionals::Functional& f, const ParamVector& theta) {
  const CovMatrix cov = models::sigma(model, theta);
  const ParamVector g = f.grad(theta);
  const double q = dot(mat_vec(cov, g).view(), g.view());
  if (q < -1e-14 * std::max(1.0, cov.matrix().max_abs() * squared_norm(g.view())))
    throw NumericalError("sigma_f: negative quadratic form");
  return std::sqrt(std::max(q, 0.0));
}

ParamVector superposition_eval(const models::ModelSpec& model, const ParamVector& theta, const HomotopyFlags& flags,
                               std::size_t n, Stream& rng) {
  if (n == 0) throw std::invalid_argument("superposition_eval: n must be >= 1");
  const double inv_root_n = 1.0 / std::sqrt(static_cast<double>(n));
  ParamVector x = theta;
  for (std::size_t j = 0; j < flags.size(); ++j) {
    const ParamVector xi = models::sample_xi(model, x, rng);
    if (!flags[j]) continue;
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += xi[i] * inv_root_n;
  }
  return x;
}

double default_delta(const models::ModelSpec& model, const ParamVector& theta, std::size_t n) {
  if (n == 0) throw std::invalid_argument("default_delta: n must be >= 1");
  return 3.0 * std::sqrt(models::sigma(model, theta).trace() / static_cast<double>(n));
}

bootstrap::FkEstimate tilde_fk_estimate(const models::ModelSpec& model, const functionals::Functional& f,
                                        const ParamVector& theta_hat, int k, std::size_t n,
                                        std::optional<double> delta, std::size_t chains, Stream& rng) {
  if (k < 0 || k > bootstrap::kMaxOrder) throw std::out_of_range("tilde_fk_estimate: k out of range");
  if (k == 0) return {f.value(theta_hat), 0, 0};
  if (chains < 1) throw std::invalid_argument("tilde_fk_estimate: need at least 1 chain when k >= 1");
  std::optional<TruncationRule> trunc;
  if (delta && std::isfinite(*delta)) trunc.emplace(*delta, n);

  std::vector<bootstrap::ChainPath> paths;
  paths.reserve(chains);
  std::size_t aborted = 0;
  for (std::size_t c = 0; c < chains; ++c) {
    Stream chain_rng = rng.fork(static_cast<std::uint32_t>(c + 1));
    try {
      paths.push_back(simulate_tilde_chain(model, theta_hat, k, n, trunc, chain_rng));
    } catch (const DomainError&) {
      ++aborted;
    }
  }
  if (paths.empty() || static_cast<double>(aborted) > bootstrap::kMaxAbortFraction * static_cast<double>(chains))
    throw EstimationError("tilde_fk_estimate: " + std::to_string(aborted) + " of " + std::to_string(chains) +
                          " chains aborted");
  return {bootstrap::fk_from_chains(f, paths, k), paths.size(), aborted};
}

ParamVector sample_gaussian(const CovMatrix& cov, Stream& rng) {
  const Matrix root = symmetric_sqrt(cov);
  std::normal_distribution<double> normal;
  ParamVector z(cov.dim());
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = normal(rng);
  return mat_vec(root, z);
}

}  // namespace iterboot::gaussian
