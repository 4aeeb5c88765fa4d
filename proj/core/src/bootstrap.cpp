#include "iterboot/bootstrap.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "iterboot/errors.hpp"

namespace iterboot::bootstrap {

namespace {

void require_order(int k, int lo) {
  if (k < lo || k > kMaxOrder)
    throw std::out_of_range("order " + std::to_string(k) + " outside [" + std::to_string(lo) + ", " +
                            std::to_string(kMaxOrder) + "]");
}

BinomialTable make_binomials() {
  BinomialTable t{};
  for (int r = 0; r <= kMaxOrder + 1; ++r) {
    t[r][0] = 1;
    for (int c = 1; c <= r; ++c) t[r][c] = t[r - 1][c - 1] + (c < r ? t[r - 1][c] : 0);
  }
  return t;
}

double weighted_sum(const functionals::Functional& f, const ChainPath& path, std::span<const std::int64_t> w) {
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) acc += static_cast<double>(w[i]) * f.value(path.states[i]);
  return acc;
}

// Simulates chains on lanes 1..M, discarding those that hit a domain error.
std::vector<ChainPath> simulate_chains(const models::ModelSpec& model, const ParamVector& start, int k,
                                       std::size_t n, std::size_t count, Stream& rng, std::size_t& aborted) {
  std::vector<ChainPath> paths;
  paths.reserve(count);
  aborted = 0;
  for (std::size_t c = 0; c < count; ++c) {
    Stream chain_rng = rng.fork(static_cast<std::uint32_t>(c + 1));
    try {
      paths.push_back(simulate_chain(model, start, k, n, chain_rng));
    } catch (const DomainError&) {
      ++aborted;
    }
  }
  return paths;
}

}  // namespace

const BinomialTable& binomial_table() {
  static const BinomialTable table = make_binomials();
  return table;
}

DifferenceWeights difference_weights(int k, const BinomialTable& table) {
  require_order(k, 0);
  DifferenceWeights w{k, std::vector<std::int64_t>(k + 1)};
  for (int j = 0; j <= k; ++j) w.weights[j] = ((k - j) % 2 == 0 ? 1 : -1) * table[k][j];
  return w;
}

CollapsedWeights collapsed_weights(int k, const BinomialTable& table) {
  require_order(k, 0);
  CollapsedWeights v{k, std::vector<std::int64_t>(k + 1)};
  for (int i = 0; i <= k; ++i) v.weights[i] = (i % 2 == 0 ? 1 : -1) * table[k + 1][i + 1];
  return v;
}

ChainPath simulate_chain(const models::ModelSpec& model, const ParamVector& start, int k, std::size_t n,
                         Stream& rng) {
  if (k < 0) throw std::invalid_argument("simulate_chain: k must be >= 0");
  models::check_domain(model, start);
  ChainPath path;
  path.states.reserve(static_cast<std::size_t>(k) + 1);
  path.states.push_back(start);
  for (int j = 0; j < k; ++j) path.states.push_back(models::bootstrap_step(model, path.states.back(), n, rng));
  return path;
}

McEstimate estimate_Bjf(const models::ModelSpec& model, const functionals::Functional& f,
                        const ParamVector& theta, int j, std::size_t n, std::size_t chains, Stream& rng) {
  require_order(j, 1);
  if (chains < 2) throw std::invalid_argument("estimate_Bjf: need at least 2 chains");
  const auto w = difference_weights(j);
  std::size_t aborted = 0;
  const auto paths = simulate_chains(model, theta, j, n, chains, rng, aborted);
  if (paths.size() < 2) throw EstimationError("estimate_Bjf: fewer than 2 chains survived");

  double mean = 0.0, m2 = 0.0;
  std::size_t count = 0;
  for (const auto& p : paths) {
    const double x = weighted_sum(f, p, w.weights);
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
  }
  const double var = m2 / static_cast<double>(count - 1);
  return {mean, std::sqrt(var / static_cast<double>(count)), count, aborted};
}

FkEstimate fk_estimate_at(const models::ModelSpec& model, const functionals::Functional& f,
                          const ParamVector& theta_hat, int k, std::size_t n, std::size_t chains, Stream& rng) {
  require_order(k, 0);
  if (k == 0) return {f.value(theta_hat), 0, 0};
  if (chains < 1) throw std::invalid_argument("fk_estimate: need at least 1 chain when k >= 1");
  std::size_t aborted = 0;
  const auto paths = simulate_chains(model, theta_hat, k, n, chains, rng, aborted);
  if (paths.empty() || static_cast<double>(aborted) > kMaxAbortFraction * static_cast<double>(chains))
    throw EstimationError("fk_estimate: " + std::to_string(aborted) + " of " + std::to_string(chains) +
                          " chains aborted");
  return {fk_from_chains(f, paths, k), paths.size(), aborted};
}

FkEstimate fk_estimate(const models::ModelSpec& model, const functionals::Functional& f,
                       const models::Data& data, int k, std::size_t n, std::size_t chains, Stream& rng) {
  return fk_estimate_at(model, f, models::estimate(model, data), k, n, chains, rng);
}

double fk_from_chains(const functionals::Functional& f, std::span<const ChainPath> chains, int k) {
  require_order(k, 0);
  if (chains.empty()) throw EstimationError("fk_from_chains: no chains");
  const auto v = collapsed_weights(k);
  double acc = 0.0;
  for (const auto& p : chains) {
    if (p.length() < static_cast<std::size_t>(k)) throw DimensionError("fk_from_chains: chain shorter than k");
    acc += weighted_sum(f, p, v.weights);
  }
  return acc / static_cast<double>(chains.size());
}

double neumann_sum_from_chains(const functionals::Functional& f, std::span<const ChainPath> chains, int k) {
  require_order(k, 0);
  if (chains.empty()) throw EstimationError("neumann_sum_from_chains: no chains");
  double total = 0.0;
  for (int j = 0; j <= k; ++j) {
    const auto w = difference_weights(j);
    double avg = 0.0;
    for (const auto& p : chains) {
      if (p.length() < static_cast<std::size_t>(k)) throw DimensionError("neumann_sum_from_chains: chain shorter than k");
      avg += weighted_sum(f, p, w.weights);
    }
    avg /= static_cast<double>(chains.size());
    total += (j % 2 == 0 ? 1.0 : -1.0) * avg;
  }
  return total;
}

double bias_oracle_exp(const ParamVector& theta, const ParamVector& u, double sigma2, std::size_t n, int k) {
  if (theta.size() != u.size()) throw DimensionError("bias_oracle_exp: theta and u differ in dimension");
  if (n == 0) throw std::invalid_argument("bias_oracle_exp: n must be >= 1");
  if (k < 0) throw std::invalid_argument("bias_oracle_exp: k must be >= 0");
  const double a = sigma2 * squared_norm(u.view()) / (2.0 * static_cast<double>(n));
  return std::exp(dot(theta.view(), u.view())) * std::pow(std::expm1(a), k + 1);
}

}  // namespace iterboot::bootstrap
