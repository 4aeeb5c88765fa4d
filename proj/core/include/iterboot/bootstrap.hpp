#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "iterboot/functionals.hpp"
#include "iterboot/linalg.hpp"
#include "iterboot/models.hpp"
#include "iterboot/random.hpp"

namespace iterboot::bootstrap {

inline constexpr int kMaxOrder = 12;

/// One realization (theta^(0), ..., theta^(k)) of a bootstrap chain.
struct ChainPath {
  std::vector<ParamVector> states;

  const ParamVector& start() const { return states.front(); }
  const ParamVector& end() const { return states.back(); }
  /// Number of transitions k.
  std::size_t length() const noexcept { return states.empty() ? 0 : states.size() - 1; }
};

/// Pascal triangle C(r, c) for 0 <= c <= r <= kMaxOrder + 1.
using BinomialTable = std::array<std::array<std::int64_t, kMaxOrder + 2>, kMaxOrder + 2>;
const BinomialTable& binomial_table();

/// w_j = (-1)^(k-j) C(k, j), j = 0..k: the k-th order forward difference.
struct DifferenceWeights {
  int order = 0;
  std::vector<std::int64_t> weights;
};

/// v_i = (-1)^i C(k+1, i+1), i = 0..k: all Neumann orders j <= k collapsed
/// onto one chain.
struct CollapsedWeights {
  int order = 0;
  std::vector<std::int64_t> weights;
};

DifferenceWeights difference_weights(int k, const BinomialTable& table = binomial_table());
CollapsedWeights collapsed_weights(int k, const BinomialTable& table = binomial_table());

/// states[0] = start; states[j+1] = estimate(sample_data(states[j])) with one
/// fresh data draw per step. Model domain errors propagate.
ChainPath simulate_chain(const models::ModelSpec& model, const ParamVector& start, int k, std::size_t n,
                         Stream& rng);

struct McEstimate {
  double mean = 0.0;
  double se = 0.0;
  std::size_t used = 0;
  std::size_t aborted = 0;
};

/// Monte Carlo estimate of (B^j f)(theta) from M independent chains, chain c
/// drawing from rng.fork(c + 1).
McEstimate estimate_Bjf(const models::ModelSpec& model, const functionals::Functional& f,
                        const ParamVector& theta, int j, std::size_t n, std::size_t chains, Stream& rng);

struct FkEstimate {
  double value = 0.0;
  std::size_t chains_used = 0;
  std::size_t chains_aborted = 0;
};

/// Largest tolerated fraction of aborted chains in one f_k evaluation.
inline constexpr double kMaxAbortFraction = 0.01;

/// f_k(theta_hat) = (1/M) sum_chains sum_i v_i f(theta^(i)) with chains
/// started at theta_hat. k = 0 returns f(theta_hat) without simulating.
/// Throws EstimationError when more than 1% of the chains abort.
FkEstimate fk_estimate_at(const models::ModelSpec& model, const functionals::Functional& f,
                          const ParamVector& theta_hat, int k, std::size_t n, std::size_t chains, Stream& rng);

/// fk_estimate_at(estimate(model, data), ...).
FkEstimate fk_estimate(const models::ModelSpec& model, const functionals::Functional& f,
                       const models::Data& data, int k, std::size_t n, std::size_t chains, Stream& rng);

/// Collapsed-weight f_k average over already simulated chains of length >= k.
double fk_from_chains(const functionals::Functional& f, std::span<const ChainPath> chains, int k);

/// sum_j (-1)^j * (order-j difference average over the same chains):
/// the per-order route to the same number as fk_from_chains.
double neumann_sum_from_chains(const functionals::Functional& f, std::span<const ChainPath> chains, int k);

/// Exact |B^{k+1} f|(theta) for f = exp(<u, .>) under a gaussian shift with
/// Sigma = sigma2 * I: exp(<theta, u>) (e^a - 1)^(k+1), a = sigma2 |u|^2 / (2n).
double bias_oracle_exp(const ParamVector& theta, const ParamVector& u, double sigma2, std::size_t n, int k);

}  // namespace iterboot::bootstrap
