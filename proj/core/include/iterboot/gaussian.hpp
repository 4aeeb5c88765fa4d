#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "iterboot/bootstrap.hpp"
#include "iterboot/functionals.hpp"
#include "iterboot/models.hpp"
#include "iterboot/random.hpp"

namespace iterboot::gaussian {

/// xi_delta = xi * 1{|xi| < delta sqrt(n)}, applied per draw.
struct TruncationRule {
  double delta;
  std::size_t n;

  TruncationRule(double delta, std::size_t n);
  double threshold() const noexcept;  // delta * sqrt(n)
};

/// Binary time flags t = (t_1, ..., t_k) of a homotopy superposition.
class HomotopyFlags {
 public:
  explicit HomotopyFlags(std::vector<int> bits);
  /// All 2^k flag vectors, t_1 most significant.
  static std::vector<HomotopyFlags> all(int k);

  std::size_t size() const noexcept { return bits_.size(); }
  bool operator[](std::size_t i) const { return bits_[i] != 0; }
  int ones() const noexcept;

 private:
  std::vector<int> bits_;
};

/// states[j+1] = states[j] + xi_j(states[j]) / sqrt(n), independent xi_j;
/// with `trunc`, each draw whose norm reaches delta sqrt(n) is replaced by 0.
bootstrap::ChainPath simulate_tilde_chain(const models::ModelSpec& model, const ParamVector& start, int k,
                                          std::size_t n, const std::optional<TruncationRule>& trunc, Stream& rng);

/// sqrt(<Sigma(theta) f'(theta), f'(theta)>), clamped at 0.
double sigma_f(const models::ModelSpec& model, const functionals::Functional& f, const ParamVector& theta);

/// G_k(theta; t) = G_k o ... o G_1 with G_j(x) = x + t_j xi_j(x) / sqrt(n).
/// Every xi_j is drawn regardless of t_j, so all flag vectors share one
/// noise realization for a given stream.
ParamVector superposition_eval(const models::ModelSpec& model, const ParamVector& theta, const HomotopyFlags& flags,
                               std::size_t n, Stream& rng);

/// Default truncation radius 3 sqrt(tr Sigma(theta) / n).
double default_delta(const models::ModelSpec& model, const ParamVector& theta, std::size_t n);

/// f_k estimate along (optionally truncated) surrogate chains; delta =
/// nullopt means no truncation. Chain c draws from rng.fork(c + 1).
bootstrap::FkEstimate tilde_fk_estimate(const models::ModelSpec& model, const functionals::Functional& f,
                                        const ParamVector& theta_hat, int k, std::size_t n,
                                        std::optional<double> delta, std::size_t chains, Stream& rng);

/// Draw from N(0, cov) through the symmetric square root.
ParamVector sample_gaussian(const CovMatrix& cov, Stream& rng);

}  // namespace iterboot::gaussian
