#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "iterboot/bootstrap.hpp"

namespace iterboot::cli {

struct SelftestOptions {
  /// Fault-injection hook applied to a private copy of the binomial table
  /// before the weight identities are checked.
  std::function<void(bootstrap::BinomialTable&)> corrupt_binomials;
};

struct SelftestCheck {
  std::string name;
  bool passed;
  std::string detail;
};

/// Fast deterministic identity checks: weights, Pauli basis, normal CDF,
/// Wasserstein axioms, stream determinism.
std::vector<SelftestCheck> run_selftest(const SelftestOptions& options = {});

}  // namespace iterboot::cli
