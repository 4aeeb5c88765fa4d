#include "iterboot/cli/selftest.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "iterboot/distances.hpp"
#include "iterboot/pauli.hpp"
#include "iterboot/random.hpp"

namespace iterboot::cli {

namespace {

SelftestCheck weights_check(const SelftestOptions& options) {
  bootstrap::BinomialTable table = bootstrap::binomial_table();
  if (options.corrupt_binomials) options.corrupt_binomials(table);
  std::ostringstream why;
  // Pascal recurrence on the table itself catches corruption of any entry.
  for (int r = 0; r <= bootstrap::kMaxOrder + 1; ++r) {
    if (table[r][0] != 1 || table[r][r] != 1) why << "C(" << r << ",0|r) != 1; ";
    for (int c = 1; c < r; ++c)
      if (table[r][c] != table[r - 1][c - 1] + table[r - 1][c]) why << "Pascal fails at C(" << r << "," << c << "); ";
  }
  for (int k = 0; k <= bootstrap::kMaxOrder; ++k) {
    const auto w = bootstrap::difference_weights(k, table);
    const auto v = bootstrap::collapsed_weights(k, table);
    std::int64_t wsum = 0, vsum = 0;
    for (auto x : w.weights) wsum += x;
    for (auto x : v.weights) vsum += x;
    if (k >= 1 && wsum != 0) why << "difference weights k=" << k << " sum " << wsum << "; ";
    if (w.weights.back() != 1) why << "w_k != 1 at k=" << k << "; ";
    if (vsum != 1) why << "collapsed weights k=" << k << " sum " << vsum << "; ";
    for (int i = 0; i <= k; ++i) {
      std::int64_t direct = 0;
      for (int j = i; j <= k; ++j) direct += table[j][i];
      if ((i % 2 ? -direct : direct) != v.weights[i]) why << "hockey-stick fails k=" << k << " i=" << i << "; ";
    }
  }
  return {"weights", why.str().empty(), why.str()};
}

SelftestCheck pauli_check() {
  std::ostringstream why;
  for (int l = 1; l <= 3; ++l) {
    const auto basis = pauli_basis(l);
    const double m = std::pow(2.0, l);
    for (std::size_t i = 0; i < basis.size(); ++i) {
      for (std::size_t j = 0; j < basis.size(); ++j) {
        const double g = hs_inner(basis[i], basis[j]);
        if (std::abs(g - (i == j ? 1.0 : 0.0)) > 1e-12) {
          why << "Gram(" << i << "," << j << ") l=" << l << "; ";
          break;
        }
      }
      if (operator_norm(basis[i]) > 1.0 / std::sqrt(m) + 1e-12) why << "norm E_" << i << " l=" << l << "; ";
    }
  }
  return {"pauli_basis", why.str().empty(), why.str()};
}

SelftestCheck normal_cdf_check() {
  struct Ref {
    double x, phi;
  };
  // Reference values of the standard normal CDF to 16 digits.
  constexpr Ref refs[] = {{0.0, 0.5},
                          {1.0, 0.8413447460685429},
                          {-1.0, 0.15865525393145707},
                          {1.96, 0.9750021048517795},
                          {-2.0, 0.022750131948179195},
                          {3.0, 0.9986501019683699},
                          {-5.0, 2.866515718791939e-07}};
  std::ostringstream why;
  for (const auto& r : refs) {
    const double got = distances::std_normal_cdf(r.x);
    if (std::abs(got - r.phi) > 1e-10) why << "Phi(" << r.x << ")=" << got << "; ";
  }
  return {"normal_cdf", why.str().empty(), why.str()};
}

SelftestCheck wasserstein_check() {
  std::ostringstream why;
  Stream rng(20240917, 0, 0);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> a(64), b(64), c(64);
    for (std::size_t i = 0; i < a.size(); ++i) {
      a[i] = normal(rng);
      b[i] = 2.0 * normal(rng) + 0.5;
      c[i] = normal(rng) - 1.0;
    }
    const double ab = distances::wasserstein1(a, b), ba = distances::wasserstein1(b, a);
    if (ab != ba) why << "W1 asymmetric; ";
    if (distances::wasserstein1(a, c) > ab + distances::wasserstein1(b, c) + 1e-12) why << "W1 triangle; ";
    if (distances::wasserstein2(a, c) > distances::wasserstein2(a, b) + distances::wasserstein2(b, c) + 1e-12)
      why << "W2 triangle; ";
    if (ab > distances::wasserstein2(a, b) + 1e-15) why << "W1 > W2; ";
    if (distances::wasserstein1(a, a) != 0.0) why << "W1(a,a) != 0; ";
  }
  return {"wasserstein_axioms", why.str().empty(), why.str()};
}

SelftestCheck stream_check() {
  std::ostringstream why;
  // Philox4x32-10 known answer for counter 0, key 0.
  Stream zero(0, 0, 0);
  if (zero() != 0xE169C58D6627E8D5ull) why << "Philox known answer; ";
  Stream a = derive_stream(7, 3, 5), b = derive_stream(7, 3, 5), c = derive_stream(7, 5, 3);
  bool differ = false;
  for (int i = 0; i < 64; ++i) {
    const auto x = a(), y = b(), z = c();
    if (x != y) why << "nondeterministic stream; ";
    differ |= x != z;
  }
  if (!differ) why << "distinct tuples collide; ";
  return {"streams", why.str().empty(), why.str()};
}

}  // namespace

std::vector<SelftestCheck> run_selftest(const SelftestOptions& options) {
  return {weights_check(options), pauli_check(), normal_cdf_check(), wasserstein_check(), stream_check()};
}

}  // namespace iterboot::cli
