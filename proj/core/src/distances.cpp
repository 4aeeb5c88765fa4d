#include "iterboot/distances.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "iterboot/errors.hpp"

namespace iterboot::distances {

namespace {

std::vector<double> sorted_copy(std::span<const double> s, const char* what) {
  if (s.size() < 2) throw std::invalid_argument(std::string(what) + ": need at least 2 sample points");
  for (double x : s)
    if (!std::isfinite(x)) throw DomainError(std::string(what) + ": sample values must be finite");
  std::vector<double> v(s.begin(), s.end());
  std::sort(v.begin(), v.end());
  return v;
}

void require_equal(std::span<const double> a, std::span<const double> b, const char* what) {
  if (a.size() != b.size())
    throw DimensionError(std::string(what) + ": sample sizes differ (" + std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()) + ")");
}

double w1_sorted(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::abs(a[i] - b[i]);
  return acc / static_cast<double>(a.size());
}

}  // namespace

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double kolmogorov_to_std_normal(std::span<const double> sample) {
  const auto v = sorted_copy(sample, "kolmogorov_to_std_normal");
  const double n = static_cast<double>(v.size());
  double sup = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double phi = std_normal_cdf(v[i]);
    const double above = static_cast<double>(i + 1) / n - phi;
    const double below = phi - static_cast<double>(i) / n;
    sup = std::max({sup, std::abs(above), std::abs(below)});
  }
  return std::min(sup, 1.0);
}

double wasserstein1(std::span<const double> a, std::span<const double> b) {
  require_equal(a, b, "wasserstein1");
  return w1_sorted(sorted_copy(a, "wasserstein1"), sorted_copy(b, "wasserstein1"));
}

double wasserstein2(std::span<const double> a, std::span<const double> b) {
  require_equal(a, b, "wasserstein2");
  const auto sa = sorted_copy(a, "wasserstein2");
  const auto sb = sorted_copy(b, "wasserstein2");
  double acc = 0.0;
  for (std::size_t i = 0; i < sa.size(); ++i) acc += (sa[i] - sb[i]) * (sa[i] - sb[i]);
  return std::sqrt(acc / static_cast<double>(sa.size()));
}

double wasserstein1_bootstrap_se(std::span<const double> a, std::span<const double> b, std::size_t resamples,
                                 Stream& rng) {
  require_equal(a, b, "wasserstein1_bootstrap_se");
  if (resamples < 2) throw std::invalid_argument("wasserstein1_bootstrap_se: need at least 2 resamples");
  const std::size_t n = a.size();
  std::vector<double> ra(n), rb(n);
  double mean = 0.0, m2 = 0.0;
  for (std::size_t r = 0; r < resamples; ++r) {
    for (std::size_t i = 0; i < n; ++i) {
      ra[i] = a[rng() % n];
      rb[i] = b[rng() % n];
    }
    std::sort(ra.begin(), ra.end());
    std::sort(rb.begin(), rb.end());
    const double w = w1_sorted(ra, rb);
    const double delta = w - mean;
    mean += delta / static_cast<double>(r + 1);
    m2 += delta * (w - mean);
  }
  return std::sqrt(m2 / static_cast<double>(resamples - 1));
}

}  // namespace iterboot::distances
