#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "iterboot/random.hpp"

namespace iterboot::distances {

/// Standard normal CDF.
double std_normal_cdf(double x);

/// sup_x |F_N(x) - Phi(x)| for the empirical CDF of `sample` (N >= 2, finite).
double kolmogorov_to_std_normal(std::span<const double> sample);

/// (1/N) sum |a_(i) - b_(i)| over sorted samples of equal length.
double wasserstein1(std::span<const double> a, std::span<const double> b);

/// sqrt((1/N) sum (a_(i) - b_(i))^2) over sorted samples of equal length.
double wasserstein2(std::span<const double> a, std::span<const double> b);

/// Standard deviation of W1 over `resamples` bootstrap resamplings of both
/// samples; the Monte Carlo fluctuation band for W1 comparisons.
double wasserstein1_bootstrap_se(std::span<const double> a, std::span<const double> b, std::size_t resamples,
                                 Stream& rng);

}  // namespace iterboot::distances
