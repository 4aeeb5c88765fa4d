#pragma once

#include <limits>
#include <string_view>

#include "iterboot/linalg.hpp"

namespace iterboot::functionals {

enum class Kind { linear, power, quadratic_form, exp_linear, radial };
enum class RadialProfile { neg_exp, log1p };  // g(r) = exp(-r) or log(1 + r), r = |theta|^2

/// Smooth target functional f with its analytic gradient. All built-ins are
/// C-infinity, so smoothness() reports +infinity.
class Functional {
 public:
  /// <u, theta>
  static Functional linear(ParamVector u);
  /// <u, theta>^p, p >= 1 an integer
  static Functional power(ParamVector u, int p);
  /// <Q theta, theta>
  static Functional quadratic_form(Matrix q);
  /// |theta|^2 (quadratic_form with Q = I)
  static Functional squared_norm(std::size_t dim);
  /// exp(<u, theta>)
  static Functional exp_linear(ParamVector u);
  /// g(|theta|^2)
  static Functional radial(std::size_t dim, RadialProfile profile);

  Kind kind() const noexcept { return kind_; }
  std::size_t dim() const noexcept { return dim_; }
  const ParamVector& direction() const noexcept { return u_; }
  int exponent() const noexcept { return p_; }
  double smoothness() const noexcept { return std::numeric_limits<double>::infinity(); }
  std::string_view name() const noexcept;

  double value(const ParamVector& theta) const;
  ParamVector grad(const ParamVector& theta) const;

 private:
  Functional() = default;
  void require_dim(std::size_t size) const;

  Kind kind_ = Kind::linear;
  std::size_t dim_ = 0;
  ParamVector u_;
  Matrix q_;
  bool q_identity_ = false;
  int p_ = 1;
  RadialProfile profile_ = RadialProfile::neg_exp;
};

inline constexpr double kDefaultGradStep = 1e-5;

/// Central finite differences per coordinate; returns the largest
/// |fd - analytic| / (1 + |analytic|).
double grad_check(const Functional& f, const ParamVector& theta, double h = kDefaultGradStep);

}  // namespace iterboot::functionals
