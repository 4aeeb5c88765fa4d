#include "iterboot/functionals.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "iterboot/errors.hpp"

namespace iterboot::functionals {

Functional Functional::linear(ParamVector u) {
  if (u.size() == 0) throw DimensionError("Functional: direction must be nonempty");
  Functional f;
  f.kind_ = Kind::linear;
  f.dim_ = u.size();
  f.u_ = std::move(u);
  return f;
}

Functional Functional::power(ParamVector u, int p) {
  if (p < 1) throw std::invalid_argument("Functional::power: exponent must be >= 1");
  Functional f = linear(std::move(u));
  f.kind_ = Kind::power;
  f.p_ = p;
  return f;
}

Functional Functional::quadratic_form(Matrix q) {
  if (q.rows() == 0 || q.rows() != q.cols()) throw DimensionError("Functional: form matrix must be square");
  Functional f;
  f.kind_ = Kind::quadratic_form;
  f.dim_ = q.rows();
  f.q_identity_ = q == Matrix::identity(q.rows());
  f.q_ = std::move(q);
  return f;
}

Functional Functional::squared_norm(std::size_t dim) { return quadratic_form(Matrix::identity(dim)); }

Functional Functional::exp_linear(ParamVector u) {
  Functional f = linear(std::move(u));
  f.kind_ = Kind::exp_linear;
  return f;
}

Functional Functional::radial(std::size_t dim, RadialProfile profile) {
  if (dim == 0) throw DimensionError("Functional: dimension must be >= 1");
  Functional f;
  f.kind_ = Kind::radial;
  f.dim_ = dim;
  f.profile_ = profile;
  return f;
}

std::string_view Functional::name() const noexcept {
  switch (kind_) {
    case Kind::linear: return "linear";
    case Kind::power: return "power";
    case Kind::quadratic_form: return "quadratic_form";
    case Kind::exp_linear: return "exp_linear";
    case Kind::radial: return "radial";
  }
  return "";
}

void Functional::require_dim(std::size_t size) const {
  if (size != dim_)
    throw DimensionError("Functional expects dimension " + std::to_string(dim_) + ", got " + std::to_string(size));
}

double Functional::value(const ParamVector& theta) const {
  require_dim(theta.size());
  switch (kind_) {
    case Kind::linear: return dot(u_.view(), theta.view());
    case Kind::power: return std::pow(dot(u_.view(), theta.view()), p_);
    case Kind::quadratic_form: {
      if (q_identity_) return iterboot::squared_norm(theta.view());
      double acc = 0.0;
      for (std::size_t r = 0; r < dim_; ++r) acc += theta[r] * dot(q_.row(r), theta.view());
      return acc;
    }
    case Kind::exp_linear: return std::exp(dot(u_.view(), theta.view()));
    case Kind::radial: {
      const double r = iterboot::squared_norm(theta.view());
      return profile_ == RadialProfile::neg_exp ? std::exp(-r) : std::log1p(r);
    }
  }
  return 0.0;
}

ParamVector Functional::grad(const ParamVector& theta) const {
  require_dim(theta.size());
  switch (kind_) {
    case Kind::linear: return u_;
    case Kind::power: {
      const double s = dot(u_.view(), theta.view());
      return (p_ * std::pow(s, p_ - 1)) * u_;
    }
    case Kind::quadratic_form: {
      if (q_identity_) return 2.0 * theta;
      // (Q + Q^T) theta
      ParamVector g(dim_);
      for (std::size_t r = 0; r < dim_; ++r)
        for (std::size_t c = 0; c < dim_; ++c) g[r] += (q_(r, c) + q_(c, r)) * theta[c];
      return g;
    }
    case Kind::exp_linear: return std::exp(dot(u_.view(), theta.view())) * u_;
    case Kind::radial: {
      const double r = iterboot::squared_norm(theta.view());
      const double dg = profile_ == RadialProfile::neg_exp ? -std::exp(-r) : 1.0 / (1.0 + r);
      return (2.0 * dg) * theta;
    }
  }
  return ParamVector(dim_);
}

double grad_check(const Functional& f, const ParamVector& theta, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("grad_check: step must be positive");
  const ParamVector g = f.grad(theta);
  double worst = 0.0;
  ParamVector probe = theta;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    probe[i] = theta[i] + h;
    const double up = f.value(probe);
    probe[i] = theta[i] - h;
    const double down = f.value(probe);
    probe[i] = theta[i];
    const double fd = (up - down) / (2.0 * h);
    worst = std::max(worst, std::abs(fd - g[i]) / (1.0 + std::abs(g[i])));
  }
  return worst;
}

}  // namespace iterboot::functionals
