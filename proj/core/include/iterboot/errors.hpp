#pragma once

#include <stdexcept>
#include <string>

namespace iterboot {

/// Operand shapes do not conform.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A requested object would exceed the supported size.
class SizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// A parameter lies outside the model's valid domain, or sampling produced
/// non-finite values.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A matrix factorization or root failed beyond tolerance.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Monte Carlo estimation could not produce a value (too many aborted chains).
class EstimationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace iterboot
