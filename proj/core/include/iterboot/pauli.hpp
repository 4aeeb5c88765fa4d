#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "iterboot/linalg.hpp"

namespace iterboot {

using Complex = std::complex<double>;

/// Square complex matrix equal to its conjugate transpose (checked to 1e-12).
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  /// Row-major entries, size*size of them.
  HermitianMatrix(std::size_t size, std::vector<Complex> entries);
  static HermitianMatrix zero(std::size_t size);

  std::size_t size() const noexcept { return size_; }
  Complex operator()(std::size_t r, std::size_t c) const { return entries_[r * size_ + c]; }
  const std::vector<Complex>& entries() const noexcept { return entries_; }

  /// Kronecker product a ⊗ b.
  friend HermitianMatrix kron(const HermitianMatrix& a, const HermitianMatrix& b);
  friend HermitianMatrix operator+(const HermitianMatrix& a, const HermitianMatrix& b);
  friend HermitianMatrix operator*(double s, const HermitianMatrix& a);

 private:
  std::size_t size_ = 0;
  std::vector<Complex> entries_;
};

/// Re tr(a† b).
double hs_inner(const HermitianMatrix& a, const HermitianMatrix& b);

/// Largest singular value (= largest |eigenvalue| for Hermitian input).
double operator_norm(const HermitianMatrix& a);

/// The 2x2 matrices sigma_0..sigma_3 (identity, then the three Pauli
/// matrices with sigma_2 = [[0, i], [-i, 0]]).
HermitianMatrix pauli_sigma(int index);

/// All 4^levels tensor products W_{i1} ⊗ ... ⊗ W_{il} with W_i = sigma_i/sqrt(2),
/// multi-indices in lexicographic order (i1 most significant).
/// Orthonormal for the Hilbert-Schmidt inner product. Requires
/// 1 <= levels and 2^levels <= 32.
std::vector<HermitianMatrix> pauli_basis(int levels);

/// Real coordinates <H, E_j> of a Hermitian matrix in the Pauli basis.
ParamVector pauli_coefficients(const HermitianMatrix& h, const std::vector<HermitianMatrix>& basis);

/// Inverse of pauli_coefficients: sum_j coeffs[j] * E_j.
HermitianMatrix from_pauli_coefficients(const ParamVector& coeffs,
                                        const std::vector<HermitianMatrix>& basis);

}  // namespace iterboot
