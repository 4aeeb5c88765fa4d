#include "iterboot/pauli.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "iterboot/errors.hpp"

namespace iterboot {

HermitianMatrix::HermitianMatrix(std::size_t size, std::vector<Complex> entries)
    : size_(size), entries_(std::move(entries)) {
  if (entries_.size() != size_ * size_)
    throw DimensionError("HermitianMatrix: expected " + std::to_string(size_ * size_) + " entries");
  for (std::size_t r = 0; r < size_; ++r)
    for (std::size_t c = r; c < size_; ++c)
      if (std::abs((*this)(r, c) - std::conj((*this)(c, r))) > 1e-12)
        throw NumericalError("HermitianMatrix: input is not Hermitian");
}

HermitianMatrix HermitianMatrix::zero(std::size_t size) {
  return HermitianMatrix(size, std::vector<Complex>(size * size));
}

HermitianMatrix kron(const HermitianMatrix& a, const HermitianMatrix& b) {
  const std::size_t n = a.size_ * b.size_;
  std::vector<Complex> out(n * n);
  for (std::size_t ar = 0; ar < a.size_; ++ar)
    for (std::size_t ac = 0; ac < a.size_; ++ac) {
      const Complex x = a(ar, ac);
      if (x == Complex{}) continue;
      for (std::size_t br = 0; br < b.size_; ++br)
        for (std::size_t bc = 0; bc < b.size_; ++bc)
          out[(ar * b.size_ + br) * n + ac * b.size_ + bc] = x * b(br, bc);
    }
  HermitianMatrix h;
  h.size_ = n;
  h.entries_ = std::move(out);
  return h;
}

HermitianMatrix operator+(const HermitianMatrix& a, const HermitianMatrix& b) {
  if (a.size_ != b.size_) throw DimensionError("HermitianMatrix sum: size mismatch");
  HermitianMatrix h = a;
  for (std::size_t i = 0; i < h.entries_.size(); ++i) h.entries_[i] += b.entries_[i];
  return h;
}

HermitianMatrix operator*(double s, const HermitianMatrix& a) {
  HermitianMatrix h = a;
  for (auto& z : h.entries_) z *= s;
  return h;
}

double hs_inner(const HermitianMatrix& a, const HermitianMatrix& b) {
  if (a.size() != b.size()) throw DimensionError("hs_inner: size mismatch");
  // tr(a† b) = sum_{r,c} conj(a(r,c)) b(r,c)
  Complex acc{};
  const auto& ea = a.entries();
  const auto& eb = b.entries();
  for (std::size_t i = 0; i < ea.size(); ++i) acc += std::conj(ea[i]) * eb[i];
  return acc.real();
}

double operator_norm(const HermitianMatrix& a) {
  // H = X + iY has the same spectrum (doubled) as the real symmetric [[X, -Y], [Y, X]].
  const std::size_t m = a.size();
  if (m == 0) return 0.0;
  Matrix real(2 * m, 2 * m);
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < m; ++c) {
      const Complex z = a(r, c);
      real(r, c) = z.real();
      real(r + m, c + m) = z.real();
      real(r, c + m) = -z.imag();
      real(r + m, c) = z.imag();
    }
  const auto eig = symmetric_eigen(real);
  return std::max(std::abs(eig.values.front()), std::abs(eig.values.back()));
}

HermitianMatrix pauli_sigma(int index) {
  using namespace std::complex_literals;
  switch (index) {
    case 0: return HermitianMatrix(2, {1.0, 0.0, 0.0, 1.0});
    case 1: return HermitianMatrix(2, {0.0, 1.0, 1.0, 0.0});
    case 2: return HermitianMatrix(2, {0.0, 1.0i, -1.0i, 0.0});
    case 3: return HermitianMatrix(2, {1.0, 0.0, 0.0, -1.0});
    default: throw std::out_of_range("pauli_sigma: index must be 0..3");
  }
}

std::vector<HermitianMatrix> pauli_basis(int levels) {
  if (levels < 1) throw SizeError("pauli_basis: levels must be >= 1");
  if (levels > 5) throw SizeError("pauli_basis: matrix size 2^levels exceeds 32");

  std::vector<HermitianMatrix> single;
  for (int i = 0; i < 4; ++i) single.push_back((1.0 / std::sqrt(2.0)) * pauli_sigma(i));

  std::vector<HermitianMatrix> basis = single;
  for (int l = 1; l < levels; ++l) {
    std::vector<HermitianMatrix> next;
    next.reserve(basis.size() * 4);
    for (const auto& prefix : basis)
      for (const auto& w : single) next.push_back(kron(prefix, w));
    basis = std::move(next);
  }
  return basis;
}

ParamVector pauli_coefficients(const HermitianMatrix& h, const std::vector<HermitianMatrix>& basis) {
  ParamVector coeffs(basis.size());
  for (std::size_t j = 0; j < basis.size(); ++j) coeffs[j] = hs_inner(h, basis[j]);
  return coeffs;
}

HermitianMatrix from_pauli_coefficients(const ParamVector& coeffs,
                                        const std::vector<HermitianMatrix>& basis) {
  if (coeffs.size() != basis.size()) throw DimensionError("from_pauli_coefficients: size mismatch");
  if (basis.empty()) return {};
  HermitianMatrix out = HermitianMatrix::zero(basis.front().size());
  for (std::size_t j = 0; j < basis.size(); ++j) out = out + coeffs[j] * basis[j];
  return out;
}

}  // namespace iterboot
