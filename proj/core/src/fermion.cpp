#include "effheis/fermion.hpp"

#include <cmath>
#include <sstream>

#include "effheis/error.hpp"

namespace effheis {

namespace {

void require_dim(const ComplexMatrix& k, std::size_t n, const char* what) {
  if (n == 0 || k.dim() != 2 * n) {
    throw Error(ErrorKind::DimensionMismatch, std::string(what) + ": expected dim " + std::to_string(2 * n) +
                                                  ", got " + std::to_string(k.dim()));
  }
}

struct Violation {
  double amount = 0.0;
  std::size_t row = 0;
  std::size_t col = 0;
};

// Worst entry of |lhs + rhs|.
Violation worst_sum(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
  Violation v;
  for (std::size_t r = 0; r < lhs.dim(); ++r)
    for (std::size_t c = 0; c < lhs.dim(); ++c) {
      const double a = std::abs(lhs(r, c) + rhs(r, c));
      if (a > v.amount) v = {a, r, c};
    }
  return v;
}

std::string describe(const Violation& v) {
  std::ostringstream os;
  os.precision(3);
  os << "worst entry (" << v.row << "," << v.col << ") violates by " << std::scientific << v.amount;
  return os.str();
}

}  // namespace

SplitHamiltonian::SplitHamiltonian(FermionHamiltonian base, FermionHamiltonian interaction, double coupling)
    : base_(std::move(base)), interaction_(std::move(interaction)), coupling_(coupling) {
  if (base_.modes() != interaction_.modes()) {
    throw Error(ErrorKind::DimensionMismatch, "free and interaction parts have different mode counts");
  }
  if (!std::isfinite(coupling_)) throw Error(ErrorKind::InvalidArgument, "coupling must be finite");
}

FermionHamiltonian SplitHamiltonian::total() const {
  return validate_fermion(base_.matrix() + coupling_ * interaction_.matrix(), modes());
}

ComplexMatrix exchange_matrix(std::size_t n) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "exchange_matrix needs n >= 1");
  ComplexMatrix e(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    e(i, n + i) = 1.0;
    e(n + i, i) = 1.0;
  }
  return e;
}

ComplexMatrix tilde_conjugate(const ComplexMatrix& k, std::size_t n) {
  require_dim(k, n, "tilde_conjugate");
  // (E·conj(K)·E)_{ab} = conj(K)_{σ(a)σ(b)} with σ swapping the two halves.
  ComplexMatrix out(2 * n);
  const auto swap_half = [n](std::size_t a) { return a < n ? a + n : a - n; };
  for (std::size_t r = 0; r < 2 * n; ++r)
    for (std::size_t c = 0; c < 2 * n; ++c) out(r, c) = std::conj(k(swap_half(r), swap_half(c)));
  return out;
}

FermionHamiltonian validate_fermion(const ComplexMatrix& h, std::size_t n) {
  require_dim(h, n, "validate_fermion");
  const Violation antisym = worst_sum(h, h.transpose());
  if (antisym.amount > kFermionValidationTol) {
    throw Error(ErrorKind::NotAntisymmetric, "H != -H^T: " + describe(antisym));
  }
  const Violation tilde = worst_sum(h, tilde_conjugate(h, n));
  if (tilde.amount > kFermionValidationTol) {
    throw Error(ErrorKind::NotTildeAntisymmetric, "H != -tilde(H): " + describe(tilde));
  }
  const double herm = hermiticity_residual(exchange_matrix(n) * h);
  if (herm > 4 * kFermionValidationTol) {
    throw Error(ErrorKind::NotTildeAntisymmetric, "E*H not Hermitian, residual " + std::to_string(herm));
  }
  return FermionHamiltonian(n, h);
}

FermionHamiltonian diagonal_modes(std::span<const double> frequencies) {
  const std::size_t n = frequencies.size();
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "diagonal_modes needs at least one frequency");
  ComplexMatrix h(2 * n);
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::isfinite(frequencies[j])) throw Error(ErrorKind::InvalidArgument, "non-finite frequency");
    h(j, n + j) = -frequencies[j];
    h(n + j, j) = frequencies[j];
  }
  return validate_fermion(h, n);
}

FermionHamiltonian hopping(std::size_t n, std::size_t j, std::size_t k, double g) {
  if (j < 1 || j >= k || k > n) {
    throw Error(ErrorKind::IndexOutOfRange, "hopping needs 1 <= j < k <= n, got j=" + std::to_string(j) +
                                                " k=" + std::to_string(k) + " n=" + std::to_string(n));
  }
  const std::size_t a = j - 1, b = k - 1;
  ComplexMatrix h(2 * n);
  h(a, n + b) = -g;
  h(b, n + a) = -g;
  h(n + a, b) = g;
  h(n + b, a) = g;
  return validate_fermion(h, n);
}

FermionHamiltonian random_fermion_hamiltonian(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexMatrix a(2 * n);
  for (auto& z : a.data()) z = Complex(gauss(rng), gauss(rng));
  const ComplexMatrix antisym = 0.5 * (a - a.transpose());
  return validate_fermion(0.5 * (antisym - tilde_conjugate(antisym, n)), n);
}

ComplexMatrix single_particle_generator(const FermionHamiltonian& k) {
  return exchange_matrix(k.modes()) * k.matrix();
}

ComplexMatrix heisenberg_matrix(const FermionHamiltonian& h, double t) {
  return matrix_exponential(-kI * t * single_particle_generator(h));
}

ComplexMatrix interaction_frame_H(const FermionHamiltonian& h, const FermionHamiltonian& h0, double s) {
  if (h.modes() != h0.modes()) throw Error(ErrorKind::DimensionMismatch, "interaction_frame_H mode counts differ");
  const ComplexMatrix e = exchange_matrix(h0.modes());
  const ComplexMatrix left = matrix_exponential(-kI * s * (h0.matrix() * e));
  const ComplexMatrix right = matrix_exponential(kI * s * (e * h0.matrix()));
  return left * h.matrix() * right;
}

MomentGenerator moment_generator(const FermionHamiltonian& k, std::size_t m, std::size_t dim_cap) {
  return {m, -kI * kron_sum(single_particle_generator(k), m, dim_cap)};
}

}  // namespace effheis
