#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "effheis/matrix.hpp"

namespace effheis {

inline constexpr double kBosonValidationTol = 1e-12;
inline constexpr double kStabilityTol = 1e-9;

/// Coefficient matrix of Ĥ = ½ 𝔞ᵀH𝔞 over 𝔞 = (a₁…aₙ, a₁†…aₙ†), with H = Hᵀ = H̃.
class BosonHamiltonian {
 public:
  std::size_t modes() const noexcept { return modes_; }
  const ComplexMatrix& matrix() const noexcept { return matrix_; }

 private:
  BosonHamiltonian(std::size_t modes, ComplexMatrix matrix) : modes_(modes), matrix_(std::move(matrix)) {}
  friend BosonHamiltonian validate_boson(const ComplexMatrix& h, std::size_t n);

  std::size_t modes_;
  ComplexMatrix matrix_;
};

/// J = [[0, −I], [I, 0]].
ComplexMatrix symplectic_matrix(std::size_t n);

/// Throws NotSymmetric / NotTildeSymmetric naming the worst entry.
BosonHamiltonian validate_boson(const ComplexMatrix& h, std::size_t n);

/// Σ ωⱼ aⱼ†aⱼ + const, i.e. H = [[0, Ω], [Ω, 0]].
BosonHamiltonian harmonic_modes(std::span<const double> frequencies);

/// Eigenvalues of a general complex matrix: Householder reduction to
/// Hessenberg form, then single-shift QR with Wilkinson shifts. Sorted by
/// (real, imag). Throws NoConvergence after 100·dim iterations on one eigenvalue.
std::vector<Complex> general_eigenvalues(const ComplexMatrix& a);

struct StabilityReport {
  std::vector<Complex> eigenvalues;  ///< of H₀·J
  double max_imag = 0.0;
  bool stable = true;
};

/// Stable iff every eigenvalue of H₀J is real within tol·max(1, max|λ|).
StabilityReport stability_check(const BosonHamiltonian& h0, double tol = kStabilityTol);

/// H(s) = e^{−iH₀Js}·H·e^{iJH₀s}.
ComplexMatrix bosonic_interaction_frame(const BosonHamiltonian& h, const BosonHamiltonian& h0, double s);

/// Trapezoidal (1/T)∫₀ᵀ e^{−iH₀Js} X e^{iH₀Js} ds.
ComplexMatrix bosonic_time_average(const BosonHamiltonian& h0, const ComplexMatrix& x, double horizon,
                                   std::size_t steps);

struct DivergenceReport {
  std::vector<double> horizons;
  std::vector<double> norms;  ///< max-entry norm of the finite-T average
  bool monotone = false;      ///< strictly increasing
  double growth_ratio = 0.0;  ///< last / first (0 when the first norm is 0)
  bool overflowed = false;
  bool divergent = false;  ///< growth_ratio > 1e3 or overflowed
};

/// Finite-T averages over increasing horizons; steps per horizon scale as T/0.005.
DivergenceReport divergence_demo(const BosonHamiltonian& h0, const ComplexMatrix& x, std::span<const double> horizons);

}  // namespace effheis
