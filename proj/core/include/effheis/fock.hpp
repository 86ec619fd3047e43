#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "effheis/fermion.hpp"
#include "effheis/matrix.hpp"

namespace effheis {

inline constexpr std::size_t kMaxFockModes = 6;
inline constexpr std::size_t kMaxSuperoperatorModes = 3;
inline constexpr double kFockClusterTol = 1e-9;

/// Jordan–Wigner fermion operators on (ℂ²)^{⊗n}, occupation basis with mode 1
/// as the most significant tensor factor: cⱼ = Z⊗…⊗Z⊗a⊗I⊗…⊗I with the
/// parity string on modes 1…j−1, a = [[0,1],[0,0]], Z = diag(1,−1).
struct FockRep {
  std::size_t modes = 0;
  std::vector<ComplexMatrix> annihilators;
  std::vector<ComplexMatrix> creators;

  std::size_t dim() const noexcept { return std::size_t{1} << modes; }
  /// 𝔠_a for a ∈ [0, 2n): annihilators first, then creators.
  const ComplexMatrix& component(std::size_t a) const;
};

/// Cached per n; throws TooManyModes for n > 6.
std::shared_ptr<const FockRep> jordan_wigner(std::size_t n);

/// Ĥ = ½ Σ_ab K_ab 𝔠_a 𝔠_b.
ComplexMatrix quadratize(const FermionHamiltonian& k, const FockRep& rep);

/// 𝔠_{i₁}𝔠_{i₂}…𝔠_{i_m}.
ComplexMatrix moment_operator(const FockRep& rep, std::span<const std::size_t> indices);

struct SpectralProjectors {
  std::vector<double> energies;
  std::vector<ComplexMatrix> projectors;
};

SpectralProjectors spectral_projectors(const ComplexMatrix& h0, double tol = kFockClusterTol);

/// Superoperators act on row-major vectorized operators, vec(Z)[i·d + j] = Z(i,j),
/// so Z ↦ A·Z·B is the matrix A ⊗ Bᵀ.
ComplexMatrix sandwich_superoperator(const ComplexMatrix& left, const ComplexMatrix& right);
ComplexMatrix apply_superoperator(const ComplexMatrix& phi, const ComplexMatrix& z);

/// 𝔓(Φ) = Σ_{ε₁−ε₂+ε₃−ε₄=0} Π_{ε₁} Φ(Π_{ε₂} · Π_{ε₃}) Π_{ε₄}. Operators of
/// dimension ≤ 8 (n ≤ 3) only.
ComplexMatrix project_superoperator(const ComplexMatrix& phi, const ComplexMatrix& h0, double tol = kFockClusterTol);

/// lim (1/T)∫₀ᵀ ds X₁(s;t)…X_m(s;t) with X_k(s;t) = e^{iĤ(s)t} X_k e^{−iĤ(s)t},
/// Ĥ(s) = e^{−iĤ₀s} Ĥ e^{iĤ₀s}. Evaluated exactly: expand in the Ĥ₀
/// eigenbasis and keep the zero-Bohr-frequency terms.
ComplexMatrix averaged_unitary_moments(const ComplexMatrix& h, const ComplexMatrix& h0,
                                       std::span<const ComplexMatrix> ops, double t, double tol = kFockClusterTol);

/// Finite-T trapezoidal version of the same average, for sanity checks.
ComplexMatrix averaged_unitary_moments_numeric(const ComplexMatrix& h, const ComplexMatrix& h0,
                                               std::span<const ComplexMatrix> ops, double t, double horizon,
                                               std::size_t steps);

/// max_a ‖e^{iĤt} 𝔠_a e^{−iĤt} − Σ_b O(t)_ab 𝔠_b‖_max with O(t) = e^{−iEHt}.
double check_single_particle_evolution(const FermionHamiltonian& h, const FockRep& rep, double t);

/// Max residual of e^{iĤ(s)t} 𝔠_{i₁}…𝔠_{i_m} e^{−iĤ(s)t} = (O(s,t)^{⊗m} 𝔠^{⊗m})_i over all
/// multi-indices, with O(s,t) = exp(−iE·H(s)·t) from the matrix-level frame.
double check_tensor_conjugation(const FermionHamiltonian& h, const FermionHamiltonian& h0, const FockRep& rep,
                                std::size_t m, double s, double t);

/// Compares a matrix-level moment propagator P (dim (2n)^m) against the
/// Fock-space average: max over multi-indices i of
/// ‖𝔓(e^{iĤt}·e^{−iĤt})(𝔠_{i₁}…𝔠_{i_m}) − Σ_j P_ij 𝔠_{j₁}…𝔠_{j_m}‖_max.
double check_moment_propagator(const ComplexMatrix& propagator, const SplitHamiltonian& split, const FockRep& rep,
                               std::size_t m, double t, double tol = kFockClusterTol);

}  // namespace effheis
