#pragma once

#include <cstddef>
#include <random>
#include <span>

#include "effheis/linalg.hpp"
#include "effheis/matrix.hpp"

namespace effheis {

/// Absolute max-entry tolerance for the fermionic coefficient-matrix checks.
inline constexpr double kFermionValidationTol = 1e-12;

/// Coefficient matrix H of Ĥ = ½ 𝔠ᵀH𝔠 over 𝔠 = (c₁…cₙ, c₁†…cₙ†).
/// Only obtainable through validate_fermion (or the builders, which call it),
/// so every instance satisfies H = −Hᵀ = −H̃.
class FermionHamiltonian {
 public:
  std::size_t modes() const noexcept { return modes_; }
  const ComplexMatrix& matrix() const noexcept { return matrix_; }

 private:
  FermionHamiltonian(std::size_t modes, ComplexMatrix matrix) : modes_(modes), matrix_(std::move(matrix)) {}
  friend FermionHamiltonian validate_fermion(const ComplexMatrix& h, std::size_t n);

  std::size_t modes_;
  ComplexMatrix matrix_;
};

/// H = H₀ + λ·H_I.
class SplitHamiltonian {
 public:
  SplitHamiltonian(FermionHamiltonian base, FermionHamiltonian interaction, double coupling);

  const FermionHamiltonian& base() const noexcept { return base_; }
  const FermionHamiltonian& interaction() const noexcept { return interaction_; }
  double coupling() const noexcept { return coupling_; }
  std::size_t modes() const noexcept { return base_.modes(); }

  FermionHamiltonian total() const;
  SplitHamiltonian with_coupling(double coupling) const { return {base_, interaction_, coupling}; }

 private:
  FermionHamiltonian base_;
  FermionHamiltonian interaction_;
  double coupling_;
};

/// h⁽ᵐ⁾ = −i Σⱼ I⊗…⊗(E·K)⊗…⊗I, acting on 𝔠⊗…⊗𝔠.
struct MomentGenerator {
  std::size_t order = 1;
  ComplexMatrix matrix;
};

/// E = [[0, I], [I, 0]].
ComplexMatrix exchange_matrix(std::size_t n);

/// K̃ = E·conj(K)·E.
ComplexMatrix tilde_conjugate(const ComplexMatrix& k, std::size_t n);

/// Throws NotAntisymmetric / NotTildeAntisymmetric naming the worst entry.
FermionHamiltonian validate_fermion(const ComplexMatrix& h, std::size_t n);

/// Ĥ₀ = Σ ωⱼ cⱼ†cⱼ − ½Σ ωⱼ, i.e. H = [[0, −Ω], [Ω, 0]].
FermionHamiltonian diagonal_modes(std::span<const double> frequencies);

/// Ĥ = g(cⱼ†c_k + c_k†cⱼ) with 1-based mode labels 1 ≤ j < k ≤ n.
FermionHamiltonian hopping(std::size_t n, std::size_t j, std::size_t k, double g);

/// Antisymmetrize-then-tilde-project a Gaussian random complex matrix.
FermionHamiltonian random_fermion_hamiltonian(std::size_t n, std::mt19937_64& rng);

/// E·K, the Hermitian single-quasiparticle generator.
ComplexMatrix single_particle_generator(const FermionHamiltonian& k);

/// O(t) = exp(−i·E·H·t), so that e^{iĤt} 𝔠 e^{−iĤt} = O(t) 𝔠.
ComplexMatrix heisenberg_matrix(const FermionHamiltonian& h, double t);

/// H(s) = e^{−iH₀Es}·H·e^{iEH₀s}, the coefficient matrix of e^{−iĤ₀s} Ĥ e^{iĤ₀s}.
ComplexMatrix interaction_frame_H(const FermionHamiltonian& h, const FermionHamiltonian& h0, double s);

MomentGenerator moment_generator(const FermionHamiltonian& k, std::size_t m, std::size_t dim_cap = kDefaultDimCap);

}  // namespace effheis
