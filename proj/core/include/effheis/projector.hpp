#pragma once

#include <cstddef>
#include <memory>
#include <utility>
#include <vector>

#include "effheis/fermion.hpp"
#include "effheis/linalg.hpp"
#include "effheis/matrix.hpp"

namespace effheis {

inline constexpr double kDefaultResonanceTol = 1e-9;

/// Spectral data behind the averaging map for h₀ = −iM: eigenvalues of M,
/// grouped by single-linkage clustering with gap tol·(1 + spread). Two
/// indices are resonant iff they share a cluster.
class ResonancePartition {
 public:
  ResonancePartition(HermitianEigenDecomposition eig, double tol);

  const std::vector<double>& eigenvalues() const noexcept { return eig_.eigenvalues; }
  const ComplexMatrix& basis() const noexcept { return eig_.basis; }
  const HermitianEigenDecomposition& decomposition() const noexcept { return eig_; }
  double tolerance() const noexcept { return tol_; }
  std::size_t dim() const noexcept { return cluster_.size(); }

  std::size_t cluster_of(std::size_t index) const { return cluster_.at(index); }
  std::size_t cluster_count() const noexcept { return cluster_count_; }
  bool resonant(std::size_t a, std::size_t b) const { return cluster_.at(a) == cluster_.at(b); }
  std::vector<std::pair<std::size_t, std::size_t>> resonant_pairs() const;

  /// Largest eigenvalue spread inside one cluster; non-zero means the
  /// tolerance merged numerically distinct eigenvalues.
  double max_cluster_width() const noexcept { return max_width_; }

  ComplexMatrix to_eigenbasis(const ComplexMatrix& x) const;
  ComplexMatrix from_eigenbasis(const ComplexMatrix& x) const;

 private:
  HermitianEigenDecomposition eig_;
  double tol_;
  std::vector<std::size_t> cluster_;
  std::size_t cluster_count_ = 0;
  double max_width_ = 0.0;
};

ResonancePartition resonance_partition(const ComplexMatrix& m, double tol = kDefaultResonanceTol);

struct ProjectedMatrix {
  ComplexMatrix value;
  std::shared_ptr<const ResonancePartition> partition;
};

/// P(X) = lim (1/T)∫₀ᵀ e^{h₀s} X e^{−h₀s} ds with h₀ = −iM, evaluated exactly
/// by masking the non-resonant entries of X in the eigenbasis of M.
ComplexMatrix project(const ComplexMatrix& x, const ResonancePartition& partition);
ProjectedMatrix project(const ComplexMatrix& x, const ComplexMatrix& m, double tol = kDefaultResonanceTol);

/// Trapezoidal (1/T)∫₀ᵀ e^{h₀s} X e^{−h₀s} ds on `steps` intervals.
ComplexMatrix numeric_time_average(const ComplexMatrix& x, const ComplexMatrix& m, double horizon, std::size_t steps);

/// Moment-level generators of a split Hamiltonian, with the free partition
/// cached: h₀ = h₀⁽ᵐ⁾, h_I = h_I⁽ᵐ⁾, and the partition of M₀ = i·h₀.
struct MomentModel {
  std::size_t order = 1;
  double coupling = 0.0;
  ComplexMatrix h0;
  ComplexMatrix hI;
  std::shared_ptr<const ResonancePartition> free_partition;

  ComplexMatrix full_generator() const { return h0 + coupling * hI; }
  ComplexMatrix project(const ComplexMatrix& x) const { return effheis::project(x, *free_partition); }
  MomentModel with_coupling(double lambda) const;
};

MomentModel make_moment_model(const SplitHamiltonian& split, std::size_t m, double tol = kDefaultResonanceTol,
                              std::size_t dim_cap = kDefaultDimCap);

/// P⁽ᵐ⁾(e^{h⁽ᵐ⁾t}): acting on 𝔠⊗…⊗𝔠 it gives the averaged Heisenberg
/// evolution of the m-th order operator products.
ComplexMatrix effective_propagator(const MomentModel& model, double t);
ComplexMatrix effective_propagator(const SplitHamiltonian& split, std::size_t m, double t,
                                   double tol = kDefaultResonanceTol, std::size_t dim_cap = kDefaultDimCap);

}  // namespace effheis
