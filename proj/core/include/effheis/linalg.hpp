#pragma once

#include <cstddef>
#include <vector>

#include "effheis/matrix.hpp"

namespace effheis {

inline constexpr std::size_t kDefaultDimCap = 4096;
inline constexpr double kDefaultExpNormCap = 1e4;

/// Eigenvalues ascending; columns of `basis` are the matching orthonormal
/// eigenvectors, each scaled so its largest-magnitude component is real and
/// positive (first such component on ties).
struct HermitianEigenDecomposition {
  std::vector<double> eigenvalues;
  ComplexMatrix basis;

  /// basis · diag(f(λ)) · basis†
  template <class F>
  ComplexMatrix apply_function(F&& f) const {
    const std::size_t n = eigenvalues.size();
    ComplexMatrix scaled = basis;
    for (std::size_t c = 0; c < n; ++c) {
      const Complex w = f(eigenvalues[c]);
      for (std::size_t r = 0; r < n; ++r) scaled(r, c) *= w;
    }
    return scaled * basis.adjoint();
  }
};

/// Cyclic complex Jacobi. Throws NotHermitian when
/// ‖M − M†‖_max > 1e-10·(1 + ‖M‖_max) and NoConvergence past 30·dim² sweeps.
HermitianEigenDecomposition hermitian_eigendecompose(const ComplexMatrix& m);

/// e^A. Anti-Hermitian input goes through the eigenbasis of iA; anything else
/// through 13th-order Padé with scaling and squaring.
/// Throws Overflow when ‖A‖₁ exceeds `norm_cap`.
ComplexMatrix matrix_exponential(const ComplexMatrix& a, double norm_cap = kDefaultExpNormCap);

/// The general scaling-and-squaring path, with no eigenbasis shortcut.
ComplexMatrix matrix_exponential_pade(const ComplexMatrix& a, double norm_cap = kDefaultExpNormCap);

/// Solves A·X = B by LU with partial pivoting.
ComplexMatrix solve(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b, std::size_t dim_cap = kDefaultDimCap);

/// Σ_j I⊗…⊗K⊗…⊗I with K in slot j of m.
ComplexMatrix kron_sum(const ComplexMatrix& k, std::size_t m, std::size_t dim_cap = kDefaultDimCap);

/// Applies the same single-slot matrix in every one of m tensor slots.
ComplexMatrix kron_power(const ComplexMatrix& k, std::size_t m, std::size_t dim_cap = kDefaultDimCap);

/// Throws DimensionOverflow unless base^m ≤ cap.
std::size_t checked_power_dim(std::size_t base, std::size_t m, std::size_t dim_cap);

}  // namespace effheis
