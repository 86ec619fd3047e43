#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "effheis/matrix.hpp"
#include "effheis/projector.hpp"

namespace effheis {

/// ψ(Δ,t) = (e^{tΔ} − 1)/Δ and φ(Δ,t) = (e^{tΔ} − 1 − tΔ)/Δ², extended to
/// Δ = 0 by their power series.
enum class SpectralFunctionKind { psi, phi };

/// Below this |tΔ| the series branch is used.
inline constexpr double kSeriesSwitch = 1e-4;

Complex spectral_weight(SpectralFunctionKind kind, Complex delta, double t);
/// Closed-form branch only (no series fallback); undefined at Δ = 0.
Complex spectral_weight_direct(SpectralFunctionKind kind, Complex delta, double t);
/// Truncated power series with `terms` terms.
Complex spectral_weight_series(SpectralFunctionKind kind, Complex delta, double t, int terms = 6);

using MatrixOfTime = std::function<ComplexMatrix(double)>;

/// h_I(t) = e^{−h₀t} h_I e^{h₀t}.
ComplexMatrix interaction_hI(const ComplexMatrix& hI, const ComplexMatrix& h0, double t);

/// F([h₀,·]) h_I for h₀ = −iM: in M's eigenbasis entry (a,b) is scaled by
/// F(Δ_ab, t) with Δ_ab = −i(λ_a − λ_b).
ComplexMatrix apply_ad_function(const ComplexMatrix& hI, const ResonancePartition& free, double t,
                                SpectralFunctionKind kind);
ComplexMatrix apply_ad_function(const ComplexMatrix& hI, const ComplexMatrix& m, double t, SpectralFunctionKind kind);

/// μ₁(t) = t·P(h_I).
MatrixOfTime mu1(const MomentModel& model);
/// μ₂(t) = P(h_I φ(t[h₀,·]) h_I).
MatrixOfTime mu2_closed(const MomentModel& model);

/// μ_k(t) = ∫₀ᵗdt_k…∫₀^{t₂}dt₁ P(h_I(t_k)…h_I(t₁)) by iterated Gauss–Legendre,
/// `nodes` points per level. k ∈ {1,2,3}.
ComplexMatrix mu_k_quadrature(const MomentModel& model, int k, double t, std::size_t nodes = 64);

/// Truncations of l(t) = h₀ + λκ₁ + λ²κ₂(t) + O(λ³).
class TimeLocalGenerator {
 public:
  TimeLocalGenerator(ComplexMatrix h0, ComplexMatrix kappa1, MatrixOfTime kappa2, double coupling);

  const ComplexMatrix& h0() const noexcept { return h0_; }
  const ComplexMatrix& kappa1() const noexcept { return kappa1_; }
  ComplexMatrix kappa2(double t) const { return kappa2_(t); }
  double coupling() const noexcept { return coupling_; }

  /// l_I(t) truncated at λ^order (order ∈ {0,1,2}).
  ComplexMatrix interaction_part(double t, int order) const;
  /// l(t) = h₀ + l_I(t).
  ComplexMatrix generator(double t, int order) const;

 private:
  ComplexMatrix h0_;
  ComplexMatrix kappa1_;
  MatrixOfTime kappa2_;
  double coupling_;
};

/// κ₁ = P(h_I), κ₂(t) = P(h_I ψ(t[h₀,·]) h_I) − t·P(h_I)².
TimeLocalGenerator kappa12(const MomentModel& model);

/// κ_k(t) = Σ over compositions (k₀,…,k_q) of k: (−1)^q μ̇_{k₀} μ_{k₁}…μ_{k_q},
/// from quadrature moments and central differences (step t·1e-5). k ≤ 3.
ComplexMatrix general_kappa(const MomentModel& model, int k, double t, std::size_t nodes = 64);

/// All compositions of k into positive parts, in lexicographic order.
std::vector<std::vector<int>> compositions(int k);

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss–Legendre rule on [−1, 1].
QuadratureRule gauss_legendre(std::size_t n);

}  // namespace effheis
