#pragma once

#include <cstddef>
#include <random>

#include "effheis/matrix.hpp"
#include "effheis/projector.hpp"

namespace effheis::cli {

/// Worst residual of each averaging law over a batch of random inputs.
struct LawResiduals {
  double idempotency = 0.0;
  double free_commutation = 0.0;
  double pulling = 0.0;

  double worst() const;
};

/// Matrix level: P(P(X)) = P(X), [P(X), e^{h₀t}] = 0, P(e^{h₀t}X) = e^{h₀t}P(X).
LawResiduals projector_laws(const MomentModel& model, std::mt19937_64& rng, std::size_t trials);

/// Superoperator level on Fock space, with U₀ the free Heisenberg evolution.
LawResiduals superoperator_laws(const ComplexMatrix& h0_fock, std::mt19937_64& rng, std::size_t trials,
                                double tol);

/// ‖P(h_I(t₂)h_I(t₁)) − P(h_I h_I(t₁−t₂))‖_max.
double stationarity_residual(const MomentModel& model, double t1, double t2);

ComplexMatrix random_complex_matrix(std::size_t dim, std::mt19937_64& rng);

}  // namespace effheis::cli
