#include "checks.hpp"

#include <algorithm>

#include "effheis/fock.hpp"
#include "effheis/linalg.hpp"
#include "effheis/perturbation.hpp"

namespace effheis::cli {

namespace {

constexpr double kLawTimes[] = {0.3, 1.7};

}  // namespace

double LawResiduals::worst() const { return std::max({idempotency, free_commutation, pulling}); }

ComplexMatrix random_complex_matrix(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  ComplexMatrix x(dim);
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = 0; c < dim; ++c) {
      const double re = gauss(rng);
      x(r, c) = {re, gauss(rng)};
    }
  return x;
}

LawResiduals projector_laws(const MomentModel& model, std::mt19937_64& rng, std::size_t trials) {
  LawResiduals out;
  std::vector<ComplexMatrix> free;
  for (double t : kLawTimes) free.push_back(matrix_exponential(t * model.h0));
  for (std::size_t k = 0; k < trials; ++k) {
    const ComplexMatrix x = random_complex_matrix(model.h0.dim(), rng);
    const ComplexMatrix px = model.project(x);
    out.idempotency = std::max(out.idempotency, max_abs_diff(model.project(px), px));
    for (const auto& u : free) {
      out.free_commutation = std::max(out.free_commutation, max_abs(commutator(px, u)));
      out.pulling = std::max(out.pulling, max_abs_diff(model.project(u * x), u * px));
    }
  }
  return out;
}

LawResiduals superoperator_laws(const ComplexMatrix& h0_fock, std::mt19937_64& rng, std::size_t trials,
                                double tol) {
  LawResiduals out;
  const std::size_t d = h0_fock.dim();
  std::vector<ComplexMatrix> free;
  for (double t : kLawTimes) {
    free.push_back(sandwich_superoperator(matrix_exponential(kI * t * h0_fock), matrix_exponential(-kI * t * h0_fock)));
  }
  for (std::size_t k = 0; k < trials; ++k) {
    const ComplexMatrix phi = random_complex_matrix(d * d, rng);
    const ComplexMatrix p = project_superoperator(phi, h0_fock, tol);
    out.idempotency = std::max(out.idempotency, max_abs_diff(project_superoperator(p, h0_fock, tol), p));
    for (const auto& u : free) {
      out.free_commutation = std::max(out.free_commutation, max_abs_diff(p * u, u * p));
      out.pulling = std::max(out.pulling, max_abs_diff(project_superoperator(u * phi, h0_fock, tol), u * p));
    }
  }
  return out;
}

double stationarity_residual(const MomentModel& model, double t1, double t2) {
  const ComplexMatrix lhs = model.project(interaction_hI(model.hI, model.h0, t2) * interaction_hI(model.hI, model.h0, t1));
  const ComplexMatrix rhs = model.project(model.hI * interaction_hI(model.hI, model.h0, t1 - t2));
  return max_abs_diff(lhs, rhs);
}

}  // namespace effheis::cli
