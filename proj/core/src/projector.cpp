#include "effheis/projector.hpp"

#include <algorithm>
#include <cmath>

#include "effheis/error.hpp"

namespace effheis {

ResonancePartition::ResonancePartition(HermitianEigenDecomposition eig, double tol)
    : eig_(std::move(eig)), tol_(tol), cluster_(eig_.eigenvalues.size()) {
  if (!(tol >= 0.0)) throw Error(ErrorKind::InvalidArgument, "resonance tolerance must be non-negative");
  const auto& ev = eig_.eigenvalues;
  if (ev.empty()) return;
  const double spread = ev.back() - ev.front();
  const double gap = tol * (1.0 + spread);
  std::size_t start = 0;
  for (std::size_t i = 0; i < ev.size(); ++i) {
    if (i > 0 && ev[i] - ev[i - 1] > gap) {
      max_width_ = std::max(max_width_, ev[i - 1] - ev[start]);
      ++cluster_count_;
      start = i;
    }
    cluster_[i] = cluster_count_;
  }
  max_width_ = std::max(max_width_, ev.back() - ev[start]);
  ++cluster_count_;
}

std::vector<std::pair<std::size_t, std::size_t>> ResonancePartition::resonant_pairs() const {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t a = 0; a < dim(); ++a)
    for (std::size_t b = 0; b < dim(); ++b)
      if (resonant(a, b)) pairs.emplace_back(a, b);
  return pairs;
}

ComplexMatrix ResonancePartition::to_eigenbasis(const ComplexMatrix& x) const {
  return eig_.basis.adjoint() * x * eig_.basis;
}

ComplexMatrix ResonancePartition::from_eigenbasis(const ComplexMatrix& x) const {
  return eig_.basis * x * eig_.basis.adjoint();
}

ResonancePartition resonance_partition(const ComplexMatrix& m, double tol) {
  return ResonancePartition(hermitian_eigendecompose(m), tol);
}

ComplexMatrix project(const ComplexMatrix& x, const ResonancePartition& partition) {
  if (x.dim() != partition.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "project: operand dim " + std::to_string(x.dim()) +
                                                  " vs partition dim " + std::to_string(partition.dim()));
  }
  ComplexMatrix y = partition.to_eigenbasis(x);
  for (std::size_t a = 0; a < y.dim(); ++a)
    for (std::size_t b = 0; b < y.dim(); ++b)
      if (!partition.resonant(a, b)) y(a, b) = 0.0;
  return partition.from_eigenbasis(y);
}

ProjectedMatrix project(const ComplexMatrix& x, const ComplexMatrix& m, double tol) {
  if (x.dim() != m.dim()) throw Error(ErrorKind::DimensionMismatch, "project: X and M differ in dimension");
  auto partition = std::make_shared<const ResonancePartition>(resonance_partition(m, tol));
  ComplexMatrix value = project(x, *partition);
  return {std::move(value), std::move(partition)};
}

ComplexMatrix numeric_time_average(const ComplexMatrix& x, const ComplexMatrix& m, double horizon,
                                   std::size_t steps) {
  if (!(horizon > 0.0)) throw Error(ErrorKind::InvalidArgument, "time average needs T > 0");
  if (steps < 2) throw Error(ErrorKind::InvalidArgument, "time average needs at least 2 steps");
  if (x.dim() != m.dim()) throw Error(ErrorKind::DimensionMismatch, "numeric_time_average");
  if (hermiticity_residual(m) > 1e-10 * (1.0 + max_abs(m))) {
    throw Error(ErrorKind::NotHermitian, "numeric_time_average needs Hermitian M");
  }
  const double ds = horizon / static_cast<double>(steps);
  // h₀ = −iM; conjugation by e^{h₀ ds} advances one node.
  const ComplexMatrix step = matrix_exponential(-kI * ds * m);
  const ComplexMatrix step_inv = step.adjoint();
  ComplexMatrix current = x;
  ComplexMatrix sum = 0.5 * x;
  for (std::size_t k = 1; k <= steps; ++k) {
    current = step * current * step_inv;
    sum += (k == steps ? 0.5 : 1.0) * current;
  }
  return sum * (1.0 / static_cast<double>(steps));
}

MomentModel MomentModel::with_coupling(double lambda) const {
  MomentModel copy = *this;
  copy.coupling = lambda;
  return copy;
}

MomentModel make_moment_model(const SplitHamiltonian& split, std::size_t m, double tol, std::size_t dim_cap) {
  MomentModel model;
  model.order = m;
  model.coupling = split.coupling();
  model.h0 = moment_generator(split.base(), m, dim_cap).matrix;
  model.hI = moment_generator(split.interaction(), m, dim_cap).matrix;
  const ComplexMatrix free_hermitian = kI * model.h0;
  model.free_partition =
      std::make_shared<const ResonancePartition>(resonance_partition(0.5 * (free_hermitian + free_hermitian.adjoint()), tol));
  return model;
}

ComplexMatrix effective_propagator(const MomentModel& model, double t) {
  return model.project(matrix_exponential(model.full_generator() * t));
}

ComplexMatrix effective_propagator(const SplitHamiltonian& split, std::size_t m, double t, double tol,
                                   std::size_t dim_cap) {
  return effective_propagator(make_moment_model(split, m, tol, dim_cap), t);
}

}  // namespace effheis
