#include "effheis/fock.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>

#include "effheis/error.hpp"
#include "effheis/linalg.hpp"

namespace effheis {

namespace {

void require_small_operator(const ComplexMatrix& op, const char* what) {
  if (op.dim() > (std::size_t{1} << kMaxSuperoperatorModes)) {
    throw Error(ErrorKind::TooManyModes, std::string(what) + ": operator dim " + std::to_string(op.dim()) +
                                             " exceeds 2^" + std::to_string(kMaxSuperoperatorModes));
  }
}

// Clustered eigenvalues of a Hermitian operator (single linkage, gap tol·(1+spread)).
struct Clusters {
  HermitianEigenDecomposition eig;
  std::vector<std::size_t> label;
  std::vector<double> energy;  // mean eigenvalue per cluster
  double scale = 1.0;
};

Clusters cluster_spectrum(const ComplexMatrix& h0, double tol) {
  Clusters c{hermitian_eigendecompose(h0), {}, {}, 1.0};
  const auto& ev = c.eig.eigenvalues;
  c.label.resize(ev.size());
  if (ev.empty()) return c;
  const double spread = ev.back() - ev.front();
  c.scale = 1.0 + spread;
  std::vector<std::size_t> count;
  for (std::size_t i = 0; i < ev.size(); ++i) {
    if (i == 0 || ev[i] - ev[i - 1] > tol * c.scale) {
      c.energy.push_back(0.0);
      count.push_back(0);
    }
    c.label[i] = c.energy.size() - 1;
    c.energy.back() += ev[i];
    ++count.back();
  }
  for (std::size_t k = 0; k < c.energy.size(); ++k) c.energy[k] /= static_cast<double>(count[k]);
  return c;
}

ComplexMatrix product_of(std::span<const ComplexMatrix> ops, std::size_t dim) {
  ComplexMatrix x = ComplexMatrix::identity(dim);
  for (const auto& op : ops) {
    if (op.dim() != dim) throw Error(ErrorKind::DimensionMismatch, "operator product");
    x = x * op;
  }
  return x;
}

// Multi-index digits of `flat` in base `base`, most significant first.
std::vector<std::size_t> digits(std::size_t flat, std::size_t base, std::size_t m) {
  std::vector<std::size_t> out(m);
  for (std::size_t slot = m; slot-- > 0;) {
    out[slot] = flat % base;
    flat /= base;
  }
  return out;
}

}  // namespace

const ComplexMatrix& FockRep::component(std::size_t a) const {
  if (a >= 2 * modes) throw Error(ErrorKind::IndexOutOfRange, "component index " + std::to_string(a));
  return a < modes ? annihilators[a] : creators[a - modes];
}

std::shared_ptr<const FockRep> jordan_wigner(std::size_t n) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "jordan_wigner needs n >= 1");
  if (n > kMaxFockModes) {
    throw Error(ErrorKind::TooManyModes, "Fock representation supports n <= " + std::to_string(kMaxFockModes));
  }
  static std::mutex cache_mutex;
  static std::map<std::size_t, std::shared_ptr<const FockRep>> cache;
  std::lock_guard lock(cache_mutex);
  if (auto it = cache.find(n); it != cache.end()) return it->second;

  const ComplexMatrix lower{{0.0, 1.0}, {0.0, 0.0}};
  const ComplexMatrix parity{{1.0, 0.0}, {0.0, -1.0}};
  const ComplexMatrix id2 = ComplexMatrix::identity(2);
  auto rep = std::make_shared<FockRep>();
  rep->modes = n;
  for (std::size_t j = 0; j < n; ++j) {
    ComplexMatrix op = j == 0 ? lower : parity;
    for (std::size_t slot = 1; slot < n; ++slot) op = kron(op, slot < j ? parity : (slot == j ? lower : id2));
    rep->creators.push_back(op.adjoint());
    rep->annihilators.push_back(std::move(op));
  }
  cache.emplace(n, rep);
  return rep;
}

ComplexMatrix quadratize(const FermionHamiltonian& k, const FockRep& rep) {
  if (k.modes() != rep.modes) throw Error(ErrorKind::DimensionMismatch, "quadratize: mode counts differ");
  ComplexMatrix h(rep.dim());
  const std::size_t two_n = 2 * rep.modes;
  for (std::size_t a = 0; a < two_n; ++a)
    for (std::size_t b = 0; b < two_n; ++b) {
      const Complex coeff = k.matrix()(a, b);
      if (coeff == Complex{}) continue;
      h += (0.5 * coeff) * (rep.component(a) * rep.component(b));
    }
  return h;
}

ComplexMatrix moment_operator(const FockRep& rep, std::span<const std::size_t> indices) {
  ComplexMatrix x = ComplexMatrix::identity(rep.dim());
  for (std::size_t a : indices) x = x * rep.component(a);
  return x;
}

SpectralProjectors spectral_projectors(const ComplexMatrix& h0, double tol) {
  const Clusters c = cluster_spectrum(h0, tol);
  SpectralProjectors out;
  out.energies = c.energy;
  out.projectors.assign(c.energy.size(), ComplexMatrix(h0.dim()));
  const std::size_t d = h0.dim();
  for (std::size_t i = 0; i < d; ++i) {
    ComplexMatrix& pi = out.projectors[c.label[i]];
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t col = 0; col < d; ++col) pi(r, col) += c.eig.basis(r, i) * std::conj(c.eig.basis(col, i));
  }
  return out;
}

ComplexMatrix sandwich_superoperator(const ComplexMatrix& left, const ComplexMatrix& right) {
  return kron(left, right.transpose(), std::numeric_limits<std::size_t>::max());
}

ComplexMatrix apply_superoperator(const ComplexMatrix& phi, const ComplexMatrix& z) {
  const std::size_t d = z.dim();
  if (phi.dim() != d * d) throw Error(ErrorKind::DimensionMismatch, "superoperator does not match operator size");
  const std::vector<Complex> out = phi * z.data();
  ComplexMatrix result(d);
  std::copy(out.begin(), out.end(), result.data().begin());
  return result;
}

ComplexMatrix project_superoperator(const ComplexMatrix& phi, const ComplexMatrix& h0, double tol) {
  require_small_operator(h0, "project_superoperator");
  const std::size_t d = h0.dim();
  if (phi.dim() != d * d) throw Error(ErrorKind::DimensionMismatch, "superoperator does not match Ĥ₀");
  const SpectralProjectors sp = spectral_projectors(h0, tol);
  const std::size_t k = sp.energies.size();
  const double scale = 1.0 + (sp.energies.back() - sp.energies.front());

  const auto sandwich = [&](std::size_t x, std::size_t y) {
    return sandwich_superoperator(sp.projectors[x], sp.projectors[y]);
  };
  ComplexMatrix out(d * d);
  for (std::size_t e1 = 0; e1 < k; ++e1)
    for (std::size_t e4 = 0; e4 < k; ++e4) {
      // Σ over (ε₂, ε₃) with ε₂ − ε₃ = ε₁ − ε₄ of Π_{ε₂} · Π_{ε₃}.
      const double bohr = sp.energies[e1] - sp.energies[e4];
      ComplexMatrix right(d * d);
      bool any = false;
      for (std::size_t e2 = 0; e2 < k; ++e2)
        for (std::size_t e3 = 0; e3 < k; ++e3) {
          if (std::abs(sp.energies[e2] - sp.energies[e3] - bohr) > tol * scale) continue;
          right += sandwich(e2, e3);
          any = true;
        }
      if (any) out += sandwich(e1, e4) * phi * right;
    }
  return out;
}

ComplexMatrix averaged_unitary_moments(const ComplexMatrix& h, const ComplexMatrix& h0,
                                       std::span<const ComplexMatrix> ops, double t, double tol) {
  require_small_operator(h0, "averaged_unitary_moments");
  const std::size_t d = h0.dim();
  if (h.dim() != d) throw Error(ErrorKind::DimensionMismatch, "Ĥ and Ĥ₀ differ in dimension");
  const Clusters c = cluster_spectrum(h0, tol);
  const ComplexMatrix& v = c.eig.basis;
  const ComplexMatrix forward = matrix_exponential(kI * t * h);
  const ComplexMatrix a = v.adjoint() * forward * v;
  const ComplexMatrix b = v.adjoint() * forward.adjoint() * v;
  const ComplexMatrix x = v.adjoint() * product_of(ops, d) * v;
  const auto& ev = c.eig.eigenvalues;

  // Term A_ab X_bc B_cd oscillates as e^{−i(ε_a−ε_b+ε_c−ε_d)s}; keep the static ones.
  ComplexMatrix avg(d);
  for (std::size_t ia = 0; ia < d; ++ia)
    for (std::size_t id = 0; id < d; ++id) {
      Complex sum = 0.0;
      for (std::size_t ib = 0; ib < d; ++ib)
        for (std::size_t ic = 0; ic < d; ++ic) {
          if (std::abs(ev[ia] - ev[ib] + ev[ic] - ev[id]) > tol * c.scale) continue;
          sum += a(ia, ib) * x(ib, ic) * b(ic, id);
        }
      avg(ia, id) = sum;
    }
  return v * avg * v.adjoint();
}

ComplexMatrix averaged_unitary_moments_numeric(const ComplexMatrix& h, const ComplexMatrix& h0,
                                               std::span<const ComplexMatrix> ops, double t, double horizon,
                                               std::size_t steps) {
  if (!(horizon > 0.0) || steps < 2) throw Error(ErrorKind::InvalidArgument, "numeric average needs T > 0, steps >= 2");
  const std::size_t d = h0.dim();
  const ComplexMatrix x = product_of(ops, d);
  const ComplexMatrix forward = matrix_exponential(kI * t * h);
  const double ds = horizon / static_cast<double>(steps);
  const ComplexMatrix free_step = matrix_exponential(-kI * ds * h0);  // e^{−iĤ₀ds}
  ComplexMatrix free = ComplexMatrix::identity(d);                    // e^{−iĤ₀s}
  ComplexMatrix sum(d);
  for (std::size_t k = 0; k <= steps; ++k) {
    // e^{iĤ(s)t} = e^{−iĤ₀s} e^{iĤt} e^{iĤ₀s}
    const ComplexMatrix u = free * forward * free.adjoint();
    const double w = (k == 0 || k == steps) ? 0.5 : 1.0;
    sum += w * (u * x * u.adjoint());
    free = free_step * free;
  }
  return sum * (1.0 / static_cast<double>(steps));
}

double check_single_particle_evolution(const FermionHamiltonian& h, const FockRep& rep, double t) {
  if (h.modes() != rep.modes) {
    throw Error(ErrorKind::DimensionMismatch, "check_single_particle_evolution: mode counts differ");
  }
  const ComplexMatrix u = matrix_exponential(kI * t * quadratize(h, rep));
  const ComplexMatrix o = heisenberg_matrix(h, t);
  const std::size_t two_n = 2 * rep.modes;
  double worst = 0.0;
  for (std::size_t a = 0; a < two_n; ++a) {
    ComplexMatrix rhs(rep.dim());
    for (std::size_t b = 0; b < two_n; ++b) rhs += o(a, b) * rep.component(b);
    worst = std::max(worst, max_abs_diff(u * rep.component(a) * u.adjoint(), rhs));
  }
  return worst;
}

double check_tensor_conjugation(const FermionHamiltonian& h, const FermionHamiltonian& h0, const FockRep& rep,
                                std::size_t m, double s, double t) {
  if (h.modes() != rep.modes || h0.modes() != rep.modes) {
    throw Error(ErrorKind::DimensionMismatch, "check_tensor_conjugation: mode counts differ");
  }
  const std::size_t two_n = 2 * rep.modes;
  // Fock side: Ĥ(s) = e^{−iĤ₀s} Ĥ e^{iĤ₀s}.
  const ComplexMatrix free = matrix_exponential(-kI * s * quadratize(h0, rep));
  const ComplexMatrix hs_fock = free * quadratize(h, rep) * free.adjoint();
  const ComplexMatrix u = matrix_exponential(kI * t * hs_fock);
  // Matrix side: O(s,t) = exp(−iE·H(s)·t).
  const ComplexMatrix hs = interaction_frame_H(h, h0, s);
  const ComplexMatrix o = matrix_exponential(-kI * t * (exchange_matrix(rep.modes) * hs));
  const ComplexMatrix o_tensor = kron_power(o, m);

  const std::size_t count = o_tensor.dim();
  std::vector<ComplexMatrix> basis_ops;
  basis_ops.reserve(count);
  for (std::size_t j = 0; j < count; ++j) basis_ops.push_back(moment_operator(rep, digits(j, two_n, m)));
  double worst = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    ComplexMatrix rhs(rep.dim());
    for (std::size_t j = 0; j < count; ++j)
      if (o_tensor(i, j) != Complex{}) rhs += o_tensor(i, j) * basis_ops[j];
    worst = std::max(worst, max_abs_diff(u * basis_ops[i] * u.adjoint(), rhs));
  }
  return worst;
}

double check_moment_propagator(const ComplexMatrix& propagator, const SplitHamiltonian& split, const FockRep& rep,
                               std::size_t m, double t, double tol) {
  if (split.modes() != rep.modes) throw Error(ErrorKind::DimensionMismatch, "check_moment_propagator: mode counts");
  const std::size_t two_n = 2 * rep.modes;
  const std::size_t count = checked_power_dim(two_n, m, kDefaultDimCap);
  if (propagator.dim() != count) throw Error(ErrorKind::DimensionMismatch, "propagator is not (2n)^m dimensional");
  const ComplexMatrix h_fock = quadratize(split.total(), rep);
  const ComplexMatrix h0_fock = quadratize(split.base(), rep);

  std::vector<ComplexMatrix> basis_ops;
  basis_ops.reserve(count);
  for (std::size_t j = 0; j < count; ++j) basis_ops.push_back(moment_operator(rep, digits(j, two_n, m)));
  double worst = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<ComplexMatrix> factors;
    for (std::size_t a : digits(i, two_n, m)) factors.push_back(rep.component(a));
    const ComplexMatrix lhs = averaged_unitary_moments(h_fock, h0_fock, factors, t, tol);
    ComplexMatrix rhs(rep.dim());
    for (std::size_t j = 0; j < count; ++j)
      if (propagator(i, j) != Complex{}) rhs += propagator(i, j) * basis_ops[j];
    worst = std::max(worst, max_abs_diff(lhs, rhs));
  }
  return worst;
}

}  // namespace effheis
