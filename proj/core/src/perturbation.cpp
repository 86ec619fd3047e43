#include "effheis/perturbation.hpp"

#include <cmath>
#include <numbers>

#include "effheis/error.hpp"

namespace effheis {

namespace {

// e^z − 1 without cancellation for small |z|.
Complex expm1_complex(Complex z) {
  const double x = z.real(), y = z.imag();
  const double em1 = std::expm1(x);
  const double half_sin = std::sin(0.5 * y);
  const double re = em1 * std::cos(y) - 2.0 * half_sin * half_sin;
  const double im = (em1 + 1.0) * std::sin(y);
  return {re, im};
}

// Σ_{k≥first} x^k/k! summed to round-off; only called with |x| < 0.5.
double exp_tail(double x, int first) {
  double term = 1.0;
  for (int k = 1; k <= first; ++k) term *= x / k;
  double sum = 0.0;
  for (int k = first; k < first + 30 && std::abs(term) > 1e-18 * std::abs(sum); ++k) {
    sum += term;
    term *= x / (k + 1);
  }
  return sum;
}

double expm1_minus_x(double x) { return std::abs(x) < 0.5 ? exp_tail(x, 2) : std::expm1(x) - x; }

double sin_minus_x(double y) {
  if (std::abs(y) >= 0.5) return std::sin(y) - y;
  // −y³/3! + y⁵/5! − …
  double term = -y * y * y / 6.0, sum = 0.0;
  for (int k = 3; k < 40 && std::abs(term) > 1e-18 * std::abs(sum); k += 2) {
    sum += term;
    term *= -y * y / ((k + 1.0) * (k + 2.0));
  }
  return sum;
}

// e^z − 1 − z, split so that neither part cancels.
Complex expm1_minus_z(Complex z) {
  const double x = z.real(), y = z.imag();
  const double half_sin = std::sin(0.5 * y);
  const double re = expm1_minus_x(x) - 2.0 * std::exp(x) * half_sin * half_sin;
  const double im = std::expm1(x) * std::sin(y) + sin_minus_x(y);
  return {re, im};
}

// Entry (a,b) of the eigenbasis weight matrix F(Δ_ab, t), Δ_ab = −i(λ_a − λ_b).
ComplexMatrix ad_weights(const ResonancePartition& free, double t, SpectralFunctionKind kind) {
  const auto& ev = free.eigenvalues();
  ComplexMatrix w(ev.size());
  for (std::size_t a = 0; a < ev.size(); ++a)
    for (std::size_t b = 0; b < ev.size(); ++b) w(a, b) = spectral_weight(kind, -kI * (ev[a] - ev[b]), t);
  return w;
}

ComplexMatrix hadamard(const ComplexMatrix& x, const ComplexMatrix& w) {
  ComplexMatrix out = x;
  for (std::size_t i = 0; i < out.data().size(); ++i) out.data()[i] *= w.data()[i];
  return out;
}

// P(h_I · F(t[h₀,·]) h_I), worked entirely in the free eigenbasis.
ComplexMatrix projected_sandwich(const MomentModel& model, const ComplexMatrix& hI_eig, double t,
                                 SpectralFunctionKind kind) {
  const auto& part = *model.free_partition;
  ComplexMatrix y = hI_eig * hadamard(hI_eig, ad_weights(part, t, kind));
  for (std::size_t a = 0; a < y.dim(); ++a)
    for (std::size_t b = 0; b < y.dim(); ++b)
      if (!part.resonant(a, b)) y(a, b) = 0.0;
  return part.from_eigenbasis(y);
}

// ∫₀^upper h_I(u)·inner(u) du, nested `level` deep.
ComplexMatrix nested_dyson(const MomentModel& model, const QuadratureRule& rule, int level, double upper) {
  const std::size_t dim = model.h0.dim();
  if (level == 0) return ComplexMatrix::identity(dim);
  const auto& eig = model.free_partition->decomposition();
  ComplexMatrix sum(dim);
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double u = 0.5 * upper * (rule.nodes[i] + 1.0);
    const double w = 0.5 * upper * rule.weights[i];
    // e^{−h₀u} = e^{iM₀u}
    const ComplexMatrix back = eig.apply_function([u](double lambda) { return std::exp(kI * lambda * u); });
    const ComplexMatrix hI_u = back * model.hI * back.adjoint();
    sum += w * (hI_u * nested_dyson(model, rule, level - 1, u));
  }
  return sum;
}

void compose(int remaining, std::vector<int>& prefix, std::vector<std::vector<int>>& out) {
  if (remaining == 0) {
    out.push_back(prefix);
    return;
  }
  for (int part = 1; part <= remaining; ++part) {
    prefix.push_back(part);
    compose(remaining - part, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

Complex spectral_weight_direct(SpectralFunctionKind kind, Complex delta, double t) {
  const Complex z = t * delta;
  if (kind == SpectralFunctionKind::psi) return expm1_complex(z) / delta;
  return expm1_minus_z(z) / (delta * delta);
}

Complex spectral_weight_series(SpectralFunctionKind kind, Complex delta, double t, int terms) {
  const Complex z = t * delta;
  // ψ = t Σ z^k/(k+1)!, φ = t² Σ z^k/(k+2)!
  const int shift = kind == SpectralFunctionKind::psi ? 1 : 2;
  double factorial = 1.0;
  for (int i = 2; i <= shift; ++i) factorial *= i;
  Complex power = 1.0;
  Complex sum = 0.0;
  for (int k = 0; k < terms; ++k) {
    sum += power / factorial;
    power *= z;
    factorial *= static_cast<double>(k + shift + 1);
  }
  return (kind == SpectralFunctionKind::psi ? t : t * t) * sum;
}

Complex spectral_weight(SpectralFunctionKind kind, Complex delta, double t) {
  if (std::abs(t * delta) < kSeriesSwitch) return spectral_weight_series(kind, delta, t, 6);
  return spectral_weight_direct(kind, delta, t);
}

ComplexMatrix interaction_hI(const ComplexMatrix& hI, const ComplexMatrix& h0, double t) {
  if (hI.dim() != h0.dim()) throw Error(ErrorKind::DimensionMismatch, "interaction_hI");
  return matrix_exponential(-t * h0) * hI * matrix_exponential(t * h0);
}

ComplexMatrix apply_ad_function(const ComplexMatrix& hI, const ResonancePartition& free, double t,
                                SpectralFunctionKind kind) {
  if (hI.dim() != free.dim()) throw Error(ErrorKind::DimensionMismatch, "apply_ad_function");
  return free.from_eigenbasis(hadamard(free.to_eigenbasis(hI), ad_weights(free, t, kind)));
}

ComplexMatrix apply_ad_function(const ComplexMatrix& hI, const ComplexMatrix& m, double t, SpectralFunctionKind kind) {
  return apply_ad_function(hI, resonance_partition(m), t, kind);
}

MatrixOfTime mu1(const MomentModel& model) {
  ComplexMatrix p_hI = model.project(model.hI);
  return [p_hI = std::move(p_hI)](double t) { return t * p_hI; };
}

MatrixOfTime mu2_closed(const MomentModel& model) {
  ComplexMatrix hI_eig = model.free_partition->to_eigenbasis(model.hI);
  return [model, hI_eig = std::move(hI_eig)](double t) {
    return projected_sandwich(model, hI_eig, t, SpectralFunctionKind::phi);
  };
}

ComplexMatrix mu_k_quadrature(const MomentModel& model, int k, double t, std::size_t nodes) {
  if (k < 1 || k > 3) throw Error(ErrorKind::UnsupportedOrder, "quadrature moments support k in {1,2,3}");
  if (nodes < 16) throw Error(ErrorKind::InvalidArgument, "quadrature needs at least 16 nodes");
  const QuadratureRule rule = gauss_legendre(nodes);
  return model.project(nested_dyson(model, rule, k, t));
}

TimeLocalGenerator::TimeLocalGenerator(ComplexMatrix h0, ComplexMatrix kappa1, MatrixOfTime kappa2, double coupling)
    : h0_(std::move(h0)), kappa1_(std::move(kappa1)), kappa2_(std::move(kappa2)), coupling_(coupling) {}

ComplexMatrix TimeLocalGenerator::interaction_part(double t, int order) const {
  if (order < 0 || order > 2) throw Error(ErrorKind::UnsupportedOrder, "time-local generator order must be 0, 1 or 2");
  ComplexMatrix out(h0_.dim());
  if (order >= 1) out += coupling_ * kappa1_;
  if (order >= 2) out += (coupling_ * coupling_) * kappa2_(t);
  return out;
}

ComplexMatrix TimeLocalGenerator::generator(double t, int order) const { return h0_ + interaction_part(t, order); }

TimeLocalGenerator kappa12(const MomentModel& model) {
  ComplexMatrix k1 = model.project(model.hI);
  ComplexMatrix k1_squared = k1 * k1;
  ComplexMatrix hI_eig = model.free_partition->to_eigenbasis(model.hI);
  auto k2 = [model, hI_eig = std::move(hI_eig), k1_squared = std::move(k1_squared)](double t) {
    return projected_sandwich(model, hI_eig, t, SpectralFunctionKind::psi) - t * k1_squared;
  };
  return TimeLocalGenerator(model.h0, std::move(k1), std::move(k2), model.coupling);
}

std::vector<std::vector<int>> compositions(int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> prefix;
  if (k >= 1) compose(k, prefix, out);
  return out;
}

ComplexMatrix general_kappa(const MomentModel& model, int k, double t, std::size_t nodes) {
  if (k < 1 || k > 3) throw Error(ErrorKind::UnsupportedOrder, "general_kappa supports k <= 3");
  const double step = t != 0.0 ? std::abs(t) * 1e-5 : 1e-5;
  std::vector<ComplexMatrix> mu(k + 1), mu_dot(k + 1);
  for (int j = 1; j <= k; ++j) {
    mu[j] = mu_k_quadrature(model, j, t, nodes);
    const ComplexMatrix ahead = mu_k_quadrature(model, j, t + step, nodes);
    const ComplexMatrix behind = mu_k_quadrature(model, j, t - step, nodes);
    mu_dot[j] = (ahead - behind) * (0.5 / step);
  }
  ComplexMatrix kappa(model.h0.dim());
  for (const auto& parts : compositions(k)) {
    ComplexMatrix term = mu_dot[parts[0]];
    for (std::size_t q = 1; q < parts.size(); ++q) term = term * mu[parts[q]];
    kappa += (parts.size() % 2 == 1 ? 1.0 : -1.0) * term;
  }
  return kappa;
}

QuadratureRule gauss_legendre(std::size_t n) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "gauss_legendre needs n >= 1");
  QuadratureRule rule{std::vector<double>(n), std::vector<double>(n)};
  const double dn = static_cast<double>(n);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (dn + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (std::size_t j = 2; j <= n; ++j) {
        const double dj = static_cast<double>(j);
        const double p2 = ((2.0 * dj - 1.0) * x * p1 - (dj - 1.0) * p0) / dj;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = dn * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

}  // namespace effheis
