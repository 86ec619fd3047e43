#include "effheis/boson.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "effheis/error.hpp"
#include "effheis/fermion.hpp"
#include "effheis/linalg.hpp"

namespace effheis {

namespace {

struct Violation {
  double amount = 0.0;
  std::size_t row = 0;
  std::size_t col = 0;
};

Violation worst_difference(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
  Violation v;
  for (std::size_t r = 0; r < lhs.dim(); ++r)
    for (std::size_t c = 0; c < lhs.dim(); ++c) {
      const double a = std::abs(lhs(r, c) - rhs(r, c));
      if (a > v.amount) v = {a, r, c};
    }
  return v;
}

std::string describe(const Violation& v) {
  std::ostringstream os;
  os.precision(3);
  os << "worst entry (" << v.row << "," << v.col << ") violates by " << std::scientific << v.amount;
  return os.str();
}

void hessenberg_reduce(ComplexMatrix& h) {
  const std::size_t n = h.dim();
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double norm = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) norm += std::norm(h(i, k));
    norm = std::sqrt(norm);
    if (norm == 0.0) continue;
    const Complex x0 = h(k + 1, k);
    const Complex phase = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : Complex(1.0);
    std::vector<Complex> v(n, 0.0);
    for (std::size_t i = k + 1; i < n; ++i) v[i] = h(i, k);
    v[k + 1] += phase * norm;
    double vnorm = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) vnorm += std::norm(v[i]);
    if (vnorm == 0.0) continue;
    // H ← (I − 2vv†/v†v) H (I − 2vv†/v†v)
    for (std::size_t c = 0; c < n; ++c) {
      Complex dot = 0.0;
      for (std::size_t i = k + 1; i < n; ++i) dot += std::conj(v[i]) * h(i, c);
      dot *= 2.0 / vnorm;
      for (std::size_t i = k + 1; i < n; ++i) h(i, c) -= v[i] * dot;
    }
    for (std::size_t r = 0; r < n; ++r) {
      Complex dot = 0.0;
      for (std::size_t i = k + 1; i < n; ++i) dot += h(r, i) * v[i];
      dot *= 2.0 / vnorm;
      for (std::size_t i = k + 1; i < n; ++i) h(r, i) -= dot * std::conj(v[i]);
    }
    for (std::size_t i = k + 2; i < n; ++i) h(i, k) = 0.0;
  }
}

Complex wilkinson_shift(Complex a, Complex b, Complex c, Complex d) {
  const Complex half = 0.5 * (a - d);
  const Complex root = std::sqrt(half * half + b * c);
  const Complex mu1 = 0.5 * (a + d) + root;
  const Complex mu2 = 0.5 * (a + d) - root;
  return std::abs(mu1 - d) < std::abs(mu2 - d) ? mu1 : mu2;
}

}  // namespace

ComplexMatrix symplectic_matrix(std::size_t n) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "symplectic_matrix needs n >= 1");
  ComplexMatrix j(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    j(i, n + i) = -1.0;
    j(n + i, i) = 1.0;
  }
  return j;
}

BosonHamiltonian validate_boson(const ComplexMatrix& h, std::size_t n) {
  if (n == 0 || h.dim() != 2 * n) {
    throw Error(ErrorKind::DimensionMismatch, "validate_boson: expected dim " + std::to_string(2 * n));
  }
  const Violation sym = worst_difference(h, h.transpose());
  if (sym.amount > kBosonValidationTol) throw Error(ErrorKind::NotSymmetric, "H != H^T: " + describe(sym));
  const Violation tilde = worst_difference(h, tilde_conjugate(h, n));
  if (tilde.amount > kBosonValidationTol) {
    throw Error(ErrorKind::NotTildeSymmetric, "H != tilde(H): " + describe(tilde));
  }
  return BosonHamiltonian(n, h);
}

BosonHamiltonian harmonic_modes(std::span<const double> frequencies) {
  const std::size_t n = frequencies.size();
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "harmonic_modes needs at least one frequency");
  ComplexMatrix h(2 * n);
  for (std::size_t j = 0; j < n; ++j) {
    h(j, n + j) = frequencies[j];
    h(n + j, j) = frequencies[j];
  }
  return validate_boson(h, n);
}

std::vector<Complex> general_eigenvalues(const ComplexMatrix& a) {
  if (!a.is_finite()) throw Error(ErrorKind::InvalidArgument, "general_eigenvalues: non-finite input");
  const std::size_t n = a.dim();
  std::vector<Complex> eig(n);
  if (n == 0) return eig;
  ComplexMatrix h = a;
  hessenberg_reduce(h);

  const double norm_scale = std::max(max_abs(h), 1e-300);
  const std::size_t max_iter = 100 * n;
  std::size_t hi = n - 1;
  std::size_t iter = 0;
  while (true) {
    if (hi == 0) {
      eig[0] = h(0, 0);
      break;
    }
    std::size_t lo = hi;
    while (lo > 0) {
      const double sub = std::abs(h(lo, lo - 1));
      const double diag = std::abs(h(lo, lo)) + std::abs(h(lo - 1, lo - 1));
      if (sub <= 1e-15 * (diag > 0.0 ? diag : norm_scale)) {
        h(lo, lo - 1) = 0.0;
        break;
      }
      --lo;
    }
    if (lo == hi) {
      eig[hi] = h(hi, hi);
      --hi;
      iter = 0;
      continue;
    }
    if (++iter > max_iter) {
      throw Error(ErrorKind::NoConvergence, "shifted QR did not deflate within " + std::to_string(max_iter) +
                                                " iterations");
    }
    Complex mu = wilkinson_shift(h(hi - 1, hi - 1), h(hi - 1, hi), h(hi, hi - 1), h(hi, hi));
    if (iter % 11 == 10) mu = h(hi, hi) + std::abs(h(hi, hi - 1));  // exceptional shift

    for (std::size_t k = lo; k <= hi; ++k) h(k, k) -= mu;
    std::vector<double> cs(hi - lo);
    std::vector<Complex> sn(hi - lo);
    for (std::size_t k = lo; k < hi; ++k) {
      const Complex x = h(k, k), y = h(k + 1, k);
      const double r = std::hypot(std::abs(x), std::abs(y));
      double c;
      Complex s;
      if (r == 0.0) {
        c = 1.0;
        s = 0.0;
      } else if (std::abs(x) == 0.0) {
        c = 0.0;
        s = std::conj(y) / r;
      } else {
        c = std::abs(x) / r;
        s = (x / std::abs(x)) * std::conj(y) / r;
      }
      cs[k - lo] = c;
      sn[k - lo] = s;
      for (std::size_t col = k; col <= hi; ++col) {
        const Complex u = h(k, col), w = h(k + 1, col);
        h(k, col) = c * u + s * w;
        h(k + 1, col) = -std::conj(s) * u + c * w;
      }
    }
    for (std::size_t k = lo; k < hi; ++k) {
      const double c = cs[k - lo];
      const Complex s = sn[k - lo];
      const std::size_t last = std::min(k + 1, hi);
      for (std::size_t row = lo; row <= last; ++row) {
        const Complex u = h(row, k), w = h(row, k + 1);
        h(row, k) = u * c + w * std::conj(s);
        h(row, k + 1) = -u * s + w * c;
      }
    }
    for (std::size_t k = lo; k <= hi; ++k) h(k, k) += mu;
  }
  std::sort(eig.begin(), eig.end(), [](const Complex& x, const Complex& y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });
  return eig;
}

StabilityReport stability_check(const BosonHamiltonian& h0, double tol) {
  StabilityReport report;
  report.eigenvalues = general_eigenvalues(h0.matrix() * symplectic_matrix(h0.modes()));
  double biggest = 0.0;
  for (const auto& z : report.eigenvalues) {
    report.max_imag = std::max(report.max_imag, std::abs(z.imag()));
    biggest = std::max(biggest, std::abs(z));
  }
  report.stable = report.max_imag <= tol * std::max(1.0, biggest);
  return report;
}

ComplexMatrix bosonic_interaction_frame(const BosonHamiltonian& h, const BosonHamiltonian& h0, double s) {
  if (h.modes() != h0.modes()) throw Error(ErrorKind::DimensionMismatch, "bosonic_interaction_frame mode counts");
  const ComplexMatrix j = symplectic_matrix(h0.modes());
  return matrix_exponential(-kI * s * (h0.matrix() * j)) * h.matrix() * matrix_exponential(kI * s * (j * h0.matrix()));
}

ComplexMatrix bosonic_time_average(const BosonHamiltonian& h0, const ComplexMatrix& x, double horizon,
                                   std::size_t steps) {
  if (!(horizon > 0.0) || steps < 2) throw Error(ErrorKind::InvalidArgument, "time average needs T > 0, steps >= 2");
  if (x.dim() != h0.matrix().dim()) throw Error(ErrorKind::DimensionMismatch, "bosonic_time_average");
  const ComplexMatrix generator = h0.matrix() * symplectic_matrix(h0.modes());
  const double ds = horizon / static_cast<double>(steps);
  const ComplexMatrix left = matrix_exponential(-kI * ds * generator);
  const ComplexMatrix right = matrix_exponential(kI * ds * generator);
  ComplexMatrix current = x;
  ComplexMatrix sum = 0.5 * x;
  for (std::size_t k = 1; k <= steps; ++k) {
    current = left * current * right;
    sum += (k == steps ? 0.5 : 1.0) * current;
  }
  return sum * (1.0 / static_cast<double>(steps));
}

DivergenceReport divergence_demo(const BosonHamiltonian& h0, const ComplexMatrix& x, std::span<const double> horizons) {
  DivergenceReport report;
  for (double horizon : horizons) {
    const auto steps = static_cast<std::size_t>(std::max(1000.0, std::ceil(horizon / 0.005)));
    double norm = 0.0;
    try {
      norm = max_abs(bosonic_time_average(h0, x, horizon, steps));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Overflow) throw;
      norm = std::numeric_limits<double>::infinity();
    }
    if (!std::isfinite(norm)) report.overflowed = true;
    report.horizons.push_back(horizon);
    report.norms.push_back(norm);
  }
  report.monotone = !report.norms.empty();
  for (std::size_t i = 1; i < report.norms.size(); ++i)
    if (!(report.norms[i] > report.norms[i - 1])) report.monotone = false;
  if (!report.norms.empty() && report.norms.front() > 0.0) {
    report.growth_ratio = report.norms.back() / report.norms.front();
  }
  report.divergent = report.overflowed || report.growth_ratio > 1e3;
  return report;
}

}  // namespace effheis
