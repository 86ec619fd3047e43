#include "effheis/linalg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

#include "effheis/error.hpp"

namespace effheis {

namespace {

double offdiagonal_norm(const ComplexMatrix& a) {
  double sum = 0.0;
  for (std::size_t r = 0; r < a.dim(); ++r)
    for (std::size_t c = 0; c < a.dim(); ++c)
      if (r != c) sum += std::norm(a(r, c));
  return std::sqrt(sum);
}

// Zeroes a(p,q) by the unitary G = diag(1, e^{-iθ})·[[c, s], [-s, c]], θ = arg a(p,q),
// applied as A ← G†AG and V ← VG.
void jacobi_rotate(ComplexMatrix& a, ComplexMatrix& v, std::size_t p, std::size_t q) {
  const Complex b = a(p, q);
  const double abs_b = std::abs(b);
  if (abs_b == 0.0) return;
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();
  const double theta = (aqq - app) / (2.0 * abs_b);
  double t;
  if (std::abs(theta) > 1e150) {
    t = 0.5 / theta;
  } else {
    t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  }
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;
  const Complex phase = std::conj(b / abs_b);
  const Complex g00 = c, g01 = s, g10 = -s * phase, g11 = c * phase;

  const std::size_t n = a.dim();
  for (std::size_t k = 0; k < n; ++k) {
    const Complex x = a(k, p), y = a(k, q);
    a(k, p) = x * g00 + y * g10;
    a(k, q) = x * g01 + y * g11;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const Complex x = a(p, k), y = a(q, k);
    a(p, k) = std::conj(g00) * x + std::conj(g10) * y;
    a(q, k) = std::conj(g01) * x + std::conj(g11) * y;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const Complex x = v(k, p), y = v(k, q);
    v(k, p) = x * g00 + y * g10;
    v(k, q) = x * g01 + y * g11;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = a(p, p).real();
  a(q, q) = a(q, q).real();
}

constexpr std::array<double, 14> kPade13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
    129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
    1323241920.0,        40840800.0,          960960.0,           16380.0,
    182.0,               1.0};
constexpr double kPade13Theta = 5.371920351148152;

}  // namespace

HermitianEigenDecomposition hermitian_eigendecompose(const ComplexMatrix& m) {
  const std::size_t n = m.dim();
  const double residual = hermiticity_residual(m);
  if (residual > 1e-10 * (1.0 + max_abs(m))) {
    throw Error(ErrorKind::NotHermitian, "hermiticity residual " + std::to_string(residual));
  }
  ComplexMatrix a = 0.5 * (m + m.adjoint());
  ComplexMatrix v = ComplexMatrix::identity(n);

  const double scale = frobenius(a);
  const double target = 2.2e-16 * static_cast<double>(std::max<std::size_t>(n, 1)) * scale;
  const std::size_t max_sweeps = 30 * std::max<std::size_t>(n * n, 1);
  double previous = offdiagonal_norm(a);
  bool converged = previous <= target;
  for (std::size_t sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) jacobi_rotate(a, v, p, q);
    const double off = offdiagonal_norm(a);
    // Round-off floor: a sweep that no longer halves a tiny residual is done.
    converged = off <= target || (off < 1e-12 * scale && off > 0.5 * previous);
    previous = off;
  }
  if (!converged) {
    throw Error(ErrorKind::NoConvergence, "Jacobi sweeps exhausted at dim " + std::to_string(n));
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });

  HermitianEigenDecomposition out;
  out.eigenvalues.resize(n);
  out.basis = ComplexMatrix(n);
  for (std::size_t c = 0; c < n; ++c) {
    const std::size_t src = order[c];
    out.eigenvalues[c] = a(src, src).real();
    double biggest = 0.0;
    for (std::size_t r = 0; r < n; ++r) biggest = std::max(biggest, std::abs(v(r, src)));
    Complex phase = 1.0;
    for (std::size_t r = 0; r < n; ++r) {
      if (std::abs(v(r, src)) >= biggest * (1.0 - 1e-12)) {
        phase = std::conj(v(r, src)) / std::abs(v(r, src));
        break;
      }
    }
    for (std::size_t r = 0; r < n; ++r) out.basis(r, c) = v(r, src) * phase;
  }
  return out;
}

ComplexMatrix solve(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t n = a.dim();
  if (b.dim() != n) throw Error(ErrorKind::DimensionMismatch, "solve");
  ComplexMatrix lu = a;
  ComplexMatrix x = b;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    for (std::size_t r = k + 1; r < n; ++r)
      if (std::abs(lu(r, k)) > std::abs(lu(pivot, k))) pivot = r;
    if (std::abs(lu(pivot, k)) == 0.0) throw Error(ErrorKind::InvalidArgument, "singular matrix in solve");
    if (pivot != k) {
      for (std::size_t c = 0; c < n; ++c) {
        std::swap(lu(k, c), lu(pivot, c));
        std::swap(x(k, c), x(pivot, c));
      }
    }
    for (std::size_t r = k + 1; r < n; ++r) {
      const Complex f = lu(r, k) / lu(k, k);
      if (f == Complex{}) continue;
      for (std::size_t c = k; c < n; ++c) lu(r, c) -= f * lu(k, c);
      for (std::size_t c = 0; c < n; ++c) x(r, c) -= f * x(k, c);
    }
  }
  for (std::size_t k = n; k-- > 0;) {
    for (std::size_t c = 0; c < n; ++c) {
      Complex sum = x(k, c);
      for (std::size_t j = k + 1; j < n; ++j) sum -= lu(k, j) * x(j, c);
      x(k, c) = sum / lu(k, k);
    }
  }
  return x;
}

ComplexMatrix matrix_exponential_pade(const ComplexMatrix& a, double norm_cap) {
  if (!a.is_finite()) throw Error(ErrorKind::InvalidArgument, "matrix_exponential: non-finite input");
  const double norm = norm_one(a);
  if (norm > norm_cap) {
    throw Error(ErrorKind::Overflow, "‖A‖₁ = " + std::to_string(norm) + " exceeds cap " + std::to_string(norm_cap));
  }
  const std::size_t n = a.dim();
  int squarings = 0;
  if (norm > kPade13Theta) squarings = static_cast<int>(std::ceil(std::log2(norm / kPade13Theta)));
  const ComplexMatrix scaled = a * std::ldexp(1.0, -squarings);

  const ComplexMatrix id = ComplexMatrix::identity(n);
  const ComplexMatrix a2 = scaled * scaled;
  const ComplexMatrix a4 = a2 * a2;
  const ComplexMatrix a6 = a4 * a2;
  const auto& b = kPade13;

  ComplexMatrix u_inner = b[13] * a6 + b[11] * a4 + b[9] * a2;
  u_inner = a6 * u_inner + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id;
  const ComplexMatrix u = scaled * u_inner;
  ComplexMatrix v = b[12] * a6 + b[10] * a4 + b[8] * a2;
  v = a6 * v + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;

  ComplexMatrix result = solve(v - u, v + u);
  for (int i = 0; i < squarings; ++i) result = result * result;
  if (!result.is_finite()) throw Error(ErrorKind::Overflow, "matrix_exponential: non-finite result");
  return result;
}

ComplexMatrix matrix_exponential(const ComplexMatrix& a, double norm_cap) {
  if (!a.is_finite()) throw Error(ErrorKind::InvalidArgument, "matrix_exponential: non-finite input");
  if (a.empty()) return a;
  if (anti_hermiticity_residual(a) < 1e-10 * std::max(1.0, max_abs(a))) {
    const double norm = norm_one(a);
    if (norm > norm_cap) {
      throw Error(ErrorKind::Overflow,
                  "‖A‖₁ = " + std::to_string(norm) + " exceeds cap " + std::to_string(norm_cap));
    }
    // A = -iM with M Hermitian.
    const ComplexMatrix m = kI * a;
    const auto eig = hermitian_eigendecompose(0.5 * (m + m.adjoint()));
    return eig.apply_function([](double lambda) { return std::exp(-kI * lambda); });
  }
  return matrix_exponential_pade(a, norm_cap);
}

std::size_t checked_power_dim(std::size_t base, std::size_t m, std::size_t dim_cap) {
  std::size_t dim = 1;
  for (std::size_t i = 0; i < m; ++i) {
    if (base != 0 && dim > dim_cap / base) {
      throw Error(ErrorKind::DimensionOverflow, std::to_string(base) + "^" + std::to_string(m) +
                                                    " exceeds dimension cap " + std::to_string(dim_cap));
    }
    dim *= base;
  }
  if (dim > dim_cap) {
    throw Error(ErrorKind::DimensionOverflow, "dimension " + std::to_string(dim) + " exceeds cap " +
                                                  std::to_string(dim_cap));
  }
  return dim;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b, std::size_t dim_cap) {
  const std::size_t na = a.dim(), nb = b.dim();
  if (na != 0 && nb > dim_cap / na) {
    throw Error(ErrorKind::DimensionOverflow, "kron dimension " + std::to_string(na) + "x" + std::to_string(nb) +
                                                  " exceeds cap " + std::to_string(dim_cap));
  }
  ComplexMatrix out(na * nb);
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < na; ++j) {
      const Complex aij = a(i, j);
      if (aij == Complex{}) continue;
      for (std::size_t k = 0; k < nb; ++k)
        for (std::size_t l = 0; l < nb; ++l) out(i * nb + k, j * nb + l) = aij * b(k, l);
    }
  return out;
}

ComplexMatrix kron_sum(const ComplexMatrix& k, std::size_t m, std::size_t dim_cap) {
  if (m == 0) throw Error(ErrorKind::InvalidArgument, "kron_sum needs m >= 1");
  checked_power_dim(k.dim(), m, dim_cap);
  const ComplexMatrix id = ComplexMatrix::identity(k.dim());
  ComplexMatrix sum = k;
  std::size_t dim = k.dim();
  for (std::size_t slot = 1; slot < m; ++slot) {
    sum = kron(sum, id, dim_cap) + kron(ComplexMatrix::identity(dim), k, dim_cap);
    dim *= k.dim();
  }
  return sum;
}

ComplexMatrix kron_power(const ComplexMatrix& k, std::size_t m, std::size_t dim_cap) {
  if (m == 0) throw Error(ErrorKind::InvalidArgument, "kron_power needs m >= 1");
  checked_power_dim(k.dim(), m, dim_cap);
  ComplexMatrix out = k;
  for (std::size_t slot = 1; slot < m; ++slot) out = kron(out, k, dim_cap);
  return out;
}

}  // namespace effheis
