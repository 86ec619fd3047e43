#pragma once

#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <random>
#include <sstream>

#include "effheis/matrix.hpp"

namespace effheis::testing {

inline ComplexMatrix random_matrix(std::size_t dim, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  ComplexMatrix m(dim);
  for (auto& z : m.data()) z = {g(rng), g(rng)};
  return m;
}

inline ComplexMatrix random_hermitian(std::size_t dim, std::mt19937_64& rng, double scale = 1.0) {
  const ComplexMatrix a = random_matrix(dim, rng, scale);
  return 0.5 * (a + a.adjoint());
}

inline Eigen::MatrixXcd to_eigen(const ComplexMatrix& m) {
  Eigen::MatrixXcd out(m.dim(), m.dim());
  for (std::size_t r = 0; r < m.dim(); ++r)
    for (std::size_t c = 0; c < m.dim(); ++c) out(r, c) = m(r, c);
  return out;
}

inline ComplexMatrix from_eigen(const Eigen::MatrixXcd& m) {
  ComplexMatrix out(static_cast<std::size_t>(m.rows()));
  for (std::size_t r = 0; r < out.dim(); ++r)
    for (std::size_t c = 0; c < out.dim(); ++c) out(r, c) = m(r, c);
  return out;
}

inline ::testing::AssertionResult MatrixNear(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
  if (a.dim() != b.dim()) return ::testing::AssertionFailure() << "dims " << a.dim() << " vs " << b.dim();
  const double diff = max_abs_diff(a, b);
  if (diff <= tol) return ::testing::AssertionSuccess();
  std::ostringstream os;
  os << "max entry difference " << diff << " exceeds " << tol;
  return ::testing::AssertionFailure() << os.str();
}

}  // namespace effheis::testing

#define EXPECT_MATRIX_NEAR(a, b, tol) EXPECT_TRUE(::effheis::testing::MatrixNear((a), (b), (tol)))
