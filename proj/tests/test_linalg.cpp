#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <random>

#include "effheis/error.hpp"
#include "effheis/linalg.hpp"
#include "support.hpp"

using namespace effheis;
using effheis::testing::from_eigen;
using effheis::testing::random_hermitian;
using effheis::testing::random_matrix;
using effheis::testing::to_eigen;

namespace {

ComplexMatrix reconstruct(const HermitianEigenDecomposition& eig) {
  return eig.apply_function([](double x) { return Complex(x); });
}

ComplexMatrix anti_hermitian(std::size_t dim, std::mt19937_64& rng) { return -kI * random_hermitian(dim, rng); }

}  // namespace

TEST(Matrix, BasicAlgebra) {
  const ComplexMatrix a{{1.0, Complex(0, 2)}, {3.0, 4.0}};
  EXPECT_EQ(a.dim(), 2u);
  EXPECT_EQ(a.adjoint()(0, 1), 3.0);
  EXPECT_EQ(a.adjoint()(1, 0), Complex(0, -2));
  EXPECT_EQ(a.trace(), Complex(5.0));
  EXPECT_EQ(a * ComplexMatrix::identity(2), a);
  EXPECT_EQ(max_abs(a), 4.0);
  EXPECT_DOUBLE_EQ(norm_one(a), 6.0);
  EXPECT_DOUBLE_EQ(hermiticity_residual(ComplexMatrix::identity(3)), 0.0);
  EXPECT_TRUE(a.is_finite());
  ComplexMatrix bad = a;
  bad(0, 0) = std::nan("");
  EXPECT_FALSE(bad.is_finite());
}

TEST(Matrix, RaggedInitializerThrows) {
  EXPECT_THROW((ComplexMatrix{{1.0, 2.0}, {3.0}}), Error);
}

TEST(Matrix, DimensionMismatchOnProduct) {
  EXPECT_THROW(ComplexMatrix(2) * ComplexMatrix(3), Error);
  EXPECT_THROW(ComplexMatrix(2) + ComplexMatrix(3), Error);
}

TEST(HermitianEigen, DiagonalInput) {
  const std::vector<double> d{3.0, 1.0};
  const auto eig = hermitian_eigendecompose(ComplexMatrix::diagonal(d));
  ASSERT_EQ(eig.eigenvalues.size(), 2u);
  EXPECT_DOUBLE_EQ(eig.eigenvalues[0], 1.0);
  EXPECT_DOUBLE_EQ(eig.eigenvalues[1], 3.0);
  // columns are a permutation of the identity
  EXPECT_EQ(eig.basis(1, 0), 1.0);
  EXPECT_EQ(eig.basis(0, 1), 1.0);
  EXPECT_EQ(eig.basis(0, 0), 0.0);
}

TEST(HermitianEigen, PauliX) {
  const ComplexMatrix x{{0.0, 1.0}, {1.0, 0.0}};
  const auto eig = hermitian_eigendecompose(x);
  EXPECT_NEAR(eig.eigenvalues[0], -1.0, 1e-15);
  EXPECT_NEAR(eig.eigenvalues[1], 1.0, 1e-15);
  const double r = 1.0 / std::sqrt(2.0);
  // phase convention: first largest component real positive
  EXPECT_NEAR(std::abs(eig.basis(0, 0) - r), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(eig.basis(1, 0) + r), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(eig.basis(0, 1) - r), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(eig.basis(1, 1) - r), 0.0, 1e-14);
}

TEST(HermitianEigen, Random8Reconstruction) {
  std::mt19937_64 rng(8);
  const ComplexMatrix m = random_hermitian(8, rng);
  const auto eig = hermitian_eigendecompose(m);
  EXPECT_LT(max_abs_diff(reconstruct(eig), m), 1e-10 * max_abs(m));
  EXPECT_LT(unitarity_residual(eig.basis), 1e-12);
}

TEST(HermitianEigen, PropertyAgainstEigen) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::size_t> dims(2, 16);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = dims(rng);
    const ComplexMatrix m = random_hermitian(n, rng);
    const auto eig = hermitian_eigendecompose(m);
    ASSERT_LT(unitarity_residual(eig.basis), 1e-12) << "trial " << trial;
    ASSERT_LT(max_abs_diff(reconstruct(eig), m), 1e-10 * std::max(1.0, max_abs(m))) << "trial " << trial;
    ASSERT_TRUE(std::is_sorted(eig.eigenvalues.begin(), eig.eigenvalues.end()));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ref(to_eigen(m));
    for (std::size_t i = 0; i < n; ++i) ASSERT_NEAR(eig.eigenvalues[i], ref.eigenvalues()(i), 1e-11);
  }
}

TEST(HermitianEigen, DeterministicAndPhaseFixed) {
  std::mt19937_64 rng(5);
  const ComplexMatrix m = random_hermitian(6, rng);
  const auto a = hermitian_eigendecompose(m);
  const auto b = hermitian_eigendecompose(m);
  EXPECT_EQ(a.basis, b.basis);
  EXPECT_EQ(a.eigenvalues, b.eigenvalues);
  for (std::size_t c = 0; c < 6; ++c) {
    std::size_t best = 0;
    for (std::size_t r = 0; r < 6; ++r)
      if (std::abs(a.basis(r, c)) > std::abs(a.basis(best, c)) + 1e-14) best = r;
    EXPECT_NEAR(a.basis(best, c).imag(), 0.0, 1e-14);
    EXPECT_GT(a.basis(best, c).real(), 0.0);
  }
}

TEST(HermitianEigen, DegenerateSpectrum) {
  std::mt19937_64 rng(11);
  const Eigen::MatrixXcd qe = Eigen::HouseholderQR<Eigen::MatrixXcd>(to_eigen(random_matrix(5, rng))).householderQ();
  const ComplexMatrix q = from_eigen(qe);
  const std::vector<double> d{1.0, 1.0, 1.0, -2.0, 4.0};
  const ComplexMatrix m = q * ComplexMatrix::diagonal(d) * q.adjoint();
  const auto eig = hermitian_eigendecompose(m);
  EXPECT_NEAR(eig.eigenvalues[0], -2.0, 1e-12);
  EXPECT_NEAR(eig.eigenvalues[1], 1.0, 1e-12);
  EXPECT_NEAR(eig.eigenvalues[3], 1.0, 1e-12);
  EXPECT_LT(max_abs_diff(reconstruct(eig), m), 1e-12);
}

TEST(HermitianEigen, RejectsNonHermitian) {
  const ComplexMatrix m{{0.0, 1.0}, {0.0, 0.0}};
  try {
    hermitian_eigendecompose(m);
    FAIL() << "expected NotHermitian";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotHermitian);
  }
}

TEST(HermitianEigen, ToleratesTinyAsymmetry) {
  ComplexMatrix m{{1.0, 0.5}, {0.5, 2.0}};
  m(0, 1) += 1e-12;
  EXPECT_NO_THROW(hermitian_eigendecompose(m));
}

TEST(HermitianEigen, EmptyAndOneByOne) {
  EXPECT_TRUE(hermitian_eigendecompose(ComplexMatrix()).eigenvalues.empty());
  const auto eig = hermitian_eigendecompose(ComplexMatrix{{Complex(2.5)}});
  EXPECT_EQ(eig.eigenvalues[0], 2.5);
  EXPECT_EQ(eig.basis(0, 0), 1.0);
}

TEST(MatrixExponential, ZeroIsIdentity) {
  EXPECT_EQ(matrix_exponential(ComplexMatrix(3)), ComplexMatrix::identity(3));
  EXPECT_MATRIX_NEAR(matrix_exponential_pade(ComplexMatrix(3)), ComplexMatrix::identity(3), 1e-15);
}

TEST(MatrixExponential, Diagonal) {
  const ComplexMatrix a{{Complex(0.3, 0.0), 0.0}, {0.0, Complex(-1.2, 0.0)}};
  const ComplexMatrix want{{std::exp(0.3), 0.0}, {0.0, std::exp(-1.2)}};
  EXPECT_MATRIX_NEAR(matrix_exponential(a), want, 1e-14);
}

TEST(MatrixExponential, QuarterTurnRotation) {
  const double theta = std::numbers::pi / 2.0;
  const ComplexMatrix a{{0.0, theta}, {-theta, 0.0}};
  const ComplexMatrix want{{0.0, 1.0}, {-1.0, 0.0}};
  EXPECT_MATRIX_NEAR(matrix_exponential(a), want, 1e-12);
  EXPECT_MATRIX_NEAR(matrix_exponential_pade(a), want, 1e-12);
}

TEST(MatrixExponential, UnitaryForAntiHermitian) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    const ComplexMatrix a = anti_hermitian(2 + trial % 9, rng) * 3.0;
    EXPECT_LT(unitarity_residual(matrix_exponential(a)), 1e-10);
    EXPECT_LT(unitarity_residual(matrix_exponential_pade(a)), 1e-10);
  }
}

TEST(MatrixExponential, InverseProperty) {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> size(0.1, 5.0);
  for (int trial = 0; trial < 50; ++trial) {
    ComplexMatrix a = random_matrix(2 + trial % 7, rng);
    a *= size(rng) / norm_one(a);
    const ComplexMatrix prod = matrix_exponential(a) * matrix_exponential(-a);
    EXPECT_MATRIX_NEAR(prod, ComplexMatrix::identity(a.dim()), 1e-9);
  }
}

TEST(MatrixExponential, PadeMatchesEigenbasisPath) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix a = anti_hermitian(6, rng) * 4.0;
    EXPECT_MATRIX_NEAR(matrix_exponential(a), matrix_exponential_pade(a), 1e-11);
  }
}

TEST(MatrixExponential, GeneralAgainstEigen) {
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix a = random_matrix(5, rng);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(to_eigen(a));
    const Eigen::MatrixXcd v = es.eigenvectors();
    const Eigen::VectorXcd ev = es.eigenvalues().array().exp();
    const Eigen::MatrixXcd want = v * ev.asDiagonal() * v.inverse();
    const ComplexMatrix got = matrix_exponential(a);
    EXPECT_LT(max_abs_diff(got, from_eigen(want)), 1e-10 * std::max(1.0, max_abs(got)));
  }
}

TEST(MatrixExponential, NilpotentExact) {
  const ComplexMatrix n{{0.0, 2.0, 0.0}, {0.0, 0.0, 3.0}, {0.0, 0.0, 0.0}};
  const ComplexMatrix want{{1.0, 2.0, 3.0}, {0.0, 1.0, 3.0}, {0.0, 0.0, 1.0}};
  EXPECT_MATRIX_NEAR(matrix_exponential(n), want, 1e-14);
}

TEST(MatrixExponential, OverflowCap) {
  const std::vector<double> d{2e4, 0.0};
  try {
    matrix_exponential(ComplexMatrix::diagonal(d));
    FAIL() << "expected Overflow";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Overflow);
  }
  EXPECT_NO_THROW(matrix_exponential(ComplexMatrix::diagonal(d) * 1e-3));
}

TEST(Solve, RecoversKnownSolution) {
  std::mt19937_64 rng(31);
  const ComplexMatrix a = random_matrix(6, rng) + 4.0 * ComplexMatrix::identity(6);
  const ComplexMatrix x = random_matrix(6, rng);
  EXPECT_MATRIX_NEAR(solve(a, a * x), x, 1e-12);
}

TEST(Kron, Identities) {
  EXPECT_EQ(kron(ComplexMatrix::identity(2), ComplexMatrix::identity(2)), ComplexMatrix::identity(4));
  const std::vector<double> a{1, 2}, b{3, 4}, ab{3, 4, 6, 8};
  EXPECT_EQ(kron(ComplexMatrix::diagonal(a), ComplexMatrix::diagonal(b)), ComplexMatrix::diagonal(ab));
}

TEST(Kron, MixedProduct) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix a = random_matrix(2, rng), b = random_matrix(2, rng);
    const ComplexMatrix c = random_matrix(2, rng), d = random_matrix(2, rng);
    EXPECT_MATRIX_NEAR(kron(a, b) * kron(c, d), kron(a * c, b * d), 1e-12);
  }
}

TEST(Kron, OrderingMatchesEigenKronecker) {
  std::mt19937_64 rng(42);
  const ComplexMatrix a = random_matrix(2, rng), b = random_matrix(3, rng);
  const ComplexMatrix k = kron(a, b);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 3; ++c) EXPECT_EQ(k(3 * i + r, 3 * j + c), a(i, j) * b(r, c));
}

TEST(Kron, DimensionCap) {
  try {
    kron(ComplexMatrix::identity(64), ComplexMatrix::identity(65));
    FAIL() << "expected DimensionOverflow";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DimensionOverflow);
  }
  EXPECT_THROW(kron(ComplexMatrix::identity(4), ComplexMatrix::identity(4), 15), Error);
  EXPECT_NO_THROW(kron(ComplexMatrix::identity(4), ComplexMatrix::identity(4), 16));
}

TEST(KronSum, OneSlotIsK) {
  std::mt19937_64 rng(51);
  const ComplexMatrix k = random_matrix(3, rng);
  EXPECT_EQ(kron_sum(k, 1), k);
}

TEST(KronSum, DiagonalSum) {
  const std::vector<double> d{-1, 1}, want{-2, 0, 0, 2};
  EXPECT_EQ(kron_sum(ComplexMatrix::diagonal(d), 2), ComplexMatrix::diagonal(want));
}

TEST(KronSum, MatchesExplicitEmbedding) {
  std::mt19937_64 rng(52);
  const ComplexMatrix k = random_matrix(2, rng);
  const ComplexMatrix i2 = ComplexMatrix::identity(2);
  const ComplexMatrix want = kron(kron(k, i2), i2) + kron(kron(i2, k), i2) + kron(kron(i2, i2), k);
  EXPECT_MATRIX_NEAR(kron_sum(k, 3), want, 1e-14);
  EXPECT_MATRIX_NEAR(kron_power(k, 3), kron(kron(k, k), k), 1e-14);
}

TEST(KronSum, ExponentialFactorizes) {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexMatrix k = anti_hermitian(3, rng);
    const double t = 0.7 + trial * 0.2;
    const ComplexMatrix e = matrix_exponential(k * t);
    EXPECT_MATRIX_NEAR(matrix_exponential(kron_sum(k, 2) * t), kron(e, e), 1e-10);
  }
}

TEST(KronSum, CapAndZeroOrder) {
  EXPECT_THROW(kron_sum(ComplexMatrix::identity(4), 0), Error);
  try {
    kron_sum(ComplexMatrix::identity(8), 5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DimensionOverflow);
  }
  EXPECT_EQ(checked_power_dim(4, 6, 4096), 4096u);
  EXPECT_THROW(checked_power_dim(4, 7, 4096), Error);
}

TEST(ErrorKinds, MessageCarriesKind) {
  const Error e(ErrorKind::StepTooLarge, "detail");
  EXPECT_EQ(e.kind(), ErrorKind::StepTooLarge);
  EXPECT_NE(std::string(e.what()).find("StepTooLarge"), std::string::npos);
  EXPECT_NE(std::string(e.what()).find("detail"), std::string::npos);
}
