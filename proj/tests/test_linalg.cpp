#include <gtest/gtest.h>

#include <cmath>

#include "dfp/linalg.hpp"
#include "dfp/random.hpp"
#include "support/fixtures.hpp"

namespace dfp {
namespace {

using testing::max_abs_diff;
using testing::random_psd;

GramMatrix diag(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return GramMatrix(v.asDiagonal());
}

void expect_orthogonal(const Matrix& z, double tol) {
  const Matrix ident = Matrix::Identity(z.rows(), z.cols());
  EXPECT_LE(max_abs_diff(z * z.transpose(), ident), tol);
  EXPECT_LE(max_abs_diff(z.transpose() * z, ident), tol);
}

TEST(CounterRng, IsCounterAddressable) {
  CounterRng rng(42);
  std::vector<std::uint64_t> seq;
  for (int i = 0; i < 10; ++i) seq.push_back(rng());
  for (std::uint64_t i = 0; i < 10; ++i) EXPECT_EQ(CounterRng::at(42, i), seq[i]);
  // SplitMix64 reference: first output for seed 0.
  EXPECT_EQ(CounterRng::at(0, 0), 0xe220a8397b1dcdafULL);
}

TEST(CounterRng, UniformAndNormalMoments) {
  CounterRng rng(7);
  double sum = 0.0, sumsq = 0.0, usum = 0.0;
  constexpr int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    sum += z;
    sumsq += z * z;
    const double u = rng.uniform01();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    usum += u;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.01);
  EXPECT_NEAR(sumsq / n, 1.0, 0.01);
  EXPECT_NEAR(usum / n, 0.5, 0.01);
}

TEST(SymEig, DiagonalInput) {
  const auto f = sym_eig(diag({4, 9}));
  ASSERT_EQ(f.rank(), 2u);
  EXPECT_NEAR(f.eigenvalues(0), 9.0, 1e-14);
  EXPECT_NEAR(f.eigenvalues(1), 4.0, 1e-14);
  Matrix permuted(2, 2);
  permuted << 0, 1, 1, 0;
  EXPECT_LE(max_abs_diff(f.eigenvectors, permuted), 1e-14);
}

TEST(SymEig, TruncatesSmallEigenvalues) {
  const auto f = sym_eig(diag({4, 1e-9}), 1e-5);
  ASSERT_EQ(f.rank(), 1u);
  EXPECT_EQ(f.truncated(), 1u);
  EXPECT_NEAR(f.eigenvalues(0), 4.0, 1e-14);
  EXPECT_EQ(f.eigenvectors.rows(), 2);
}

TEST(SymEig, RankEqualsCountAboveThreshold) {
  const auto f = sym_eig(diag({3, 1e-5, 2e-5, 0, 7}), 1e-5);
  EXPECT_EQ(f.rank(), 3u);  // 7, 3, 2e-5; 1e-5 itself is not strictly above
  EXPECT_EQ(f.eigenvalues(2), 2e-5);
}

TEST(SymEig, ZeroGramIsDegenerate) {
  try {
    sym_eig(GramMatrix(Matrix::Zero(3, 3)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::degenerate);
  }
}

TEST(SymEig, RejectsIndefinite) {
  EXPECT_THROW(sym_eig(diag({1, -1})), Error);
  EXPECT_THROW(sym_eig(diag({1, 1}), -1.0), Error);
}

TEST(SymEig, SignConventionAndOrdering) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto f = sym_eig(random_psd(6, seed));
    for (Eigen::Index j = 0; j < f.eigenvectors.cols(); ++j) {
      Eigen::Index pivot;
      f.eigenvectors.col(j).cwiseAbs().maxCoeff(&pivot);
      EXPECT_GT(f.eigenvectors(pivot, j), 0.0);
      if (j > 0) {
        EXPECT_GE(f.eigenvalues(j - 1), f.eigenvalues(j));
      }
    }
    EXPECT_LE(max_abs_diff(f.eigenvectors.transpose() * f.eigenvectors, Matrix::Identity(6, 6)), 1e-10);
  }
}

TEST(SymEig, MatchesJacobiOracle) {
  const auto g = random_psd(6, 99);
  const auto fast = sym_eig(g);
  const auto oracle = jacobi_eig(g);
  ASSERT_EQ(fast.rank(), oracle.rank());
  for (Eigen::Index i = 0; i < fast.eigenvalues.size(); ++i)
    EXPECT_LE(std::abs(fast.eigenvalues(i) - oracle.eigenvalues(i)), 1e-10 * std::abs(oracle.eigenvalues(i)));
  EXPECT_LE((fast.reconstruct() - oracle.reconstruct()).norm(), 1e-9);
  EXPECT_LE((fast.reconstruct() - g.matrix()).norm(), 1e-9);
}

TEST(Jacobi, Identity) {
  const auto f = jacobi_eig(GramMatrix(Matrix::Identity(3, 3)));
  EXPECT_EQ(f.eigenvalues, Vector::Ones(3));
}

TEST(Jacobi, ClassicTwoByTwo) {
  Matrix m(2, 2);
  m << 2, 1, 1, 2;
  const auto f = jacobi_eig(GramMatrix(m));
  EXPECT_NEAR(f.eigenvalues(0), 3.0, 1e-14);
  EXPECT_NEAR(f.eigenvalues(1), 1.0, 1e-14);
  const double h = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(std::abs(f.eigenvectors(0, 0)), h, 1e-14);
  EXPECT_NEAR(f.eigenvectors(0, 0), f.eigenvectors(1, 0), 1e-14);
  EXPECT_NEAR(f.eigenvectors(0, 1), -f.eigenvectors(1, 1), 1e-14);
}

TEST(Jacobi, ReconstructsRandomPsd) {
  const auto g = random_psd(8, 3);
  EXPECT_LE(max_abs_diff(jacobi_eig(g).reconstruct(), g.matrix()), 1e-10);
}

TEST(Jacobi, RefusesLargeInputs) { EXPECT_THROW(jacobi_eig(GramMatrix(Matrix::Identity(65, 65))), Error); }

TEST(OrthogonalNoise, IsOrthogonal) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) expect_orthogonal(orthogonal_noise(5, {seed}).matrix(), 1e-10);
}

TEST(OrthogonalNoise, RankOneIsSign) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const double v = orthogonal_noise(1, {seed}).matrix()(0, 0);
    EXPECT_EQ(std::abs(v), 1.0);
  }
}

TEST(OrthogonalNoise, DeterministicPerSpec) {
  for (auto dist : {Distribution::standard_normal, Distribution::uniform, Distribution::normal}) {
    const NoiseSpec spec{17, dist, 2.0, 0.5};
    const Matrix a = orthogonal_noise(12, spec).matrix();
    const Matrix b = orthogonal_noise(12, spec).matrix();
    EXPECT_EQ(std::memcmp(a.data(), b.data(), sizeof(double) * 144), 0);
    expect_orthogonal(a, 1e-10);
  }
  EXPECT_NE(orthogonal_noise(12, {1}).matrix(), orthogonal_noise(12, {2}).matrix());
}

TEST(OrthogonalNoise, OrthogonalOverRanksAndSeeds) {
  for (std::size_t r = 1; r <= 128; r += (r < 16 ? 1 : 13))
    for (std::uint64_t seed = 0; seed < 50; seed += 7) expect_orthogonal(orthogonal_noise(r, {seed}).matrix(), 1e-10);
}

TEST(OrthogonalNoise, RejectsBadSpecs) {
  EXPECT_THROW(orthogonal_noise(0, {}), Error);
  EXPECT_THROW(orthogonal_noise(3, NoiseSpec{0, Distribution::normal, 0.0, 0.0}), Error);
}

TEST(OrthogonalNoise, RawSampleFollowsDistribution) {
  const Matrix u = sample_noise(64, NoiseSpec{3, Distribution::uniform});
  EXPECT_GT(u.minCoeff(), -1.0);
  EXPECT_LT(u.maxCoeff(), 1.0);
  const Matrix g = sample_noise(64, NoiseSpec{3, Distribution::normal, 5.0, 0.1});
  EXPECT_NEAR(g.mean(), 5.0, 0.01);
}

TEST(OrthogonalMatrixType, RejectsNonOrthogonal) {
  EXPECT_THROW(OrthogonalMatrix(Matrix::Constant(2, 2, 1.0)), Error);
  EXPECT_NO_THROW(OrthogonalMatrix::identity(4));
}

}  // namespace
}  // namespace dfp
