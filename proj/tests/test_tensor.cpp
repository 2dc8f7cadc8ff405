#include <gtest/gtest.h>

#include "dfp/tensor.hpp"
#include "support/fixtures.hpp"

namespace dfp {
namespace {

using testing::random_feature;

// Independent triple-loop Gram.
Matrix gram_oracle(const FeatureMap& f) {
  const auto c = f.channels(), n = f.positions();
  Matrix g(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(c));
  for (std::size_t i = 0; i < c; ++i)
    for (std::size_t j = 0; j < c; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += f(i, k) * f(j, k);
      g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = s;
    }
  return g;
}

TEST(FeatureMap, RejectsBadShapesAndNonFinite) {
  EXPECT_THROW(FeatureMap(2, 2, 2, RowMatrix::Zero(2, 3)), Error);
  EXPECT_THROW(FeatureMap(0, 1, 1, RowMatrix::Zero(0, 1)), Error);
  RowMatrix bad = RowMatrix::Zero(1, 2);
  bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(FeatureMap{bad}, Error);
  bad(0, 1) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(FeatureMap{bad}, Error);
}

TEST(GramMatrix, RejectsAsymmetric) {
  Matrix m(2, 2);
  m << 1, 2, 2.1, 1;
  EXPECT_THROW(GramMatrix{m}, Error);
  EXPECT_THROW(GramMatrix{Matrix::Zero(2, 3)}, Error);
}

TEST(Gram, IdentityRows) {
  const auto g = gram(FeatureMap::from_rows({{1, 0}, {0, 1}}));
  EXPECT_EQ(g.matrix(), Matrix::Identity(2, 2));
}

TEST(Gram, OnesRows) {
  const auto g = gram(FeatureMap::from_rows({{1, 1}, {1, 1}}));
  Matrix expected = Matrix::Constant(2, 2, 2.0);
  EXPECT_EQ(g.matrix(), expected);
}

TEST(Gram, MatchesTripleLoopOracle) {
  const auto f = random_feature(3, 5, 11);
  EXPECT_LE(testing::max_abs_diff(gram(f).matrix(), gram_oracle(f)), 1e-12);
}

TEST(Gram, MatchesOracleAcrossSmallShapes) {
  for (std::size_t c = 1; c <= 8; ++c)
    for (std::size_t n : {1u, 2u, 7u, 16u, 32u}) {
      const auto f = random_feature(c, n, c * 100 + n);
      const auto g = gram(f);
      ASSERT_LE(testing::max_abs_diff(g.matrix(), gram_oracle(f)), 1e-12) << c << "x" << n;
      ASSERT_EQ(g.matrix(), g.matrix().transpose());
    }
}

TEST(Center, HandMean) {
  auto [c, m] = center(FeatureMap::from_rows({{1, 3}}));
  EXPECT_EQ(c.matrix()(0, 0), -1.0);
  EXPECT_EQ(c.matrix()(0, 1), 1.0);
  EXPECT_EQ(m[0], 2.0);
}

TEST(Center, AlreadyCenteredIsUnchanged) {
  const auto f = FeatureMap::from_rows({{-1, 1, 0}, {2, -2, 0}});
  auto [c, m] = center(f);
  EXPECT_LE(testing::max_abs_diff(c.matrix(), f.matrix()), 1e-15);
  EXPECT_EQ(m.vector(), Vector::Zero(2));
}

TEST(Center, RowMeansVanish) {
  const auto f = random_feature(4, 16, 5, 3.0);
  auto [c, m] = center(f);
  EXPECT_LE(c.matrix().rowwise().mean().cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_EQ(c.height(), f.height());
  EXPECT_EQ(c.width(), f.width());
}

TEST(Recenter, InvertsCenter) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto f = random_feature(1 + seed % 6, 3 + seed, seed, 2.0);
    auto [c, m] = center(f);
    ASSERT_LE(testing::max_abs_diff(recenter(c, m).matrix(), f.matrix()), 1e-12);
  }
}

TEST(Recenter, ZeroMeanIsIdentityAndConstantShift) {
  const auto f = random_feature(3, 4, 1);
  EXPECT_EQ(recenter(f, MeanVector::zeros(3)).matrix(), f.matrix());
  const auto shifted = recenter(FeatureMap::from_rows({{0, 0}}), MeanVector(Vector::Constant(1, 5.0)));
  EXPECT_EQ(shifted.matrix(), RowMatrix::Constant(1, 2, 5.0));
}

TEST(Recenter, ChannelMismatch) {
  try {
    recenter(random_feature(3, 4, 1), MeanVector::zeros(2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::dimension);
  }
}

TEST(ImageFeature, WhitePixel) {
  const auto f = image_to_feature(Image(1, 1, std::uint8_t{255}));
  EXPECT_EQ(f.channels(), 3u);
  EXPECT_EQ(f.matrix(), RowMatrix::Ones(3, 1));
}

TEST(ImageFeature, RoundTripIsBitExact) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Image img = testing::random_image(7, 9, seed);
    EXPECT_EQ(feature_to_image(image_to_feature(img)), img);
  }
}

TEST(ImageFeature, Clamps) {
  RowMatrix m(3, 2);
  m << 1.5, -0.2, 0.5, 1.0, 0.0, 0.999;
  const Image img = feature_to_image(FeatureMap(3, 1, 2, m));
  EXPECT_EQ(img.at(0, 0, 0), 255);
  EXPECT_EQ(img.at(0, 1, 0), 0);
  EXPECT_EQ(img.at(0, 0, 1), 128);  // round(127.5)
  EXPECT_EQ(img.at(0, 1, 2), 255);  // round(254.745)
  EXPECT_THROW(feature_to_image(random_feature(2, 2, 0)), Error);
}

}  // namespace
}  // namespace dfp
