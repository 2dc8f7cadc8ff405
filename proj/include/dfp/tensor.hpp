#pragma once

// Value types for vectorized feature maps, Gram matrices, mean vectors and
// 8-bit RGB images, plus the elementary statistics over them.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "dfp/error.hpp"

namespace dfp {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

namespace detail {

template <typename Derived>
bool all_finite(const Eigen::DenseBase<Derived>& m) {
  return m.derived().array().isFinite().all();
}

}  // namespace detail

/// A deep feature in vectorized form: C rows (channels) by H*W columns
/// (spatial positions, row-major over the H x W grid). H and W are kept only
/// so the map can be decoded back to a spatial layout.
class FeatureMap {
 public:
  FeatureMap(std::size_t channels, std::size_t height, std::size_t width, RowMatrix data)
      : height_(height), width_(width), data_(std::move(data)) {
    if (channels < 1 || height < 1 || width < 1)
      throw Error(ErrorKind::precondition, "feature map dimensions must be positive");
    if (static_cast<std::size_t>(data_.rows()) != channels ||
        static_cast<std::size_t>(data_.cols()) != height * width)
      throw Error(ErrorKind::dimension, "feature data is " + std::to_string(data_.rows()) + "x" +
                                            std::to_string(data_.cols()) + ", expected " +
                                            std::to_string(channels) + "x" +
                                            std::to_string(height * width));
    if (!detail::all_finite(data_))
      throw Error(ErrorKind::precondition, "feature map contains non-finite values");
  }

  /// C x N map with H = 1, W = N.
  explicit FeatureMap(RowMatrix data)
      : FeatureMap(static_cast<std::size_t>(data.rows()), 1, static_cast<std::size_t>(data.cols()),
                   data) {}

  static FeatureMap from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    const auto c = rows.size();
    const auto n = c ? rows.begin()->size() : 0;
    RowMatrix m(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(n));
    Eigen::Index i = 0;
    for (const auto& row : rows) {
      if (row.size() != n) throw Error(ErrorKind::dimension, "ragged rows");
      Eigen::Index j = 0;
      for (double v : row) m(i, j++) = v;
      ++i;
    }
    return FeatureMap(std::move(m));
  }

  std::size_t channels() const noexcept { return static_cast<std::size_t>(data_.rows()); }
  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t positions() const noexcept { return height_ * width_; }

  const RowMatrix& matrix() const noexcept { return data_; }
  double operator()(std::size_t c, std::size_t k) const {
    return data_(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(k));
  }

  /// Same spatial metadata, new data of identical shape.
  FeatureMap with_data(RowMatrix data) const {
    return FeatureMap(channels(), height_, width_, std::move(data));
  }

  bool same_shape(const FeatureMap& other) const noexcept {
    return channels() == other.channels() && height_ == other.height_ && width_ == other.width_;
  }

 private:
  std::size_t height_;
  std::size_t width_;
  RowMatrix data_;
};

/// Symmetric C x C second-moment statistic. Symmetry is checked on
/// construction; positive semi-definiteness is checked by the eigensolver,
/// which is the only place it matters.
class GramMatrix {
 public:
  explicit GramMatrix(Matrix data) : data_(std::move(data)) {
    if (data_.rows() < 1 || data_.rows() != data_.cols())
      throw Error(ErrorKind::dimension, "Gram matrix must be square and non-empty");
    if (!detail::all_finite(data_))
      throw Error(ErrorKind::precondition, "Gram matrix contains non-finite values");
    for (Eigen::Index i = 0; i < data_.rows(); ++i)
      for (Eigen::Index j = i + 1; j < data_.cols(); ++j) {
        const double a = data_(i, j), b = data_(j, i);
        if (std::abs(a - b) > 1e-9 * std::max(1.0, std::abs(a)))
          throw Error(ErrorKind::precondition, "Gram matrix is not symmetric");
      }
  }

  std::size_t dim() const noexcept { return static_cast<std::size_t>(data_.rows()); }
  const Matrix& matrix() const noexcept { return data_; }
  double operator()(std::size_t i, std::size_t j) const {
    return data_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

 private:
  Matrix data_;
};

class MeanVector {
 public:
  explicit MeanVector(Vector data) : data_(std::move(data)) {
    if (data_.size() < 1) throw Error(ErrorKind::dimension, "mean vector must be non-empty");
    if (!detail::all_finite(data_))
      throw Error(ErrorKind::precondition, "mean vector contains non-finite values");
  }

  static MeanVector zeros(std::size_t dim) {
    return MeanVector(Vector::Zero(static_cast<Eigen::Index>(dim)));
  }

  std::size_t dim() const noexcept { return static_cast<std::size_t>(data_.size()); }
  const Vector& vector() const noexcept { return data_; }
  double operator[](std::size_t i) const { return data_(static_cast<Eigen::Index>(i)); }

 private:
  Vector data_;
};

/// 8-bit RGB image, row-major H x W x 3.
class Image {
 public:
  Image(std::size_t height, std::size_t width, std::vector<std::uint8_t> pixels)
      : height_(height), width_(width), pixels_(std::move(pixels)) {
    if (height < 1 || width < 1) throw Error(ErrorKind::precondition, "image dimensions must be positive");
    if (pixels_.size() != height * width * 3)
      throw Error(ErrorKind::dimension, "pixel buffer holds " + std::to_string(pixels_.size()) +
                                            " bytes, expected " + std::to_string(height * width * 3));
  }

  Image(std::size_t height, std::size_t width, std::uint8_t fill = 0)
      : Image(height, width, std::vector<std::uint8_t>(height * width * 3, fill)) {}

  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  static constexpr std::size_t channels() noexcept { return 3; }

  const std::vector<std::uint8_t>& pixels() const noexcept { return pixels_; }

  std::uint8_t at(std::size_t y, std::size_t x, std::size_t c) const {
    return pixels_[(y * width_ + x) * 3 + c];
  }
  std::uint8_t& at(std::size_t y, std::size_t x, std::size_t c) {
    return pixels_[(y * width_ + x) * 3 + c];
  }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  std::size_t height_;
  std::size_t width_;
  std::vector<std::uint8_t> pixels_;
};

/// G = F F^T. Only the lower triangle is accumulated; the result is mirrored
/// so it is exactly symmetric.
inline GramMatrix gram(const FeatureMap& f) {
  const auto c = static_cast<Eigen::Index>(f.channels());
  Matrix g = Matrix::Zero(c, c);
  g.selfadjointView<Eigen::Lower>().rankUpdate(f.matrix());
  g.triangularView<Eigen::StrictlyUpper>() = g.transpose();
  return GramMatrix(std::move(g));
}

/// Subtracts each channel's mean over positions. Returns the centered map
/// and the removed means.
inline std::pair<FeatureMap, MeanVector> center(const FeatureMap& f) {
  Vector mean = f.matrix().rowwise().mean();
  RowMatrix centered = f.matrix().colwise() - mean;
  return {f.with_data(std::move(centered)), MeanVector(std::move(mean))};
}

inline FeatureMap recenter(const FeatureMap& f, const MeanVector& m) {
  if (m.dim() != f.channels())
    throw Error(ErrorKind::dimension, "mean vector has " + std::to_string(m.dim()) +
                                          " channels, feature map has " +
                                          std::to_string(f.channels()));
  RowMatrix shifted = f.matrix().colwise() + m.vector();
  return f.with_data(std::move(shifted));
}

/// Largest absolute per-channel mean.
inline double max_abs_row_mean(const FeatureMap& f) {
  return f.matrix().rowwise().mean().cwiseAbs().maxCoeff();
}

/// 3-channel map (planes R, G, B) with values pixel / 255.
inline FeatureMap image_to_feature(const Image& img) {
  const auto n = img.height() * img.width();
  RowMatrix m(3, static_cast<Eigen::Index>(n));
  const auto& px = img.pixels();
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t c = 0; c < 3; ++c)
      m(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(k)) = px[k * 3 + c] / 255.0;
  return FeatureMap(3, img.height(), img.width(), std::move(m));
}

inline std::uint8_t quantize_unit(double v) {
  const double clamped = std::clamp(v, 0.0, 1.0);
  return static_cast<std::uint8_t>(std::lround(clamped * 255.0));
}

/// Clamps to [0, 1] and quantizes by round(v * 255).
inline Image feature_to_image(const FeatureMap& f) {
  if (f.channels() != 3)
    throw Error(ErrorKind::dimension, "image features need 3 channels, got " +
                                          std::to_string(f.channels()));
  const auto n = f.positions();
  std::vector<std::uint8_t> px(n * 3);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t c = 0; c < 3; ++c) px[k * 3 + c] = quantize_unit(f(c, k));
  return Image(f.height(), f.width(), std::move(px));
}

inline double frobenius_distance(const Matrix& a, const Matrix& b) { return (a - b).norm(); }

/// ||a - b||_F / ||b||_F, or the absolute distance when b is zero.
inline double relative_frobenius_error(const Matrix& a, const Matrix& b) {
  const double denom = b.norm();
  const double diff = (a - b).norm();
  return denom > 0.0 ? diff / denom : diff;
}

}  // namespace dfp
