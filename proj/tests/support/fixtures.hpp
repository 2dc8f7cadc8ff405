#pragma once

// Seeded inputs shared by the unit and acceptance suites.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "dfp/dfp.hpp"

namespace dfp::testing {

inline RowMatrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  CounterRng rng(mix64(0xF1C7u, seed));
  RowMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = rng.normal();
  return m;
}

/// Gaussian C x HW feature map with a per-channel offset, so it is not
/// centered.
inline FeatureMap random_feature(std::size_t channels, std::size_t positions, std::uint64_t seed,
                                 double offset = 0.5) {
  RowMatrix m = random_matrix(channels, positions, seed);
  for (Eigen::Index i = 0; i < m.rows(); ++i) m.row(i).array() += offset * static_cast<double>(i + 1);
  return FeatureMap(std::move(m));
}

inline FeatureMap random_centered(std::size_t channels, std::size_t positions, std::uint64_t seed) {
  return center(random_feature(channels, positions, seed)).first;
}

/// A A^T with A of size dim x (2 dim): symmetric positive definite with
/// moderate conditioning.
inline GramMatrix random_psd(std::size_t dim, std::uint64_t seed) {
  const RowMatrix a = random_matrix(dim, 2 * dim, seed);
  Matrix g = a * a.transpose();
  g = 0.5 * (g + g.transpose()).eval();
  return GramMatrix(std::move(g));
}

inline Image random_image(std::size_t height, std::size_t width, std::uint64_t seed) {
  CounterRng rng(mix64(0x1A6Eu, seed));
  std::vector<std::uint8_t> px(height * width * 3);
  for (auto& v : px) v = static_cast<std::uint8_t>(rng() >> 56);
  return Image(height, width, std::move(px));
}

/// Smooth gradients with a disc and a bar, slightly noisy.
inline Image synthetic_content(std::size_t height, std::size_t width, std::uint64_t seed) {
  CounterRng rng(mix64(0xC047u, seed));
  Image img(height, width);
  const double cy = 0.4 * static_cast<double>(height), cx = 0.55 * static_cast<double>(width);
  const double radius = 0.25 * static_cast<double>(std::min(height, width));
  for (std::size_t y = 0; y < height; ++y)
    for (std::size_t x = 0; x < width; ++x) {
      const double u = static_cast<double>(x) / static_cast<double>(width);
      const double v = static_cast<double>(y) / static_cast<double>(height);
      double r = 0.2 + 0.6 * u, g = 0.3 + 0.5 * v, b = 0.7 - 0.4 * u * v;
      const double dy = static_cast<double>(y) - cy, dx = static_cast<double>(x) - cx;
      if (dx * dx + dy * dy < radius * radius) {
        r = 0.9;
        g = 0.8 - 0.3 * v;
        b = 0.2;
      }
      if (y > height * 3 / 4 && x > width / 8 && x < width / 2) {
        r *= 0.3;
        g *= 0.4;
        b = 0.6;
      }
      const double jitter = 0.03 * (rng.uniform01() - 0.5);
      img.at(y, x, 0) = quantize_unit(r + jitter);
      img.at(y, x, 1) = quantize_unit(g + jitter);
      img.at(y, x, 2) = quantize_unit(b + jitter);
    }
  return img;
}

/// Diagonal stripes of saturated colors over textured noise.
inline Image synthetic_style(std::size_t height, std::size_t width, std::uint64_t seed) {
  CounterRng rng(mix64(0x57E1u, seed));
  Image img(height, width);
  const double palette[4][3] = {{0.9, 0.2, 0.1}, {0.1, 0.3, 0.8}, {0.95, 0.85, 0.2}, {0.15, 0.6, 0.3}};
  for (std::size_t y = 0; y < height; ++y)
    for (std::size_t x = 0; x < width; ++x) {
      const std::size_t band = ((x + 2 * y) / 5) % 4;
      const double t = 0.5 + 0.5 * std::sin(0.7 * static_cast<double>(x) - 0.3 * static_cast<double>(y));
      for (std::size_t c = 0; c < 3; ++c) {
        const double base = palette[band][c] * (0.7 + 0.3 * t);
        img.at(y, x, c) = quantize_unit(base + 0.25 * (rng.uniform01() - 0.5));
      }
    }
  return img;
}

/// Removes itself on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("dfp_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter()++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  static int& counter() {
    static int n = 0;
    return n;
  }
  std::filesystem::path path_;
};

inline double max_abs_diff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace dfp::testing
