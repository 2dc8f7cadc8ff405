#pragma once

// Exactly invertible patch codec that stands in for a trained encoder and
// decoder pair.
//
// An image plane of H x W RGB values is cut into non-overlapping p x p tiles.
// Each tile is flattened into a 3p^2 vector (index (dy * p + dx) * 3 + c) and
// multiplied by a fixed orthonormal basis B, giving one column of a
// 3p^2 x (H/p * W/p) feature map. Decoding multiplies by B^T and reassembles
// the tiles, so decode(encode(x)) == x up to rounding.

#include <cstdint>
#include <string>

#include "dfp/error.hpp"
#include "dfp/linalg.hpp"
#include "dfp/parallel.hpp"
#include "dfp/random.hpp"
#include "dfp/tensor.hpp"

namespace dfp {

class CodecLevel {
 public:
  CodecLevel(std::size_t patch, std::uint64_t seed) : patch_(patch), seed_(seed) {
    if (patch < 1) throw Error(ErrorKind::usage, "patch size must be >= 1");
    if (patch > 32) throw Error(ErrorKind::usage, "patch size must be <= 32");
    basis_ = orthogonal_noise(channels(), NoiseSpec{seed, Distribution::standard_normal}).matrix();
  }

  std::size_t patch() const noexcept { return patch_; }
  std::size_t stride() const noexcept { return patch_; }
  std::size_t channels() const noexcept { return 3 * patch_ * patch_; }
  std::uint64_t seed() const noexcept { return seed_; }
  const Matrix& basis() const noexcept { return basis_; }

 private:
  std::size_t patch_;
  std::uint64_t seed_;
  Matrix basis_;
};

namespace codec_detail {

// Columns per work chunk. Fixed so results do not depend on thread count.
inline constexpr std::size_t kChunk = 64;

}  // namespace codec_detail

/// Encodes a 3-channel image plane (see image_to_feature) whose height and
/// width are multiples of the patch size.
inline FeatureMap encode(const FeatureMap& plane, const CodecLevel& level, unsigned threads = 1) {
  const std::size_t p = level.patch();
  if (plane.channels() != 3) throw Error(ErrorKind::dimension, "encode expects a 3-channel image plane");
  if (plane.height() % p != 0 || plane.width() % p != 0)
    throw Error(ErrorKind::precondition, "image " + std::to_string(plane.height()) + "x" +
                                             std::to_string(plane.width()) +
                                             " is not divisible by patch " + std::to_string(p));
  const std::size_t bh = plane.height() / p, bw = plane.width() / p, w = plane.width();
  const auto c = static_cast<Eigen::Index>(level.channels());
  const RowMatrix& src = plane.matrix();
  RowMatrix out(c, static_cast<Eigen::Index>(bh * bw));
  parallel_chunks(bh * bw, codec_detail::kChunk, threads, [&](std::size_t begin, std::size_t end) {
    Matrix tiles(c, static_cast<Eigen::Index>(end - begin));
    for (std::size_t b = begin; b < end; ++b) {
      const std::size_t by = b / bw, bx = b % bw;
      for (std::size_t dy = 0; dy < p; ++dy)
        for (std::size_t dx = 0; dx < p; ++dx)
          for (std::size_t ch = 0; ch < 3; ++ch)
            tiles(static_cast<Eigen::Index>((dy * p + dx) * 3 + ch), static_cast<Eigen::Index>(b - begin)) =
                src(static_cast<Eigen::Index>(ch), static_cast<Eigen::Index>((by * p + dy) * w + bx * p + dx));
    }
    out.middleCols(static_cast<Eigen::Index>(begin), static_cast<Eigen::Index>(end - begin)).noalias() =
        level.basis() * tiles;
  });
  return FeatureMap(level.channels(), bh, bw, std::move(out));
}

inline FeatureMap encode(const Image& img, const CodecLevel& level, unsigned threads = 1) {
  return encode(image_to_feature(img), level, threads);
}

/// Inverse of encode() without clamping or quantization.
inline FeatureMap decode_plane(const FeatureMap& features, const CodecLevel& level, unsigned threads = 1) {
  const std::size_t p = level.patch();
  if (features.channels() != level.channels())
    throw Error(ErrorKind::dimension, "decoder for patch " + std::to_string(p) + " expects " +
                                          std::to_string(level.channels()) + " channels, got " +
                                          std::to_string(features.channels()));
  const std::size_t bh = features.height(), bw = features.width(), w = bw * p;
  RowMatrix out(3, static_cast<Eigen::Index>(bh * p * w));
  parallel_chunks(bh * bw, codec_detail::kChunk, threads, [&](std::size_t begin, std::size_t end) {
    const auto cols = static_cast<Eigen::Index>(end - begin);
    const Matrix tiles =
        level.basis().transpose() * features.matrix().middleCols(static_cast<Eigen::Index>(begin), cols);
    for (std::size_t b = begin; b < end; ++b) {
      const std::size_t by = b / bw, bx = b % bw;
      for (std::size_t dy = 0; dy < p; ++dy)
        for (std::size_t dx = 0; dx < p; ++dx)
          for (std::size_t ch = 0; ch < 3; ++ch)
            out(static_cast<Eigen::Index>(ch), static_cast<Eigen::Index>((by * p + dy) * w + bx * p + dx)) =
                tiles(static_cast<Eigen::Index>((dy * p + dx) * 3 + ch), static_cast<Eigen::Index>(b - begin));
    }
  });
  return FeatureMap(3, bh * p, w, std::move(out));
}

/// decode_plane() followed by clamping to [0, 1] and 8-bit quantization.
inline Image decode(const FeatureMap& features, const CodecLevel& level, unsigned threads = 1) {
  return feature_to_image(decode_plane(features, level, threads));
}

}  // namespace dfp
