#pragma once

// Whitening, coloring, perturbed coloring and the two blends that make up
// the perturbed whitening and coloring transform (PWCT).
//
// With F_c centered content and E_c D_c E_c^T its truncated Gram:
//   whiten:           F_c_hat  = E_c D_c^{-1/2} E_c^T F_c
//   color:            F_cs     = E_s D_s^{1/2} E_s^T F_c_hat
//   perturbed color:  F_csn    = E_s D_s^{1/2} Z E_s^T F_c_hat,  Z Z^T = I
//   diversity blend:  lambda F_csn + (1 - lambda) F_cs
//   content blend:    alpha (blend + m_s) + (1 - alpha) F_c_raw
//
// Because Z Z^T = I and F_c_hat F_c_hat^T = I, F_csn has exactly the style
// Gram for every Z.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dfp/error.hpp"
#include "dfp/linalg.hpp"
#include "dfp/random.hpp"
#include "dfp/tensor.hpp"

namespace dfp {

/// Inputs whose row means exceed this are rejected by whiten().
inline constexpr double kCenteredTolerance = 1e-9;

struct PwctParams {
  double lambda = 0.6;
  double alpha = 0.6;
  double content_threshold = kDefaultThreshold;
  double style_threshold = kDefaultThreshold;
  NoiseSpec noise{};

  void validate() const {
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw Error(ErrorKind::usage, "lambda must lie in [0, 1]");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw Error(ErrorKind::usage, "alpha must lie in [0, 1]");
    if (!(content_threshold >= 0.0) || !(style_threshold >= 0.0))
      throw Error(ErrorKind::usage, "thresholds must be >= 0");
    noise.validate();
  }
};

namespace transform_detail {

// E diag(d^power) E^T, or E diag(d^power) Z E^T when `middle` is given.
inline Matrix spectral_operator(const EigenFactorization& f, double power, const Matrix* middle = nullptr) {
  const Vector scale = f.eigenvalues.array().pow(power).matrix();
  const Matrix left = f.eigenvectors * scale.asDiagonal();
  if (middle) return (left * *middle) * f.eigenvectors.transpose();
  return left * f.eigenvectors.transpose();
}

inline FeatureMap apply(const Matrix& op, const FeatureMap& f) {
  RowMatrix out(op.rows(), f.matrix().cols());
  out.noalias() = op * f.matrix();
  return f.with_data(std::move(out));
}

}  // namespace transform_detail

struct Whitened {
  FeatureMap features;
  EigenFactorization content;
};

/// Whitening that also returns the content factorization it used.
inline Whitened whiten_with_factors(const FeatureMap& centered, double threshold = kDefaultThreshold) {
  const double drift = max_abs_row_mean(centered);
  if (drift > kCenteredTolerance)
    throw Error(ErrorKind::precondition,
                "whitening needs centered features (max row mean " + std::to_string(drift) + ")");
  EigenFactorization content = sym_eig(gram(centered), threshold);
  FeatureMap white = transform_detail::apply(transform_detail::spectral_operator(content, -0.5), centered);
  return {std::move(white), std::move(content)};
}

inline FeatureMap whiten(const FeatureMap& centered, double threshold = kDefaultThreshold) {
  return whiten_with_factors(centered, threshold).features;
}

inline FeatureMap color(const FeatureMap& whitened, const EigenFactorization& style) {
  if (whitened.channels() != style.dim())
    throw Error(ErrorKind::dimension, "coloring " + std::to_string(whitened.channels()) +
                                          "-channel features with a " + std::to_string(style.dim()) +
                                          "-dimensional style");
  return transform_detail::apply(transform_detail::spectral_operator(style, 0.5), whitened);
}

/// Coloring with an orthogonal Z inserted between D_s^{1/2} and E_s^T. Z is
/// sized to the truncated style rank.
inline FeatureMap perturbed_color(const FeatureMap& whitened, const EigenFactorization& style,
                                  const OrthogonalMatrix& z) {
  if (whitened.channels() != style.dim())
    throw Error(ErrorKind::dimension, "coloring " + std::to_string(whitened.channels()) +
                                          "-channel features with a " + std::to_string(style.dim()) +
                                          "-dimensional style");
  if (z.dim() != style.rank())
    throw Error(ErrorKind::dimension, "noise is " + std::to_string(z.dim()) + "x" +
                                          std::to_string(z.dim()) + " but the style rank is " +
                                          std::to_string(style.rank()));
  return transform_detail::apply(transform_detail::spectral_operator(style, 0.5, &z.matrix()), whitened);
}

namespace transform_detail {

inline FeatureMap lerp(const FeatureMap& a, const FeatureMap& b, double weight, const char* name) {
  if (!a.same_shape(b)) throw Error(ErrorKind::dimension, std::string(name) + " blend of mismatched shapes");
  if (!(weight >= 0.0 && weight <= 1.0))
    throw Error(ErrorKind::usage, std::string(name) + " must lie in [0, 1]");
  RowMatrix out = weight * a.matrix() + (1.0 - weight) * b.matrix();
  return a.with_data(std::move(out));
}

}  // namespace transform_detail

/// lambda * perturbed + (1 - lambda) * colored.
inline FeatureMap blend_diversity(const FeatureMap& perturbed, const FeatureMap& colored, double lambda) {
  return transform_detail::lerp(perturbed, colored, lambda, "lambda");
}

/// alpha * styled + (1 - alpha) * content, where content is the raw
/// (uncentered) content feature.
inline FeatureMap blend_content(const FeatureMap& styled, const FeatureMap& content, double alpha) {
  return transform_detail::lerp(styled, content, alpha, "alpha");
}

struct PwctDiagnostics {
  std::size_t channels = 0;
  std::size_t positions = 0;
  std::size_t content_rank = 0;
  std::size_t style_rank = 0;
  bool perturbed = false;
  // True when both Grams are full rank, which is when the output Gram is
  // guaranteed to equal the style Gram at lambda = alpha = 1.
  bool gram_preserving = false;
  std::vector<std::string> warnings;
};

struct PwctResult {
  FeatureMap features;
  PwctDiagnostics diagnostics;
};

/// Full PWCT: center both inputs, whiten the content, factor the style Gram,
/// color with and without orthogonal noise, blend by lambda, add the style
/// mean back and blend with the raw content by alpha.
inline PwctResult pwct_detailed(const FeatureMap& content, const FeatureMap& style, const PwctParams& params) {
  params.validate();
  if (content.channels() != style.channels())
    throw Error(ErrorKind::dimension, "content has " + std::to_string(content.channels()) +
                                          " channels, style has " + std::to_string(style.channels()));
  auto [content_centered, content_mean] = center(content);
  auto [style_centered, style_mean] = center(style);

  Whitened white = whiten_with_factors(content_centered, params.content_threshold);
  const EigenFactorization style_factors = sym_eig(gram(style_centered), params.style_threshold);

  PwctDiagnostics diag;
  diag.channels = content.channels();
  diag.positions = content.positions();
  diag.content_rank = white.content.rank();
  diag.style_rank = style_factors.rank();
  diag.gram_preserving = diag.content_rank == diag.channels && diag.style_rank == diag.channels;
  if (diag.content_rank < diag.channels)
    diag.warnings.push_back("content Gram truncated to rank " + std::to_string(diag.content_rank) + " of " +
                            std::to_string(diag.channels) + " (style rank " +
                            std::to_string(diag.style_rank) + "); Gram preservation is not exact");
  if (content.positions() < content.channels())
    diag.warnings.push_back("fewer positions (" + std::to_string(content.positions()) + ") than channels (" +
                            std::to_string(content.channels()) + ")");

  // lambda = 0 gives exactly the unperturbed coloring, so no noise is drawn.
  // Otherwise the diversity blend is folded into one operator,
  // E D^{1/2} (lambda Z + (1 - lambda) I) E^T.
  std::optional<FeatureMap> styled;
  if (params.lambda > 0.0) {
    const OrthogonalMatrix z = orthogonal_noise(style_factors.rank(), params.noise);
    const auto r = static_cast<Eigen::Index>(style_factors.rank());
    const Matrix middle = params.lambda * z.matrix() + (1.0 - params.lambda) * Matrix::Identity(r, r);
    styled = transform_detail::apply(transform_detail::spectral_operator(style_factors, 0.5, &middle),
                                     white.features);
    diag.perturbed = true;
  } else {
    styled = color(white.features, style_factors);
  }
  FeatureMap out = blend_content(recenter(*styled, style_mean), content, params.alpha);
  return {std::move(out), std::move(diag)};
}

inline FeatureMap pwct(const FeatureMap& content, const FeatureMap& style, const PwctParams& params) {
  return pwct_detailed(content, style, params).features;
}

}  // namespace dfp
