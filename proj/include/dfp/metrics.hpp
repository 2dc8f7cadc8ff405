#pragma once

// Style loss, style-space membership and pixel-space diversity scoring.

#include "json.hpp"

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <span>
#include <string>
#include <vector>

#include "dfp/error.hpp"
#include "dfp/tensor.hpp"

namespace dfp {

/// ||F F^T - G||_F.
inline double style_loss(const FeatureMap& f, const GramMatrix& target) {
  if (f.channels() != target.dim())
    throw Error(ErrorKind::dimension, "feature has " + std::to_string(f.channels()) +
                                          " channels, target Gram is " + std::to_string(target.dim()) + "x" +
                                          std::to_string(target.dim()));
  return (gram(f).matrix() - target.matrix()).norm();
}

/// Membership in the set of features whose Gram is within epsilon of G.
/// epsilon = 0 asks for exact equality, tested against 1e-9 * max(1, ||G||_F).
inline bool in_style_space(const FeatureMap& f, const GramMatrix& g, double epsilon) {
  if (!(epsilon >= 0.0)) throw Error(ErrorKind::usage, "epsilon must be >= 0");
  const double loss = style_loss(f, g);
  if (epsilon == 0.0) return loss <= 1e-9 * std::max(1.0, g.matrix().norm());
  return loss <= epsilon;
}

/// Mean absolute RGB difference normalized to [0, 1]: ||x1 - x2||_1 / (W H 255 3).
inline double pixel_distance(const Image& a, const Image& b) {
  if (a.height() != b.height() || a.width() != b.width())
    throw Error(ErrorKind::dimension, "images are " + std::to_string(a.width()) + "x" +
                                          std::to_string(a.height()) + " and " + std::to_string(b.width()) +
                                          "x" + std::to_string(b.height()));
  std::uint64_t total = 0;
  const auto& pa = a.pixels();
  const auto& pb = b.pixels();
  for (std::size_t i = 0; i < pa.size(); ++i) total += static_cast<std::uint64_t>(std::abs(int{pa[i]} - int{pb[i]}));
  return static_cast<double>(total) / (static_cast<double>(a.width() * a.height()) * 255.0 * 3.0);
}

struct PairDistance {
  std::size_t a = 0;
  std::size_t b = 0;
  double distance = 0.0;
};

struct DiversityReport {
  std::size_t pair_count = 0;
  double mean_pixel_distance = 0.0;
  std::vector<PairDistance> per_pair;
};

namespace metrics_detail {

// Neumaier compensated sum.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace metrics_detail

/// Mean pixel distance over all n(n-1)/2 unordered pairs.
inline DiversityReport diversity_score(std::span<const Image> samples) {
  if (samples.size() < 2)
    throw Error(ErrorKind::insufficient_samples,
                "diversity needs at least 2 samples, got " + std::to_string(samples.size()));
  DiversityReport report;
  metrics_detail::CompensatedSum sum;
  for (std::size_t i = 0; i < samples.size(); ++i)
    for (std::size_t j = i + 1; j < samples.size(); ++j) {
      const double d = pixel_distance(samples[i], samples[j]);
      report.per_pair.push_back({i, j, d});
      sum.add(d);
    }
  report.pair_count = report.per_pair.size();
  report.mean_pixel_distance = sum.value() / static_cast<double>(report.pair_count);
  return report;
}

/// {"pairs":n,"mean_pixel_distance":m,"per_pair":[[a,b,d],...]}
inline nlohmann::json report_to_json(const DiversityReport& r) {
  nlohmann::json pairs = nlohmann::json::array();
  for (const auto& p : r.per_pair) pairs.push_back(nlohmann::json::array({p.a, p.b, p.distance}));
  return {{"pairs", r.pair_count}, {"mean_pixel_distance", r.mean_pixel_distance}, {"per_pair", pairs}};
}

/// Supplementary diagnostic, not a pixel metric: relative Frobenius distance
/// between the Grams of two feature maps with equal channel counts.
inline double gram_distance(const FeatureMap& a, const FeatureMap& b) {
  if (a.channels() != b.channels()) throw Error(ErrorKind::dimension, "channel counts differ");
  return relative_frobenius_error(gram(a).matrix(), gram(b).matrix());
}

}  // namespace dfp
