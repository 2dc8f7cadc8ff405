#pragma once

// Coarse-to-fine multi-level stylization over the patch codec.

#include "json.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "dfp/codec.hpp"
#include "dfp/error.hpp"
#include "dfp/random.hpp"
#include "dfp/tensor.hpp"
#include "dfp/transform.hpp"

namespace dfp {

struct LevelSpec {
  std::size_t patch = 1;
  std::uint64_t seed = 0;

  friend bool operator==(const LevelSpec&, const LevelSpec&) = default;
};

struct PipelineConfig {
  std::vector<LevelSpec> levels;  // deepest (largest patch) first
  std::vector<double> lambda;     // one per level
  double alpha = 0.6;
  std::uint64_t noise_seed = 0;
  double content_threshold = kDefaultThreshold;
  double style_threshold = kDefaultThreshold;

  void validate() const {
    if (levels.empty()) throw Error(ErrorKind::usage, "pipeline needs at least one level");
    if (lambda.size() != levels.size())
      throw Error(ErrorKind::usage, "lambda list has " + std::to_string(lambda.size()) + " entries for " +
                                        std::to_string(levels.size()) + " levels");
    for (const auto& level : levels)
      if (level.patch < 1 || level.patch > 32) throw Error(ErrorKind::usage, "patch sizes must lie in [1, 32]");
    for (double l : lambda)
      if (!(l >= 0.0 && l <= 1.0)) throw Error(ErrorKind::usage, "lambda values must lie in [0, 1]");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw Error(ErrorKind::usage, "alpha must lie in [0, 1]");
    if (!(content_threshold >= 0.0) || !(style_threshold >= 0.0))
      throw Error(ErrorKind::usage, "thresholds must be >= 0");
  }

  friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

enum class Profile { deep_only, all_levels };

inline constexpr double kDefaultLambda = 0.6;
inline constexpr double kDefaultAlpha = 0.6;

/// Codec seed used by the default profiles for a level with patch p.
constexpr std::uint64_t default_level_seed(std::size_t patch) { return 0xC0DEC0DE00000000ULL + patch; }

/// Three levels with patches 8, 4, 2. deep_only perturbs only the deepest.
inline PipelineConfig default_config(Profile profile) {
  PipelineConfig cfg;
  for (std::size_t p : {8u, 4u, 2u}) cfg.levels.push_back({p, default_level_seed(p)});
  if (profile == Profile::deep_only)
    cfg.lambda = {kDefaultLambda, 0.0, 0.0};
  else
    cfg.lambda = {kDefaultLambda, kDefaultLambda, kDefaultLambda};
  cfg.alpha = kDefaultAlpha;
  return cfg;
}

inline Profile parse_profile(std::string_view name) {
  if (name == "deep-only") return Profile::deep_only;
  if (name == "all-levels") return Profile::all_levels;
  throw Error(ErrorKind::usage, "unknown profile '" + std::string(name) + "'");
}

/// Noise seed for level `index`: mix64(noise_seed, index).
constexpr std::uint64_t level_noise_seed(std::uint64_t noise_seed, std::size_t index) {
  return mix64(noise_seed, static_cast<std::uint64_t>(index));
}

// JSON form:
// {"levels":[{"patch":8,"seed":...},...],"lambda":[...],"alpha":0.6,
//  "noise_seed":0,"content_threshold":1e-5,"style_threshold":1e-5}
// Unknown keys are rejected. Only "levels" and "lambda" are required.

inline nlohmann::json config_to_json(const PipelineConfig& cfg) {
  nlohmann::json levels = nlohmann::json::array();
  for (const auto& l : cfg.levels) levels.push_back({{"patch", l.patch}, {"seed", l.seed}});
  return {{"levels", levels},
          {"lambda", cfg.lambda},
          {"alpha", cfg.alpha},
          {"noise_seed", cfg.noise_seed},
          {"content_threshold", cfg.content_threshold},
          {"style_threshold", cfg.style_threshold}};
}

namespace pipeline_detail {

[[noreturn]] inline void schema_error(const std::string& what) { throw Error(ErrorKind::format, "config: " + what); }

inline void reject_unknown(const nlohmann::json& obj, std::initializer_list<std::string_view> allowed,
                           const std::string& where) {
  for (const auto& [key, _] : obj.items())
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      schema_error("unknown key '" + key + "' in " + where);
}

inline double get_number(const nlohmann::json& j, const char* key) {
  if (!j.is_number()) schema_error(std::string("'") + key + "' must be a number");
  return j.get<double>();
}

inline std::uint64_t get_uint(const nlohmann::json& j, const char* key) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0))
    schema_error(std::string("'") + key + "' must be a non-negative integer");
  return j.get<std::uint64_t>();
}

}  // namespace pipeline_detail

inline PipelineConfig config_from_json(const nlohmann::json& j) {
  using namespace pipeline_detail;
  if (!j.is_object()) schema_error("document must be an object");
  reject_unknown(j, {"levels", "lambda", "alpha", "noise_seed", "content_threshold", "style_threshold"},
                 "config");
  if (!j.contains("levels") || !j.contains("lambda")) schema_error("'levels' and 'lambda' are required");
  PipelineConfig cfg;
  if (!j["levels"].is_array()) schema_error("'levels' must be an array");
  for (const auto& level : j["levels"]) {
    if (!level.is_object()) schema_error("each level must be an object");
    reject_unknown(level, {"patch", "seed"}, "level");
    if (!level.contains("patch") || !level.contains("seed")) schema_error("levels need 'patch' and 'seed'");
    cfg.levels.push_back({static_cast<std::size_t>(get_uint(level["patch"], "patch")),
                          get_uint(level["seed"], "seed")});
  }
  if (!j["lambda"].is_array()) schema_error("'lambda' must be an array");
  for (const auto& l : j["lambda"]) cfg.lambda.push_back(get_number(l, "lambda"));
  if (j.contains("alpha")) cfg.alpha = get_number(j["alpha"], "alpha");
  if (j.contains("noise_seed")) cfg.noise_seed = get_uint(j["noise_seed"], "noise_seed");
  if (j.contains("content_threshold"))
    cfg.content_threshold = get_number(j["content_threshold"], "content_threshold");
  if (j.contains("style_threshold")) cfg.style_threshold = get_number(j["style_threshold"], "style_threshold");
  return cfg;
}

inline PipelineConfig parse_config(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("config is not valid JSON: ") + e.what(), e.byte);
  }
  return config_from_json(j);
}

/// Pads a 3-channel plane to (height, width) by replicating the last row and
/// column.
inline FeatureMap pad_edge(const FeatureMap& plane, std::size_t height, std::size_t width) {
  if (height == plane.height() && width == plane.width()) return plane;
  RowMatrix out(3, static_cast<Eigen::Index>(height * width));
  for (std::size_t y = 0; y < height; ++y) {
    const std::size_t sy = std::min(y, plane.height() - 1);
    for (std::size_t x = 0; x < width; ++x) {
      const std::size_t sx = std::min(x, plane.width() - 1);
      out.col(static_cast<Eigen::Index>(y * width + x)) =
          plane.matrix().col(static_cast<Eigen::Index>(sy * plane.width() + sx));
    }
  }
  return FeatureMap(3, height, width, std::move(out));
}

inline FeatureMap crop(const FeatureMap& plane, std::size_t height, std::size_t width) {
  if (height == plane.height() && width == plane.width()) return plane;
  RowMatrix out(plane.channels(), static_cast<Eigen::Index>(height * width));
  for (std::size_t y = 0; y < height; ++y)
    for (std::size_t x = 0; x < width; ++x)
      out.col(static_cast<Eigen::Index>(y * width + x)) =
          plane.matrix().col(static_cast<Eigen::Index>(y * plane.width() + x));
  return FeatureMap(plane.channels(), height, width, std::move(out));
}

struct StylizeOptions {
  unsigned threads = 1;
};

struct LevelReport {
  std::size_t patch = 0;
  PwctDiagnostics diagnostics;
};

struct StylizeResult {
  FeatureMap plane;  // cropped, clamped to [0, 1], not yet quantized
  std::vector<LevelReport> levels;

  Image image() const { return feature_to_image(plane); }
};

/// Runs PWCT at every level, deepest first. Between levels the decoded plane
/// is clamped to [0, 1] but kept in floating point; quantization happens once
/// at the end.
inline StylizeResult stylize_detailed(const Image& content, const Image& style, const PipelineConfig& cfg,
                                      const StylizeOptions& options = {}) {
  cfg.validate();
  const std::size_t multiple =
      std::accumulate(cfg.levels.begin(), cfg.levels.end(), std::size_t{1},
                      [](std::size_t acc, const LevelSpec& l) { return std::lcm(acc, l.patch); });
  auto round_up = [&](std::size_t v) { return (v + multiple - 1) / multiple * multiple; };

  FeatureMap current = pad_edge(image_to_feature(content), round_up(content.height()), round_up(content.width()));
  const FeatureMap style_plane =
      pad_edge(image_to_feature(style), round_up(style.height()), round_up(style.width()));

  StylizeResult result{current, {}};
  for (std::size_t i = 0; i < cfg.levels.size(); ++i) {
    const CodecLevel level(cfg.levels[i].patch, cfg.levels[i].seed);
    PwctParams params;
    params.lambda = cfg.lambda[i];
    params.alpha = cfg.alpha;
    params.content_threshold = cfg.content_threshold;
    params.style_threshold = cfg.style_threshold;
    params.noise = NoiseSpec{level_noise_seed(cfg.noise_seed, i), Distribution::standard_normal};

    const FeatureMap fc = encode(current, level, options.threads);
    const FeatureMap fs = encode(style_plane, level, options.threads);
    PwctResult out = pwct_detailed(fc, fs, params);
    RowMatrix decoded = decode_plane(out.features, level, options.threads).matrix().cwiseMax(0.0).cwiseMin(1.0);
    current = current.with_data(std::move(decoded));
    result.levels.push_back({level.patch(), std::move(out.diagnostics)});
  }
  result.plane = crop(current, content.height(), content.width());
  return result;
}

inline Image stylize(const Image& content, const Image& style, const PipelineConfig& cfg,
                     const StylizeOptions& options = {}) {
  return stylize_detailed(content, style, cfg, options).image();
}

}  // namespace dfp
