#pragma once

// Portable, counter-based random numbers.
//
// Every value is a pure function of (key, counter): the i-th raw output of a
// stream keyed by `key` is splitmix64(key + i * 0x9e3779b97f4a7c15). This is
// the SplitMix64 generator run in counter mode, so any element of a stream can
// be produced independently and the whole sequence is identical on every
// platform. Normal deviates use the Box-Muller transform on consecutive
// uniform pairs.

#include <cmath>
#include <cstdint>
#include <numbers>

#include "dfp/error.hpp"

namespace dfp {

inline constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept {
  z += kGoldenGamma;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Combines two 64-bit words into one well-mixed key. Used to derive
/// per-level and per-attempt stream keys from one user-facing seed.
constexpr std::uint64_t mix64(std::uint64_t a, std::uint64_t b) noexcept {
  return splitmix64(a ^ splitmix64(b));
}

class CounterRng {
 public:
  explicit constexpr CounterRng(std::uint64_t key, std::uint64_t counter = 0) noexcept
      : key_(key), counter_(counter) {}

  constexpr std::uint64_t operator()() noexcept { return at(key_, counter_++); }

  static constexpr std::uint64_t at(std::uint64_t key, std::uint64_t counter) noexcept {
    return splitmix64(key + counter * kGoldenGamma);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform01(); }

  /// Standard normal. Draws two uniforms per call and keeps the second deviate.
  double normal() noexcept {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform01();  // (0, 1]
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

enum class Distribution { standard_normal, uniform, normal };

/// Sampling law for the raw noise matrix. `uniform` draws from (-1, 1);
/// `normal` uses `mean` and `stddev`.
struct NoiseSpec {
  std::uint64_t seed = 0;
  Distribution distribution = Distribution::standard_normal;
  double mean = 0.0;
  double stddev = 1.0;

  void validate() const {
    if (distribution == Distribution::normal && !(stddev > 0.0 && std::isfinite(stddev)))
      throw Error(ErrorKind::usage, "normal noise requires stddev > 0");
    if (!std::isfinite(mean)) throw Error(ErrorKind::usage, "noise mean must be finite");
  }

  double draw(CounterRng& rng) const {
    switch (distribution) {
      case Distribution::standard_normal: return rng.normal();
      case Distribution::uniform: return rng.uniform(-1.0, 1.0);
      case Distribution::normal: return mean + stddev * rng.normal();
    }
    return 0.0;
  }
};

inline const char* to_string(Distribution d) {
  switch (d) {
    case Distribution::standard_normal: return "normal";
    case Distribution::uniform: return "uniform";
    case Distribution::normal: return "gaussian";
  }
  return "normal";
}

}  // namespace dfp
