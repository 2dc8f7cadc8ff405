#pragma once

// Binary PPM ("P6", maxval 255) reading and writing.

#include <cctype>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "dfp/error.hpp"
#include "dfp/io.hpp"
#include "dfp/tensor.hpp"

namespace dfp {

namespace ppm_detail {

inline std::size_t skip_space_and_comments(std::span<const std::uint8_t> b, std::size_t i) {
  while (i < b.size()) {
    if (std::isspace(b[i])) {
      ++i;
    } else if (b[i] == '#') {
      while (i < b.size() && b[i] != '\n') ++i;
    } else {
      break;
    }
  }
  return i;
}

inline std::size_t read_uint(std::span<const std::uint8_t> b, std::size_t& i, const char* what) {
  i = skip_space_and_comments(b, i);
  const std::size_t start = i;
  std::size_t v = 0;
  while (i < b.size() && std::isdigit(b[i])) {
    v = v * 10 + (b[i] - '0');
    if (v > (1u << 30)) throw FormatError(std::string(what) + " is too large", start);
    ++i;
  }
  if (i == start) throw FormatError(std::string("expected ") + what, start);
  return v;
}

}  // namespace ppm_detail

inline Image parse_ppm(std::span<const std::uint8_t> b) {
  using namespace ppm_detail;
  if (b.size() < 2 || b[0] != 'P' || b[1] != '6') throw FormatError("not a binary PPM (P6)", 0);
  std::size_t i = 2;
  const auto width = read_uint(b, i, "width");
  const auto height = read_uint(b, i, "height");
  const auto maxval = read_uint(b, i, "maxval");
  if (maxval != 255) throw FormatError("maxval must be 255, got " + std::to_string(maxval), i);
  if (width == 0 || height == 0) throw FormatError("image has a zero dimension", i);
  if (i >= b.size() || !std::isspace(b[i])) throw FormatError("expected whitespace after maxval", i);
  ++i;
  const std::size_t need = width * height * 3;
  if (b.size() - i < need)
    throw FormatError("short pixel data: " + std::to_string(b.size() - i) + " of " +
                          std::to_string(need) + " bytes",
                      b.size());
  return Image(height, width, std::vector<std::uint8_t>(b.begin() + i, b.begin() + i + need));
}

inline std::string serialize_ppm(const Image& img) {
  std::string out = "P6\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
  out.append(img.pixels().begin(), img.pixels().end());
  return out;
}

inline Image load_image(const std::filesystem::path& path) { return parse_ppm(io::read_file(path)); }

inline void save_image(const Image& img, const std::filesystem::path& path) {
  io::write_file_atomic(path, serialize_ppm(img));
}

}  // namespace dfp
