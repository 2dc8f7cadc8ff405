#pragma once

// Reader and writer for version 1.0 .npy array files.
//
// Layout: "\x93NUMPY", version bytes 1 0, little-endian uint16 header length,
// an ASCII Python dict literal padded with spaces and terminated by '\n' so
// that the payload starts on a 64-byte boundary, then the raw little-endian
// payload in C order. Only '<f8' and '<f4' payloads of rank 2 or 3 are
// accepted; '<f4' is widened to double on load. Writes are always '<f8'.

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dfp/error.hpp"
#include "dfp/io.hpp"
#include "dfp/tensor.hpp"

static_assert(std::endian::native == std::endian::little, "npy I/O assumes a little-endian host");

namespace dfp {

/// A raw array as stored on disk: shape plus C-order values.
struct NpyArray {
  std::vector<std::size_t> shape;
  std::vector<double> values;

  std::size_t rank() const noexcept { return shape.size(); }
};

namespace npy_detail {

inline constexpr std::string_view kMagic{"\x93NUMPY", 6};
inline constexpr std::size_t kPreamble = 10;  // magic + version + header length

inline std::size_t skip_ws(std::string_view s, std::size_t i) {
  while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\n')) ++i;
  return i;
}

// Minimal parser for the fixed header dict. `base` is the byte offset of the
// header in the file, used for error positions.
struct Header {
  std::string descr;
  bool fortran_order = false;
  std::vector<std::size_t> shape;
};

inline Header parse_header(std::string_view h, std::size_t base) {
  Header out;
  bool seen_descr = false, seen_order = false, seen_shape = false;
  std::size_t i = skip_ws(h, 0);
  auto fail = [&](const std::string& msg) { throw FormatError(msg, base + i); };
  if (i >= h.size() || h[i] != '{') fail("header is not a dict");
  ++i;
  while (true) {
    i = skip_ws(h, i);
    if (i < h.size() && h[i] == '}') break;
    if (i >= h.size() || (h[i] != '\'' && h[i] != '"')) fail("expected a quoted key");
    const char quote = h[i++];
    const auto key_end = h.find(quote, i);
    if (key_end == std::string_view::npos) fail("unterminated key");
    const std::string key(h.substr(i, key_end - i));
    i = skip_ws(h, key_end + 1);
    if (i >= h.size() || h[i] != ':') fail("expected ':' after key");
    i = skip_ws(h, i + 1);
    if (key == "descr") {
      if (i >= h.size() || (h[i] != '\'' && h[i] != '"')) fail("descr must be a string");
      const char q = h[i++];
      const auto end = h.find(q, i);
      if (end == std::string_view::npos) fail("unterminated descr");
      out.descr = std::string(h.substr(i, end - i));
      i = end + 1;
      seen_descr = true;
    } else if (key == "fortran_order") {
      if (h.substr(i, 4) == "True") {
        out.fortran_order = true;
        i += 4;
      } else if (h.substr(i, 5) == "False") {
        i += 5;
      } else {
        fail("fortran_order must be True or False");
      }
      seen_order = true;
    } else if (key == "shape") {
      if (i >= h.size() || h[i] != '(') fail("shape must be a tuple");
      ++i;
      while (true) {
        i = skip_ws(h, i);
        if (i < h.size() && h[i] == ')') {
          ++i;
          break;
        }
        std::size_t value = 0;
        const std::size_t start = i;
        while (i < h.size() && h[i] >= '0' && h[i] <= '9') value = value * 10 + (h[i++] - '0');
        if (i == start) fail("expected a dimension in shape");
        out.shape.push_back(value);
        i = skip_ws(h, i);
        if (i < h.size() && h[i] == ',') ++i;
      }
      seen_shape = true;
    } else {
      fail("unknown header key '" + key + "'");
    }
    i = skip_ws(h, i);
    if (i < h.size() && h[i] == ',') ++i;
  }
  if (!seen_descr || !seen_order || !seen_shape) fail("header is missing a required key");
  return out;
}

}  // namespace npy_detail

inline NpyArray parse_npy(std::span<const std::uint8_t> bytes) {
  using namespace npy_detail;
  if (bytes.size() < kPreamble) throw FormatError("file too short for an array header", bytes.size());
  if (std::memcmp(bytes.data(), kMagic.data(), kMagic.size()) != 0)
    throw FormatError("bad magic string", 0);
  if (bytes[6] != 1 || bytes[7] != 0)
    throw FormatError("unsupported format version " + std::to_string(bytes[6]) + "." +
                          std::to_string(bytes[7]),
                      6);
  const std::size_t header_len = bytes[8] | (static_cast<std::size_t>(bytes[9]) << 8);
  if (bytes.size() < kPreamble + header_len) throw FormatError("truncated header", bytes.size());
  const std::string_view text(reinterpret_cast<const char*>(bytes.data() + kPreamble), header_len);
  const Header header = parse_header(text, kPreamble);

  std::size_t width = 0;
  if (header.descr == "<f8")
    width = 8;
  else if (header.descr == "<f4")
    width = 4;
  else
    throw FormatError("unsupported dtype '" + header.descr + "'", kPreamble);
  if (header.fortran_order) throw FormatError("fortran-ordered arrays are not supported", kPreamble);
  if (header.shape.size() != 2 && header.shape.size() != 3)
    throw Error(ErrorKind::unsupported_shape,
                "array rank " + std::to_string(header.shape.size()) + " (expected 2 or 3)");

  std::size_t count = 1;
  const std::size_t payload = kPreamble + header_len;
  for (auto d : header.shape) {
    count *= d;
    if (count > bytes.size()) throw FormatError("shape exceeds payload size", bytes.size());
  }
  if (bytes.size() - payload != count * width)
    throw FormatError("payload holds " + std::to_string(bytes.size() - payload) + " bytes, expected " +
                          std::to_string(count * width),
                      bytes.size());

  NpyArray out{header.shape, std::vector<double>(count)};
  const auto* p = bytes.data() + payload;
  for (std::size_t k = 0; k < count; ++k) {
    if (width == 8) {
      std::memcpy(&out.values[k], p + 8 * k, 8);
    } else {
      float f;
      std::memcpy(&f, p + 4 * k, 4);
      out.values[k] = static_cast<double>(f);
    }
  }
  return out;
}

inline std::string serialize_npy(const NpyArray& array) {
  std::string dict = "{'descr': '<f8', 'fortran_order': False, 'shape': (";
  for (std::size_t i = 0; i < array.shape.size(); ++i) {
    dict += std::to_string(array.shape[i]);
    if (array.shape.size() == 1 || i + 1 < array.shape.size()) dict += ",";
    if (i + 1 < array.shape.size()) dict += " ";
  }
  dict += "), }";
  const std::size_t unpadded = npy_detail::kPreamble + dict.size() + 1;
  dict.append((64 - unpadded % 64) % 64, ' ');
  dict += '\n';

  std::string out(npy_detail::kMagic);
  out += '\x01';
  out += '\x00';
  out += static_cast<char>(dict.size() & 0xff);
  out += static_cast<char>((dict.size() >> 8) & 0xff);
  out += dict;
  const auto offset = out.size();
  out.resize(offset + array.values.size() * 8);
  std::memcpy(out.data() + offset, array.values.data(), array.values.size() * 8);
  return out;
}

inline NpyArray load_array(const std::filesystem::path& path) {
  const auto bytes = io::read_file(path);
  return parse_npy(bytes);
}

inline void save_array(const NpyArray& array, const std::filesystem::path& path) {
  io::write_file_atomic(path, serialize_npy(array));
}

// Conversions between raw arrays and typed values. A 3-D array is (C, H, W);
// a 2-D array read as a feature map is (C, N) with H = 1.

inline FeatureMap to_feature(const NpyArray& a) {
  std::size_t c = a.shape.at(0), h = 1, w = 0;
  if (a.rank() == 3) {
    h = a.shape[1];
    w = a.shape[2];
  } else if (a.rank() == 2) {
    w = a.shape[1];
  } else {
    throw Error(ErrorKind::unsupported_shape, "feature arrays must be 2-D or 3-D");
  }
  if (c == 0 || h == 0 || w == 0) throw Error(ErrorKind::format, "feature array has an empty axis");
  RowMatrix m = Eigen::Map<const RowMatrix>(a.values.data(), static_cast<Eigen::Index>(c),
                                            static_cast<Eigen::Index>(h * w));
  return FeatureMap(c, h, w, std::move(m));
}

inline GramMatrix to_gram(const NpyArray& a) {
  if (a.rank() != 2) throw Error(ErrorKind::unsupported_shape, "Gram arrays must be 2-D");
  if (a.shape[0] != a.shape[1] || a.shape[0] == 0)
    throw Error(ErrorKind::dimension, "Gram arrays must be square");
  const auto n = static_cast<Eigen::Index>(a.shape[0]);
  Matrix m = Eigen::Map<const RowMatrix>(a.values.data(), n, n);
  return GramMatrix(std::move(m));
}

inline NpyArray to_npy(const FeatureMap& f) {
  NpyArray a{{f.channels(), f.height(), f.width()}, {}};
  a.values.assign(f.matrix().data(), f.matrix().data() + f.matrix().size());
  return a;
}

/// Any dense matrix, written as a 2-D row-major array.
template <typename Derived>
NpyArray to_npy(const Eigen::MatrixBase<Derived>& m) {
  const RowMatrix rm = m;
  NpyArray a{{static_cast<std::size_t>(rm.rows()), static_cast<std::size_t>(rm.cols())}, {}};
  a.values.assign(rm.data(), rm.data() + rm.size());
  return a;
}

inline NpyArray to_npy(const GramMatrix& g) { return to_npy(g.matrix()); }

inline RowMatrix to_matrix(const NpyArray& a) {
  if (a.rank() != 2) throw Error(ErrorKind::unsupported_shape, "expected a 2-D array");
  return Eigen::Map<const RowMatrix>(a.values.data(), static_cast<Eigen::Index>(a.shape[0]),
                                     static_cast<Eigen::Index>(a.shape[1]));
}

}  // namespace dfp
