#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dfp {

// Every failure raised by the library carries one of these kinds. The CLI
// maps each kind onto exactly one process exit code.
enum class ErrorKind {
  usage,              // bad arguments or configuration values
  dimension,          // incompatible shapes or channel counts
  precondition,       // input violates a documented precondition
  format,             // malformed file or document
  unsupported_shape,  // well-formed array file with a rank we do not handle
  numerical,          // a solver failed to converge or a factorization broke down
  degenerate,         // input carries no usable signal (e.g. all-zero Gram)
  insufficient_samples,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::usage: return "usage error";
    case ErrorKind::dimension: return "dimension mismatch";
    case ErrorKind::precondition: return "precondition violated";
    case ErrorKind::format: return "format error";
    case ErrorKind::unsupported_shape: return "unsupported shape";
    case ErrorKind::numerical: return "numerical failure";
    case ErrorKind::degenerate: return "degenerate input";
    case ErrorKind::insufficient_samples: return "insufficient samples";
  }
  return "error";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Format errors remember where in the byte stream parsing stopped.
class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::size_t offset)
      : Error(ErrorKind::format, what + " (at byte offset " + std::to_string(offset) + ")"),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace dfp
