#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace edgewatch {

// Base for every error raised by the library. The C API maps each subclass
// onto one ew_status code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Out-of-range configuration or argument.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Malformed input text. `line` is 1-based.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// A tick went backwards. `position` is the 0-based edge index for in-memory
// streams and the 1-based line number for file loads.
class OrderingError : public Error {
 public:
  OrderingError(const std::string& what, std::size_t position)
      : Error(what), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

// Sketches that must share a layout do not.
class StructuralError : public Error {
 public:
  using Error::Error;
};

// Operation not defined for the detector variant.
class UnsupportedVariantError : public Error {
 public:
  using Error::Error;
};

// Evaluation inputs cannot produce a metric (length mismatch, one class).
class EvaluationError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace edgewatch
