#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gridslam {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text. `byte_offset` points at the first offending byte.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t byte_offset)
      : Error(what), byte_offset_(byte_offset) {}
  std::size_t byte_offset() const noexcept { return byte_offset_; }

 private:
  std::size_t byte_offset_;
};

// Well-formed input that does not match the expected schema.
class SchemaError : public Error {
 public:
  SchemaError(const std::string& what, std::string key)
      : Error(what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

// A value that violates an operation precondition (non-finite numbers,
// non-positive resolution, robot inside a wall, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace gridslam
