#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mimic {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed trace or snapshot text. `offset` is a byte offset into the input.
class ParseError : public Error {
 public:
  ParseError(std::size_t offset, const std::string& what)
      : Error("parse error at byte " + std::to_string(offset) + ": " + what), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Well-formed input that violates a record or descriptor invariant.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::string invariant, const std::string& detail = {})
      : Error("validation error: " + invariant + (detail.empty() ? "" : " (" + detail + ")")),
        invariant_(std::move(invariant)) {}
  const std::string& invariant() const { return invariant_; }

 private:
  std::string invariant_;
};

class VersionError : public Error {
 public:
  explicit VersionError(long long version)
      : Error("unsupported schema_version " + std::to_string(version)), version_(version) {}
  long long version() const { return version_; }

 private:
  long long version_;
};

/// A scalar payload that cannot be written (NaN, infinity, invalid UTF-8).
class SerializationError : public Error {
 public:
  SerializationError(std::string path, const std::string& what)
      : Error("cannot serialize " + path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

class RestoreError : public Error {
 public:
  using Error::Error;
};

class InjectionError : public Error {
 public:
  using Error::Error;
};

/// Bad paths, flags or configuration values.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace mimic
