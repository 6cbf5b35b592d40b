#pragma once

#include <stdexcept>
#include <string>

namespace seeds3d {

/// Failure classes surfaced by the library. The C API maps each to a status code.
enum class ErrorKind {
  Domain,         // argument outside the accepted domain
  Configuration,  // parameters incompatible with the input
  Format,         // malformed or unsupported file content
  Io,             // filesystem failures
  Logic,          // caller broke a precondition
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorKind::Domain, what) {}
};

class ConfigurationError : public Error {
 public:
  explicit ConfigurationError(const std::string& what) : Error(ErrorKind::Configuration, what) {}
};

class FormatError : public Error {
 public:
  explicit FormatError(const std::string& what) : Error(ErrorKind::Format, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::Io, what) {}
};

class LogicError : public Error {
 public:
  explicit LogicError(const std::string& what) : Error(ErrorKind::Logic, what) {}
};

}  // namespace seeds3d
