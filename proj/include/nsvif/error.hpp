#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nsvif {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Bad or missing checker/template parameter.
class ParamError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : Error(message + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Evaluation of a formula under an incomplete assignment.
class EvalError : public Error {
 public:
  using Error::Error;
};

class GatewayError : public Error {
 public:
  using Error::Error;
};

class ReplayMissError : public GatewayError {
 public:
  explicit ReplayMissError(const std::string& fingerprint)
      : GatewayError("replay miss: no cassette entry for fingerprint " + fingerprint),
        fingerprint_(fingerprint) {}

  const std::string& fingerprint() const noexcept { return fingerprint_; }

 private:
  std::string fingerprint_;
};

class TransportError : public GatewayError {
 public:
  TransportError(const std::string& message, int last_status)
      : GatewayError(message), last_status_(last_status) {}

  int last_status() const noexcept { return last_status_; }

 private:
  int last_status_;
};

class FormulationError : public Error {
 public:
  using Error::Error;
};

/// Neither the checker route nor the fallback judge produced a verdict.
class UncheckedConstraintError : public Error {
 public:
  using Error::Error;
};

class JudgeError : public Error {
 public:
  using Error::Error;
};

}  // namespace nsvif
