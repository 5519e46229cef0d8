#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace pbox {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite coordinates or times, or physically invalid parameters.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An operation was called on inputs that violate its contract.
/// When the failure concerns normalization, the measured norm is attached.
class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& what, std::optional<double> measured_norm = std::nullopt)
      : Error(what), measured_norm_(measured_norm) {}

  std::optional<double> measured_norm() const { return measured_norm_; }

 private:
  std::optional<double> measured_norm_;
};

/// Sine projection lost more weight than the configured threshold.
class TruncationError : public Error {
 public:
  TruncationError(const std::string& what, double residual) : Error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// Quadrature or search did not reach the requested accuracy.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, std::string key)
      : Error("line " + std::to_string(line) + (key.empty() ? "" : " (key '" + key + "')") + ": " + what),
        line_(line),
        key_(std::move(key)) {}

  int line() const { return line_; }
  const std::string& key() const { return key_; }

 private:
  int line_;
  std::string key_;
};

}  // namespace pbox
