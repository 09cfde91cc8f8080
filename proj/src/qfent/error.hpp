#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace qfent {

enum class ErrorKind {
  invalid_argument,
  config,
  io,
  range_violation,
  quadrature,
  convergence,
  eigensolver,
  oracle,
};

/// Single exception type for the library; `kind` drives the C API status code
/// and the CLI exit code. `estimate` carries the last residual/error estimate
/// for numerical failures (NaN otherwise).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what, double estimate = std::numeric_limits<double>::quiet_NaN())
      : std::runtime_error(what), kind_(kind), estimate_(estimate) {}

  ErrorKind kind() const noexcept { return kind_; }
  double estimate() const noexcept { return estimate_; }

 private:
  ErrorKind kind_;
  double estimate_;
};

}  // namespace qfent
