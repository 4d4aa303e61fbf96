#pragma once

#include <stdexcept>
#include <string>

namespace freevec {

enum class ErrorKind {
  invalid_argument,
  invalid_profile,
  domain,
  edge,
  invalid_time,
  dimension_mismatch,
  decomposition_failed,
  convergence,
  outside_support,
  degenerate_gap,
  empty_window,
  divergent_integral,
  config,
  io,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised by the fixed-point solver; carries the residual of the last iterate.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(ErrorKind::convergence, what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace freevec
