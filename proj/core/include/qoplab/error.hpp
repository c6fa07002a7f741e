#pragma once

#include <stdexcept>
#include <string>

namespace qoplab {

/// Base exception for every contract violation raised by the library.
/// The message starts with the short reason string callers match on
/// (e.g. "invalid grid").
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by the iterative eigensolver when the residual target is not met
/// within the iteration cap.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace qoplab
