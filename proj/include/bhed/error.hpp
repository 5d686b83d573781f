#pragma once

#include <stdexcept>
#include <string>

namespace bhed {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (range, shape, consistency).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The Krylov iteration did not reach the requested residual.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double best_residual, int iterations)
      : Error(what), best_residual_(best_residual), iterations_(iterations) {}

  double best_residual() const noexcept { return best_residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double best_residual_;
  int iterations_;
};

}  // namespace bhed
