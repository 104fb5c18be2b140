#pragma once

#include <stdexcept>
#include <string>

namespace wbfv {

/// Invalid user input: bad grid, unknown case, inconsistent scheme/model pairing.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A state outside the model's admissible set (e.g. h <= 0 for shallow water).
class StateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Stationary ODE denominator vanished (critical flow, Fr = 1).
class CriticalPointError : public StateError {
 public:
  using StateError::StateError;
};

/// An iterative solve ran out of iterations or produced non-finite values.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, int iterations, double residual)
      : std::runtime_error(what), iterations_(iterations), residual_(residual) {}

  int iterations() const noexcept { return iterations_; }
  double residual() const noexcept { return residual_; }

 private:
  int iterations_;
  double residual_;
};

class SingularMatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace wbfv
