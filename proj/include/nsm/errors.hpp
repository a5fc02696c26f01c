#pragma once

#include <stdexcept>
#include <string>

namespace nsm {

/// Parameter outside the mathematical domain of an operation (p < 1, t <= 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A field or measure is not sufficiently decayed at the box boundary, or an
/// atom sits too close to it.
class MarginError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Periodic Biot-Savart requested for a field with nonzero circulation.
class CirculationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Time step exceeds the stability bound of the explicit terms.
class StabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Decay fit inside a window where norms reach the noise floor.
class DegenerateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Diagnostic requires a decomposed-mode run.
class ModeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two runs cannot be compared (grid, snapshot times or centers differ).
class MismatchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Eigenvalue iteration did not converge.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed configuration, measure or field file.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nsm
