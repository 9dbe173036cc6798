#ifndef OEMS_ERRORS_HPP_
#define OEMS_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace oems {

class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Iterative solve failed; carries the last residual seen.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// A linear system or continued fraction hit an exact pole.
class SingularSystem : public std::runtime_error {
 public:
  SingularSystem(const std::string& what, double detuning)
      : std::runtime_error(what), detuning_(detuning) {}
  /// Offending probe detuning [rad/s].
  double detuning() const noexcept { return detuning_; }

 private:
  double detuning_;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace oems

#endif  // OEMS_ERRORS_HPP_
