#pragma once

#include <stdexcept>
#include <string>

namespace telegraph {

class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a matrix or Bloch vector does not describe a physical qubit state.
class NotAState : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The delta kernel only has a meaning in the Markov limit; quadrature cannot use it.
class UnsupportedKernel : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class KernelRangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

class NumericalBlowup : public std::runtime_error {
 public:
  NumericalBlowup(const std::string& what, double time)
      : std::runtime_error(what), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

}  // namespace telegraph
