#pragma once

#include <stdexcept>
#include <string>

namespace tvc {

/// Invalid argument or shape mismatch supplied by the caller.
class ParameterError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A bound-level precondition does not hold (e.g. radius below the
/// validity range of a covering estimate).
class PreconditionError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Numerical failure: quadrature did not reach its tolerance, solver broke down.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace tvc
