#pragma once

#include <stdexcept>
#include <string>

namespace fermikit {

// Invalid argument or parameter outside the admissible set.
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Requested evaluation point lies outside the validated range.
struct RangeError : DomainError {
  using DomainError::DomainError;
};

// A denominator 1 + q^k z came too close to zero.
struct PoleProximityError : DomainError {
  long k;
  PoleProximityError(const std::string& what, long k_) : DomainError(what), k(k_) {}
};

// An adaptive refinement ran out of budget before meeting its tolerance.
struct ConvergenceError : std::runtime_error {
  double achieved;
  ConvergenceError(const std::string& what, double achieved_)
      : std::runtime_error(what), achieved(achieved_) {}
};

}  // namespace fermikit
