#pragma once

#include <cmath>
#include <string>

#include "fermikit/errors.hpp"

namespace fermikit {

// Particle number n and Boltzmann parameter q = e^{-1/T}.
struct ModelParams {
  int n;
  double q;

  ModelParams(int n_, double q_) : n(n_), q(q_) {
    if (n < 1) throw DomainError("ModelParams: n must be >= 1, got " + std::to_string(n));
    if (!(q > 0.0 && q < 1.0))
      throw DomainError("ModelParams: q must lie in (0,1), got " + std::to_string(q));
  }

  // Imaginary-time period 1/T, so q = e^{-beta}.
  double beta() const { return -std::log(q); }
};

}  // namespace fermikit
