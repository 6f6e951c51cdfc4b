#pragma once

#include <cstdint>
#include <vector>

#include "fermikit/params.hpp"
#include "fermikit/region.hpp"
#include "fermikit/rng.hpp"

namespace fermikit {

// Occupied levels k_1 < ... < k_n.
struct EigenstateSample {
  std::vector<long> ks;
};

struct TruncatedValue {
  double value;
  double truncation_bound;  // Boltzmann mass of the states left out
};

// Oracles enumerate states, so they are limited to small n.
inline constexpr int kOracleMaxN = 4;

// Sum over states with k_1 + ... + k_n <= energy_cutoff of the state weight times
// det(<phi_{k_i}, phi_{k_j}>_A).
TruncatedValue enumerate_gap(const RegionSet& a, const ModelParams& p, long energy_cutoff);

// Smallest cutoff whose left-out Boltzmann mass is below tol.
long energy_cutoff_for(const ModelParams& p, double tol);

EigenstateSample sample_eigenstate(const ModelParams& p, RngStream& rng);

// One draw from |Phi_{k_1..k_n}|^2, sorted increasingly.
std::vector<double> sample_positions(const EigenstateSample& state, RngStream& rng);

struct McEstimate {
  double estimate;
  double stderr_;
  long draws;
};

// Draw i uses rng.split(i), so the estimate does not depend on the thread count.
McEstimate mc_gap(const RegionSet& a, const ModelParams& p, long draws, const RngStream& rng);

// C_J summed directly over states containing J with k_1 + ... + k_n <= cutoff.
TruncatedValue brute_C(const std::vector<long>& js, const ModelParams& p, long cutoff);

// Two-time joint density of the single particle at times tau1 < tau2.
double joint2_density_n1(double x, double y, double tau1, double tau2, double q);

}  // namespace fermikit
