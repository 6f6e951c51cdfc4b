#pragma once

#include <vector>

#include "fermikit/params.hpp"
#include "fermikit/region.hpp"
#include "fermikit/statistics.hpp"

namespace fermikit {

// Imaginary times tau_i in [0, beta), beta = -log q.
struct TimeGrid {
  std::vector<double> times;
  double beta;

  TimeGrid(std::vector<double> times_, const ModelParams& p);
  bool distinct() const;
};

// Multi-time R^{(m)}_n(x_1..x_m; tau_1..tau_m), one time per point.
ContourValue multitime_correlation(const std::vector<double>& points, const TimeGrid& tg, const ModelParams& p,
                                   const EvalOptions& opts = {});

// Probability that at each time tau_k all particles lie in regions[k]. Times must be distinct.
ContourValue multitime_gap(const std::vector<RegionSet>& regions, const TimeGrid& tg, const ModelParams& p,
                           const EvalOptions& opts = {});

enum class CMethod { contour, product };

// C_J = sum over eigenstates containing J of q^{k_1 + ... + k_n} (not normalized).
double c_coefficient(const std::vector<long>& js, const ModelParams& p, CMethod method = CMethod::contour);

}  // namespace fermikit
