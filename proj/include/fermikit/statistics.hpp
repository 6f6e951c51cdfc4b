#pragma once

#include <vector>

#include "fermikit/params.hpp"
#include "fermikit/region.hpp"

namespace fermikit {

enum class ContourPath { automatic, z_contour, theta };

// The z-contour path is limited to n <= kMaxZContourN; automatic picks theta above it.
inline constexpr int kMaxZContourN = 40;

struct EvalOptions {
  double tol = 1e-10;         // contour node-doubling tolerance
  double series_tol = 1e-14;  // truncation of the Hermite series
  ContourPath path = ContourPath::automatic;
  double radius = 0.0;  // z-contour radius; 0 means q^{-n+1/2}
  int min_nodes = 128;
  int max_nodes = 1024;
};

struct ContourValue {
  double value = 0.0;    // raw real part
  double clamped = 0.0;  // value clipped to [0,1] for probabilities, else equal to value
  double im_residual = 0.0;
  double err_est = 0.0;
  int nodes = 0;
  ContourPath path = ContourPath::automatic;
};

ContourPath resolve_path(const ModelParams& p, ContourPath requested);

ContourValue gap_probability(const RegionSet& a, const ModelParams& p, const EvalOptions& opts = {});

// P(max position <= s).
ContourValue rightmost_cdf(double s, const ModelParams& p, const EvalOptions& opts = {});

struct CorrelationRequest {
  std::vector<double> points;
  ModelParams params;
  double tolerance = 1e-10;
};

// R^{(m)}_n at the requested points. Repeated points give 0.
ContourValue correlation(const CorrelationRequest& req, EvalOptions opts = {});

// R^{(1)}_n(x) / n.
ContourValue density(double x, const ModelParams& p, const EvalOptions& opts = {});

double limit_tracy_widom(double t, double tol = 1e-12);
double limit_crossover(double t, double c, double tol = 1e-10);

// -(pi c)^{-1/2} Li_{1/2}(-(e^c - 1) e^{-c x^2}).
double limit_bulk_density(double x, double c);

double limit_corr_sine(const std::vector<double>& points);
double limit_corr_interp(const std::vector<double>& points, double a);

}  // namespace fermikit
