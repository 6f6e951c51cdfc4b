#pragma once

#include <functional>

#include "fermikit/kernel.hpp"
#include "fermikit/params.hpp"

namespace fermikit {

struct ContourSpec {
  cplx center = 0.0;
  double radius = 1.0;
  int nodes = 128;
  double pole_clearance = 1.0;  // min_k |1 - q^k radius|
};

enum class RadiusRegime { generic, edge, bulk };

double pole_clearance(double radius, double q);

// generic: 1; edge: q^{-n+1/2}; bulk: e^c - 1. Radii closer than 1e-8 (relative) to a
// pole circle are pushed out by a factor 1 + 1e-6, at most 8 times.
ContourSpec choose_radius(const ModelParams& p, RadiusRegime regime, double c = 0.0, int nodes = 128);

// (2 pi i)^{-1} times the contour integral of g, trapezoid rule.
cplx circle_integral(const std::function<cplx(cplx)>& g, const ContourSpec& spec);

// Node theta_j of an N-point rule on (-1, 1]; rules for N0 * 2^d nest.
double theta_node(int j, int nodes, int base_nodes);

struct RefineOptions {
  int min_nodes = 128;
  int max_nodes = 1024;
  double tol = 1e-10;          // on |I_N - I_2N| / max(1, |I_2N|)
  bool throw_on_failure = true;
};

struct PeriodicMean {
  cplx value;
  double err_est;
  int nodes;
};

// (1/2) integral over theta in [-1,1] of h, by nested trapezoid doubling. Node
// evaluations run through parallel_for; the sum is taken in node order.
PeriodicMean periodic_mean(const std::function<cplx(double)>& h, const RefineOptions& opts);

// (1/2) Theta(theta) F_n(theta) det(I - P_s K(q^{-n+1/2} e^{i pi theta}) P_s).
cplx gap_integrand_theta(double theta, double s, const ModelParams& p, double fredholm_tol = 1e-14);

}  // namespace fermikit
