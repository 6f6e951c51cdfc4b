#pragma once

#include <vector>

#include "fermikit/kernel.hpp"
#include "fermikit/params.hpp"

namespace fermikit {

// c_k(theta) = e^{i pi theta} q^{k-n+1/2} / (1 + e^{i pi theta} q^{k-n+1/2}), i.e. the
// coefficients q^k z/(1+q^k z) at z = q^{-n+1/2} e^{i pi theta}.
class EdgeCoefficients {
 public:
  EdgeCoefficients(double theta, const ModelParams& p);
  double theta() const { return theta_; }
  cplx operator()(long k) const;
  // Smallest K such that |c_k| < tol for all k >= K.
  long cutoff(double tol) const;

 private:
  double theta_;
  ModelParams p_;
  cplx phase_;
};

// Coefficients q^k z / (1 + q^k z) for k = 0..K-1, truncated once the
// remaining terms are bounded by tol. PoleProximityError if some
// |1 + q^k z| < 1e-8 |z|.
std::vector<cplx> finite_coefficients(cplx z, double q, double tol);

// Hermite-series kernel sum_k c_k phi_k(x) phi_k(y) at the points given.
Eigen::MatrixXcd hermite_series_matrix(const std::vector<cplx>& c, const std::vector<double>& xs,
                                       const std::vector<double>& ys);

KernelHandle kernel_finite(cplx z, const ModelParams& p, double tol = 1e-14);

// Same kernel evaluated as Christoffel-Darboux part plus corrections:
// sum_{k<n} phi_k phi_k + sum_{k>=n} c_k phi_k phi_k - sum_{k<n} (1-c_k) phi_k phi_k.
KernelHandle kernel_finite_split(cplx z, const ModelParams& p, double tol = 1e-14);

// n^{-1/6} K(2 sqrt(n) + x n^{-1/6}, 2 sqrt(n) + y n^{-1/6}; q^{-n+1/2} e^{i pi theta}).
KernelHandle kernel_edge_scaled(double theta, const ModelParams& p, Interval t_window = {},
                                double tol = 1e-14);

// sum_k (q^k z/(1+q^k z)) phi_k(x) phi_k(y) e^{k(tau-sigma)} - E(x,y;tau,sigma).
KernelHandle kernel_multitime(cplx z, double tau, double sigma, const ModelParams& p, double tol = 1e-14);

// Coefficients of the multi-time series (without the E part).
std::vector<cplx> multitime_coefficients(cplx z, double tau, double sigma, const ModelParams& p, double tol);

// int_0^inf Ai(x+r) Ai(y+r) dr.
KernelHandle kernel_airy();

// int_R sigma(r) Ai(x-r) Ai(y-r) dr with sigma(r) = e^{i pi theta} e^{-cr} / (1 + e^{i pi theta} e^{-cr}).
KernelHandle kernel_crossover(double c, double theta = 0.0);

// sin(pi(x-y)) / (pi(x-y)).
KernelHandle kernel_sine();

// int_0^inf cos(pi (x-y) t) / (a e^{t^2} + 1) dt.
KernelHandle kernel_interp(double a);

}  // namespace fermikit
