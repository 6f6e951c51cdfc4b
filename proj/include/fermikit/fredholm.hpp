#pragma once

#include <vector>

#include "fermikit/kernel.hpp"
#include "fermikit/quadrature.hpp"

namespace fermikit {

enum class DetSign { plus, minus };

// Weighted Nystrom matrix sqrt(w_i) K(x_i, x_j) sqrt(w_j), possibly blocked over time slices.
struct DiscretizedOperator {
  Eigen::MatrixXcd matrix;
  std::vector<QuadratureGrid> grids;
};

DiscretizedOperator discretize(const KernelHandle& kernel, const QuadratureGrid& grid);

// log det(A) as log|det| + i arg, via partial-pivot LU.
cplx log_det(const Eigen::MatrixXcd& a);
cplx det_lu(const Eigen::MatrixXcd& a);

// det(I +- A).
cplx det_identity(const Eigen::MatrixXcd& a, DetSign sign);

cplx fredholm_det(const KernelHandle& kernel, const QuadratureGrid& grid, DetSign sign);

// Infinite ends are truncated at max(20, 40/decay_hint) from the finite end.
cplx fredholm_det(const KernelHandle& kernel, Interval domain, int order, DetSign sign);

struct AdaptiveDet {
  cplx value;
  double err_est;
  int order;
};

// det(I - K) on [t, infinity), truncated to [t, t+L] and refined by order doubling.
AdaptiveDet fredholm_det_adaptive(const KernelHandle& kernel, double tail_start, double tol,
                                  int start_order = 24, int max_doublings = 4);

// Blocked operator; kernels[i][j] acts from slice j to slice i.
cplx fredholm_det_block(const std::vector<std::vector<KernelHandle>>& kernels,
                        const std::vector<QuadratureGrid>& grids, DetSign sign);

}  // namespace fermikit
