#include "fermikit/fredholm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fermikit/errors.hpp"

namespace fermikit {

namespace {

Eigen::VectorXd sqrt_weights(const QuadratureGrid& g) {
  Eigen::VectorXd s(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) s[i] = std::sqrt(g.weights[i]);
  return s;
}

void require_finite(const Eigen::MatrixXcd& m) {
  if (!m.allFinite()) throw DomainError("fredholm: kernel is not finite at some quadrature node");
}

double truncation_length(const KernelHandle& k) {
  if (!(k.decay_hint > 0))
    throw DomainError("fredholm: unbounded domain needs a kernel with a positive decay_hint");
  return std::max(20.0, 40.0 / k.decay_hint);
}

}  // namespace

DiscretizedOperator discretize(const KernelHandle& kernel, const QuadratureGrid& grid) {
  DiscretizedOperator op;
  op.matrix = kernel.matrix(grid.nodes, grid.nodes);
  require_finite(op.matrix);
  const Eigen::VectorXd s = sqrt_weights(grid);
  op.matrix = s.asDiagonal() * op.matrix * s.asDiagonal();
  op.grids = {grid};
  return op;
}

cplx log_det(const Eigen::MatrixXcd& a) {
  if (a.rows() != a.cols()) throw DomainError("log_det: matrix must be square");
  if (a.rows() == 0) return 0.0;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
  const Eigen::MatrixXcd& f = lu.matrixLU();
  cplx s = 0.0;
  for (Eigen::Index i = 0; i < f.rows(); ++i) {
    const cplx d = f(i, i);
    if (d == 0.0) return cplx(-HUGE_VAL, 0.0);
    s += std::log(d);
  }
  if (lu.permutationP().determinant() < 0) s += cplx(0.0, std::numbers::pi);
  return s;
}

cplx det_lu(const Eigen::MatrixXcd& a) {
  const cplx l = log_det(a);
  if (std::isinf(l.real()) && l.real() < 0) return 0.0;
  return std::exp(l);
}

cplx det_identity(const Eigen::MatrixXcd& a, DetSign sign) {
  Eigen::MatrixXcd m = (sign == DetSign::plus) ? a : (-a).eval();
  m.diagonal().array() += 1.0;
  return det_lu(m);
}

cplx fredholm_det(const KernelHandle& kernel, const QuadratureGrid& grid, DetSign sign) {
  if (grid.size() == 0) return 1.0;
  return det_identity(discretize(kernel, grid).matrix, sign);
}

cplx fredholm_det(const KernelHandle& kernel, Interval domain, int order, DetSign sign) {
  double a = domain.lo, b = domain.hi;
  if (std::isinf(a) && std::isinf(b)) throw DomainError("fredholm_det: domain must have a finite end");
  if (std::isinf(b)) b = a + truncation_length(kernel);
  if (std::isinf(a)) a = b - truncation_length(kernel);
  return fredholm_det(kernel, build_grid(a, b, order), sign);
}

AdaptiveDet fredholm_det_adaptive(const KernelHandle& kernel, double tail_start, double tol, int start_order,
                                  int max_doublings) {
  const double b = tail_start + truncation_length(kernel);
  int order = start_order;
  cplx prev = fredholm_det(kernel, build_grid(tail_start, b, order), DetSign::minus);
  double diff = HUGE_VAL;
  for (int d = 0; d < max_doublings; ++d) {
    order *= 2;
    const cplx next = fredholm_det(kernel, build_grid(tail_start, b, order), DetSign::minus);
    diff = std::abs(next - prev);
    prev = next;
    if (diff < tol) return {next, diff, order};
  }
  throw ConvergenceError("fredholm_det_adaptive: no convergence at order " + std::to_string(order) +
                             ", last difference " + std::to_string(diff),
                         diff);
}

cplx fredholm_det_block(const std::vector<std::vector<KernelHandle>>& kernels,
                        const std::vector<QuadratureGrid>& grids, DetSign sign) {
  const std::size_t s = grids.size();
  if (s == 0 || kernels.size() != s) throw DomainError("fredholm_det_block: dimension mismatch");
  std::vector<Eigen::Index> offset(s + 1, 0);
  for (std::size_t i = 0; i < s; ++i) {
    if (kernels[i].size() != s) throw DomainError("fredholm_det_block: dimension mismatch");
    offset[i + 1] = offset[i] + static_cast<Eigen::Index>(grids[i].size());
  }
  if (offset[s] == 0) return 1.0;
  Eigen::MatrixXcd m(offset[s], offset[s]);
  for (std::size_t i = 0; i < s; ++i) {
    const Eigen::VectorXd si = sqrt_weights(grids[i]);
    for (std::size_t j = 0; j < s; ++j) {
      if (grids[i].size() == 0 || grids[j].size() == 0) continue;
      Eigen::MatrixXcd blk = kernels[i][j].matrix(grids[i].nodes, grids[j].nodes);
      require_finite(blk);
      const Eigen::VectorXd sj = sqrt_weights(grids[j]);
      m.block(offset[i], offset[j], blk.rows(), blk.cols()) = si.asDiagonal() * blk * sj.asDiagonal();
    }
  }
  return det_identity(m, sign);
}

}  // namespace fermikit
