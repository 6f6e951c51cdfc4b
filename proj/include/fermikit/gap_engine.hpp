#pragma once

#include <vector>

#include "fermikit/kernel.hpp"
#include "fermikit/params.hpp"
#include "fermikit/region.hpp"
#include "fermikit/statistics.hpp"
#include <functional>

namespace fermikit {

// Half-width of the box [-B, B] used to make complements of regions finite.
double complement_box(const ModelParams& p, double tol);

// G_kl = integral of phi_k phi_l over a finite union of intervals, k, l < kcount. Over the
// complement of A, det(I - K chi_{A^c}) = det(I - diag(c) G) for K = sum_k c_k phi_k phi_k.
class IntervalGram {
 public:
  IntervalGram(const std::vector<Interval>& intervals, long kcount);

  long kcount() const { return kcount_; }
  bool empty() const { return empty_; }
  const Eigen::MatrixXd& gram() const { return g_; }

  // det(I - diag(c) G); c is zero-padded (or must not exceed kcount).
  cplx det_minus(const std::vector<cplx>& c) const;

 private:
  long kcount_;
  bool empty_;
  Eigen::MatrixXd g_;
};

// Basis values phi_k(x_i), k < kcount, as a kcount x m matrix.
Eigen::MatrixXd basis_at(long kcount, const std::vector<double>& xs);

// det(sum_k c_k phi_k(x_i) phi_k(x_j)) from a basis_at matrix.
cplx series_det(const std::vector<cplx>& c, const Eigen::MatrixXd& phi);

// Averages F(z) * det_part(c(z)) over the contour chosen by opts, where c(z) holds the
// coefficients q^k z / (1 + q^k z), k < kcount.
class ContourDriver {
 public:
  using DetPart = std::function<cplx(const std::vector<cplx>&)>;

  // kcount is at least min_kcount and covers the series tolerance.
  ContourDriver(const ModelParams& p, const EvalOptions& opts, long min_kcount = 0);

  ContourPath path() const { return path_; }
  long kcount() const { return kcount_; }
  double radius() const { return radius_; }

  ContourValue run(const DetPart& det_part, bool probability) const;

 private:
  ModelParams p_;
  EvalOptions opts_;
  ContourPath path_;
  double radius_ = 0.0;
  long kcount_ = 0;
};

}  // namespace fermikit
