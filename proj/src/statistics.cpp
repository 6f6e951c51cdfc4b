#include "fermikit/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "fermikit/contour.hpp"
#include "fermikit/errors.hpp"
#include "fermikit/fredholm.hpp"
#include "fermikit/gap_engine.hpp"
#include "fermikit/kernels.hpp"
#include "fermikit/qseries.hpp"
#include "fermikit/specialfn.hpp"

namespace fermikit {

ContourPath resolve_path(const ModelParams& p, ContourPath requested) {
  if (requested == ContourPath::automatic) return p.n <= kMaxZContourN ? ContourPath::z_contour : ContourPath::theta;
  if (requested == ContourPath::z_contour && p.n > kMaxZContourN)
    throw DomainError("z-contour path is limited to n <= 40; use the theta path");
  return requested;
}

ContourValue gap_probability(const RegionSet& a, const ModelParams& p, const EvalOptions& opts) {
  const ContourDriver driver(p, opts);
  const IntervalGram gram(a.complement_within(complement_box(p, opts.series_tol)), driver.kcount());
  return driver.run([&](const std::vector<cplx>& c) { return gram.det_minus(c); }, true);
}

ContourValue rightmost_cdf(double s, const ModelParams& p, const EvalOptions& opts) {
  return gap_probability(RegionSet::below(s), p, opts);
}

ContourValue correlation(const CorrelationRequest& req, EvalOptions opts) {
  if (req.points.empty()) throw DomainError("correlation: at least one point is required");
  opts.tol = req.tolerance;
  const ContourDriver driver(req.params, opts);
  const Eigen::MatrixXd phi = basis_at(driver.kcount(), req.points);
  return driver.run([&](const std::vector<cplx>& c) { return series_det(c, phi); }, false);
}

ContourValue density(double x, const ModelParams& p, const EvalOptions& opts) {
  ContourValue v = correlation({{x}, p, opts.tol}, opts);
  v.value /= p.n;
  v.clamped = v.value;
  v.im_residual /= p.n;
  v.err_est /= p.n;
  return v;
}

cplx gap_integrand_theta(double theta, double s, const ModelParams& p, double fredholm_tol) {
  if (!(theta >= -1.0 && theta <= 1.0)) throw DomainError("gap_integrand_theta: theta must lie in [-1,1]");
  const EdgeCoefficients ec(theta, p);
  const long kcount = ec.cutoff(fredholm_tol);
  std::vector<cplx> c(kcount);
  for (long k = 0; k < kcount; ++k) c[k] = ec(k);
  const IntervalGram gram(RegionSet::below(s).complement_within(complement_box(p, fredholm_tol)), kcount);
  return 0.5 * theta_weight(theta, p.q) * prefactor_F_theta(theta, p) * gram.det_minus(c);
}

double limit_tracy_widom(double t, double tol) {
  return fredholm_det_adaptive(kernel_airy(), t, tol).value.real();
}

double limit_crossover(double t, double c, double tol) {
  return fredholm_det_adaptive(kernel_crossover(c, 0.0), t, tol).value.real();
}

double limit_bulk_density(double x, double c) {
  if (!(c > 0)) throw DomainError("limit_bulk_density: c must be positive");
  const double log_u = std::log(std::expm1(c)) - c * x * x;
  return -polylog_half_neg_log(log_u) / std::sqrt(std::numbers::pi * c);
}

namespace {
double kernel_det(const KernelHandle& k, const std::vector<double>& pts) {
  if (pts.empty()) return 1.0;
  return det_lu(k.matrix(pts, pts)).real();
}
}  // namespace

double limit_corr_sine(const std::vector<double>& points) { return kernel_det(kernel_sine(), points); }

double limit_corr_interp(const std::vector<double>& points, double a) {
  return kernel_det(kernel_interp(a), points);
}

}  // namespace fermikit
