#include "fermikit/gap_engine.hpp"

#include <algorithm>
#include <cmath>

#include "fermikit/errors.hpp"
#include "fermikit/fredholm.hpp"
#include "fermikit/contour.hpp"
#include "fermikit/hermite.hpp"
#include "fermikit/kernels.hpp"
#include "fermikit/qseries.hpp"
#include <numbers>
#include <string>

namespace fermikit {

double complement_box(const ModelParams& p, double tol) {
  const double n = p.n;
  const double spec_box = 2.0 * std::sqrt(n) + 15.0 * std::pow(n, -1.0 / 6.0) + 10.0;
  const double k_eff = n + std::log(1e-2 * tol) / std::log(p.q);
  return std::max(spec_box, 2.0 * std::sqrt(k_eff) + 10.0);
}

Eigen::MatrixXd basis_at(long kcount, const std::vector<double>& xs) {
  Eigen::MatrixXd phi(kcount, static_cast<Eigen::Index>(xs.size()));
  if (kcount == 0) return phi;
  HermiteBasis basis(kcount - 1);
  for (std::size_t i = 0; i < xs.size(); ++i) basis.column(xs[i], phi.col(static_cast<Eigen::Index>(i)).data());
  return phi;
}

IntervalGram::IntervalGram(const std::vector<Interval>& intervals, long kcount)
    : kcount_(kcount), empty_(intervals.empty() || kcount == 0) {
  if (empty_) return;
  const int order = 24 + static_cast<int>(std::sqrt(double(kcount)) / 2);
  const QuadratureGrid grid = region_grid(intervals, 0.5, order);
  Eigen::MatrixXd phi = basis_at(kcount, grid.nodes);
  for (std::size_t i = 0; i < grid.size(); ++i) phi.col(static_cast<Eigen::Index>(i)) *= std::sqrt(grid.weights[i]);
  g_ = phi * phi.transpose();
}

cplx IntervalGram::det_minus(const std::vector<cplx>& c) const {
  if (empty_) return 1.0;
  if (static_cast<long>(c.size()) > kcount_) throw DomainError("IntervalGram: more coefficients than basis functions");
  // Rows beyond c.size() carry zero coefficients and contribute identity rows.
  const Eigen::Index k = static_cast<Eigen::Index>(c.size());
  Eigen::MatrixXcd m(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) m(i, j) = -c[i] * g_(i, j);
    m(i, i) += 1.0;
  }
  return det_lu(m);
}

cplx series_det(const std::vector<cplx>& c, const Eigen::MatrixXd& phi) {
  const Eigen::Index m = phi.cols();
  const Eigen::Index k = std::min<Eigen::Index>(phi.rows(), static_cast<Eigen::Index>(c.size()));
  Eigen::MatrixXcd mat = Eigen::MatrixXcd::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = i; j < m; ++j) {
      cplx s = 0.0;
      for (Eigen::Index l = 0; l < k; ++l) s += c[l] * (phi(l, i) * phi(l, j));
      mat(i, j) = s;
      mat(j, i) = s;
    }
  if (m == 1) return mat(0, 0);
  return det_lu(mat);
}

}  // namespace fermikit

namespace fermikit {

namespace {

// Number of coefficients finite_coefficients keeps on the circle |z| = r.
long coefficient_count(double r, double q, double tol) {
  const double lq = std::log(q), lr = std::log(r);
  for (long k = 0;; ++k) {
    const double at = std::exp(lr + double(k) * lq);
    if (at < 0.5 && 0.4709 * at / (1.0 - at) / (1.0 - q) < tol) return k + 1;
  }
}

}  // namespace

ContourDriver::ContourDriver(const ModelParams& p, const EvalOptions& opts, long min_kcount)
    : p_(p), opts_(opts), path_(resolve_path(p, opts.path)) {
  if (path_ == ContourPath::z_contour) {
    radius_ = opts.radius > 0 ? opts.radius : std::exp((0.5 - p.n) * std::log(p.q));
    if (pole_clearance(radius_, p.q) < 1e-8) throw DomainError("contour radius too close to a pole circle");
    kcount_ = coefficient_count(radius_, p.q, opts.series_tol);
  } else {
    kcount_ = EdgeCoefficients(0.0, p).cutoff(opts.series_tol);
  }
  kcount_ = std::max(kcount_, min_kcount);
}

ContourValue ContourDriver::run(const DetPart& det_part, bool probability) const {
  std::function<cplx(double)> h;
  if (path_ == ContourPath::z_contour) {
    h = [&](double theta) {
      const cplx z = radius_ * std::polar(1.0, std::numbers::pi * theta);
      const cplx lz = std::log(z);
      const double lq = std::log(p_.q);
      std::vector<cplx> c(kcount_);
      for (long k = 0; k < kcount_; ++k) {
        const cplx t = std::exp(lz + double(k) * lq);
        const cplx den = 1.0 + t;
        if (std::abs(den) < 1e-8 * std::max(1.0, std::abs(t)))
          throw PoleProximityError("kernel coefficient pole at k = " + std::to_string(k), k);
        c[k] = t / den;
      }
      return std::exp(log_prefactor_F(z, p_)) * det_part(c);
    };
  } else {
    h = [&](double theta) {
      const EdgeCoefficients ec(theta, p_);
      std::vector<cplx> c(kcount_);
      for (long k = 0; k < kcount_; ++k) c[k] = ec(k);
      return theta_weight(theta, p_.q) * prefactor_F_theta(theta, p_) * det_part(c);
    };
  }
  RefineOptions ro;
  ro.min_nodes = opts_.min_nodes;
  ro.max_nodes = opts_.max_nodes;
  ro.tol = opts_.tol;
  const PeriodicMean m = periodic_mean(h, ro);
  ContourValue v;
  v.value = m.value.real();
  v.clamped = probability ? std::clamp(v.value, 0.0, 1.0) : v.value;
  v.im_residual = std::abs(m.value.imag());
  v.err_est = m.err_est;
  v.nodes = m.nodes;
  v.path = path_;
  return v;
}

}  // namespace fermikit
