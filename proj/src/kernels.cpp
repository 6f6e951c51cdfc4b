#include "fermikit/kernels.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <memory>
#include <numbers>
#include <string>

#include "fermikit/errors.hpp"
#include "fermikit/hermite.hpp"
#include "fermikit/quadrature.hpp"
#include "fermikit/specialfn.hpp"

namespace fermikit {

Eigen::MatrixXcd KernelHandle::matrix(const std::vector<double>& xs, const std::vector<double>& ys) const {
  if (assemble) return assemble(xs, ys);
  Eigen::MatrixXcd m(xs.size(), ys.size());
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = 0; j < ys.size(); ++j) m(i, j) = eval(xs[i], ys[j]);
  return m;
}

namespace {

// sup_k,x phi_k(x)^2 from the uniform bound |phi_k| <= kappa / (2^{1/4} pi^{1/4}).
constexpr double kPhiSqBound = 0.4709;

constexpr double kPoleGuard = 1e-8;

Eigen::MatrixXd basis_matrix(long kcount, const std::vector<double>& xs) {
  Eigen::MatrixXd phi(kcount, static_cast<Eigen::Index>(xs.size()));
  if (kcount == 0) return phi;
  HermiteBasis basis(kcount - 1);
  for (std::size_t i = 0; i < xs.size(); ++i) basis.column(xs[i], phi.col(static_cast<Eigen::Index>(i)).data());
  return phi;
}

cplx series_at(const std::vector<cplx>& c, double x, double y) {
  if (c.empty()) return 0.0;
  HermiteBasis basis(static_cast<long>(c.size()) - 1);
  const auto px = basis.column(x);
  const auto py = basis.column(y);
  cplx s = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) s += c[k] * (px[k] * py[k]);
  return s;
}

}  // namespace

// ---- coefficient sequences -------------------------------------------------

std::vector<cplx> finite_coefficients(cplx z, double q, double tol) {
  if (!(q > 0.0 && q < 1.0)) throw DomainError("finite_coefficients: q must lie in (0,1)");
  std::vector<cplx> c;
  if (z == 0.0) return c;
  const double lq = std::log(q);
  const cplx lz = std::log(z);
  for (long k = 0; k < 2000000; ++k) {
    const cplx t = std::exp(lz + double(k) * lq);  // q^k z
    const cplx den = 1.0 + t;
    const double at = std::abs(t);
    if (std::abs(den) < kPoleGuard * std::max(1.0, at))
      throw PoleProximityError("kernel coefficient pole: |1 + q^k z| below guard at k = " + std::to_string(k), k);
    c.push_back(t / den);
    if (at < 0.5 && kPhiSqBound * at / (1.0 - at) / (1.0 - q) < tol) break;
  }
  return c;
}

EdgeCoefficients::EdgeCoefficients(double theta, const ModelParams& p)
    : theta_(theta), p_(p), phase_(std::polar(1.0, std::numbers::pi * theta)) {
  if (!(theta >= -1.0 && theta <= 1.0)) throw DomainError("EdgeCoefficients: theta must lie in [-1,1]");
}

cplx EdgeCoefficients::operator()(long k) const {
  const double e = double(k) - p_.n + 0.5;
  const double lq = std::log(p_.q);
  if (e < 0) {
    const cplx w = std::exp(-e * lq) * std::conj(phase_);  // small
    return 1.0 / (1.0 + w);
  }
  const cplx t = std::exp(e * lq) * phase_;
  return t / (1.0 + t);
}

long EdgeCoefficients::cutoff(double tol) const {
  const double lq = std::log(p_.q);
  for (long k = p_.n;; ++k) {
    const double at = std::exp((double(k) - p_.n + 0.5) * lq);
    if (kPhiSqBound * at / (1.0 - at) / (1.0 - p_.q) < tol) return k;
  }
}

std::vector<cplx> multitime_coefficients(cplx z, double tau, double sigma, const ModelParams& p, double tol) {
  const double delta = tau - sigma;
  const double ratio = p.q * std::exp(delta);
  if (!(ratio < 1.0)) throw DomainError("kernel_multitime: series needs q e^{tau - sigma} < 1");
  std::vector<cplx> c;
  if (z == 0.0) return c;
  const double lq = std::log(p.q);
  const cplx lz = std::log(z);
  for (long k = 0; k < 2000000; ++k) {
    const cplx t = std::exp(lz + double(k) * lq);
    const cplx den = 1.0 + t;
    const double at = std::abs(t);
    if (std::abs(den) < kPoleGuard * std::max(1.0, at))
      throw PoleProximityError("multitime coefficient pole at k = " + std::to_string(k), k);
    const double g = std::exp(double(k) * delta);
    c.push_back(t / den * g);
    if (at < 0.5 && kPhiSqBound * at * g / (1.0 - at) / (1.0 - ratio) < tol) break;
  }
  return c;
}

Eigen::MatrixXcd hermite_series_matrix(const std::vector<cplx>& c, const std::vector<double>& xs,
                                       const std::vector<double>& ys) {
  const long kc = static_cast<long>(c.size());
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(xs.size(), ys.size());
  if (kc == 0) return out;
  const Eigen::MatrixXd px = basis_matrix(kc, xs);
  const Eigen::MatrixXd py = basis_matrix(kc, ys);
  Eigen::VectorXd cr(kc), ci(kc);
  for (long k = 0; k < kc; ++k) {
    cr[k] = c[k].real();
    ci[k] = c[k].imag();
  }
  const Eigen::MatrixXd re = px.transpose() * (cr.asDiagonal() * py);
  const Eigen::MatrixXd im = px.transpose() * (ci.asDiagonal() * py);
  out.real() = re;
  out.imag() = im;
  return out;
}

// ---- finite-n kernels ------------------------------------------------------

KernelHandle kernel_finite(cplx z, const ModelParams& p, double tol) {
  auto c = std::make_shared<const std::vector<cplx>>(finite_coefficients(z, p.q, tol));
  KernelHandle h;
  h.symmetric = true;
  h.eval = [c](double x, double y) { return series_at(*c, x, y); };
  h.assemble = [c](const std::vector<double>& xs, const std::vector<double>& ys) {
    return hermite_series_matrix(*c, xs, ys);
  };
  return h;
}

KernelHandle kernel_finite_split(cplx z, const ModelParams& p, double tol) {
  std::vector<cplx> c = finite_coefficients(z, p.q, tol);
  if (static_cast<long>(c.size()) < p.n + 1) c.resize(p.n + 1, 0.0);
  auto cs = std::make_shared<const std::vector<cplx>>(std::move(c));
  const int n = p.n;
  KernelHandle h;
  h.symmetric = true;
  h.eval = [cs, n, tol](double x, double y) {
    const auto& c = *cs;
    HermiteBasis basis(static_cast<long>(c.size()) - 1);
    const auto px = basis.column(x);
    const auto py = basis.column(y);
    cplx k0;
    if (std::abs(x - y) > 1e-3) {
      k0 = std::sqrt(double(n)) * (px[n] * py[n - 1] - px[n - 1] * py[n]) / (x - y);
    } else {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += px[k] * py[k];
      k0 = s;
    }
    cplx k1 = 0.0, k2 = 0.0;
    for (std::size_t k = n; k < c.size(); ++k) k1 += c[k] * (px[k] * py[k]);
    for (int k = n - 1; k >= 0; --k) {
      const cplx d = 1.0 - c[k];
      if (std::abs(d) * kPhiSqBound < 1e-3 * tol) break;
      k2 += d * (px[k] * py[k]);
    }
    return k0 + k1 - k2;
  };
  return h;
}

KernelHandle kernel_edge_scaled(double theta, const ModelParams& p, Interval t_window, double tol) {
  EdgeCoefficients ec(theta, p);
  const long kc = ec.cutoff(tol);
  std::vector<cplx> c(kc);
  for (long k = 0; k < kc; ++k) c[k] = ec(k);
  auto cs = std::make_shared<const std::vector<cplx>>(std::move(c));
  const double center = 2.0 * std::sqrt(double(p.n));
  const double scale = std::pow(double(p.n), -1.0 / 6.0);
  KernelHandle h;
  h.symmetric = true;
  h.domain = t_window;
  h.eval = [cs, center, scale](double x, double y) {
    return scale * series_at(*cs, center + x * scale, center + y * scale);
  };
  h.assemble = [cs, center, scale](const std::vector<double>& xs, const std::vector<double>& ys) {
    std::vector<double> X(xs.size()), Y(ys.size());
    for (std::size_t i = 0; i < xs.size(); ++i) X[i] = center + xs[i] * scale;
    for (std::size_t j = 0; j < ys.size(); ++j) Y[j] = center + ys[j] * scale;
    Eigen::MatrixXcd m = hermite_series_matrix(*cs, X, Y);
    m *= scale;
    return m;
  };
  return h;
}

KernelHandle kernel_multitime(cplx z, double tau, double sigma, const ModelParams& p, double tol) {
  const double beta = p.beta();
  if (!(tau >= 0 && tau < beta && sigma >= 0 && sigma < beta))
    throw DomainError("kernel_multitime: times must lie in [0, beta)");
  auto cs = std::make_shared<const std::vector<cplx>>(multitime_coefficients(z, tau, sigma, p, tol));
  KernelHandle h;
  h.symmetric = (tau == sigma);
  h.eval = [cs, tau, sigma](double x, double y) {
    return series_at(*cs, x, y) - propagator_E(x, y, tau, sigma);
  };
  h.assemble = [cs, tau, sigma](const std::vector<double>& xs, const std::vector<double>& ys) {
    Eigen::MatrixXcd m = hermite_series_matrix(*cs, xs, ys);
    if (tau < sigma)
      for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = 0; j < ys.size(); ++j) m(i, j) -= propagator_E(xs[i], ys[j], tau, sigma);
    return m;
  };
  return h;
}

// ---- limiting kernels ------------------------------------------------------

namespace {

// Ai(u) is below 1e-17 for u > 15, so Airy products are cut there.
constexpr double kAiryNegligible = 15.0;

double airy_or_zero(double u) { return u > kAiryMax ? 0.0 : airy_ai(u); }

Eigen::MatrixXd airy_shift_matrix(const std::vector<double>& xs, const QuadratureGrid& r, double sign) {
  Eigen::MatrixXd a(xs.size(), r.size());
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t l = 0; l < r.size(); ++l) a(i, l) = airy_or_zero(xs[i] + sign * r.nodes[l]);
  return a;
}

QuadratureGrid airy_r_grid(double upper) {
  const int panels = std::max(1, static_cast<int>(std::ceil(upper)));
  return composite_grid(0.0, upper, panels, 20);
}

// Panels for the Fermi-weighted integral: finer around r = 0 where the weight steps.
QuadratureGrid crossover_r_grid(double lo, double hi, double c) {
  std::vector<double> cuts = {lo};
  for (double b : {-10.0 / c, -2.0 / c, 0.0, 2.0 / c, 10.0 / c})
    if (b > lo && b < hi) cuts.push_back(b);
  cuts.push_back(hi);
  std::vector<QuadratureGrid> parts;
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double a = cuts[s], b = cuts[s + 1];
    const bool near_step = a >= -10.0 / c - 1e-12 && b <= 10.0 / c + 1e-12;
    const double width = near_step ? std::min(0.5, 0.5 / c) : 0.5;
    const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / width)));
    parts.push_back(composite_grid(a, b, panels, 16));
  }
  return concat(parts);
}

}  // namespace

KernelHandle kernel_airy() {
  KernelHandle h;
  h.symmetric = true;
  h.decay_hint = 2.0;
  h.eval = [](double x, double y) -> cplx {
    const double upper = kAiryNegligible - std::max(x, y);
    if (upper <= 0) return 0.0;
    const QuadratureGrid r = airy_r_grid(upper);
    double s = 0.0;
    for (std::size_t l = 0; l < r.size(); ++l)
      s += r.weights[l] * airy_or_zero(x + r.nodes[l]) * airy_or_zero(y + r.nodes[l]);
    return s;
  };
  h.assemble = [](const std::vector<double>& xs, const std::vector<double>& ys) {
    double lo = HUGE_VAL;
    for (double v : xs) lo = std::min(lo, v);
    for (double v : ys) lo = std::min(lo, v);
    const double upper = kAiryNegligible - lo;
    if (upper <= 0) return Eigen::MatrixXcd::Zero(xs.size(), ys.size()).eval();
    const QuadratureGrid r = airy_r_grid(upper);
    const Eigen::MatrixXd ax = airy_shift_matrix(xs, r, 1.0);
    const Eigen::MatrixXd ay = airy_shift_matrix(ys, r, 1.0);
    const Eigen::Map<const Eigen::VectorXd> w(r.weights.data(), static_cast<Eigen::Index>(r.size()));
    Eigen::MatrixXcd m = (ax * w.asDiagonal() * ay.transpose()).cast<cplx>();
    return m;
  };
  return h;
}

KernelHandle kernel_crossover(double c, double theta) {
  if (!(c > 0)) throw DomainError("kernel_crossover: c must be positive");
  if (!(theta > -1.0 && theta < 1.0)) throw DomainError("kernel_crossover: theta must lie in (-1,1)");
  const cplx inv_phase = std::polar(1.0, -std::numbers::pi * theta);
  auto weight = [c, inv_phase](double r) -> cplx {
    // 1 / (1 + e^{-i pi theta} e^{c r}), written to avoid overflow for large r.
    if (c * r > 0) {
      const double e = std::exp(-c * r);
      return e / (e + inv_phase);
    }
    return 1.0 / (1.0 + inv_phase * std::exp(c * r));
  };
  const double hi = 40.0 / c;
  KernelHandle h;
  h.symmetric = true;
  h.decay_hint = c;
  h.eval = [weight, hi, c](double x, double y) -> cplx {
    const double lo = std::max(x, y) - kAiryNegligible;
    if (lo >= hi) return 0.0;
    const QuadratureGrid r = crossover_r_grid(lo, hi, c);
    cplx s = 0.0;
    for (std::size_t l = 0; l < r.size(); ++l)
      s += r.weights[l] * weight(r.nodes[l]) * (airy_or_zero(x - r.nodes[l]) * airy_or_zero(y - r.nodes[l]));
    return s;
  };
  h.assemble = [weight, hi, c](const std::vector<double>& xs, const std::vector<double>& ys) {
    double lo = HUGE_VAL;
    for (double v : xs) lo = std::min(lo, v);
    for (double v : ys) lo = std::min(lo, v);
    lo -= kAiryNegligible;
    if (lo >= hi) return Eigen::MatrixXcd::Zero(xs.size(), ys.size()).eval();
    const QuadratureGrid r = crossover_r_grid(lo, hi, c);
    const Eigen::MatrixXd ax = airy_shift_matrix(xs, r, -1.0);
    const Eigen::MatrixXd ay = airy_shift_matrix(ys, r, -1.0);
    Eigen::VectorXd wr(r.size()), wi(r.size());
    for (std::size_t l = 0; l < r.size(); ++l) {
      const cplx w = r.weights[l] * weight(r.nodes[l]);
      wr[l] = w.real();
      wi[l] = w.imag();
    }
    Eigen::MatrixXcd m(xs.size(), ys.size());
    m.real() = ax * wr.asDiagonal() * ay.transpose();
    if (wi.cwiseAbs().maxCoeff() > 0) m.imag() = ax * wi.asDiagonal() * ay.transpose();
    else m.imag().setZero();
    return m;
  };
  return h;
}

KernelHandle kernel_sine() {
  KernelHandle h;
  h.symmetric = true;
  h.eval = [](double x, double y) -> cplx {
    const double d = std::numbers::pi * (x - y);
    if (std::abs(d) < 1e-8) return 1.0 - d * d / 6.0;
    return std::sin(d) / d;
  };
  return h;
}

KernelHandle kernel_interp(double a) {
  if (!(a > 0)) throw DomainError("kernel_interp: a must be positive");
  KernelHandle h;
  h.symmetric = true;
  h.eval = [a](double x, double y) -> cplx {
    const double la = std::log(a);
    const double w = std::numbers::pi * (x - y);
    auto f = [la, w](double t) {
      const double e = t * t + la;  // a e^{t^2} = e^{e}
      const double fermi = e > 0 ? std::exp(-e) / (1.0 + std::exp(-e)) : 1.0 / (1.0 + std::exp(e));
      return std::cos(w * t) * fermi;
    };
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    const double t0 = la < 0 ? std::sqrt(-la) : 0.0;
    const double t_end = std::sqrt(std::max(-la, 0.0) + 45.0);
    double s = 0.0;
    if (t0 > 0) s += GK::integrate(f, 0.0, t0, 20, 1e-14);
    const double t1 = std::min(t_end, t0 + 4.0);
    s += GK::integrate(f, t0, t1, 20, 1e-14);
    if (t_end > t1) s += GK::integrate(f, t1, t_end, 20, 1e-14);
    return s;
  };
  return h;
}

}  // namespace fermikit
