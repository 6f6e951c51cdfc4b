#include "fermikit/multitime.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fermikit/contour.hpp"
#include "fermikit/errors.hpp"
#include "fermikit/fredholm.hpp"
#include "fermikit/gap_engine.hpp"
#include "fermikit/hermite.hpp"
#include "fermikit/qseries.hpp"

namespace fermikit {

namespace {

constexpr long kMaxTerms = 6000;

// Terms needed so that the series sum_k c_k e^{k delta} phi_k phi_k is below tol for every
// delta in the list: growth (delta > 0) against q^k |z|, decay (delta < 0) of the E remainder.
long multitime_kcount(const std::vector<double>& deltas, const ModelParams& p, double tol) {
  const double log_r = (0.5 - p.n) * std::log(p.q);
  double need = 0.0;
  for (double d : deltas) {
    if (d > 0) {
      const double log_rho = std::log(p.q) + d;
      if (!(log_rho < 0)) throw DomainError("multitime: series needs q e^{tau_i - tau_j} < 1");
      need = std::max(need, (std::log(tol * -std::expm1(log_rho)) - log_r) / log_rho);
    } else if (d < 0) {
      need = std::max(need, std::log(tol * -std::expm1(d)) / d);
    }
  }
  const long k = static_cast<long>(std::ceil(need)) + 1;
  if (k > kMaxTerms)
    throw DomainError("multitime: times too close to the series convergence boundary (" + std::to_string(k) +
                      " terms needed)");
  return k;
}

std::vector<double> pair_deltas(const std::vector<double>& t) {
  std::vector<double> d;
  for (double a : t)
    for (double b : t) d.push_back(a - b);
  return d;
}

}  // namespace

TimeGrid::TimeGrid(std::vector<double> times_, const ModelParams& p) : times(std::move(times_)), beta(p.beta()) {
  if (times.empty()) throw DomainError("TimeGrid: at least one time is required");
  for (double t : times)
    if (!(t >= 0.0 && t < beta))
      throw DomainError("TimeGrid: time " + std::to_string(t) + " outside [0, beta) with beta = " + std::to_string(beta));
}

bool TimeGrid::distinct() const {
  std::vector<double> t = times;
  std::sort(t.begin(), t.end());
  return std::adjacent_find(t.begin(), t.end()) == t.end();
}

ContourValue multitime_correlation(const std::vector<double>& points, const TimeGrid& tg, const ModelParams& p,
                                   const EvalOptions& opts) {
  const std::size_t m = points.size();
  if (m == 0 || m != tg.times.size()) throw DomainError("multitime_correlation: one time per point is required");
  const long kmin = multitime_kcount(pair_deltas(tg.times), p, opts.series_tol);
  const ContourDriver driver(p, opts, kmin);
  const long kc = driver.kcount();
  const Eigen::MatrixXd phi = basis_at(kc, points);
  // weights(k, i*m+j) = e^{k(tau_i - tau_j)} phi_k(x_i) phi_k(x_j); e(i,j) = E(x_i, x_j; tau_i, tau_j).
  Eigen::MatrixXd weights(kc, m * m);
  Eigen::MatrixXd e(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const double d = tg.times[i] - tg.times[j];
      for (long k = 0; k < kc; ++k) weights(k, i * m + j) = std::exp(k * d) * phi(k, i) * phi(k, j);
      e(i, j) = propagator_E(points[i], points[j], tg.times[i], tg.times[j]);
    }
  return driver.run(
      [&](const std::vector<cplx>& c) {
        Eigen::MatrixXcd mat(m, m);
        for (std::size_t i = 0; i < m; ++i)
          for (std::size_t j = 0; j < m; ++j) {
            cplx s = 0.0;
            for (long k = 0; k < kc; ++k) s += c[k] * weights(k, i * m + j);
            mat(i, j) = s - e(i, j);
          }
        return m == 1 ? mat(0, 0) : det_lu(mat);
      },
      false);
}

ContourValue multitime_gap(const std::vector<RegionSet>& regions, const TimeGrid& tg, const ModelParams& p,
                           const EvalOptions& opts) {
  const std::size_t s = tg.times.size();
  if (regions.size() != s) throw DomainError("multitime_gap: one region per time is required");
  if (!tg.distinct()) throw DomainError("multitime_gap: times must be pairwise distinct");
  const long kmin = multitime_kcount(pair_deltas(tg.times), p, opts.series_tol);
  const ContourDriver driver(p, opts, kmin);
  const long kc = driver.kcount();
  const double box = std::max(complement_box(p, opts.series_tol), 2.0 * std::sqrt(double(kc)) + 10.0);
  std::vector<IntervalGram> grams;
  grams.reserve(s);
  for (const auto& r : regions) grams.emplace_back(r.complement_within(box), kc);
  // In the Hermite basis the blocked operator is D G, D(i,j) = diag_k(c_k e^{k d_ij} - [d_ij < 0] e^{k d_ij}).
  return driver.run(
      [&](const std::vector<cplx>& c) {
        const Eigen::Index n = static_cast<Eigen::Index>(s) * kc;
        Eigen::MatrixXcd mat = Eigen::MatrixXcd::Identity(n, n);
        for (std::size_t i = 0; i < s; ++i)
          for (std::size_t j = 0; j < s; ++j) {
            if (grams[j].empty()) continue;
            const double d = tg.times[i] - tg.times[j];
            const Eigen::MatrixXd& g = grams[j].gram();
            for (long k = 0; k < kc; ++k) {
              const double g_k = std::exp(k * d);
              const cplx coef = (d < 0 ? c[k] - 1.0 : c[k]) * g_k;
              if (coef == 0.0) continue;
              for (long l = 0; l < kc; ++l) mat(i * kc + k, j * kc + l) -= coef * g(k, l);
            }
          }
        return det_lu(mat);
      },
      true);
}

namespace {

void check_js(const std::vector<long>& js, const ModelParams& p) {
  for (std::size_t i = 0; i < js.size(); ++i) {
    if (js[i] < 0) throw DomainError("c_coefficient: indices must be nonnegative");
    if (i > 0 && js[i] <= js[i - 1]) throw DomainError("c_coefficient: indices must be strictly increasing");
  }
  if (static_cast<long>(js.size()) > p.n) throw DomainError("c_coefficient: more indices than particles");
}

// Coefficients of prod_k G_k(z) up to degree d, G_k built from the q-binomial sums g_k(l).
double c_product(const std::vector<long>& js, const ModelParams& p) {
  const long m = static_cast<long>(js.size());
  const long d = p.n - m;
  const double q = p.q;
  std::vector<double> poly(d + 1, 0.0);
  poly[0] = 1.0;
  auto multiply = [&](const std::vector<double>& g) {
    std::vector<double> out(d + 1, 0.0);
    for (long a = 0; a <= d; ++a)
      for (long b = 0; a + b <= d && b < static_cast<long>(g.size()); ++b) out[a + b] += poly[a] * g[b];
    poly = std::move(out);
  };
  long prev = -1;
  for (long k = 0; k <= m; ++k) {
    std::vector<double> g;
    if (k < m) {
      const long width = js[k] - prev - 1;
      for (long l = 0; l <= std::min(width, d); ++l)
        g.push_back(qbinom(width, l, q) * std::pow(q, 0.5 * l * (l - 1) + double(l) * (prev + 1)));
      prev = js[k];
    } else {
      double qq = 1.0;  // (q;q)_l
      for (long l = 0; l <= d; ++l) {
        if (l > 0) qq *= 1.0 - std::pow(q, double(l));
        g.push_back(std::pow(q, 0.5 * l * (l - 1) + double(l) * (prev + 1)) / qq);
      }
    }
    multiply(g);
  }
  double sj = 0.0;
  for (long j : js) sj += double(j);
  return std::pow(q, sj) * poly[d];
}

double c_contour(const std::vector<long>& js, const ModelParams& p) {
  const long d = p.n - static_cast<long>(js.size());
  const double r = 0.5;
  RefineOptions ro;
  ro.min_nodes = 64;
  ro.max_nodes = 4096;
  ro.tol = 1e-15;
  ro.throw_on_failure = false;
  const PeriodicMean mean = periodic_mean(
      [&](double theta) {
        const cplx z = r * std::polar(1.0, std::numbers::pi * theta);
        cplx v = qpochhammer(-z, p.q, kInfinite);
        for (long j : js) v /= 1.0 + std::pow(p.q, double(j)) * z;
        return v * std::pow(z, -double(d));
      },
      ro);
  double sj = 0.0;
  for (long j : js) sj += double(j);
  return std::pow(p.q, sj) * mean.value.real();
}

}  // namespace

double c_coefficient(const std::vector<long>& js, const ModelParams& p, CMethod method) {
  check_js(js, p);
  return method == CMethod::contour ? c_contour(js, p) : c_product(js, p);
}

}  // namespace fermikit
