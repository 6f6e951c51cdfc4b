#include "fermikit/contour.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "fermikit/errors.hpp"
#include "fermikit/parallel.hpp"

namespace fermikit {

double pole_clearance(double radius, double q) {
  // |1 - q^k r| is smallest for k near log(1/r)/log(q).
  double best = HUGE_VAL;
  const double k0 = std::log(radius) / -std::log(q);
  for (long k = std::max(0L, static_cast<long>(std::floor(k0)) - 1); k <= std::max(0L, static_cast<long>(std::ceil(k0)) + 1);
       ++k)
    best = std::min(best, std::abs(1.0 - std::pow(q, double(k)) * radius));
  return best;
}

ContourSpec choose_radius(const ModelParams& p, RadiusRegime regime, double c, int nodes) {
  if (nodes < 16 || (nodes & (nodes - 1)) != 0) throw DomainError("choose_radius: nodes must be a power of two >= 16");
  ContourSpec spec;
  spec.nodes = nodes;
  switch (regime) {
    case RadiusRegime::generic: spec.radius = 1.0; break;
    case RadiusRegime::edge: spec.radius = std::exp((0.5 - p.n) * std::log(p.q)); break;
    case RadiusRegime::bulk:
      if (!(c > 0)) throw DomainError("choose_radius: bulk regime needs c > 0");
      spec.radius = std::expm1(c);
      break;
  }
  spec.pole_clearance = pole_clearance(spec.radius, p.q);
  for (int i = 0; i < 8 && spec.pole_clearance < 1e-8; ++i) {
    spec.radius *= 1.0 + 1e-6;
    spec.pole_clearance = pole_clearance(spec.radius, p.q);
  }
  return spec;
}

double theta_node(int j, int nodes, int base_nodes) { return -1.0 + 1.0 / base_nodes + 2.0 * j / nodes; }

cplx circle_integral(const std::function<cplx(cplx)>& g, const ContourSpec& spec) {
  const int n = spec.nodes;
  std::vector<cplx> vals(n);
  parallel_for(n, [&](std::size_t j) {
    const cplx dz = spec.radius * std::polar(1.0, std::numbers::pi * theta_node(static_cast<int>(j), n, n));
    const cplx v = g(spec.center + dz) * dz;
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw DomainError("circle_integral: non-finite sample at node " + std::to_string(j));
    vals[j] = v;
  });
  cplx s = 0.0;
  for (const auto& v : vals) s += v;
  return s / double(n);
}

PeriodicMean periodic_mean(const std::function<cplx(double)>& h, const RefineOptions& opts) {
  const int base = opts.min_nodes;
  if (base < 2 || opts.max_nodes < 2 * base) throw DomainError("periodic_mean: need max_nodes >= 2 min_nodes");
  auto evaluate = [&](std::vector<cplx>& vals, int n, int stride, int first) {
    const std::size_t count = (n - first + stride - 1) / stride;
    parallel_for(count, [&](std::size_t i) {
      const int j = first + static_cast<int>(i) * stride;
      const cplx v = h(theta_node(j, n, base));
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw DomainError("contour: non-finite integrand at theta = " + std::to_string(theta_node(j, n, base)));
      vals[j] = v;
    });
  };
  auto mean = [](const std::vector<cplx>& v) {
    cplx s = 0.0;
    for (const auto& x : v) s += x;
    return s / double(v.size());
  };
  int n = base;
  std::vector<cplx> vals(n);
  evaluate(vals, n, 1, 0);
  cplx prev = mean(vals);
  double err = HUGE_VAL;
  while (2 * n <= opts.max_nodes) {
    std::vector<cplx> next(2 * n);
    for (int j = 0; j < n; ++j) next[2 * j] = vals[j];
    n *= 2;
    evaluate(next, n, 2, 1);
    vals = std::move(next);
    const cplx cur = mean(vals);
    err = std::abs(cur - prev);
    prev = cur;
    if (err <= opts.tol * std::max(1.0, std::abs(cur))) return {cur, err, n};
  }
  if (opts.throw_on_failure)
    throw ConvergenceError("contour: node doubling reached " + std::to_string(n) +
                               " nodes with difference " + std::to_string(err),
                           err);
  return {prev, err, n};
}

}  // namespace fermikit
