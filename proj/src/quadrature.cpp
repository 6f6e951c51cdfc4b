#include "fermikit/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "fermikit/errors.hpp"

namespace fermikit {

namespace {

QuadratureGrid compute_gauss_legendre(int n) {
  QuadratureGrid g;
  g.a = -1.0;
  g.b = 1.0;
  g.nodes.assign(n, 0.0);
  g.weights.assign(n, 0.0);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // Final derivative at the converged root for the weight.
    double p1 = 1.0, p2 = 0.0;
    for (int j = 1; j <= n; ++j) {
      const double p3 = p2;
      p2 = p1;
      p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
    }
    pp = n * (z * p1 - p2) / (z * z - 1.0);
    const double w = 2.0 / ((1.0 - z * z) * pp * pp);
    g.nodes[i] = -z;
    g.nodes[n - 1 - i] = z;
    g.weights[i] = w;
    g.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) g.nodes[n / 2] = 0.0;
  return g;
}

}  // namespace

const QuadratureGrid& gauss_legendre_unit(int order) {
  if (order < 1) throw DomainError("gauss_legendre_unit: order must be >= 1");
  static std::mutex mu;
  static std::map<int, std::unique_ptr<QuadratureGrid>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[order];
  if (!slot) slot = std::make_unique<QuadratureGrid>(compute_gauss_legendre(order));
  return *slot;
}

QuadratureGrid build_grid(double a, double b, int order) {
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) throw DomainError("build_grid: need finite a < b");
  if (order < 2) throw DomainError("build_grid: order must be >= 2");
  const QuadratureGrid& u = gauss_legendre_unit(order);
  QuadratureGrid g;
  g.a = a;
  g.b = b;
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  g.nodes.resize(order);
  g.weights.resize(order);
  for (int i = 0; i < order; ++i) {
    g.nodes[i] = mid + half * u.nodes[i];
    g.weights[i] = half * u.weights[i];
  }
  return g;
}

QuadratureGrid composite_grid(double a, double b, int panels, int order_per_panel) {
  if (panels < 1) throw DomainError("composite_grid: need at least one panel");
  std::vector<QuadratureGrid> parts;
  parts.reserve(panels);
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    const double hi = (p + 1 == panels) ? b : a + (p + 1) * h;
    parts.push_back(build_grid(lo, hi, order_per_panel));
  }
  return concat(parts);
}

QuadratureGrid concat(const std::vector<QuadratureGrid>& parts) {
  QuadratureGrid g;
  if (parts.empty()) return g;
  g.a = parts.front().a;
  g.b = parts.front().b;
  for (const auto& p : parts) {
    g.nodes.insert(g.nodes.end(), p.nodes.begin(), p.nodes.end());
    g.weights.insert(g.weights.end(), p.weights.begin(), p.weights.end());
    g.a = std::min(g.a, p.a);
    g.b = std::max(g.b, p.b);
  }
  return g;
}

}  // namespace fermikit
