#pragma once

#include <vector>

namespace fermikit {

// Nodes and weights on [a,b] (or a concatenation of panels inside it).
struct QuadratureGrid {
  std::vector<double> nodes;
  std::vector<double> weights;
  double a = 0.0;
  double b = 0.0;

  std::size_t size() const { return nodes.size(); }
};

// Gauss-Legendre rule of the given order on [-1,1]; cached, thread safe.
const QuadratureGrid& gauss_legendre_unit(int order);

// Gauss-Legendre rule mapped to [a,b].
QuadratureGrid build_grid(double a, double b, int order);

// [a,b] split into equal panels, each with its own Gauss-Legendre rule.
QuadratureGrid composite_grid(double a, double b, int panels, int order_per_panel);

// Union of grids on disjoint intervals, in the given order.
QuadratureGrid concat(const std::vector<QuadratureGrid>& parts);

}  // namespace fermikit
