#pragma once

#include <string>
#include <vector>

#include "fermikit/kernel.hpp"
#include "fermikit/quadrature.hpp"

namespace fermikit {

// Finite union of closed intervals, possibly unbounded; stored sorted and merged.
class RegionSet {
 public:
  RegionSet() = default;  // empty set
  explicit RegionSet(std::vector<Interval> intervals);

  static RegionSet real_line();
  static RegionSet below(double s);  // (-inf, s]
  static RegionSet above(double s);  // [s, inf)
  // "lo:hi,lo:hi" with "inf"/"-inf" allowed, e.g. "-inf:1,2:3".
  static RegionSet parse(const std::string& text);

  const std::vector<Interval>& intervals() const { return ivs_; }
  bool contains(double x) const;
  bool is_real_line() const;

  // Parts of [-B, B] outside the set.
  std::vector<Interval> complement_within(double box) const;

  std::string to_string() const;

 private:
  std::vector<Interval> ivs_;
};

// Composite Gauss-Legendre grid over finite intervals, panels no wider than panel_width.
QuadratureGrid region_grid(const std::vector<Interval>& intervals, double panel_width, int order);

}  // namespace fermikit
