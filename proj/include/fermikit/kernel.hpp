#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <limits>
#include <vector>

namespace fermikit {

using cplx = std::complex<double>;

struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
};

// Two-point function consumed by the Fredholm engine.
struct KernelHandle {
  std::function<cplx(double, double)> eval;
  Interval domain;
  double decay_hint = 0.0;  // exponential decay rate toward +infinity, 0 if unknown
  bool symmetric = false;
  // Optional block evaluation K(xs[i], ys[j]); falls back to eval entrywise.
  std::function<Eigen::MatrixXcd(const std::vector<double>&, const std::vector<double>&)> assemble;

  cplx operator()(double x, double y) const { return eval(x, y); }
  Eigen::MatrixXcd matrix(const std::vector<double>& xs, const std::vector<double>& ys) const;
};

}  // namespace fermikit
