#pragma once

#include <cstdint>
#include <vector>

#include "fermikit/params.hpp"

namespace fermikit {

// value = mantissa * 2^exponent with |mantissa| in [1,2) or mantissa == 0.
class ScaledReal {
 public:
  ScaledReal() = default;
  ScaledReal(double v);  // NOLINT(google-explicit-constructor)
  ScaledReal(double mantissa, std::int64_t exponent);

  static ScaledReal from_log(double log_abs, int sign = 1);

  double mantissa() const { return m_; }
  std::int64_t exponent() const { return e_; }
  bool is_zero() const { return m_ == 0.0; }

  // Underflows to 0 and overflows to +-inf like ordinary doubles.
  double to_double() const;
  double log_abs() const;
  int sign() const { return (m_ > 0) - (m_ < 0); }

  ScaledReal operator*(const ScaledReal& o) const;
  ScaledReal operator/(const ScaledReal& o) const;
  ScaledReal operator+(const ScaledReal& o) const;
  ScaledReal operator-(const ScaledReal& o) const;
  ScaledReal operator-() const { return ScaledReal(-m_, e_); }

 private:
  void normalize();
  double m_ = 0.0;
  std::int64_t e_ = 0;
};

// phi_k(x) = (sqrt(2 pi) k!)^{-1/2} He_k(x) e^{-x^2/4}.
ScaledReal phi(long k, double x);

// phi_0(x) .. phi_{k_max}(x) from a single recurrence sweep.
std::vector<ScaledReal> phi_column(long k_max, double x);

// Plain-double sweep into out[0..k_max]; tiny values underflow to 0.
void phi_column_double(long k_max, double x, double* out);

// Evaluates columns of the orthonormal basis, switching to exponent tracking
// automatically when |x| > 52 or max_index > 5e4.
class HermiteBasis {
 public:
  enum class Mode { plain_double, exponent_tracked };

  explicit HermiteBasis(long max_index, Mode mode = Mode::plain_double);

  long max_index() const { return kmax_; }
  Mode mode_for(double x) const;
  void column(double x, double* out) const;
  std::vector<double> column(double x) const;

 private:
  long kmax_;
  Mode mode_;
};

// E(x,y;tau,sigma): 0 for tau >= sigma, else the Gaussian closed form of
// sum_k phi_k(x) phi_k(y) e^{k(tau-sigma)}.
double propagator_E(double x, double y, double tau, double sigma);

// Mehler kernel sum_k q^k phi_k(x) phi_k(y).
double mehler_M(double x, double y, double q);

// Joint density of the n positions, closed determinant form.
double joint_density(const std::vector<double>& xs, const ModelParams& p);

}  // namespace fermikit
