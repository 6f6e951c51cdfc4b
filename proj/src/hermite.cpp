#include "fermikit/hermite.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "fermikit/qseries.hpp"

namespace fermikit {

// ---- ScaledReal ------------------------------------------------------------

ScaledReal::ScaledReal(double v) : m_(v), e_(0) { normalize(); }

ScaledReal::ScaledReal(double mantissa, std::int64_t exponent) : m_(mantissa), e_(exponent) {
  normalize();
}

ScaledReal ScaledReal::from_log(double log_abs, int sign) {
  if (sign == 0 || (std::isinf(log_abs) && log_abs < 0)) return ScaledReal();
  const double e = std::floor(log_abs / std::numbers::ln2);
  const double m = std::exp(log_abs - e * std::numbers::ln2);
  return ScaledReal(sign > 0 ? m : -m, static_cast<std::int64_t>(e));
}

void ScaledReal::normalize() {
  if (m_ == 0.0 || !std::isfinite(m_)) {
    if (m_ == 0.0) e_ = 0;
    return;
  }
  int ex = 0;
  const double fr = std::frexp(m_, &ex);  // |fr| in [0.5, 1)
  m_ = fr * 2.0;
  e_ += ex - 1;
}

double ScaledReal::to_double() const {
  if (m_ == 0.0) return 0.0;
  if (e_ > 2000) return m_ > 0 ? HUGE_VAL : -HUGE_VAL;
  if (e_ < -2000) return 0.0;
  return std::ldexp(m_, static_cast<int>(e_));
}

double ScaledReal::log_abs() const {
  if (m_ == 0.0) return -HUGE_VAL;
  return std::log(std::abs(m_)) + double(e_) * std::numbers::ln2;
}

ScaledReal ScaledReal::operator*(const ScaledReal& o) const { return ScaledReal(m_ * o.m_, e_ + o.e_); }

ScaledReal ScaledReal::operator/(const ScaledReal& o) const {
  if (o.m_ == 0.0) throw DomainError("ScaledReal: division by zero");
  return ScaledReal(m_ / o.m_, e_ - o.e_);
}

ScaledReal ScaledReal::operator+(const ScaledReal& o) const {
  if (m_ == 0.0) return o;
  if (o.m_ == 0.0) return *this;
  const std::int64_t d = e_ - o.e_;
  if (d > 60) return *this;
  if (d < -60) return o;
  if (d >= 0) return ScaledReal(m_ + std::ldexp(o.m_, static_cast<int>(-d)), e_);
  return ScaledReal(std::ldexp(m_, static_cast<int>(d)) + o.m_, o.e_);
}

ScaledReal ScaledReal::operator-(const ScaledReal& o) const { return *this + (-o); }

// ---- Hermite functions -----------------------------------------------------

namespace {

constexpr double kRescaleAbove = 0x1p600;
constexpr int kRescaleShift = 600;

double log_phi0(double x) { return -0.25 * x * x - 0.25 * std::log(2.0 * std::numbers::pi); }

// Recurrence on mantissas sharing one running exponent; emit(k, value, exponent).
template <class Emit>
void sweep_tracked(long k_max, double x, Emit&& emit) {
  const ScaledReal seed = ScaledReal::from_log(log_phi0(x));
  double prev = 0.0;
  double cur = seed.mantissa();
  std::int64_t ex = seed.exponent();
  emit(0, cur, ex);
  for (long k = 0; k < k_max; ++k) {
    const double next = (x * cur - std::sqrt(double(k)) * prev) / std::sqrt(double(k + 1));
    prev = cur;
    cur = next;
    if (std::abs(cur) > kRescaleAbove) {
      cur = std::ldexp(cur, -kRescaleShift);
      prev = std::ldexp(prev, -kRescaleShift);
      ex += kRescaleShift;
    }
    emit(k + 1, cur, ex);
  }
}

}  // namespace

std::vector<ScaledReal> phi_column(long k_max, double x) {
  if (k_max < 0) throw DomainError("phi_column: negative k_max");
  std::vector<ScaledReal> out;
  out.reserve(static_cast<std::size_t>(k_max + 1));
  sweep_tracked(k_max, x, [&](long, double m, std::int64_t e) { out.emplace_back(m, e); });
  return out;
}

ScaledReal phi(long k, double x) {
  if (k < 0) throw DomainError("phi: negative index");
  return phi_column(k, x).back();
}

void phi_column_double(long k_max, double x, double* out) {
  if (k_max < 0) throw DomainError("phi_column_double: negative k_max");
  sweep_tracked(k_max, x, [&](long k, double m, std::int64_t e) {
    out[k] = e < -1100 ? 0.0 : std::ldexp(m, static_cast<int>(e));
  });
}

HermiteBasis::HermiteBasis(long max_index, Mode mode) : kmax_(max_index), mode_(mode) {
  if (max_index < 0) throw DomainError("HermiteBasis: negative max_index");
}

HermiteBasis::Mode HermiteBasis::mode_for(double x) const {
  if (mode_ == Mode::exponent_tracked || std::abs(x) > 52.0 || kmax_ > 50000) return Mode::exponent_tracked;
  return Mode::plain_double;
}

void HermiteBasis::column(double x, double* out) const {
  if (mode_for(x) == Mode::exponent_tracked) {
    phi_column_double(kmax_, x, out);
    return;
  }
  double prev = 0.0;
  double cur = std::exp(log_phi0(x));
  out[0] = cur;
  for (long k = 0; k < kmax_; ++k) {
    const double next = (x * cur - std::sqrt(double(k)) * prev) / std::sqrt(double(k + 1));
    prev = cur;
    cur = next;
    out[k + 1] = cur;
  }
}

std::vector<double> HermiteBasis::column(double x) const {
  std::vector<double> out(static_cast<std::size_t>(kmax_ + 1));
  column(x, out.data());
  return out;
}

// ---- Propagators -----------------------------------------------------------

namespace {

// Gaussian closed form with p = e^{tau - sigma} in (0,1) given log p.
double gaussian_propagator(double x, double y, double log_p) {
  const double p = std::exp(log_p);
  const double one_minus_p2 = -std::expm1(2.0 * log_p);
  // (1+p^2)(x^2+y^2) - 4pxy written without cancellation.
  const double num = 0.5 * (1.0 - p) * (1.0 - p) * (x + y) * (x + y) + 0.5 * (1.0 + p) * (1.0 + p) * (x - y) * (x - y);
  return std::exp(-num / (4.0 * one_minus_p2)) / std::sqrt(2.0 * std::numbers::pi * one_minus_p2);
}

}  // namespace

double propagator_E(double x, double y, double tau, double sigma) {
  if (tau >= sigma) return 0.0;
  return gaussian_propagator(x, y, tau - sigma);
}

double mehler_M(double x, double y, double q) {
  if (!(q > 0.0 && q < 1.0)) throw DomainError("mehler_M: q must lie in (0,1)");
  return gaussian_propagator(x, y, std::log(q));
}

double joint_density(const std::vector<double>& points, const ModelParams& p) {
  if (static_cast<int>(points.size()) != p.n) throw DomainError("joint_density: need exactly n positions");
  // Sorting makes the value bitwise symmetric under permutations.
  std::vector<double> xs = points;
  std::sort(xs.begin(), xs.end());
  const int n = p.n;
  const double q = p.q;
  const double omq2 = 1.0 - q * q;
  double log_pre = 0.5 * n * std::log(q) - log_partition_Z(p) - std::lgamma(n + 1.0) -
                   0.5 * n * std::log(2.0 * std::numbers::pi * omq2);
  for (double x : xs) log_pre -= (1.0 + q * q) * x * x / (2.0 * omq2);

  Eigen::MatrixXd a(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) a(j, k) = q * xs[j] * xs[k] / omq2;
  for (int j = 0; j < n; ++j) {
    const double shift = a.row(j).maxCoeff();
    log_pre += shift;
    for (int k = 0; k < n; ++k) a(j, k) = std::exp(a(j, k) - shift);
  }
  return std::exp(log_pre) * a.determinant();
}

}  // namespace fermikit
