#include "fermikit/specialfn.hpp"

#include <array>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "fermikit/errors.hpp"
#include "fermikit/quadrature.hpp"

namespace fermikit {

namespace {

constexpr long double kAi0 = 0.355028053887817239260063186004183177L;
constexpr long double kAip0 = -0.258819403792806798405183560189203963L;

constexpr double kAnchorTop = 2.0;
constexpr double kAnchorStep = 0.5;
constexpr double kAnchorBottom = -20.5;

// Taylor step for y'' = x y from (x0, y, y') by h; returns (y(x0+h), y'(x0+h)).
template <class T>
std::array<T, 2> taylor_step(T x0, T y, T yp, T h) {
  T a_km1 = y, a_k = yp;  // a_{k-1}, a_k at k = 1
  T a_km2 = 0;
  T val = y + yp * h, der = yp;
  T hk = h;  // h^k
  T prev_val = 0, prev_der = 0;
  for (int k = 1; k < 200; ++k) {
    // a_{k+1} = (x0 a_{k-1} + a_{k-2}) / ((k+1) k)
    const T a_kp1 = (x0 * a_km1 + a_km2) / (T(k + 1) * T(k));
    const T t_der = T(k + 1) * a_kp1 * hk;
    hk *= h;
    const T t_val = a_kp1 * hk;
    val += t_val;
    der += t_der;
    a_km2 = a_km1;
    a_km1 = a_k;
    a_k = a_kp1;
    // At x0 = 0 every third coefficient vanishes, so two consecutive terms must be negligible.
    const T small_val = T(1e-22) * (std::abs(val) + T(1e-300));
    const T small_der = T(1e-22) * (std::abs(der) + T(1e-300));
    if (k > 6 && std::abs(t_val) + std::abs(prev_val) < small_val && std::abs(t_der) + std::abs(prev_der) < small_der)
      break;
    prev_val = t_val;
    prev_der = t_der;
  }
  return {val, der};
}

struct AnchorTable {
  std::vector<double> x, y, yp;
  AnchorTable() {
    const int count = static_cast<int>(std::lround((kAnchorTop - kAnchorBottom) / kAnchorStep)) + 1;
    x.resize(count);
    y.resize(count);
    yp.resize(count);
    const int zero = static_cast<int>(std::lround(kAnchorTop / kAnchorStep));
    for (int i = 0; i < count; ++i) x[i] = kAnchorTop - i * kAnchorStep;
    y[zero] = double(kAi0);
    yp[zero] = double(kAip0);
    for (int dir : {-1, 1}) {
      long double cy = kAi0, cyp = kAip0, cx = 0.0L;
      const long double h = dir > 0 ? (long double)kAnchorStep : -(long double)kAnchorStep;
      for (int i = zero - dir; i >= 0 && i < count; i -= dir) {
        // Finer internal steps keep the long-double error at the 1e-18 level.
        for (int sub = 0; sub < 4; ++sub) {
          auto r = taylor_step<long double>(cx, cy, cyp, h / 4);
          cy = r[0];
          cyp = r[1];
          cx += h / 4;
        }
        y[i] = double(cy);
        yp[i] = double(cyp);
      }
    }
  }
};

const AnchorTable& anchors() {
  static const AnchorTable table;
  return table;
}

std::array<double, 2> airy_from_anchor(double x) {
  const AnchorTable& t = anchors();
  const int i = static_cast<int>(std::lround((kAnchorTop - x) / kAnchorStep));
  const double x0 = t.x[i];
  return taylor_step<double>(x0, t.y[i], t.yp[i], x - x0);
}

// u_k coefficients of the Airy asymptotic expansions.
double u_coeff(int k) {
  static const std::vector<double> u = [] {
    std::vector<double> c(160);
    c[0] = 1.0;
    for (int j = 1; j < 160; ++j)
      c[j] = c[j - 1] * (6.0 * j - 5) * (6.0 * j - 3) * (6.0 * j - 1) / ((2.0 * j - 1) * 216.0 * j);
    return c;
  }();
  return u[k];
}

double airy_asymptotic_positive(double x, int min_terms) {
  const double zeta = 2.0 / 3.0 * x * std::sqrt(x);
  double sum = 0.0, zk = 1.0, prev = HUGE_VAL;
  for (int k = 0; k < 160; ++k) {
    const double term = u_coeff(k) * zk;
    if (k >= min_terms && (term > prev || term < 1e-17 * std::abs(sum))) break;
    sum += (k % 2 == 0 ? term : -term);
    prev = term;
    zk /= zeta;
  }
  return std::exp(-zeta) / (2.0 * std::sqrt(std::numbers::pi) * std::pow(x, 0.25)) * sum;
}

double airy_asymptotic_negative(double x, int min_terms) {
  const double ax = -x;
  const double zeta = 2.0 / 3.0 * ax * std::sqrt(ax);
  double p = 0.0, qs = 0.0, zk = 1.0, prev = HUGE_VAL;
  for (int k = 0; k < 160; ++k) {
    const double term = u_coeff(k) * zk;
    if (k >= min_terms && (term > prev || term < 1e-17)) break;
    // Even k feed the cosine series, odd k the sine series, signs alternate per pair.
    const double sgn = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
    if (k % 2 == 0) p += sgn * term;
    else qs += sgn * term;
    prev = term;
    zk /= zeta;
  }
  const double ph = zeta - 0.25 * std::numbers::pi;
  return (std::cos(ph) * p + std::sin(ph) * qs) / (std::sqrt(std::numbers::pi) * std::pow(ax, 0.25));
}

// Ai(x) = e^{-zeta}/(pi x^{1/4}) int_0^inf e^{-u^2} cos(u^3 / (3 x^{3/4})) du.
double airy_laplace(double x) {
  static const QuadratureGrid g = composite_grid(0.0, 6.5, 4, 32);
  const double zeta = 2.0 / 3.0 * x * std::sqrt(x);
  const double c = 1.0 / (3.0 * std::pow(x, 0.75));
  double s = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double u = g.nodes[i];
    s += g.weights[i] * std::exp(-u * u) * std::cos(c * u * u * u);
  }
  return std::exp(-zeta) / (std::numbers::pi * std::pow(x, 0.25)) * s;
}

}  // namespace

double airy_ai(double x, const AiryEvalPolicy& policy) {
  if (!(x >= kAiryMin && x <= kAiryMax))
    throw RangeError("airy_ai: x = " + std::to_string(x) + " outside validated range [-200, 200]");
  if (x >= policy.asymptotic_positive) return airy_asymptotic_positive(x, policy.asymptotic_terms);
  if (x > kAnchorTop) return airy_laplace(x);
  if (x >= -policy.asymptotic_negative && x >= kAnchorBottom + 0.25) return airy_from_anchor(x)[0];
  return airy_asymptotic_negative(x, policy.asymptotic_terms);
}

double airy_ai_prime_near(double x) {
  if (!(x <= kAnchorTop && x >= kAnchorBottom + 0.25))
    throw RangeError("airy_ai_prime_near: x outside the anchor table");
  return airy_from_anchor(x)[1];
}

double polylog_half_neg_log(double log_u) {
  // Li_{1/2}(-u) = -(2/sqrt(pi)) int_0^inf ds / (e^{s^2 - log u} + 1).
  auto f = [log_u](double s) {
    const double t = s * s - log_u;
    return t > 0 ? std::exp(-t) / (1.0 + std::exp(-t)) : 1.0 / (1.0 + std::exp(t));
  };
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  const double s0 = log_u > 0 ? std::sqrt(log_u) : 0.0;
  const double s_end = std::sqrt(std::max(log_u, 0.0) + 45.0);
  double total = 0.0;
  if (s0 > 0) total += GK::integrate(f, 0.0, s0, 20, 1e-14);
  // The logistic step at s0 has width ~1/(2 s0); a short panel right after it
  // keeps the adaptive rule away from the flat tail.
  const double s1 = std::min(s_end, s0 + 4.0);
  total += GK::integrate(f, s0, s1, 20, 1e-14);
  if (s_end > s1) total += GK::integrate(f, s1, s_end, 20, 1e-14);
  return -2.0 / std::sqrt(std::numbers::pi) * total;
}

double polylog_half_neg(double u) {
  if (!(u > 0.0) || !std::isfinite(u)) throw DomainError("polylog_half_neg: need u > 0");
  return polylog_half_neg_log(std::log(u));
}

double polylog_half_neg_series(double u) {
  if (!(u > 0.0 && u < 1.0)) throw DomainError("polylog_half_neg_series: need 0 < u < 1");
  double sum = 0.0, pw = 1.0;
  for (int k = 1; k < 100000; ++k) {
    pw *= -u;
    const double term = pw / std::sqrt(double(k));
    sum += term;
    if (std::abs(term) < 1e-18) break;
  }
  return sum;
}

}  // namespace fermikit
