#include "fermikit/qseries.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace fermikit {

namespace {

void check_q(double q) {
  if (!(q > 0.0 && q < 1.0)) throw DomainError("q must lie in (0,1), got " + std::to_string(q));
}

constexpr double kTailGuard = 1e-17;

}  // namespace

cplx log_qpochhammer(cplx a, double q, long n) {
  check_q(q);
  if (n < 0) throw DomainError("qpochhammer: negative length");
  cplx acc = 0.0;
  cplx term = a;  // a q^k
  for (long k = 0; k < n; ++k) {
    if (n == kInfinite && std::abs(term) < kTailGuard) {
      // Remaining factors are 1 - eps; their logs sum to a geometric tail.
      acc -= term / (1.0 - q);
      break;
    }
    acc += std::log(1.0 - term);
    term *= q;
  }
  return acc;
}

cplx qpochhammer(cplx a, double q, long n) {
  check_q(q);
  if (n < 0) throw DomainError("qpochhammer: negative length");
  cplx prod = 1.0;
  cplx term = a;
  for (long k = 0; k < n; ++k) {
    if (n == kInfinite && std::abs(term) < kTailGuard) break;
    prod *= 1.0 - term;
    term *= q;
  }
  return prod;
}

double qbinom(long n, long m, double q) {
  if (n < 0 || m < 0 || m > n)
    throw DomainError("qbinom: need 0 <= m <= n, got n=" + std::to_string(n) + " m=" + std::to_string(m));
  const double lq = std::log(q);
  double r = 1.0;
  for (long i = 1; i <= m; ++i) {
    // (1 - q^{n-m+i}) / (1 - q^i), with expm1 for accuracy near q = 1.
    r *= std::expm1(double(n - m + i) * lq) / std::expm1(double(i) * lq);
  }
  return r;
}

double log_partition_Z(const ModelParams& p) {
  const double n = p.n;
  return 0.5 * n * n * std::log(p.q) - log_qpochhammer(p.q, p.q, p.n).real();
}

double partition_Z(const ModelParams& p) { return std::exp(log_partition_Z(p)); }

cplx log_prefactor_F(cplx z, const ModelParams& p) {
  if (z == 0.0) throw DomainError("prefactor_F: z = 0");
  const double n = p.n;
  return -0.5 * n * (n - 1) * std::log(p.q) + log_qpochhammer(p.q, p.q, p.n) +
         log_qpochhammer(-z, p.q, kInfinite) - n * std::log(z);
}

cplx prefactor_F(cplx z, const ModelParams& p) { return std::exp(log_prefactor_F(z, p)); }

namespace {

struct ThetaPart {
  cplx sum;
  double largest;  // largest term magnitude, for the cancellation ratio
};

// Sums exp(e(k)) over k in Z where Re e is a concave quadratic; each direction stops past the
// peak once terms fall below 1e-18 of the largest.
template <class Exponent, class Slope>
ThetaPart concave_sum(Exponent e, Slope slope) {
  ThetaPart r{0.0, 0.0};
  double peak = -HUGE_VAL;
  for (int sgn : {1, -1}) {
    for (long j = (sgn == 1 ? 0 : 1);; ++j) {
      const double k = sgn * double(j);
      const cplx le = e(k);
      peak = std::max(peak, le.real());
      r.sum += std::exp(le);
      if (sgn * slope(k) < 0 && le.real() < peak + std::log(1e-18)) break;
    }
  }
  r.largest = std::exp(peak);
  return r;
}

ThetaPart theta_direct(cplx lw, double lq) {
  return concave_sum([&](double k) { return 0.5 * k * (k - 1) * lq + k * lw; },
                     [&](double k) { return (k - 0.5) * lq + lw.real(); });
}

// Poisson-summed form: with q = e^{-b}, w = e^u, c = u/b + 1/2,
// sum_k e^{-b k(k-1)/2 + u k} = e^{b c^2/2} sqrt(2 pi/b) sum_m e^{-2 pi^2 m^2/b + 2 pi i m c}.
ThetaPart theta_dual(cplx lw, double lq) {
  constexpr double kPi = std::numbers::pi;
  const double b = -lq;
  const cplx c = lw / b + 0.5;
  const cplx base = 0.5 * b * c * c + 0.5 * std::log(2 * kPi / b);
  return concave_sum([&](double m) { return base - 2 * kPi * kPi * m * m / b + cplx(0.0, 2 * kPi * m) * c; },
                     [&](double m) { return -4 * kPi * kPi * m / b - 2 * kPi * c.imag(); });
}

}  // namespace

cplx theta_sum(cplx w, double q) {
  check_q(q);
  if (w == 0.0) throw DomainError("theta_sum: w = 0");
  const double lq = std::log(q);
  const cplx lw = std::log(w);
  const ThetaPart direct = theta_direct(lw, lq);
  // The direct sum loses digits when its terms cancel; the dual sum then has few, dominant terms.
  if (direct.largest <= 1e3 * std::abs(direct.sum)) return direct.sum;
  const ThetaPart dual = theta_dual(lw, lq);
  return dual.largest / std::abs(dual.sum) < direct.largest / std::abs(direct.sum) ? dual.sum : direct.sum;
}

cplx prefactor_F_theta(double theta, const ModelParams& p) {
  // (a;q)_n/(a;q)_inf = 1/(a q^n;q)_inf, so F_n = 1/[(q^{n+1};q)_inf (-sqrt(q) e^{-i pi theta} q^n;q)_inf].
  const double qn = std::pow(p.q, p.n);
  const cplx a = -std::sqrt(p.q) * std::polar(1.0, -std::numbers::pi * theta) * qn;
  return std::exp(-log_qpochhammer(p.q * qn, p.q, kInfinite) - log_qpochhammer(a, p.q, kInfinite));
}

cplx theta_weight(double theta, double q) {
  return theta_sum(std::sqrt(q) * std::polar(1.0, std::numbers::pi * theta), q);
}

}  // namespace fermikit
