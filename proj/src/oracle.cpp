#include "fermikit/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "fermikit/errors.hpp"
#include "fermikit/fredholm.hpp"
#include "fermikit/gap_engine.hpp"
#include "fermikit/hermite.hpp"
#include "fermikit/parallel.hpp"
#include "fermikit/qseries.hpp"

namespace fermikit {

namespace {

void check_small(const ModelParams& p, const char* who) {
  if (p.n > kOracleMaxN)
    throw DomainError(std::string(who) + ": oracle limited to n <= " + std::to_string(kOracleMaxN));
}

// Visits every k_1 < ... < k_n with sum <= cutoff.
void for_each_state(int n, long cutoff, const std::function<void(const std::vector<long>&, long)>& visit) {
  std::vector<long> ks(n);
  std::function<void(int, long, long)> rec = [&](int i, long lo, long sum) {
    if (i == n) {
      visit(ks, sum);
      return;
    }
    // Remaining levels need at least k + (k+1) + ... beyond this one.
    const long rest = n - i - 1;
    for (long k = lo;; ++k) {
      const long min_sum = sum + k * (rest + 1) + rest * (rest + 1) / 2;
      if (min_sum > cutoff) break;
      ks[i] = k;
      rec(i + 1, k + 1, sum + k);
    }
  };
  rec(0, 0, 0);
}

// log of q^{n/2}/Z_n = (q;q)_n q^{-n(n-1)/2}.
double log_state_norm(const ModelParams& p) {
  return log_qpochhammer(p.q, p.q, p.n).real() - 0.5 * p.n * (p.n - 1) * std::log(p.q);
}

// Boltzmann mass of the states with sum <= cutoff, by counting partitions into at most n parts.
double enumerated_mass(const ModelParams& p, long cutoff) {
  const long base = long(p.n) * (p.n - 1) / 2;
  if (cutoff < base) return 0.0;
  const long e_max = cutoff - base;
  // parts[e] = number of partitions of e into at most n parts.
  std::vector<double> parts(e_max + 1, 0.0);
  parts[0] = 1.0;
  for (int part = 1; part <= p.n; ++part)
    for (long e = part; e <= e_max; ++e) parts[e] += parts[e - part];
  const double lq = std::log(p.q), ln = log_state_norm(p);
  double s = 0.0;
  for (long e = e_max; e >= 0; --e) s += parts[e] * std::exp(ln + double(e + base) * lq);
  return s;
}

double sample_phi_squared(long k, RngStream& rng, std::vector<double>& buf) {
  const double half_width = 2.0 * std::sqrt(double(k) + 1.0) + 9.0;
  buf.resize(k + 1);
  for (;;) {
    const double x = half_width * (2.0 * rng.uniform() - 1.0);
    phi_column_double(k, x, buf.data());
    if (rng.uniform() * 0.471 <= buf[k] * buf[k]) return x;
  }
}

}  // namespace

long energy_cutoff_for(const ModelParams& p, double tol) {
  check_small(p, "energy_cutoff_for");
  for (long cutoff = long(p.n) * (p.n - 1) / 2;; ++cutoff)
    if (1.0 - enumerated_mass(p, cutoff) < tol) return cutoff;
}

TruncatedValue enumerate_gap(const RegionSet& a, const ModelParams& p, long energy_cutoff) {
  check_small(p, "enumerate_gap");
  const int n = p.n;
  const long kmax = std::max(0L, energy_cutoff - long(n - 1) * (n - 2) / 2);
  const double box = 2.0 * std::sqrt(double(kmax) + 1.0) + 12.0;
  std::vector<Interval> inside;
  for (const auto& iv : a.intervals()) {
    const double lo = std::max(iv.lo, -box), hi = std::min(iv.hi, box);
    if (hi > lo) inside.push_back({lo, hi});
  }
  const IntervalGram overlaps(inside, kmax + 1);
  const double lq = std::log(p.q), ln = log_state_norm(p);
  double value = 0.0;
  Eigen::MatrixXcd o(n, n);
  for_each_state(n, energy_cutoff, [&](const std::vector<long>& ks, long sum) {
    const double w = std::exp(ln + double(sum) * lq);
    if (overlaps.empty()) return;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) o(i, j) = overlaps.gram()(ks[i], ks[j]);
    value += w * det_lu(o).real();
  });
  return {value, std::max(0.0, 1.0 - enumerated_mass(p, energy_cutoff))};
}

EigenstateSample sample_eigenstate(const ModelParams& p, RngStream& rng) {
  // k_i = m_i + i - 1 with m_i = d_1 + ... + d_i and d_i geometric with ratio q^{n-i+1}.
  EigenstateSample s;
  s.ks.resize(p.n);
  long m = 0;
  for (int i = 1; i <= p.n; ++i) {
    const double log_ratio = double(p.n - i + 1) * std::log(p.q);
    m += static_cast<long>(std::floor(std::log(rng.uniform()) / log_ratio));
    s.ks[i - 1] = m + i - 1;
  }
  return s;
}

std::vector<double> sample_positions(const EigenstateSample& state, RngStream& rng) {
  const int n = static_cast<int>(state.ks.size());
  if (n == 0 || n > kOracleMaxN) throw DomainError("sample_positions: need 1 <= n <= 4");
  const long kmax = *std::max_element(state.ks.begin(), state.ks.end());
  std::vector<double> buf, x(n);
  Eigen::MatrixXd a(n, n);
  // Envelope: x_j iid from (1/n) sum_i phi_{k_i}^2. Hadamard's inequality bounds det^2 by
  // prod_j sum_i phi_{k_i}(x_j)^2, which makes the acceptance ratio below at most 1.
  for (long attempt = 0; attempt < 10000000; ++attempt) {
    for (int j = 0; j < n; ++j) {
      const int pick = std::min(n - 1, static_cast<int>(rng.uniform() * n));
      x[j] = sample_phi_squared(state.ks[pick], rng, buf);
    }
    double envelope = 1.0;
    buf.resize(kmax + 1);
    for (int j = 0; j < n; ++j) {
      phi_column_double(kmax, x[j], buf.data());
      double col = 0.0;
      for (int i = 0; i < n; ++i) {
        a(i, j) = buf[state.ks[i]];
        col += a(i, j) * a(i, j);
      }
      envelope *= col;
    }
    const double d = a.determinant();
    if (envelope > 0 && rng.uniform() * envelope <= d * d) {
      std::sort(x.begin(), x.end());
      return x;
    }
  }
  throw ConvergenceError("sample_positions: rejection sampler made no progress", 0.0);
}

McEstimate mc_gap(const RegionSet& a, const ModelParams& p, long draws, const RngStream& rng) {
  check_small(p, "mc_gap");
  if (draws <= 0) throw DomainError("mc_gap: draws must be positive");
  constexpr long kChunk = 1024;
  const long chunks = (draws + kChunk - 1) / kChunk;
  std::vector<long> hits(chunks, 0);
  parallel_for(chunks, [&](std::size_t c) {
    const long lo = static_cast<long>(c) * kChunk, hi = std::min(draws, lo + kChunk);
    long h = 0;
    for (long i = lo; i < hi; ++i) {
      RngStream r = rng.split(static_cast<std::uint64_t>(i));
      const auto xs = sample_positions(sample_eigenstate(p, r), r);
      if (std::all_of(xs.begin(), xs.end(), [&](double x) { return a.contains(x); })) ++h;
    }
    hits[c] = h;
  });
  long total = 0;
  for (long h : hits) total += h;
  const double est = double(total) / double(draws);
  return {est, std::sqrt(est * (1.0 - est) / double(draws)), draws};
}

TruncatedValue brute_C(const std::vector<long>& js, const ModelParams& p, long cutoff) {
  check_small(p, "brute_C");
  for (std::size_t i = 1; i < js.size(); ++i)
    if (js[i] <= js[i - 1]) throw DomainError("brute_C: indices must be strictly increasing");
  const double lq = std::log(p.q);
  double value = 0.0, all = 0.0;
  for_each_state(p.n, cutoff, [&](const std::vector<long>& ks, long sum) {
    const double w = std::exp(double(sum) * lq);
    all += w;
    if (std::includes(ks.begin(), ks.end(), js.begin(), js.end())) value += w;
  });
  // Every left-out state weighs at most what is missing from the full sum q^{n(n-1)/2}/(q;q)_n.
  const double full = std::exp(0.5 * p.n * (p.n - 1) * lq - log_qpochhammer(p.q, p.q, p.n).real());
  return {value, std::max(0.0, full - all)};
}

double joint2_density_n1(double x, double y, double tau1, double tau2, double q) {
  const ModelParams p(1, q);
  const double beta = p.beta();
  if (!(tau1 >= 0 && tau1 < tau2 && tau2 < beta))
    throw DomainError("joint2_density_n1: need 0 <= tau1 < tau2 < beta");
  const double d = tau2 - tau1;
  return (1.0 - q) * mehler_M(x, y, std::exp(-d)) * mehler_M(x, y, std::exp(-(beta - d)));
}

}  // namespace fermikit
