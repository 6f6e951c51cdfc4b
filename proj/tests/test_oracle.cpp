#include "doctest.h"

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <map>

#include "fermikit/hermite.hpp"
#include "fermikit/oracle.hpp"
#include "fermikit/parallel.hpp"
#include "fermikit/quadrature.hpp"

using namespace fermikit;

namespace {

double exact_mean_energy(int n, double q) {
  double num = 0.0, den = 0.0;
  auto rec = [&](auto&& self, int depth, int start, int e) -> void {
    if (depth == n) {
      num += e * std::pow(q, e);
      den += std::pow(q, e);
      return;
    }
    for (int k = start; k < 80; ++k) self(self, depth + 1, k + 1, e + k);
  };
  rec(rec, 0, 0, 0);
  return num / den;
}

}  // namespace

TEST_CASE("RNG streams") {
  RngStream r(1234567);
  CHECK(r.next_u64() == 6457827717110365317ULL);
  CHECK(r.next_u64() == 3203168211198807973ULL);
  RngStream a(99), b(99);
  for (int i = 0; i < 100; ++i) CHECK(a.uniform() == b.uniform());
  const RngStream child = RngStream(5).split(3);
  RngStream advanced(5);
  for (int i = 0; i < 10; ++i) advanced.next_u64();
  CHECK(advanced.split(3).seed() == child.seed());
  CHECK(RngStream(5).split(3).seed() != RngStream(5).split(4).seed());
  RngStream u(7);
  for (int i = 0; i < 1000; ++i) {
    const double v = u.uniform();
    CHECK(v > 0.0);
    CHECK(v <= 1.0);
  }
}

TEST_CASE("eigenstate sampler") {
  RngStream rng(42);
  const EigenstateSample ground = sample_eigenstate(ModelParams(4, 1e-9), rng);
  CHECK(ground.ks == std::vector<long>{0, 1, 2, 3});

  const double q = 0.5;
  const long draws = 100000;
  std::map<long, long> counts;
  for (long i = 0; i < draws; ++i) {
    RngStream s = RngStream(1).split(i);
    const long k = sample_eigenstate(ModelParams(1, q), s).ks[0];
    ++counts[std::min(k, 10L)];
  }
  double chi2 = 0.0;
  for (long k = 0; k <= 10; ++k) {
    const double p = k < 10 ? (1 - q) * std::pow(q, k) : std::pow(q, 10);
    const double e = p * draws;
    chi2 += (counts[k] - e) * (counts[k] - e) / e;
  }
  CHECK(chi2 < boost::math::quantile(boost::math::complement(boost::math::chi_squared(10), 0.001)));

  long ground2 = 0;
  for (long i = 0; i < draws; ++i) {
    RngStream s = RngStream(2).split(i);
    const auto st = sample_eigenstate(ModelParams(2, q), s);
    CHECK(st.ks[0] < st.ks[1]);
    ground2 += st.ks == std::vector<long>{0, 1};
  }
  const double p01 = (1 - q) * (1 - q * q);
  CHECK(std::abs(ground2 / double(draws) - p01) < 3 * std::sqrt(p01 * (1 - p01) / draws));

  for (int n = 1; n <= 3; ++n) {
    double sum = 0.0, sum2 = 0.0;
    for (long i = 0; i < draws; ++i) {
      RngStream s = RngStream(3).split(i);
      double e = 0.0;
      for (long k : sample_eigenstate(ModelParams(n, 0.6), s).ks) e += k;
      sum += e;
      sum2 += e * e;
    }
    const double mean = sum / draws, sd = std::sqrt(sum2 / draws - mean * mean);
    CAPTURE(n);
    CHECK(std::abs(mean - exact_mean_energy(n, 0.6)) < 3 * sd / std::sqrt(double(draws)));
  }
}

TEST_CASE("position sampler") {
  const long draws = 20000;
  double sum = 0.0, sum2 = 0.0;
  for (long i = 0; i < draws; ++i) {
    RngStream s = RngStream(10).split(i);
    const double x = sample_positions({{0}}, s)[0];
    sum += x;
    sum2 += x * x;
  }
  CHECK(std::abs(sum / draws) < 3.0 / std::sqrt(double(draws)));
  CHECK(std::abs(sum2 / draws - 1.0) < 0.05);

  // P(max <= 1) for the state (0,1) is the Gram determinant over (-inf, 1].
  const QuadratureGrid g = composite_grid(-14.0, 1.0, 15, 16);
  double g00 = 0, g01 = 0, g11 = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double a = phi(0, g.nodes[i]).to_double(), b = phi(1, g.nodes[i]).to_double();
    g00 += g.weights[i] * a * a;
    g01 += g.weights[i] * a * b;
    g11 += g.weights[i] * b * b;
  }
  const double exact = g00 * g11 - g01 * g01;
  long hits = 0;
  for (long i = 0; i < draws; ++i) {
    RngStream s = RngStream(11).split(i);
    const auto xs = sample_positions({{0, 1}}, s);
    CHECK(xs[0] <= xs[1]);
    hits += xs[1] <= 1.0;
  }
  CHECK(std::abs(hits / double(draws) - exact) < 3 * std::sqrt(exact * (1 - exact) / draws));
  RngStream s(1);
  CHECK_THROWS_AS(sample_positions({{0, 1, 2, 3, 4}}, s), DomainError);
}

TEST_CASE("enumeration and Monte Carlo") {
  const ModelParams p2(2, 0.5);
  const TruncatedValue all = enumerate_gap(RegionSet::real_line(), p2, 60);
  CHECK(std::abs(all.value - 1.0) <= all.truncation_bound + 1e-14);
  CHECK(std::abs(enumerate_gap(RegionSet::below(0.0), ModelParams(1, 0.5), 80).value - 0.5) < 1e-12);

  for (long cutoff : {10L, 20L, 30L}) {
    const TruncatedValue a = enumerate_gap(RegionSet::below(1.0), p2, cutoff);
    const TruncatedValue b = enumerate_gap(RegionSet::below(1.0), p2, cutoff + 10);
    CHECK(std::abs(b.value - a.value) <= a.truncation_bound);
  }
  CHECK(energy_cutoff_for(p2, 1e-9) > 0);
  CHECK(enumerate_gap(RegionSet::below(1.0), p2, energy_cutoff_for(p2, 1e-9)).truncation_bound < 1e-9);
  CHECK_THROWS_AS(enumerate_gap(RegionSet::below(1.0), ModelParams(5, 0.5), 10), DomainError);

  const McEstimate full = mc_gap(RegionSet::real_line(), p2, 500, RngStream(3));
  CHECK(full.estimate == 1.0);
  CHECK(full.stderr_ == 0.0);

  const McEstimate mc = mc_gap(RegionSet::below(1.0), p2, 20000, RngStream(4));
  const double ref = enumerate_gap(RegionSet::below(1.0), p2, 60).value;
  CHECK(std::abs(mc.estimate - ref) < 3 * mc.stderr_);

  const int saved = thread_limit();
  set_thread_limit(1);
  const McEstimate serial = mc_gap(RegionSet::below(2.0), ModelParams(3, 0.5), 3000, RngStream(5));
  set_thread_limit(4);
  const McEstimate threaded = mc_gap(RegionSet::below(2.0), ModelParams(3, 0.5), 3000, RngStream(5));
  set_thread_limit(saved);
  CHECK(serial.estimate == threaded.estimate);
}

TEST_CASE("brute-force C coefficients") {
  CHECK(brute_C({3}, ModelParams(1, 0.4), 50).value == doctest::Approx(std::pow(0.4, 3)).epsilon(1e-14));
  CHECK(brute_C({0, 2}, ModelParams(2, 0.4), 50).value == doctest::Approx(0.16).epsilon(1e-14));
  const TruncatedValue c = brute_C({0, 2}, ModelParams(3, 0.5), 60);
  CHECK(std::abs(c.value - 0.1875) <= c.truncation_bound + 1e-15);
  CHECK_THROWS_AS(brute_C({2, 2}, ModelParams(3, 0.5), 60), DomainError);
}

TEST_CASE("two-time density of one particle") {
  const double q = 0.5, beta = -std::log(q);
  const QuadratureGrid g = composite_grid(-12.0, 12.0, 24, 16);
  for (auto [t1, t2] : {std::pair{0.0, 0.2}, std::pair{0.1, 0.6}}) {
    double total = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
      for (std::size_t j = 0; j < g.size(); ++j)
        total += g.weights[i] * g.weights[j] * joint2_density_n1(g.nodes[i], g.nodes[j], t1, t2, q);
    CHECK(std::abs(total - 1.0) < 1e-8);
    for (double x : {-1.0, 0.5}) {
      double marg = 0.0;
      for (std::size_t j = 0; j < g.size(); ++j) marg += g.weights[j] * joint2_density_n1(x, g.nodes[j], t1, t2, q);
      CHECK(std::abs(marg - joint_density({x}, ModelParams(1, q))) < 1e-8);
    }
  }
  const double d = 0.25;
  CHECK(joint2_density_n1(0.3, -0.9, 0.0, d, q) == doctest::Approx(joint2_density_n1(-0.9, 0.3, 0.0, beta - d, q)).epsilon(1e-12));
  CHECK_THROWS_AS(joint2_density_n1(0.0, 0.0, 0.5, 0.2, q), DomainError);
}
