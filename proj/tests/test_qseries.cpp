#include "doctest.h"

#include <cmath>
#include <numbers>

#include "fermikit/contour.hpp"
#include "fermikit/qseries.hpp"

using namespace fermikit;

namespace {

// Brute force over k_1 < ... < k_n with every k below kmax.
double eigenstate_sum(int n, double q, int kmax) {
  double total = 0.0;
  auto rec = [&](auto&& self, int depth, int start, double w) -> void {
    if (depth == n) {
      total += w;
      return;
    }
    for (int k = start; k < kmax; ++k) self(self, depth + 1, k + 1, w * std::pow(q, k));
  };
  rec(rec, 0, 0, 1.0);
  return std::pow(q, n / 2.0) * total;
}

}  // namespace

TEST_CASE("qpochhammer finite products") {
  CHECK(qpochhammer(3.7, 0.5, 0) == cplx(1.0));
  CHECK(std::abs(qpochhammer(0.5, 0.5, 2) - 0.375) < 1e-15);
  CHECK_THROWS_AS(qpochhammer(0.5, 1.0, 3), DomainError);
  CHECK_THROWS_AS(qpochhammer(0.5, 0.0, 3), DomainError);
}

TEST_CASE("qpochhammer infinite products against high-precision values") {
  CHECK(std::abs(qpochhammer(0.3, 0.4, kInfinite) - qpochhammer(0.3, 0.4, 200)) < 1e-14);
  CHECK(std::abs(qpochhammer(0.3, 0.4, kInfinite).real() - 0.56783718684558049238) < 1e-14);
  CHECK(std::abs(qpochhammer(-0.7, 0.3, kInfinite).real() - 2.2459974522960131212) < 1e-13);
  CHECK(std::abs(qpochhammer(-2.5, 0.5, kInfinite).real() - 22.616279940494585085) < 1e-12);
  const cplx v = qpochhammer(cplx(0.2, -0.5), 0.6, kInfinite);
  CHECK(std::abs(v - cplx(0.16017213371159730244, 0.73312212249971238591)) < 1e-13);
  const cplx lv = log_qpochhammer(cplx(0.2, -0.5), 0.6, kInfinite);
  CHECK(std::abs(std::exp(lv) - v) < 1e-13);
}

TEST_CASE("qbinom") {
  for (double q : {0.1, 0.5, 0.9}) {
    CHECK(qbinom(7, 0, q) == doctest::Approx(1.0));
    CHECK(qbinom(2, 1, q) == doctest::Approx(1.0 + q).epsilon(1e-14));
  }
  CHECK(qbinom(4, 2, 0.5) == doctest::Approx(2.1875).epsilon(1e-14));
  // q-Pascal: [n,m] = [n-1,m-1] + q^m [n-1,m].
  for (long n = 2; n < 12; ++n)
    for (long m = 1; m < n; ++m)
      CHECK(qbinom(n, m, 0.37) ==
            doctest::Approx(qbinom(n - 1, m - 1, 0.37) + std::pow(0.37, m) * qbinom(n - 1, m, 0.37)).epsilon(1e-13));
  CHECK(qbinom(10, 4, 1.0 - 1e-8) == doctest::Approx(210.0).epsilon(1e-5));
  CHECK_THROWS_AS(qbinom(3, 4, 0.5), DomainError);
}

TEST_CASE("partition function") {
  CHECK(partition_Z(ModelParams(1, 0.5)) == doctest::Approx(std::sqrt(0.5) / 0.5).epsilon(1e-14));
  CHECK(partition_Z(ModelParams(2, 0.5)) == doctest::Approx(0.25 / 0.375).epsilon(1e-14));
  for (int n = 1; n <= 3; ++n)
    for (double q : {0.2, 0.5}) {
      const double brute = eigenstate_sum(n, q, 60);
      CHECK(partition_Z(ModelParams(n, q)) == doctest::Approx(brute).epsilon(1e-10));
      CHECK(std::exp(log_partition_Z(ModelParams(n, q))) == doctest::Approx(brute).epsilon(1e-10));
    }
  CHECK_THROWS_AS(ModelParams(0, 0.5), DomainError);
  CHECK_THROWS_AS(ModelParams(2, 1.0), DomainError);
}

TEST_CASE("prefactor F") {
  const ModelParams p1(1, 0.3);
  const cplx z(0.7, 0.0);
  CHECK(std::abs(prefactor_F(z, p1) - (1.0 - 0.3) * qpochhammer(-z, 0.3, kInfinite) / z) < 1e-14);
  CHECK_THROWS_AS(prefactor_F(0.0, p1), DomainError);

  // Log-space against a naive product at n = 20.
  const ModelParams p20(20, 0.5);
  const cplx w = std::pow(0.5, -19.5) * std::exp(cplx(0.0, 0.9));
  const cplx naive = std::pow(0.5, -190.0) * qpochhammer(0.5, 0.5, 20) * qpochhammer(-w, 0.5, kInfinite) /
                     std::pow(w, 20);
  CHECK(std::abs(prefactor_F(w, p20) / naive - 1.0) < 1e-10);

  // Residue: the contour average of F is 1.
  for (int n : {1, 5, 20, 50})
    for (double q : {0.2, 0.5, 0.8}) {
      const ModelParams p(n, q);
      ContourSpec spec = choose_radius(p, RadiusRegime::edge, 0.0, 512);
      const cplx v = circle_integral([&](cplx zz) { return prefactor_F(zz, p) / zz; }, spec);
      CAPTURE(n);
      CAPTURE(q);
      CHECK(std::abs(v - 1.0) < 1e-9);
    }
}

TEST_CASE("theta sum and triple product") {
  CHECK(std::abs(theta_sum(0.4, 1e-12) - 1.4) < 1e-10);
  for (double q : {0.1, 0.3, 0.6, 0.9})
    for (cplx w : {cplx(0.1), cplx(0.7), cplx(-0.4, 2.0), cplx(3.0, -1.0), cplx(10.0)}) {
      const cplx prod = qpochhammer(-w, q, kInfinite) * qpochhammer(-q / w, q, kInfinite) * qpochhammer(q, q, kInfinite);
      CHECK(std::abs(theta_sum(w, q) - prod) < 1e-11 * std::abs(prod));
      // Reindexing k -> -k shows the sum is invariant under w -> q/w.
      CHECK(std::abs(theta_sum(q / w, q) - theta_sum(w, q)) < 1e-11 * std::abs(prod));
    }
  CHECK_THROWS_AS(theta_sum(0.0, 0.5), DomainError);
}

TEST_CASE("prefactor F_theta") {
  const ModelParams p3(3, 0.5);
  const double sq = std::sqrt(0.5);
  const cplx expect = qpochhammer(0.5, 0.5, 3) / qpochhammer(0.5, 0.5, kInfinite) * qpochhammer(-sq, 0.5, 3) /
                      qpochhammer(-sq, 0.5, kInfinite);
  CHECK(std::abs(prefactor_F_theta(0.0, p3) - expect) < 1e-14);
  for (double th : {0.1, 0.4, 0.77, 0.99}) CHECK(std::abs(prefactor_F_theta(-th, p3) - std::conj(prefactor_F_theta(th, p3))) < 1e-14);
  const ModelParams p200(200, 0.5);
  for (double th : {-0.9, 0.0, 0.5}) CHECK(std::abs(prefactor_F_theta(th, p200) - 1.0) < 1e-12);
}
