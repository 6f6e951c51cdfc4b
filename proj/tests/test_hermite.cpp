#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "fermikit/hermite.hpp"
#include "fermikit/quadrature.hpp"

using namespace fermikit;

namespace {

// Normalized probabilists' Hermite through the monic recurrence, then rescaled.
double phi_monic(long k, double x) {
  double h0 = 1.0, h1 = x;
  if (k == 0) return std::exp(-x * x / 4) / std::sqrt(std::sqrt(2 * std::numbers::pi));
  for (long j = 1; j < k; ++j) {
    const double h2 = x * h1 - j * h0;
    h0 = h1;
    h1 = h2;
  }
  return h1 * std::exp(-x * x / 4 - 0.5 * std::lgamma(k + 1.0)) / std::sqrt(std::sqrt(2 * std::numbers::pi));
}

double series_density_n1(double x, double q) {
  std::vector<double> col(301);
  phi_column_double(300, x, col.data());
  double s = 0.0;
  for (int k = 0; k <= 300; ++k) s += (1 - q) * std::pow(q, k) * col[k] * col[k];
  return s;
}

}  // namespace

TEST_CASE("phi values") {
  CHECK(phi(0, 0.0).to_double() == doctest::Approx(0.6316187).epsilon(1e-7));
  CHECK(phi(1, 0.0).to_double() == 0.0);
  CHECK(phi(7, 1.3).to_double() == doctest::Approx(0.13113160939629673344).epsilon(1e-13));
  CHECK(phi(50, 3.7).to_double() == doctest::Approx(-0.14030976091994912584).epsilon(1e-12));
  CHECK(phi(1000, 10.0).to_double() == doctest::Approx(0.068479970832427262764).epsilon(1e-11));
  CHECK(phi(3000, -60.0).to_double() == doctest::Approx(-0.065659738942976107829).epsilon(1e-11));
  const ScaledReal tiny = phi(0, 80.0);
  CHECK(tiny.to_double() == 0.0);
  CHECK(tiny.log_abs() == doctest::Approx(std::log(8.4973594071816858423) - 696 * std::log(10.0)).epsilon(1e-13));
}

TEST_CASE("phi against monic recurrence") {
  for (long k = 0; k <= 60; ++k)
    for (double x : {-7.5, -1.1, 0.3, 2.0, 9.0}) {
      const double a = phi(k, x).to_double(), b = phi_monic(k, x);
      CHECK(std::abs(a - b) <= 1e-10 * std::abs(b) + 1e-300);
    }
}

TEST_CASE("phi column") {
  const auto col = phi_column(10, 1.3);
  CHECK(col.size() == 11);
  CHECK(col[7].mantissa() == phi(7, 1.3).mantissa());
  CHECK(col[7].exponent() == phi(7, 1.3).exponent());
  CHECK(phi_column(0, 0.4)[0].to_double() == phi(0, 0.4).to_double());

  const double bound = 1.086435 / std::pow(2.0, 0.25) / std::pow(std::numbers::pi, 0.25);
  std::vector<double> buf(2001);
  double worst = 0.0;
  for (double x = -95.0; x <= 95.0; x += 0.37) {
    phi_column_double(2000, x, buf.data());
    for (double v : buf) worst = std::max(worst, std::abs(v));
  }
  CHECK(worst <= bound);

  HermiteBasis basis(100);
  CHECK(basis.mode_for(10.0) == HermiteBasis::Mode::plain_double);
  CHECK(basis.mode_for(60.0) == HermiteBasis::Mode::exponent_tracked);
  const auto far = basis.column(60.0);
  CHECK(far[100] == doctest::Approx(phi(100, 60.0).to_double()).epsilon(1e-12));
}

TEST_CASE("scaled real arithmetic") {
  const ScaledReal a = ScaledReal::from_log(1e6), b = ScaledReal::from_log(-1e6);
  CHECK((a * b).to_double() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK((a / a).to_double() == doctest::Approx(1.0));
  CHECK(((a + a) / a).to_double() == doctest::Approx(2.0));
  CHECK((a - a).is_zero());
  CHECK(std::abs(ScaledReal(-3.0).mantissa()) >= 1.0);
  CHECK(ScaledReal(-3.0).sign() == -1);
}

TEST_CASE("orthonormality") {
  const QuadratureGrid g = build_grid(-40.0, 40.0, 400);
  const int kmax = 30;
  std::vector<std::vector<double>> cols(g.size(), std::vector<double>(kmax + 1));
  for (std::size_t i = 0; i < g.size(); ++i) phi_column_double(kmax, g.nodes[i], cols[i].data());
  double worst = 0.0;
  for (int j = 0; j <= kmax; ++j)
    for (int k = 0; k <= kmax; ++k) {
      double s = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i) s += g.weights[i] * cols[i][j] * cols[i][k];
      worst = std::max(worst, std::abs(s - (j == k ? 1.0 : 0.0)));
    }
  CHECK(worst < 1e-9);
}

TEST_CASE("propagator E and Mehler kernel") {
  CHECK(propagator_E(0.2, 0.7, 1.0, 0.5) == 0.0);
  CHECK(propagator_E(0.2, 0.7, 0.5, 0.5) == 0.0);
  const double q = 0.6;
  std::vector<double> cx(401), cy(401);
  phi_column_double(400, 0.3, cx.data());
  phi_column_double(400, -0.2, cy.data());
  double series = 0.0;
  for (int k = 0; k <= 400; ++k) series += std::pow(q, k) * cx[k] * cy[k];
  CHECK(series == doctest::Approx(0.43994415442323107586).epsilon(1e-13));
  CHECK(std::abs(propagator_E(0.3, -0.2, std::log(q), 0.0) - series) < 1e-12);
  CHECK(std::abs(mehler_M(0.3, -0.2, q) - series) < 1e-12);
  CHECK(propagator_E(1.1, -0.4, 0.1, 0.8) == doctest::Approx(propagator_E(-0.4, 1.1, 0.1, 0.8)));

  const double x = 0.9, y = -1.7;
  CHECK(std::abs(mehler_M(x, y, 1e-14) - std::exp(-(x * x + y * y) / 4) / std::sqrt(2 * std::numbers::pi)) < 1e-13);
  CHECK_THROWS_AS(mehler_M(0.0, 0.0, 1.0), DomainError);

  const QuadratureGrid g = composite_grid(-20.0, 20.0, 20, 24);
  double semi = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) semi += g.weights[i] * mehler_M(x, g.nodes[i], 0.5) * mehler_M(g.nodes[i], y, 0.5);
  CHECK(std::abs(semi - mehler_M(x, y, 0.25)) < 1e-9);

  for (int k = 0; k <= 10; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) s += g.weights[i] * mehler_M(x, g.nodes[i], 0.5) * phi(k, g.nodes[i]).to_double();
    CHECK(std::abs(s - std::pow(0.5, k) * phi(k, x).to_double()) < 1e-9);
  }
}

TEST_CASE("joint density") {
  for (double q : {0.2, 0.5, 0.8})
    for (double x : {-2.0, 0.0, 0.7, 3.1})
      CHECK(std::abs(joint_density({x}, ModelParams(1, q)) - series_density_n1(x, q)) < 1e-10);

  const ModelParams p2(2, 0.5);
  CHECK(joint_density({0.5, -0.5}, p2) == doctest::Approx(0.035625072316167562802).epsilon(1e-11));
  CHECK(joint_density({1.3, -0.7}, p2) == doctest::Approx(0.051489725372939030765).epsilon(1e-11));
  CHECK(joint_density({0.4, 1.9}, p2) == joint_density({1.9, 0.4}, p2));
  CHECK_THROWS_AS(joint_density({0.1}, p2), DomainError);

  for (double q : {0.2, 0.5, 0.8}) {
    const double half = q > 0.7 ? 24.0 : 12.0;
    const QuadratureGrid g = composite_grid(-half, half, q > 0.7 ? 16 : 12, 16);
    double one = 0.0, two = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      one += g.weights[i] * joint_density({g.nodes[i]}, ModelParams(1, q));
      for (std::size_t j = 0; j < g.size(); ++j)
        two += g.weights[i] * g.weights[j] * joint_density({g.nodes[i], g.nodes[j]}, ModelParams(2, q));
    }
    CAPTURE(q);
    CHECK(std::abs(one - 1.0) < 1e-7);
    CHECK(std::abs(two - 1.0) < 1e-7);
  }

  // n = 3 on a coarser product grid.
  const QuadratureGrid g3 = composite_grid(-10.0, 10.0, 5, 14);
  double three = 0.0;
  const ModelParams p3(3, 0.5);
  for (std::size_t i = 0; i < g3.size(); ++i)
    for (std::size_t j = 0; j < g3.size(); ++j)
      for (std::size_t k = 0; k < g3.size(); ++k)
        three += g3.weights[i] * g3.weights[j] * g3.weights[k] * joint_density({g3.nodes[i], g3.nodes[j], g3.nodes[k]}, p3);
  CHECK(std::abs(three - 1.0) < 1e-7);
}
