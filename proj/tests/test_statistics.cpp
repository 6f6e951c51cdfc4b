#include "doctest.h"

#include <cmath>
#include <numbers>

#include "fermikit/hermite.hpp"
#include "fermikit/oracle.hpp"
#include "fermikit/quadrature.hpp"
#include "fermikit/specialfn.hpp"
#include "fermikit/statistics.hpp"

using namespace fermikit;

TEST_CASE("regions") {
  const RegionSet r = RegionSet::parse("2:3,-inf:1,0.5:1.5");
  REQUIRE(r.intervals().size() == 2);
  CHECK(r.intervals()[0].hi == 1.5);
  CHECK(r.contains(-100.0));
  CHECK_FALSE(r.contains(1.7));
  CHECK(RegionSet::real_line().is_real_line());
  const auto comp = RegionSet::below(0.0).complement_within(10.0);
  REQUIRE(comp.size() == 1);
  CHECK(comp[0].lo == 0.0);
  CHECK(comp[0].hi == 10.0);
  CHECK(RegionSet::parse(r.to_string()).to_string() == r.to_string());
  CHECK_THROWS_AS(RegionSet::parse("1:0"), DomainError);
  CHECK_THROWS_AS(RegionSet::parse("a:b"), DomainError);
}

TEST_CASE("gap probabilities") {
  CHECK(std::abs(gap_probability(RegionSet::real_line(), ModelParams(3, 0.5)).value - 1.0) < 1e-9);
  CHECK(std::abs(gap_probability(RegionSet::below(0.0), ModelParams(1, 0.5)).value - 0.5) < 1e-9);

  const ModelParams p2(2, 0.5);
  const QuadratureGrid g = composite_grid(-14.0, 1.0, 15, 16);
  double quad = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j) quad += g.weights[i] * g.weights[j] * joint_density({g.nodes[i], g.nodes[j]}, p2);
  const ContourValue v = gap_probability(RegionSet::below(1.0), p2);
  CHECK(std::abs(v.value - quad) < 1e-6);
  CHECK(std::abs(v.value - enumerate_gap(RegionSet::below(1.0), p2, 60).value) < 1e-9);
  CHECK(v.im_residual < 1e-8 * (1 + std::abs(v.value)));

  const ModelParams p3(3, 0.5);
  const RegionSet two = RegionSet::parse("-inf:-0.5,0:2");
  CHECK(std::abs(gap_probability(two, p3).value - enumerate_gap(two, p3, 60).value) < 1e-8);
}

TEST_CASE("rightmost particle") {
  CHECK(std::abs(rightmost_cdf(40.0, ModelParams(5, 0.5)).value - 1.0) < 1e-9);
  CHECK(std::abs(rightmost_cdf(0.0, ModelParams(1, 0.5)).value - 0.5) < 1e-9);
  const ModelParams p3(3, 0.5);
  const TruncatedValue oracle = enumerate_gap(RegionSet::below(2.0), p3, 40);
  CHECK(std::abs(rightmost_cdf(2.0, p3).value - oracle.value) < 1e-7 + oracle.truncation_bound);

  const ModelParams p4(4, 0.5);
  double prev = -1.0;
  for (double s = -2.0; s <= 6.0; s += 1.0) {
    const ContourValue c = rightmost_cdf(s, p4);
    CHECK(c.value >= prev - 1e-12);
    CHECK(std::abs(c.value - gap_probability(RegionSet::below(s), p4).value) < 1e-9);
    CHECK(c.im_residual < 1e-8 * (1 + std::abs(c.value)));
    prev = c.value;
  }

  const ModelParams p(12, 0.7);
  EvalOptions z, th;
  z.path = ContourPath::z_contour;
  th.path = ContourPath::theta;
  for (double s : {4.0, 6.5}) CHECK(std::abs(rightmost_cdf(s, p, z).value - rightmost_cdf(s, p, th).value) < 1e-7);
  CHECK_THROWS_AS(rightmost_cdf(1.0, ModelParams(41, 0.5), z), DomainError);
  CHECK(resolve_path(ModelParams(41, 0.5), ContourPath::automatic) == ContourPath::theta);
  CHECK(resolve_path(ModelParams(40, 0.5), ContourPath::automatic) == ContourPath::z_contour);
}

TEST_CASE("correlations and density") {
  const ModelParams p3(3, 0.5);
  const QuadratureGrid g = composite_grid(-12.0, 12.0, 24, 16);
  double mass = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) mass += g.weights[i] * density(g.nodes[i], p3).value;
  CHECK(std::abs(mass - 1.0) < 1e-6);

  CHECK(std::abs(correlation({{0.4, 0.4}, p3}).value) < 1e-10);
  const ModelParams p2(2, 0.5);
  CHECK(std::abs(correlation({{0.5, -0.5}, p2}).value - 2.0 * joint_density({0.5, -0.5}, p2)) < 1e-7);
  CHECK(std::abs(correlation({{0.5, -0.5}, p2}).value - 2.0 * 0.035625072316167562802) < 1e-7);
  CHECK(std::abs(correlation({{1.1}, p3}).value - 3.0 * density(1.1, p3).value) < 1e-12);

  for (double x : {0.3, 1.2, 2.5}) CHECK(std::abs(density(x, p3).value - density(-x, p3).value) < 1e-9);

  const ModelParams p1(1, 0.4);
  std::vector<double> col(301);
  for (double x : {-1.5, 0.0, 2.2}) {
    phi_column_double(300, x, col.data());
    double s = 0.0;
    for (int k = 0; k <= 300; ++k) s += 0.6 * std::pow(0.4, k) * col[k] * col[k];
    CHECK(std::abs(density(x, p1).value - s) < 1e-9);
  }
}

TEST_CASE("limiting laws") {
  CHECK(std::abs(limit_tracy_widom(0.0) - 0.9693728283552613) < 1e-10);
  CHECK(std::abs(limit_tracy_widom(-3.5) - 0.0209676914927667) < 1e-10);
  CHECK(std::abs(limit_tracy_widom(8.0) - 1.0) < 1e-10);
  double prev = 0.0;
  for (double t : {-4.0, -2.0, 0.0, 2.0}) {
    const double f = limit_tracy_widom(t);
    CHECK(f >= prev);
    prev = f;
  }

  CHECK(std::abs(limit_crossover(0.0, 50.0) - limit_tracy_widom(0.0)) < 2e-3);
  CHECK(std::abs(limit_crossover(10.0, 1.0) - 0.9999860803625634) < 1e-9);
  CHECK(std::abs(limit_crossover(10.0, 2.0) - 1.0) < 1e-8);
  CHECK(std::abs(limit_crossover(0.0, 1.0) - 0.79069010) < 1e-7);
  prev = 0.0;
  for (double t : {-4.0, -2.0, 0.0, 2.0, 4.0}) {
    const double f = limit_crossover(t, 1.0);
    CHECK(f >= prev);
    prev = f;
  }

  CHECK(std::abs(limit_bulk_density(0.0, 200.0) - 2.0 / std::numbers::pi) < 2e-2);
  CHECK(limit_bulk_density(0.7, 3.0) == limit_bulk_density(-0.7, 3.0));
  const QuadratureGrid g = composite_grid(-4.0, 4.0, 16, 16);
  double mass = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) mass += g.weights[i] * limit_bulk_density(g.nodes[i], 4.0);
  CHECK(std::abs(mass - 1.0) < 1e-4);

  CHECK(limit_corr_sine({0.3}) == doctest::Approx(1.0));
  CHECK(std::abs(limit_corr_sine({0.3, 0.3})) < 1e-14);
  CHECK(std::abs(limit_corr_interp({0.2}, 2.0) + std::sqrt(std::numbers::pi) / 2 * polylog_half_neg(0.5)) < 1e-9);
}
