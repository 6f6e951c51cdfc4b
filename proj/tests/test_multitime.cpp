#include "doctest.h"

#include <cmath>

#include "fermikit/multitime.hpp"
#include "fermikit/oracle.hpp"
#include "fermikit/quadrature.hpp"

using namespace fermikit;

TEST_CASE("time grids") {
  const ModelParams p(2, 0.5);
  CHECK(TimeGrid({0.0, 0.3}, p).distinct());
  CHECK_FALSE(TimeGrid({0.3, 0.3}, p).distinct());
  CHECK_THROWS_AS(TimeGrid({0.0, p.beta()}, p), DomainError);
  CHECK_THROWS_AS(TimeGrid({-0.1}, p), DomainError);
}

TEST_CASE("multi-time correlations") {
  const ModelParams p3(3, 0.5);
  const std::vector<double> pts{0.4, -0.8};
  const double equal = multitime_correlation(pts, TimeGrid({0.25, 0.25}, p3), p3).value;
  CHECK(std::abs(equal - correlation({pts, p3}).value) < 1e-9);

  for (double tau : {0.0, 0.3, 0.6})
    CHECK(std::abs(multitime_correlation({1.1}, TimeGrid({tau}, p3), p3).value - correlation({{1.1}, p3}).value) < 1e-9);

  const double q = 0.5;
  const ModelParams p1(1, q);
  for (auto [x, y] : {std::pair{0.3, -0.5}, std::pair{1.2, 1.0}}) {
    const double v = multitime_correlation({x, y}, TimeGrid({0.1, 0.45}, p1), p1).value;
    CHECK(std::abs(v - joint2_density_n1(x, y, 0.1, 0.45, q)) < 1e-6);
  }
}

TEST_CASE("multi-time gaps") {
  const ModelParams p2(2, 0.5);
  const TimeGrid tg({0.0, 0.3}, p2);
  CHECK(std::abs(multitime_gap({RegionSet::real_line(), RegionSet::real_line()}, tg, p2).value - 1.0) < 1e-8);
  const RegionSet a = RegionSet::parse("-inf:0.7,1:2");
  CHECK(std::abs(multitime_gap({a}, TimeGrid({0.4}, p2), p2).value - gap_probability(a, p2).value) < 1e-9);
  CHECK_THROWS_AS(multitime_gap({a, a}, TimeGrid({0.2, 0.2}, p2), p2), DomainError);
  CHECK_THROWS_AS(multitime_gap({a}, tg, p2), DomainError);

  // n = 1 against the two-time joint density.
  const double q = 0.5, beta = -std::log(q);
  const ModelParams p1(1, q);
  const QuadratureGrid g = composite_grid(-12.0, 0.0, 12, 16);
  double quad = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j)
      quad += g.weights[i] * g.weights[j] * joint2_density_n1(g.nodes[i], g.nodes[j], 0.0, beta / 2, q);
  const double v = multitime_gap({RegionSet::below(0.0), RegionSet::below(0.0)}, TimeGrid({0.0, beta / 2}, p1), p1).value;
  CHECK(std::abs(v - quad) < 1e-6);

  // Shrinking one region cannot increase the probability.
  const TimeGrid nested({0.1, 0.5}, p2);
  const double big = multitime_gap({RegionSet::below(1.5), RegionSet::below(1.5)}, nested, p2).value;
  const double mid = multitime_gap({RegionSet::below(1.0), RegionSet::below(1.5)}, nested, p2).value;
  const double small = multitime_gap({RegionSet::below(1.0), RegionSet::below(0.5)}, nested, p2).value;
  CHECK(mid <= big + 1e-10);
  CHECK(small <= mid + 1e-10);
  CHECK(small > 0.0);
}

TEST_CASE("C coefficients") {
  for (double q : {0.3, 0.5}) {
    const ModelParams p1(1, q);
    for (long j : {0L, 1L, 4L}) CHECK(c_coefficient({j}, p1) == doctest::Approx(std::pow(q, j)).epsilon(1e-12));
    const ModelParams p3(3, q);
    CHECK(c_coefficient({0, 2, 5}, p3) == doctest::Approx(std::pow(q, 7)).epsilon(1e-12));
  }
  const ModelParams p3(3, 0.5);
  const TruncatedValue b = brute_C({2}, p3, 60);
  CHECK(std::abs(c_coefficient({2}, p3) - b.value) < 1e-10 + b.truncation_bound);
  CHECK(c_coefficient({2}, p3) == doctest::Approx(0.22395833333333333333).epsilon(1e-12));
  CHECK(c_coefficient({0, 2}, p3) == doctest::Approx(0.1875).epsilon(1e-12));
  for (const std::vector<long>& js : {std::vector<long>{1}, {0, 3}, {1, 2, 6}})
    CHECK(c_coefficient(js, ModelParams(4, 0.4), CMethod::contour) ==
          doctest::Approx(c_coefficient(js, ModelParams(4, 0.4), CMethod::product)).epsilon(1e-11));
  CHECK_THROWS_AS(c_coefficient({3, 1}, p3), DomainError);
  CHECK_THROWS_AS(c_coefficient({0, 1, 2, 3}, p3), DomainError);
}
