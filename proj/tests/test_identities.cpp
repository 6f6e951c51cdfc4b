#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "fermikit/identities.hpp"
#include "fermikit/qseries.hpp"

using namespace fermikit;

namespace {

constexpr double kPi = std::numbers::pi;

ContourKernelConfig single_pole(double a, double q) {
  return make_config([a](cplx eta) { return a / (a - eta); }, {cplx(a)}, q);
}

// Signed distances of sampled points of the circle to its image under w -> s w. The curves
// meet iff both signs occur; margin is the smallest magnitude seen.
struct SampledCrossing {
  bool crosses;
  double margin;
};

SampledCrossing sample_crossing(const Circle& c, double s, int samples) {
  bool in = false, out = false;
  double margin = HUGE_VAL;
  for (int i = 0; i < samples; ++i) {
    const cplx p = c.center + c.radius * std::polar(1.0, 2 * kPi * i / samples);
    const double d = std::abs(p - s * c.center) - s * c.radius;
    (d < 0 ? in : out) = true;
    margin = std::min(margin, std::abs(d));
  }
  return {in && out, margin};
}

}  // namespace

TEST_CASE("identity at z = 0 and for a single pole") {
  const ContourKernelConfig cfg = single_pole(1.0, 0.3);
  for (IdentityForm form : {IdentityForm::main, IdentityForm::alt}) {
    const IdentityCheck zero = verify_identity(cfg, 0.0, 32, KMode::series, form);
    CHECK(std::abs(zero.lhs - 1.0) < 1e-15);
    CHECK(std::abs(zero.rhs - 1.0) < 1e-15);
    CHECK(verify_identity(cfg, 0.2, 64, KMode::series, form).gap < 1e-8);
  }
  const IdentityCheck r = verify_identity(cfg, 0.2, 64);
  CHECK(std::abs(r.lhs) > 0.5);  // the check is not vacuous
}

TEST_CASE("kernels on the contours") {
  const ContourKernelConfig cfg = single_pole(1.0, 0.3);
  const ContourKernel m = m_contour_kernel(cfg);
  const cplx xi = cfg.gamma_A.center + cfg.gamma_A.radius * std::polar(1.0, 0.7);
  const cplx eta = cfg.gamma_A.center + cfg.gamma_A.radius * std::polar(1.0, -2.1);
  CHECK(std::abs(m(xi, eta) - cfg.f(eta) / (xi - 0.3 * eta)) < 1e-15);

  CHECK(std::abs(k_contour_kernel(cfg, 0.0, KMode::series)(xi, eta)) == 0.0);
  const double tiny = 1e-8;
  CHECK(std::abs(k_contour_kernel(cfg, tiny, KMode::series)(xi, eta) / tiny - m(xi, eta)) < 1e-6 * std::abs(m(xi, eta)));
  CHECK_THROWS_AS(k_contour_kernel(cfg, 1.2, KMode::series), DomainError);

  const ContourKernelConfig tasep = preset_qtasep({{1.0}, 0.0}, 0.3);
  const ContourKernel ks = k_contour_kernel(tasep, 0.4, KMode::series);
  const ContourKernel km = k_contour_kernel(tasep, 0.4, KMode::mellin_barnes);
  const CircleRule rule = circle_rule(tasep.gamma_A, 12);
  for (const cplx& a : rule.nodes)
    for (const cplx& b : {rule.nodes[0], rule.nodes[5]}) CHECK(std::abs(ks(a, b) - km(a, b)) < 1e-9);
  const Eigen::MatrixXcd mat = k_contour_matrix(tasep, 0.4, KMode::mellin_barnes, rule);
  CHECK(std::abs(mat(3, 5) - km(rule.nodes[3], rule.nodes[5])) < 1e-13);
  CHECK_THROWS_AS(k_contour_kernel(tasep, -0.5, KMode::mellin_barnes), DomainError);
}

TEST_CASE("configuration checks") {
  CHECK_THROWS_AS(make_config([](cplx eta) { return 2.0 / (1.0 - eta); }, {cplx(1.0)}, 0.3), DomainError);
  ContourKernelConfig cfg = single_pole(1.0, 0.3);
  cfg.gamma_A.radius = 2.0;  // now encloses 0
  CHECK_THROWS_AS(validate_config(cfg, false), DomainError);
  cfg = single_pole(1.0, 0.3);
  CHECK_THROWS_AS(validate_config(cfg, true), DomainError);  // no g for Mellin-Barnes

  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int checked = 0;
  for (int i = 0; i < 400; ++i) {
    const Circle c{cplx(4 * u(gen) - 2, 4 * u(gen) - 2), 0.05 + 2 * u(gen)};
    const double s = 0.05 + 0.9 * u(gen);
    const SampledCrossing sc = sample_crossing(c, s, 4000);
    if (!sc.crosses && sc.margin < 1e-3) continue;  // nearly tangent
    CAPTURE(s);
    CHECK(scaled_circle_disjoint(c, s) == !sc.crosses);
    ++checked;
  }
  CHECK(checked > 300);
}

TEST_CASE("presets") {
  CHECK(parse_preset("qtazrp") == PresetModel::qtazrp);
  CHECK(preset_name(PresetModel::asep) == "asep");
  CHECK_THROWS_AS(parse_preset("tasep"), DomainError);

  const ContourKernelConfig w = preset_whittaker({{1.0}, {0.0}, {0.0}, 0.0}, 0.4);
  CHECK(std::abs(w.f(0.0) - 1.0) < 1e-12);
  CHECK(std::abs(w.f(0.3) - 1.0 / 0.7) < 1e-12);

  const ContourKernelConfig t = preset_qtasep({{1.0}, 0.0}, 0.35);
  CHECK(std::abs(t.f(0.5) - 2.0) < 1e-12);
  CHECK(verify_identity(t, 0.3, 96).gap < 1e-8);

  const ContourKernelConfig z = preset_qtazrp({{1.0, 1.0}, 0.5}, 0.4);
  CHECK(verify_identity(z, 0.3, 96).gap < 1e-7);
  const ContourKernelConfig zmap = preset(PresetModel::qtazrp, {{"b", {1.0, 1.0}}, {"t", {0.5}}}, 0.4);
  CHECK(std::abs(zmap.f(0.37) - z.f(0.37)) == 0.0);

  const ContourKernelConfig a = preset_asep({0, 0.0, 0.5}, 0.4);
  CHECK(std::abs(a.f(0.0) - 1.0) < 1e-12);
  CHECK(verify_identity(a, 0.3, 96).gap < 1e-8);
  CHECK_THROWS_AS(preset_asep({0, 0.0, 1.0}, 0.4), DomainError);
  CHECK_THROWS_AS(preset_asep({-1, 0.5, 1.0}, 0.4), DomainError);
}

TEST_CASE("random admissible draws") {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int model = 0; model < 4; ++model)
    for (int draw = 0; draw < 5; ++draw) {
      double q = 0.2 + 0.3 * u(gen);
      const int m = 1 + int(3 * u(gen));
      std::vector<double> rates;
      for (int i = 0; i < m; ++i) rates.push_back(0.9 + 0.2 * u(gen));
      ContourKernelConfig cfg;
      if (model == 0) {
        std::vector<double> al, be;
        for (int i = 0; i < m; ++i) {
          al.push_back(0.3 * u(gen));
          be.push_back(0.3 * u(gen));
        }
        cfg = preset_whittaker({rates, al, be, u(gen)}, q);
      } else if (model == 1) {
        cfg = preset_qtasep({rates, u(gen)}, q);
      } else if (model == 2) {
        cfg = preset_qtazrp({rates, u(gen)}, q);
      } else {
        q = 0.3 + 0.3 * u(gen);
        cfg = preset_asep({long(4 * u(gen)), u(gen), u(gen) < 0.5 ? 1.0 : 0.75 + 0.2 * u(gen)}, q);
      }
      const cplx z = std::polar(0.5 * std::sqrt(u(gen)), (2 * u(gen) - 1) * 0.95 * kPi);
      for (KMode mode : {KMode::series, KMode::mellin_barnes})
        for (IdentityForm form : {IdentityForm::main, IdentityForm::alt}) {
          const IdentityCheck r = verify_identity(cfg, z, 96, mode, form);
          CAPTURE(model);
          CAPTURE(draw);
          CHECK(r.gap < 1e-6);
          worst = std::max(worst, r.gap);
        }
    }
  MESSAGE("worst identity gap " << worst);
}

TEST_CASE("Mellin-Barnes continuation beyond the unit disk") {
  const ContourKernelConfig w = preset_whittaker({{1.0, 0.95}, {0.2}, {0.1}, 0.3}, 0.35);
  for (cplx z : {cplx(1.8), cplx(0.0, 1.5), std::polar(2.0, 2.5)}) {
    const IdentityCheck r = verify_identity(w, z, 96, KMode::mellin_barnes);
    CHECK(r.gap < 1e-8 * std::max(1.0, std::abs(r.lhs)));
  }
  CHECK_THROWS_AS(verify_identity(w, 1.8, 96, KMode::series), DomainError);
}
