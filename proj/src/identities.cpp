#include "fermikit/identities.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <sstream>

#include "fermikit/errors.hpp"
#include "fermikit/fredholm.hpp"
#include "fermikit/parallel.hpp"
#include "fermikit/qseries.hpp"

namespace fermikit {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(cplx v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

bool inside(const Circle& c, cplx p) { return std::abs(p - c.center) < c.radius; }

// Largest k with q^k still above double resolution.
int scale_depth(double q) { return std::min(400, static_cast<int>(std::ceil(std::log(1e-17) / std::log(q)))); }

void require_pole_free(const ContourKernelConfig& cfg, const Circle& c, const char* name) {
  // F(eta; k) is singular where q^j eta hits a pole.
  for (cplx a : cfg.poles) {
    double scale = 1.0;
    for (int j = 0; j <= scale_depth(cfg.q); ++j, scale /= cfg.q) {
      const double d = std::abs(std::abs(a * scale - c.center) - c.radius);
      if (d < 1e-6 * c.radius)
        throw DomainError(std::string("identities: ") + name + " passes through a singularity of F at " +
                          fmt(a * scale));
      if (std::abs(a * scale) > 1e6 * (std::abs(c.center) + c.radius)) break;
    }
  }
}

void require_scaled_disjoint(const Circle& c, double q, int max_k, const char* name) {
  double s = 1.0;
  for (int k = 1; k <= max_k; ++k) {
    s *= q;
    if (!scaled_circle_disjoint(c, s))
      throw DomainError(std::string("identities: ") + name + " meets its image under q^" + std::to_string(k));
  }
}

// Smallest Re s beyond which xi - q^s eta (xi, eta on c) has no zeros and 1/g(q^s eta) no
// singularities.
double mb_lower(const Circle& c, double q, const std::vector<cplx>& g_singular) {
  const double far = std::abs(c.center) + c.radius;
  const double near = std::abs(c.center) - c.radius;
  const double lq = -std::log(q);
  double lower = 0.0;
  if (std::abs(c.center) > c.radius) lower = std::log(far / near) / lq;
  for (cplx p : g_singular) lower = std::max(lower, std::log(far / std::abs(p)) / lq);
  return lower;
}

struct MellinLine {
  double delta;
  double strip;
};

// The line sits midway between the obstructions and the pole of 1/sin(pi s) at s = 1.
MellinLine mb_line(const ContourKernelConfig& cfg) {
  const double lower =
      std::max(mb_lower(cfg.gamma_A, cfg.q, cfg.g_singular), mb_lower(cfg.gamma_0A, cfg.q, cfg.g_singular));
  return {0.5 * (1.0 + lower), 0.5 * (1.0 - lower)};
}

}  // namespace

bool scaled_circle_disjoint(const Circle& c, double factor) {
  const double d = std::abs(c.center) * std::abs(1.0 - factor);
  const double r1 = c.radius, r2 = factor * c.radius;
  return d > r1 + r2 || d < std::abs(r1 - r2);
}

void validate_config(const ContourKernelConfig& cfg, bool mellin_barnes) {
  if (!(cfg.q > 0.0 && cfg.q < 1.0)) throw DomainError("identities: q must lie in (0,1)");
  if (!cfg.f) throw DomainError("identities: f is not set");
  const cplx f0 = cfg.f(0.0);
  if (!(std::abs(f0 - 1.0) < 1e-12)) throw DomainError("identities: f(0) = " + fmt(f0) + ", expected 1");
  if (cfg.poles.empty()) throw DomainError("identities: the pole set is empty");
  const Circle& big = cfg.gamma_0A;
  const Circle& small = cfg.gamma_A;
  if (!(big.radius > 0 && small.radius > 0)) throw DomainError("identities: radii must be positive");
  if (!inside(big, 0.0)) throw DomainError("identities: Gamma_{0,A} must enclose 0");
  if (inside(small, 0.0) || std::abs(std::abs(small.center) - small.radius) < 1e-12)
    throw DomainError("identities: Gamma_A must leave 0 outside");
  for (cplx a : cfg.poles) {
    if (std::abs(a) == 0.0) throw DomainError("identities: a pole at 0 is not allowed");
    if (!inside(big, a)) throw DomainError("identities: pole " + fmt(a) + " outside Gamma_{0,A}");
    if (!inside(small, a)) throw DomainError("identities: pole " + fmt(a) + " outside Gamma_A");
  }
  for (cplx e : cfg.excluded) {
    if (std::abs(e - big.center) <= big.radius)
      throw DomainError("identities: singularity " + fmt(e) + " must lie outside Gamma_{0,A}");
    if (std::abs(e - small.center) <= small.radius)
      throw DomainError("identities: singularity " + fmt(e) + " must lie outside Gamma_A");
  }
  const int depth = scale_depth(cfg.q);
  require_scaled_disjoint(big, cfg.q, 1, "Gamma_{0,A}");
  require_scaled_disjoint(small, cfg.q, depth, "Gamma_A");
  require_pole_free(cfg, big, "Gamma_{0,A}");
  require_pole_free(cfg, small, "Gamma_A");
  if (mellin_barnes) {
    if (!cfg.g) throw DomainError("identities: Mellin-Barnes mode needs the g continuation");
    if (!(mb_lower(small, cfg.q, {}) < 0.96))
      throw DomainError("identities: Gamma_A too wide for a Mellin-Barnes line in 0 < Re s < 1");
    if (!(mb_line(cfg).strip > 0.02))
      throw DomainError("identities: the singularities of 1/g leave no Mellin-Barnes line in 0 < Re s < 1");
  }
}

ContourKernelConfig make_config(std::function<cplx(cplx)> f, std::vector<cplx> poles, double q,
                                std::function<cplx(cplx)> g, std::vector<cplx> excluded,
                                std::vector<cplx> g_singular) {
  if (!(q > 0.0 && q < 1.0)) throw DomainError("identities: q must lie in (0,1)");
  if (poles.empty()) throw DomainError("identities: the pole set is empty");
  ContourKernelConfig cfg;
  cfg.f = std::move(f);
  cfg.g = std::move(g);
  cfg.poles = std::move(poles);
  cfg.excluded = std::move(excluded);
  cfg.g_singular = std::move(g_singular);
  cfg.q = q;

  double amax = 0.0;
  for (cplx a : cfg.poles) amax = std::max(amax, std::abs(a));
  // Nearest obstruction beyond the outermost pole: images a q^{-j} and other singularities.
  double upper = HUGE_VAL;
  for (cplx a : cfg.poles)
    for (double s = std::abs(a); s < amax / q * (1 + 1e-12); s /= q)
      if (s > amax * (1 + 1e-9)) upper = std::min(upper, s);
  upper = std::min(upper, amax / q);
  for (cplx e : cfg.excluded) upper = std::min(upper, std::abs(e));
  if (!(upper > amax * (1 + 1e-9)))
    throw DomainError("identities: no circle about 0 separates the poles from the other singularities");
  // Geometric midpoint between the outermost pole and the nearest obstruction, nudged off
  // the images a q^{-j}.
  double radius = 0.0;
  for (double frac : {0.5, 0.4, 0.6, 0.3, 0.7, 0.2, 0.8}) {
    const double r = amax * std::pow(upper / amax, frac);
    bool clear = true;
    for (cplx a : cfg.poles)
      for (double s = std::abs(a); s < 2 * upper; s /= q)
        if (std::abs(s - r) < 1e-3 * r) clear = false;
    if (clear) {
      radius = r;
      break;
    }
  }
  if (radius == 0.0) throw DomainError("identities: could not place Gamma_{0,A}");
  cfg.gamma_0A = {0.0, radius};

  double re_lo = HUGE_VAL, re_hi = -HUGE_VAL, im_lo = HUGE_VAL, im_hi = -HUGE_VAL;
  for (cplx a : cfg.poles) {
    re_lo = std::min(re_lo, a.real());
    re_hi = std::max(re_hi, a.real());
    im_lo = std::min(im_lo, a.imag());
    im_hi = std::max(im_hi, a.imag());
  }
  const cplx center{0.5 * (re_lo + re_hi), 0.5 * (im_lo + im_hi)};
  double spread = 0.0;
  for (cplx a : cfg.poles) spread = std::max(spread, std::abs(a - center));
  const double sq = cfg.g ? std::sqrt(q) : q;
  double bound = std::abs(center) * (1 - sq) / (1 + sq);
  for (cplx e : cfg.excluded) bound = std::min(bound, std::abs(e - center));
  if (!(bound > spread * (1 + 1e-9)))
    throw DomainError("identities: the poles are too spread out for an admissible Gamma_A");
  cfg.gamma_A = {center, spread + 0.5 * (bound - spread)};
  validate_config(cfg, static_cast<bool>(cfg.g));
  return cfg;
}

ContourKernel m_contour_kernel(const ContourKernelConfig& cfg) {
  auto f = cfg.f;
  const double q = cfg.q;
  return [f, q](cplx xi, cplx eta) {
    const cplx den = xi - q * eta;
    if (std::abs(den) < 1e-14 * (std::abs(xi) + 1e-300))
      throw DomainError("m_contour_kernel: node collision xi = q eta");
    return f(eta) / den;
  };
}

namespace {

// Values F(eta; k) for k = 1.. until |z|^k sup|F| drops below 1e-16 relative.
std::vector<cplx> series_weights(const ContourKernelConfig& cfg, cplx z, cplx eta) {
  std::vector<cplx> w;
  const double az = std::abs(z);
  cplx F = 1.0, zk = 1.0, arg = eta;
  double fmax = 0.0;
  for (int k = 1; k < 20000; ++k) {
    F *= cfg.f(arg);
    arg *= cfg.q;
    zk *= -z;
    w.push_back(-zk * F);  // (-1)^{k+1} z^k F
    fmax = std::max(fmax, std::abs(F));
    if (std::pow(az, k) * std::max(1.0, fmax) < 1e-17) break;
  }
  return w;
}

struct MellinGrid {
  std::vector<cplx> s;
  std::vector<cplx> weight;  // (h / 2pi) * pi z^s / sin(pi s)
  std::vector<cplx> qs;      // q^s
};

MellinGrid mellin_grid(cplx z, double q, MellinLine line) {
  const double argz = std::abs(std::arg(z));
  if (argz > kPi - 1e-6) throw DomainError("k_contour_kernel: z on the negative axis has no Mellin-Barnes form");
  const double decay = kPi - argz;
  const double h = std::min(0.1, line.strip / 5.0);
  const double tmax = std::min(400.0, (40.0 + std::max(0.0, line.delta * std::log(std::abs(z)))) / decay);
  const int half = static_cast<int>(std::ceil(tmax / h));
  const cplx logz = std::log(z);
  MellinGrid g;
  for (int l = -half; l <= half; ++l) {
    const cplx s{line.delta, l * h};
    g.s.push_back(s);
    g.weight.push_back(h / (2 * kPi) * kPi * std::exp(s * logz) / std::sin(kPi * s));
    g.qs.push_back(std::exp(s * std::log(q)));
  }
  return g;
}

}  // namespace

ContourKernel k_contour_kernel(const ContourKernelConfig& cfg, cplx z, KMode mode) {
  const double q = cfg.q;
  if (z == 0.0) return [](cplx, cplx) { return cplx(0.0); };
  if (mode == KMode::series) {
    if (!(std::abs(z) < 1.0)) throw DomainError("k_contour_kernel: series mode needs |z| < 1");
    return [cfg, z, q](cplx xi, cplx eta) {
      const auto w = series_weights(cfg, z, eta);
      cplx sum = 0.0, qk = q;
      for (cplx wk : w) {
        sum += wk / (xi - qk * eta);
        qk *= q;
      }
      return sum;
    };
  }
  if (!cfg.g) throw DomainError("k_contour_kernel: Mellin-Barnes mode needs the g continuation");
  auto grid = std::make_shared<MellinGrid>(mellin_grid(z, q, mb_line(cfg)));
  return [cfg, grid](cplx xi, cplx eta) {
    const cplx g0 = cfg.g(eta);
    cplx sum = 0.0;
    for (std::size_t l = 0; l < grid->s.size(); ++l) {
      const cplx w = grid->qs[l] * eta;
      sum += grid->weight[l] * (g0 / cfg.g(w)) / (xi - w);
    }
    return sum;
  };
}

CircleRule circle_rule(const Circle& c, int order) {
  if (order < 4) throw DomainError("circle_rule: order must be at least 4");
  CircleRule r;
  for (int j = 0; j < order; ++j) {
    const cplx e = std::polar(c.radius, 2 * kPi * (j + 0.5) / order);
    r.nodes.push_back(c.center + e);
    r.weights.push_back(e / double(order));
  }
  return r;
}

Eigen::MatrixXcd k_contour_matrix(const ContourKernelConfig& cfg, cplx z, KMode mode, const CircleRule& rule) {
  const std::size_t n = rule.nodes.size();
  Eigen::MatrixXcd k = Eigen::MatrixXcd::Zero(n, n);
  if (z == 0.0) return k;
  const double q = cfg.q;
  if (mode == KMode::series) {
    if (!(std::abs(z) < 1.0)) throw DomainError("k_contour_kernel: series mode needs |z| < 1");
    parallel_for(n, [&](std::size_t j) {
      const cplx eta = rule.nodes[j];
      const auto w = series_weights(cfg, z, eta);
      for (std::size_t i = 0; i < n; ++i) {
        cplx sum = 0.0, qk = q;
        for (cplx wk : w) {
          sum += wk / (rule.nodes[i] - qk * eta);
          qk *= q;
        }
        k(i, j) = sum;
      }
    });
    return k;
  }
  if (!cfg.g) throw DomainError("k_contour_kernel: Mellin-Barnes mode needs the g continuation");
  const MellinGrid grid = mellin_grid(z, q, mb_line(cfg));
  parallel_for(n, [&](std::size_t j) {
    const cplx eta = rule.nodes[j];
    const cplx g0 = cfg.g(eta);
    std::vector<cplx> coef(grid.s.size()), w(grid.s.size());
    for (std::size_t l = 0; l < grid.s.size(); ++l) {
      w[l] = grid.qs[l] * eta;
      coef[l] = grid.weight[l] * g0 / cfg.g(w[l]);
    }
    for (std::size_t i = 0; i < n; ++i) {
      cplx sum = 0.0;
      for (std::size_t l = 0; l < grid.s.size(); ++l) sum += coef[l] / (rule.nodes[i] - w[l]);
      k(i, j) = sum;
    }
  });
  return k;
}

namespace {

Eigen::MatrixXcd weighted(Eigen::MatrixXcd k, const CircleRule& rule) {
  for (Eigen::Index j = 0; j < k.cols(); ++j) k.col(j) *= rule.weights[j];
  return k;
}

Eigen::MatrixXcd m_matrix(const ContourKernelConfig& cfg, const CircleRule& rule) {
  const auto m = m_contour_kernel(cfg);
  const std::size_t n = rule.nodes.size();
  Eigen::MatrixXcd a(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) a(i, j) = m(rule.nodes[i], rule.nodes[j]);
  return weighted(std::move(a), rule);
}

}  // namespace

IdentityCheck verify_identity(const ContourKernelConfig& cfg, cplx z, int order, KMode mode, IdentityForm form) {
  validate_config(cfg, mode == KMode::mellin_barnes);
  if (mode == KMode::series && !(std::abs(z) < 1.0))
    throw DomainError("verify_identity: series mode needs |z| < 1");
  const CircleRule outer = circle_rule(cfg.gamma_0A, order);
  const CircleRule inner = circle_rule(cfg.gamma_A, order);
  const cplx pref = qpochhammer(-z, cfg.q, kInfinite);
  IdentityCheck out;
  if (form == IdentityForm::main) {
    out.lhs = det_identity(z * m_matrix(cfg, outer), DetSign::plus);
    out.rhs = pref * det_identity(weighted(k_contour_matrix(cfg, z, mode, inner), inner), DetSign::plus);
  } else {
    out.lhs = det_identity(z * m_matrix(cfg, inner), DetSign::minus);
    out.rhs = pref * det_identity(weighted(k_contour_matrix(cfg, z, mode, outer), outer), DetSign::minus);
  }
  out.gap = std::abs(out.lhs - out.rhs);
  return out;
}

PresetModel parse_preset(const std::string& name) {
  if (name == "whittaker") return PresetModel::whittaker;
  if (name == "qtasep") return PresetModel::qtasep;
  if (name == "qtazrp") return PresetModel::qtazrp;
  if (name == "asep") return PresetModel::asep;
  throw DomainError("unknown preset '" + name + "' (whittaker|qtasep|qtazrp|asep)");
}

std::string preset_name(PresetModel m) {
  switch (m) {
    case PresetModel::whittaker: return "whittaker";
    case PresetModel::qtasep: return "qtasep";
    case PresetModel::qtazrp: return "qtazrp";
    case PresetModel::asep: return "asep";
  }
  return "?";
}

ContourKernelConfig preset_whittaker(const WhittakerParams& w, double q) {
  if (w.a.empty()) throw DomainError("whittaker: need at least one a_m");
  if (w.alpha.size() != w.beta.size() && !w.alpha.empty() && !w.beta.empty())
    throw DomainError("whittaker: alpha and beta must have equal length");
  for (double a : w.a)
    if (!(a > 0)) throw DomainError("whittaker: a_m must be positive");
  for (double v : w.alpha)
    if (!(v >= 0)) throw DomainError("whittaker: alpha_i must be non-negative");
  for (double v : w.beta)
    if (!(v >= 0)) throw DomainError("whittaker: beta_i must be non-negative");
  if (!(w.gamma >= 0)) throw DomainError("whittaker: gamma must be non-negative");

  auto f = [w, q](cplx eta) {
    cplx v = std::exp((q - 1) * w.gamma * eta);
    for (double a : w.a) v *= a / (a - eta);
    for (double al : w.alpha) v *= 1.0 - al * eta;
    for (double be : w.beta) v *= (1.0 + q * be * eta) / (1.0 + be * eta);
    return v;
  };
  auto g = [w, q](cplx eta) {
    cplx v = std::exp(-w.gamma * eta);
    for (double a : w.a) v /= qpochhammer(eta / a, q, kInfinite);
    for (double al : w.alpha) v *= qpochhammer(al * eta, q, kInfinite);
    for (double be : w.beta) v /= 1.0 + be * eta;
    return v;
  };
  std::vector<cplx> poles;
  for (double a : w.a)
    if (std::find(poles.begin(), poles.end(), cplx(a)) == poles.end()) poles.push_back(a);
  std::vector<cplx> excluded;
  for (double be : w.beta)
    if (be > 0) excluded.push_back(-1.0 / be);
  for (double al : w.alpha)
    if (al > 0) excluded.push_back(1.0 / al);
  return make_config(f, poles, q, g, excluded);
}

ContourKernelConfig preset_qtasep(const QTasepParams& w, double q) {
  return preset_whittaker({w.a, {}, {}, w.t}, q);
}

ContourKernelConfig preset_qtazrp(const QTazrpParams& w, double q) {
  if (w.b.empty()) throw DomainError("qtazrp: need at least b_0");
  for (double b : w.b)
    if (!(b > 0)) throw DomainError("qtazrp: rates b_k must be positive");
  if (!(w.t >= 0)) throw DomainError("qtazrp: t must be non-negative");
  auto f = [w](cplx xi) {
    cplx v = std::exp(-xi * w.t);
    for (double b : w.b) v *= b / (b - xi);
    return v;
  };
  auto g = [w, q](cplx eta) {
    cplx v = std::exp(-w.t * eta / (1 - q));
    for (double b : w.b) v /= qpochhammer(eta / b, q, kInfinite);
    return v;
  };
  std::vector<cplx> poles;
  for (double b : w.b)
    if (std::find(poles.begin(), poles.end(), cplx(b)) == poles.end()) poles.push_back(b);
  return make_config(f, poles, q, g);
}

ContourKernelConfig preset_asep(const AsepParams& w, double tau) {
  if (!(tau > 0 && tau < 1)) throw DomainError("asep: tau must lie in (0,1)");
  if (w.x < 0) throw DomainError("asep: x must be non-negative");
  if (!(w.t >= 0)) throw DomainError("asep: t must be non-negative");
  if (!(w.rho > 0 && w.rho <= 1)) throw DomainError("asep: rho must lie in (0,1]");
  const double kappa = (1 - tau) / (1 + tau);
  const bool bernoulli = w.rho < 1;
  const double theta = bernoulli ? w.rho / (1 - w.rho) : HUGE_VAL;
  const double x = static_cast<double>(w.x);
  auto f = [=](cplx eta) {
    cplx v = std::pow((1.0 + eta) / (1.0 + eta / tau), x) *
             std::exp(-kappa * w.t * (1.0 / (1.0 + eta / tau) - 1.0 / (1.0 + eta)));
    if (bernoulli) v /= 1.0 - eta / (theta * tau);
    return v;
  };
  auto g = [=](cplx eta) {
    cplx v = std::pow(1.0 + eta / tau, -x) * std::exp(-kappa * w.t / (1.0 + eta / tau));
    if (bernoulli) v /= qpochhammer(eta / (theta * tau), tau, kInfinite);
    return v;
  };
  std::vector<cplx> poles, excluded;
  const bool moving = w.x > 0 || w.t > 0;
  if (moving) {
    poles.push_back(-tau);
    if (w.t > 0) excluded.push_back(-1.0);
    if (bernoulli) excluded.push_back(theta * tau);
  } else if (bernoulli) {
    poles.push_back(theta * tau);
  } else {
    throw DomainError("asep: x = t = 0 with rho = 1 gives f = 1, which has no poles");
  }
  std::vector<cplx> g_singular;
  if (w.t > 0) g_singular.push_back(-tau);
  return make_config(f, poles, tau, g, excluded, g_singular);
}

namespace {

double scalar(const std::map<std::string, std::vector<double>>& p, const std::string& key, double dflt) {
  auto it = p.find(key);
  if (it == p.end()) return dflt;
  if (it->second.size() != 1) throw DomainError("preset: parameter '" + key + "' takes one value");
  return it->second[0];
}

std::vector<double> list(const std::map<std::string, std::vector<double>>& p, const std::string& key,
                         std::vector<double> dflt) {
  auto it = p.find(key);
  return it == p.end() ? dflt : it->second;
}

}  // namespace

ContourKernelConfig preset(PresetModel model, const std::map<std::string, std::vector<double>>& params, double q) {
  switch (model) {
    case PresetModel::whittaker:
      return preset_whittaker({list(params, "a", {1.0}), list(params, "alpha", {}), list(params, "beta", {}),
                               scalar(params, "gamma", 0.0)},
                              q);
    case PresetModel::qtasep:
      return preset_qtasep({list(params, "a", {1.0}), scalar(params, "t", 0.0)}, q);
    case PresetModel::qtazrp:
      return preset_qtazrp({list(params, "b", {1.0, 1.0}), scalar(params, "t", 0.5)}, q);
    case PresetModel::asep: {
      const double x = scalar(params, "x", 1.0);
      if (x != std::floor(x)) throw DomainError("asep: x must be an integer");
      return preset_asep({static_cast<long>(x), scalar(params, "t", 0.5), scalar(params, "rho", 1.0)}, q);
    }
  }
  throw DomainError("preset: unknown model");
}

}  // namespace fermikit
