#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "fermikit/kernel.hpp"

namespace fermikit {

struct Circle {
  cplx center = 0.0;
  double radius = 1.0;
};

// True when the circle and its image under w -> factor * w do not meet.
bool scaled_circle_disjoint(const Circle& c, double factor);

// A meromorphic f with f(0) = 1, its declared singular set A (enclosed by both contours),
// singularities that must stay outside both contours, and the circles themselves.
struct ContourKernelConfig {
  std::function<cplx(cplx)> f;
  std::vector<cplx> poles;
  std::vector<cplx> excluded;
  double q = 0.5;
  Circle gamma_0A;  // encloses 0 and the poles
  Circle gamma_A;   // encloses the poles, not 0
  // Optional continuation F(eta; s) = g(eta) / g(q^s eta) used by the Mellin-Barnes mode.
  std::function<cplx(cplx)> g;
  // Singularities of 1/g; the Mellin-Barnes line needs q^{Re s} |eta| < |p| on both circles.
  std::vector<cplx> g_singular;
};

// Checks f(0) = 1 and the geometric conditions on both circles; throws DomainError.
void validate_config(const ContourKernelConfig& cfg, bool mellin_barnes);

// Chooses circles for the given f and singularities, then validates.
ContourKernelConfig make_config(std::function<cplx(cplx)> f, std::vector<cplx> poles, double q,
                                std::function<cplx(cplx)> g = {}, std::vector<cplx> excluded = {},
                                std::vector<cplx> g_singular = {});

using ContourKernel = std::function<cplx(cplx, cplx)>;

// M(xi, eta) = f(eta) / (xi - q eta).
ContourKernel m_contour_kernel(const ContourKernelConfig& cfg);

enum class KMode { series, mellin_barnes };

// K(xi, eta; z) as the alternating series in z (|z| < 1) or as the vertical-line integral
// over s = delta + it. delta is 1/2 unless Gamma_A or a singularity of 1/g pushes the line
// toward 1.
ContourKernel k_contour_kernel(const ContourKernelConfig& cfg, cplx z, KMode mode);

// Nodes and Nystrom weights (eta_j - center)/N for the measure d eta / (2 pi i).
struct CircleRule {
  std::vector<cplx> nodes;
  std::vector<cplx> weights;
};
CircleRule circle_rule(const Circle& c, int order);

// K at all node pairs of a rule, reusing F(eta_j; s) across xi in Mellin-Barnes mode.
Eigen::MatrixXcd k_contour_matrix(const ContourKernelConfig& cfg, cplx z, KMode mode, const CircleRule& rule);

enum class IdentityForm { main, alt };

struct IdentityCheck {
  cplx lhs;
  cplx rhs;
  double gap;
};

// main: det(I + zM) on Gamma_{0,A} against (-z;q)_inf det(I + K) on Gamma_A.
// alt:  det(I - zM) on Gamma_A against (-z;q)_inf det(I - K) on Gamma_{0,A}.
IdentityCheck verify_identity(const ContourKernelConfig& cfg, cplx z, int order, KMode mode = KMode::series,
                              IdentityForm form = IdentityForm::main);

enum class PresetModel { whittaker, qtasep, qtazrp, asep };

PresetModel parse_preset(const std::string& name);
std::string preset_name(PresetModel m);

struct WhittakerParams {
  std::vector<double> a, alpha, beta;
  double gamma = 0.0;
};
struct QTasepParams {
  std::vector<double> a;
  double t = 0.0;
};
struct QTazrpParams {
  std::vector<double> b;  // b_0 .. b_M
  double t = 0.0;
};
struct AsepParams {
  long x = 0;
  double t = 0.0;
  double rho = 1.0;  // theta = rho / (1 - rho); rho = 1 removes the Bernoulli factor
};

ContourKernelConfig preset_whittaker(const WhittakerParams& w, double q);
ContourKernelConfig preset_qtasep(const QTasepParams& w, double q);
ContourKernelConfig preset_qtazrp(const QTazrpParams& w, double q);
// tau plays the role of q.
ContourKernelConfig preset_asep(const AsepParams& w, double tau);

// Named-parameter front end used by the CLI: keys as in the structs above, vectors as lists.
ContourKernelConfig preset(PresetModel model, const std::map<std::string, std::vector<double>>& params, double q);

}  // namespace fermikit
