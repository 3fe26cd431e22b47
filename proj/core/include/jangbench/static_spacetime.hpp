#pragma once

// Curvature of static spacetimes -phi^2 dt^2 + gbar, the quotiented
// Einstein-Hilbert action, boundary flux terms, and the overdetermined
// equation satisfied in the case of equality.

#include <variant>
#include <vector>

#include "jangbench/jang_deformation.hpp"

namespace jangbench {

struct StaticCurvature {
  double ric00 = 0.0;
  Mat3 ric_spatial{};
  Vec3 ric_mixed{};  // identically zero for static metrics
  double scalar4 = 0.0;
  double einstein00 = 0.0;
  Mat3 einstein_spatial{};
  double rbar = 0.0;  // scalar curvature of gbar
};

// gbar of order 2, phi of order 2, phi > 0.
StaticCurvature static_curvature(const Sym2Jet& gbar, const ScalarJet& phi);
StaticCurvature static_curvature(const Sym2Field& gbar, const ScalarField& phi, const Point3& p);

// Metric jets in dimension n, stored row-major:
//   g[a*n+b], dg[(a*n+b)*n+c] = d_c g_ab, ddg[((a*n+b)*n+c)*n+d] = d_c d_d g_ab.
struct MetricJetND {
  int n = 0;
  std::vector<double> g, dg, ddg;
};

struct CurvatureND {
  int n = 0;
  std::vector<double> g_inv;        // n*n
  std::vector<double> christoffel;  // [(i*n+j)*n+k] = Gamma_ij^k
  std::vector<double> ricci;        // n*n
  double scalar = 0.0;
};

// Generic Christoffel / Ricci / scalar pipeline in any dimension, same sign
// conventions as the three-dimensional routines.
CurvatureND curvature_nd(const MetricJetND& m);

// Jets of the 4-metric -phi^2 dt^2 + gbar in the chart (t, x) at (t, p), built by
// numerically differencing 4-metric samples in x; all t-derivatives vanish.
MetricJetND static_metric_fd(const Sym2Field& gbar, const ScalarField& phi, const Point3& p,
                             double step = 1e-3);

// Future unit normals in the static spacetime: n of the graph t = f(x) and
// nbar = d_t / phi of the t = 0 slice, as 4-vectors (t, x) at a point.
struct StaticNormals {
  std::array<double, 4> n{}, nbar{};
  std::array<double, 4> tan_graph_nbar{};  // projection of nbar onto the graph
};
StaticNormals static_normals(const Mat3& gbar, double phi, const Vec3& df);

struct BoxDomain {
  Point3 lo{}, hi{};
};
struct ShellDomain {
  Point3 center{};
  double r_in = 0.0, r_out = 1.0;
};
using VolumeDomain = std::variant<BoxDomain, ShellDomain>;

struct QuadratureSpec {
  int initial_nodes = 8;  // per dimension
  int max_nodes = 48;
  double rel_tol = 1e-6;
  double abs_tol = 1e-10;
};

struct ActionReport {
  double action = 0.0;           // int Rbar phi dVbar
  double spacetime_action = 0.0; // int (Rbar phi - 2 Lap phi) dVbar
  double laplacian_term = 0.0;   // int 2 Lap phi dVbar, a boundary term
  double error_estimate = 0.0;
  int nodes = 0;
};

// Tensor-product Gauss-Legendre with node doubling until consecutive results
// agree; throws when max_nodes is reached first.
ActionReport eh_action(const Sym2Field& gbar, const ScalarField& phi, const VolumeDomain& domain,
                       const QuadratureSpec& quad = {});

enum class FluxSide { outward, inward };

struct FluxReport {
  double total = 0.0;   // 2 int phi (h - k)(v, nubar) dAbar
  double h_part = 0.0;  // 2 int phi h(v, nubar) dAbar
  double k_part = 0.0;  // 2 int phi k(v, nubar) dAbar
  int samples = 0;
};

// nubar = ((1 + phi^2 |df|^2) / (1 + phi^2 |grad_S f|^2))^(1/2) (nu - <nu, v> v).
Vec3 deformed_unit_normal(const DeformedGeometry& geom, const Vec3& nu);

FluxReport boundary_flux(const CauchyData& data, const JangPair& pair,
                         const LevelSetSurface& surface, FluxSide side = FluxSide::outward,
                         int n_theta = 24, int n_phi = 48);

// [Hess phi0 / phi0 - Hess phi / phi + (Lap phi / phi - Lap phi0 / phi0) gbar](grad f, .)
// with gbar-covariant derivatives. gbar order >= 1, phi and phi0 order 2, f order >= 1.
Vec3 coe_overdetermined_residual(const Sym2Jet& gbar, const ScalarJet& phi, const ScalarJet& phi0,
                                 const ScalarJet& f);

}  // namespace jangbench
