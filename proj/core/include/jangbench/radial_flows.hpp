#pragma once

// Spherically symmetric metrics grr dr^2 + gss dsigma^2 and the radial forms of
// inverse mean curvature flow, the Hawking mass, the generalized Jang equation,
// total mass extraction and the Penrose margin.

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "jangbench/jang_deformation.hpp"

namespace jangbench {

// A function of the radius evaluated on a jet in the first variable.
using RadialFunction = std::function<ScalarJet(const ScalarJet& r)>;

ScalarJet radial_jet(const RadialFunction& fn, double r, int order);

// d/dr of a radial function, usable on jets of order up to 2.
RadialFunction radial_derivative(RadialFunction fn);

// The radial factor is stored inverted, so that charts where grr blows up at a
// horizon (the standard Schwarzschild chart) stay finite there.
struct RadialMetric {
  RadialFunction grr_inv;
  RadialFunction gss;
  double r_min = 0.0;
  double r_max = std::numeric_limits<double>::infinity();
  std::string name;

  double grr(double r) const;
  void check_range(double r) const;
};

RadialMetric flat_radial();
RadialMetric standard_schwarzschild_radial(double m);
RadialMetric isotropic_schwarzschild_radial(double m);

// grr = 1 / (1 - 2 M(r)/r), gss = r^2 with M nondecreasing, so that the scalar
// curvature 4 M'/r^2 is nonnegative. M is a seeded sum of tanh steps.
struct MassProfileMetric {
  RadialMetric metric;
  double r_start = 0.0;  // where 2M/r < 1/2 holds from here on
};
MassProfileMetric positive_curvature_radial(std::uint64_t seed);

// Natural cubic spline through (r, y) samples.
RadialFunction spline_function(std::vector<double> r, std::vector<double> y);

// The three-dimensional metric with these radial factors in Cartesian
// coordinates, and radial scalars F(|x|).
Sym2Field cartesian_metric(const RadialMetric& g);
ScalarField cartesian_scalar(const RadialFunction& fn);

struct SphereGeometry {
  double area = 0.0;
  double H = 0.0;
};

// area = 4 pi gss, H = gss' / (gss sqrt(grr)).
SphereGeometry sphere_geometry(const RadialMetric& g, double r);

// R = (2/psi^2)(1 - psi_s^2) - 4 psi_ss / psi with psi = sqrt(gss), s arclength.
double radial_scalar_curvature(const RadialMetric& g, double r);

// sqrt(area/16 pi) (1 - (1/16 pi) int H^2 dA).
double hawking_mass(double area, double mean_sq_integral);

struct FlowState {
  std::vector<double> r;        // grid, increasing
  std::vector<double> u;        // level-set function, u(r0) = 0; also the flow time t
  std::vector<double> area;     // |Sigma(t)|
  std::vector<double> H;        // mean curvature of Sigma(t)
  std::vector<double> hawking;  // m_H(Sigma(t))
  std::vector<double> Q;        // |grad u| sqrt(A e^u / 16 pi)
  double area_law_error = 0.0;  // max |log(area/area(r0)) - u|
  double step_error = 0.0;      // step-halving estimate of the error in u
};

inline constexpr int kStepsPerDecade = 10000;

// Radial level-set flow u'(r) = sqrt(grr) H = gss'/gss integrated with RK4 from
// u(r0) = 0. steps <= 0 selects kStepsPerDecade per decade in r. Throws when
// H <= 0 strictly inside the interval.
FlowState imcf_radial_solve(const RadialMetric& gbar, double r0, double r1, int steps = 0);

struct GerochReport {
  double margin = 0.0;             // min_t dm_H/dt - sqrt(A/16pi) int Rbar dA / 16pi
  double min_umbilic_gap = 0.0;    // min |II|^2 - H^2/2
  double gauss_bonnet_error = 0.0; // max |int K dA - 4 pi|
  double max_hawking_decrease = 0.0;  // max over steps of m_H(t_i) - m_H(t_i+1)
  std::vector<double> t, dmdt, rhs;   // interior points of the flow
};

GerochReport geroch_monotonicity_check(const FlowState& flow, const RadialMetric& gbar);

// Q at radius r interpolated from the flow; equals H(r) sqrt(area(r)/16 pi).
double q_weight(const FlowState& flow, const RadialMetric& gbar, double r);

struct PhiFromUF {
  double phi = 0.0;
  double B = 0.0;
  double quadratic_residual = 0.0;  // |df|^2 phi^4 + B phi^2 - e^u |du|^2, scaled
  double roundtrip = 0.0;           // |du|_gbar e^{u/2} computed from gbar = g + phi^2 df^2
};

// phi solving phi = |du|_gbar e^{u/2} with gbar = g + phi^2 df^2.
PhiFromUF phi_from_u_f(const ScalarJet& u, const ScalarJet& f, const Mat3& g);

// k = k_rr dr^2 + k_ss dsigma^2.
struct RadialCauchyData {
  RadialMetric g;
  RadialFunction k_rr;
  RadialFunction k_ss;
};

// Cartesian (g, k) built from radial data.
CauchyData cartesian_data(const RadialCauchyData& data);

struct JangRadialOptions {
  double s_end = 0.0;           // <nu, v> at the outer radius
  double tolerance = 1e-10;     // per-step error target of the adaptive integrator
  double blowup_eps = 1e-6;     // |f'| > 1/(eps sqrt(grr)) signals a barrier
  int max_steps = 2000000;
};

struct JangRadialSolution {
  std::vector<double> r;  // decreasing from r1 to r0
  std::vector<double> f;  // f(r1) = 0
  std::vector<double> s;  // <nu, v>
  std::vector<double> ds; // ds/dr
};

// Radial generalized Jang equation in the variable s = <nu, v>:
//   s' = sqrt(grr) (tr_S k - s H + (1 - s^2) k_rr / grr) - (1 - s^2) s phi'/phi,
//   f' = s sqrt(grr) / (phi sqrt(1 - s^2)),
// integrated inward from r1 with an adaptive RK4 step-doubling scheme.
JangRadialSolution generalized_jang_radial_solve(const RadialCauchyData& data,
                                                 const RadialFunction& phi, double r0, double r1,
                                                 const JangRadialOptions& options = {});

// tr_gbar(h - k) at x = r_i * direction, evaluated with the three-dimensional
// deformation pipeline on fields rebuilt from the radial solution.
double jang_radial_residual_3d(const RadialCauchyData& data, const RadialFunction& phi,
                               const JangRadialSolution& sol, std::size_t index,
                               const Vec3& direction);

struct MassFit {
  double m = 0.0;
  double residual = 0.0;  // rms deviation of the sphere masses from m
  int samples = 0;
};

// Least-squares fit of 1 - |dR/ds|^2 = 2m/R over [r_lo, r_hi], where R is the
// areal radius; this is the one-parameter family (1 + m/2r)^4 delta written in
// areal radius. Throws when the residual exceeds max_residual.
MassFit total_mass_from_profile(const RadialMetric& g, double r_lo, double r_hi,
                                int samples = 64, double max_residual = 1e-6);

struct PenroseReport {
  double m = 0.0;
  double A = 0.0;
  double margin = 0.0;
};

PenroseReport penrose_margin(double m, double A);

// Radial profiles on disk: header row, columns r, grr, gss[, k_rr, k_ss, f, phi, u].
struct RadialProfile {
  std::vector<std::string> columns;
  std::map<std::string, std::vector<double>> data;

  std::size_t rows() const;
  bool has(const std::string& column) const;
  const std::vector<double>& column(const std::string& name) const;
};

RadialProfile read_profile_csv(const std::string& path);
void write_profile_csv(const std::string& path, const RadialProfile& profile);
std::string format_profile_csv(const RadialProfile& profile);

RadialProfile sample_profile(const RadialMetric& g, const std::vector<double>& r_grid);
RadialMetric metric_from_profile(const RadialProfile& profile);

}  // namespace jangbench
