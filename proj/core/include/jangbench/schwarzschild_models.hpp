#pragma once

// Schwarzschild data in isotropic, standard and Kruskal coordinates, and
// spherically symmetric slices of the exterior written as graphs t = f over the
// static slice.

#include "jangbench/radial_flows.hpp"

namespace jangbench {

struct SchwarzschildParams {
  double m = 1.0;
};

struct KruskalFunctions {
  double alpha = 0.0;  // (r - 2m) e^{r/2m - 1}
  double beta = 0.0;   // (8 m^2 / r) e^{1 - r/2m}
};

KruskalFunctions kruskal_functions(double m, double r);

inline constexpr int kKruskalMaxIterations = 100;

// Inverse of alpha on uv > -2m/e: Lambert-W start, safeguarded Newton polish to
// |alpha(r) - uv| < 1e-13 max(1, |uv|).
double r_from_uv(double m, double uv);

struct KruskalPoint {
  double u = 0.0, v = 0.0, r = 0.0;
};

// u = sqrt(alpha) e^{-t/4m}, v = sqrt(alpha) e^{t/4m}; requires r > 2m.
KruskalPoint exterior_isometry(double m, double t, double r);

// Pullback of 2 beta du dv to the (t, r) plane by the exterior isometry, with
// du, dv from 4th-order differences, compared with the standard form.
struct KruskalPullback {
  double g_tt = 0.0, g_tr = 0.0, g_rr = 0.0;
  double residual = 0.0;  // max relative deviation from -(1-2m/r), 0, (1-2m/r)^-1
};
KruskalPullback kruskal_pullback_fd(double m, double t, double r, double step = 0.0);

// (1 + m/2r)^4 delta, k = 0, on r > m/2 (the neck) and beyond.
CauchyData isotropic_slice(double m);
// delta + (2m/(r - 2m)) x x / r^2, k = 0, on r > 2m.
CauchyData standard_slice(double m);

double standard_radius_from_isotropic(double m, double rho);
double isotropic_radius_from_standard(double m, double r);

Sym2Jet isotropic_metric_jet(double m, const JetVec& x);
Sym2Jet standard_metric_jet(double m, const JetVec& x);

// Max |(F^* g_std - g_iso)_ij| at p, F(x) = (r_std(|x|)/|x|) x.
double chart_isometry_residual(double m, const Point3& p);

enum class CoEKind { kruskal_line, boosted_graph };

// kruskal_line: the straight line v = v_b + slope (u - u_b) in the Kruskal
// plane, leaving the horizon uv = 0 at (u_b, v_b). u_b = 0 gives a boundary on
// u = 0, v_b = 0 a boundary on v = 0, and u_b = v_b = 0 a slice t = 2m log(slope)
// through the bifurcation sphere.
// boosted_graph: t = boost (r - 3m) exp(-((r - 3m)/(width m))^2) over r > 2m.
struct CoESliceSpec {
  CoEKind kind = CoEKind::kruskal_line;
  double u_b = 0.0;
  double v_b = 1.0;
  double slope = 1.0;
  double boost = 0.0;
  double width = 2.0;
  int resolution = 64;  // radial samples used by sweeps over the slice
};

struct CoESlice {
  double m = 1.0;
  CoESliceSpec spec;
  CauchyData data;          // (g, k) of the slice, k = h
  JangPair pair;            // f and phi = phi0 = sqrt(1 - 2m/r)
  ScalarField phi0;
  bool smooth_horizon = false;  // g and k extend smoothly to r = 2m
  RadialCauchyData radial;      // the same data as radial factors
  RadialFunction f_radial, phi_radial;
  RadialFunction gamma_radial;  // radial component of phi^2 df
  RadialFunction s_radial;      // <nu, v>
};

CoESlice coe_slice(double m, const CoESliceSpec& spec);

// Kruskal coordinates of the slice point at radius r (kruskal_line only).
KruskalPoint coe_slice_point(const CoESlice& slice, double r);

}  // namespace jangbench
