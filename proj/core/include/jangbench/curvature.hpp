#pragma once

// Pointwise Riemannian operators on metric jets. Index conventions:
//   gamma[i][j][k]      = Gamma_ij^k
//   riemann[i][j][k][l] = R_ijk^l, with R(d_i, d_j) d_k = R_ijk^l d_l
//   ricci[j][k]         = R_ijk^i  (positive on round spheres)

#include "jangbench/chart_fields.hpp"

namespace jangbench {

using ChristoffelJet = std::array<std::array<std::array<ScalarJet, 3>, 3>, 3>;

struct Christoffel3 {
  Ten3 gamma{};
};

struct CurvatureAtPoint {
  std::array<Ten3, 3> riemann{};
  Mat3 ricci{};
  double scalar = 0.0;
};

struct HessianLaplacian {
  Mat3 hess{};
  double laplacian = 0.0;
};

inline constexpr double kMinMetricDet = 1e-12;

inline double dot3(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

double det3(const Mat3& m);
// Cofactor inverse; throws on det < kMinMetricDet.
Mat3 inverse3(const Mat3& m);
Sym2Jet inverse_jet(const Sym2Jet& g);

ChristoffelJet christoffel_jet(const Sym2Jet& g, const Sym2Jet& g_inv);
Christoffel3 christoffel(const Sym2Jet& g, const Mat3& g_inv);
Christoffel3 christoffel(const Sym2Jet& g);
Christoffel3 values(const ChristoffelJet& gj);

CurvatureAtPoint riemann_ricci_scalar(const Sym2Jet& g);
// Same pipeline given Christoffel jets of order >= 1 and the inverse metric.
CurvatureAtPoint curvature_from_christoffel(const ChristoffelJet& gamma, const Mat3& g_inv);

HessianLaplacian hessian_laplacian(const Sym2Jet& g, const ScalarJet& s);
// Hess s as a jet: d_i d_j s - Gamma_ij^k d_k s.
Sym2Jet hessian_jet(const ChristoffelJet& gamma, const ScalarJet& s);

// (div T)_j = g^im (T_mj,i - Gamma_im^k T_kj - Gamma_ij^k T_mk)
Vec3 divergence_sym2(const Sym2Jet& g, const Sym2Jet& T);
Vec3 divergence_sym2(const Christoffel3& gamma, const Mat3& g_inv, const Sym2Jet& T);
// div w = g^ij (w_j,i - Gamma_ij^k w_k) for a covector jet w.
double divergence_covector(const Christoffel3& gamma, const Mat3& g_inv, const JetVec& w);

// H = div_g(grad s / |grad s|_g).
double level_set_mean_curvature(const Sym2Jet& g, const ScalarJet& s);

// Small dense helpers shared across modules.
Vec3 raise(const Mat3& g_inv, const Vec3& w);
double contract(const Mat3& g_inv, const Vec3& a, const Vec3& b);
double quad(const Mat3& m, const Vec3& a, const Vec3& b);
Vec3 grad_of(const ScalarJet& s);
Vec3 values(const JetVec& w);

}  // namespace jangbench
