#pragma once

// The deformation gbar = g + phi^2 df^2 of Cauchy data (g, k) by a graph function
// f and warping factor phi, the induced second fundamental form h, and residuals
// of the identities relating barred and unbarred quantities.

#include <optional>
#include <string>
#include <vector>

#include "jangbench/constraints.hpp"

namespace jangbench {

struct JangPair {
  ScalarField f;    // jets up to order 3
  ScalarField phi;  // jets up to order 2
  // Optional smooth product fields for evaluation near phi = 0, where |df| may
  // blow up: the covector phi^2 df and the scalar phi^2.
  std::optional<std::array<ScalarField, 3>> phi2_df;
  std::optional<ScalarField> phi_squared;
};

inline constexpr double kPhiFloor = 1e-8;

// Jet-valued deformation at a point. Orders follow the inputs: with g of order 2,
// k of order 1, f of order 3 and phi of order 2, gbar carries second derivatives
// and h, q carry first derivatives.
struct DeformationJets {
  Sym2Jet g, g_inv, k;
  ChristoffelJet gamma;
  ScalarJet f, phi, W;  // W = 1 + phi^2 |df|_g^2
  JetVec df, dphi, f_up, v_up;
  Sym2Jet gbar, gbar_inv, h;
  ChristoffelJet gamma_bar;
  JetVec q;  // (h - k)(v, .)
};

DeformationJets deformation_jets(const Sym2Jet& g, const Sym2Jet& k, const ScalarJet& f,
                                 const ScalarJet& phi);
DeformationJets deformation_jets(const CauchyData& data, const JangPair& pair,
                                 const Point3& p, bool allow_phi_limit = false);

struct DeformedGeometry {
  Mat3 gbar{}, gbar_inv{};
  Vec3 v_up{};
  double vbar_norm2 = 0.0;
  Mat3 h{};
  Vec3 q{};
  // Auxiliary values.
  double phi = 0.0;
  Vec3 df{}, dphi{};
  double W = 1.0;
  Mat3 g{}, g_inv{};
  double dfbar_norm2 = 0.0;  // |df|^2 measured by gbar
  // h written with gbar-covariant derivatives; present when order >= 2.
  std::optional<Mat3> h_bar_form;
};

// `order` is the derivative order requested of g and phi (1 or 2); f is taken one
// order higher.
DeformedGeometry deformation_at_point(const CauchyData& data, const JangPair& pair,
                                      const Point3& p, int order = 2,
                                      bool allow_phi_limit = false);
DeformedGeometry geometry_values(const DeformationJets& d);
Mat3 h_bar_representation(const DeformationJets& d);

double reciprocal_norm_residual(const DeformedGeometry& geom);

// tr_gbar(h - k).
double generalized_jang_residual(const CauchyData& data, const JangPair& pair, const Point3& p);
double generalized_jang_residual(const DeformationJets& d);

struct ResidualEntry {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass() const { return value <= tolerance; }
};

struct ResidualVector {
  std::vector<ResidualEntry> entries;
  double max() const;
  bool all_pass() const;
};

inline constexpr double kIdentityTolerance = 1e-10;

// |LHS - RHS| of the eight identities relating g- and gbar-quantities, for an
// arbitrary symmetric k_test.
ResidualVector deformation_identity_residuals(const CauchyData& data, const JangPair& pair,
                                             const Sym2Field& k_test, const Point3& p);
ResidualVector deformation_identity_residuals(const DeformationJets& d, const Sym2Jet& k_test);

struct SchoenYauTerms {
  double rbar_direct = 0.0;
  double rhs = 0.0;
  double energy = 0.0;         // 16 pi (mu - J(v))
  double h_minus_k_norm2 = 0.0;
  double q_norm2 = 0.0;
  double div_term = 0.0;       // -(2/phi) divbar(phi q)
  double trace_terms = 0.0;    // the four terms that vanish on Jang solutions
  double jang_residual = 0.0;  // tr_gbar(h - k)
};

SchoenYauTerms schoen_yau_terms(const DeformationJets& d);
double schoen_yau_residual(const CauchyData& data, const JangPair& pair, const Point3& p);
// Residual of the g-side intermediate form
//   Rbar = 16 pi (mu - J(v)) + (tr h)^2 - (tr k)^2 - |h|^2 + |k|^2
//          + 2 v(tr h) - 2 v(tr k) - 2 div(h)(v) + 2 div(k)(v).
double schoen_yau_intermediate_residual(const DeformationJets& d);

inline constexpr double kJangTolerance = 1e-6;

// Reduced identity valid where tr_gbar(h - k) = 0; throws when the point is not
// on a Jang solution within `jang_tol`.
double jang_reduced_residual(const CauchyData& data, const JangPair& pair, const Point3& p,
                             double jang_tol = kJangTolerance);

struct ZeroDivergence {
  double div_phi_q = 0.0;  // divbar(phi q)
  double div_st = 0.0;     // (1/phi) divbar(phi q)
};

ZeroDivergence zero_divergence_residual(const CauchyData& data, const JangPair& pair,
                                        const Point3& p);

struct MeanCurvatureTransform {
  double formula = 0.0;            // general form, any level function
  double formula_phi_level = 0.0;  // form specialized to level sets of phi
  double direct = 0.0;             // mean curvature computed with gbar
  double H = 0.0;                  // mean curvature computed with g
};

MeanCurvatureTransform mean_curvature_transform(const CauchyData& data, const JangPair& pair,
                                                const ScalarField& level, const Point3& p);

// h(nu, nu) = (nabla_nu (phi^2 df))(nu) / (phi^2 + |phi^2 df|^2)^(1/2).
double boundary_hnn(const JangPair& pair, const Sym2Jet& g, const Vec3& nu, const Point3& p);

// <nu, v> H_S - tr_S k + (h - k)(nu, nu) / (1 + phi^2 |df|^2) on the level set of f
// through p, nu = grad f / |grad f|. Equals tr_gbar(h - k).
double blowup_level_set_relation(const CauchyData& data, const JangPair& pair,
                                 const Point3& p);

struct BoundaryConditionReport {
  HorizonClass horizon_class = HorizonClass::untrapped;
  double sup_phi = 0.0;
  double sup_normal_mismatch = 0.0;  // sup |<nu, v> - sign(tr_S k)|
  double mean_trk = 0.0;
  int samples = 0;
};

// Checks phi = 0 and <nu, v> = sign(tr_S k) on a generalized apparent horizon.
// The classification is evaluated on `horizon`; values are sampled on `probe`
// (the horizon itself, or a nearby level set when fields are singular on it).
BoundaryConditionReport boundary_condition_check(const JangPair& pair, const CauchyData& data,
                                                 const LevelSetSurface& horizon,
                                                 const std::optional<LevelSetSurface>& probe,
                                                 int n_theta = 8, int n_phi = 16,
                                                 double eps = kHorizonTolerance);

// <nu, v> computed stably from phi^2 df when available.
double normal_velocity(const JangPair& pair, const Mat3& g_inv, const Vec3& nu,
                       const Point3& p);

}  // namespace jangbench
