#pragma once

// Energy and momentum densities of Cauchy data (g, k), the dominant energy
// margin, and apparent-horizon classification of level-set surfaces.

#include <optional>
#include <string>
#include <vector>

#include "jangbench/curvature.hpp"
#include "jangbench/quadrature.hpp"

namespace jangbench {

struct Asymptotics {
  std::optional<double> mass_hint;
  double end_radius = 0.0;
};

struct CauchyData {
  std::string domain;  // free-form description of where the chart is valid
  Sym2Field g;
  Sym2Field k;
  Asymptotics asymptotics;
};

struct ConstraintAtPoint {
  double mu = 0.0;
  Vec3 J{};  // covector
  double margin = 0.0;  // mu - |J|_g
};

// 16 pi mu = R + (tr k)^2 - |k|^2,  8 pi J = div(k - tr(k) g).
ConstraintAtPoint energy_momentum_density(const CauchyData& data, const Point3& p);
// Same, from jets already in hand (g order 2, k order 1).
ConstraintAtPoint energy_momentum_density(const Sym2Jet& g, const Sym2Jet& k);
double dominant_energy_margin(const CauchyData& data, const Point3& p);

enum class HorizonClass {
  future_AH,
  past_AH,
  future_and_past_AH,
  generalized_AH,
  generalized_trapped,
  untrapped
};

std::string to_string(HorizonClass c);

struct SurfaceExpansion {
  double H = 0.0;
  double trk = 0.0;
  HorizonClass classification = HorizonClass::untrapped;
  // All labels that hold at this point under the tolerance; when `ambiguous` is
  // set, also the labels reachable by moving the tolerance within its band.
  std::vector<HorizonClass> candidates;
  bool ambiguous = false;

  bool has(HorizonClass c) const;
};

inline constexpr double kHorizonTolerance = 1e-6;

// Classification of (H, tr_S k) alone.
SurfaceExpansion classify_expansion(double H, double trk, double eps = kHorizonTolerance);

// Expansion of the level set of `level` through p, with outward normal along
// grad(level).
SurfaceExpansion surface_expansion(const CauchyData& data, const ScalarField& level,
                                   const Point3& p, double eps = kHorizonTolerance);

// Unit outward normal (as a vector) of a level set.
Vec3 unit_normal(const Mat3& g_inv, const Vec3& dlevel);
// tr_S(k) = (g^ij - nu^i nu^j) k_ij.
double surface_trace(const Mat3& g_inv, const Vec3& nu, const Mat3& k);

}  // namespace jangbench
