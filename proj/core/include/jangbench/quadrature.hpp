#pragma once

// Gauss-Legendre rules and latitude-longitude sampling of star-shaped level-set
// surfaces.

#include <vector>

#include "jangbench/chart_fields.hpp"

namespace jangbench {

struct GaussLegendre {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

// Cached n-point rule.
const GaussLegendre& gauss_legendre(int n);

// Integral of f over [a, b] with an n-point rule.
template <class F>
double integrate_gl(F&& f, double a, double b, int n) {
  const auto& rule = gauss_legendre(n);
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  double s = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    s += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return half * s;
}

// The surface {level(x) = value}, star-shaped about `center`; the outward side is
// where level increases.
struct LevelSetSurface {
  ScalarField level;
  double value = 0.0;
  Point3 center{0.0, 0.0, 0.0};
  double radius_guess = 1.0;

  static LevelSetSurface coordinate_sphere(double radius, Point3 center = {0.0, 0.0, 0.0});
};

struct SurfaceSample {
  Point3 x{};
  Vec3 t_theta{};  // dX/dtheta
  Vec3 t_phi{};    // dX/dphi
  double weight = 0.0;  // product quadrature weight in (theta, phi)
};

inline constexpr int kDefaultThetaNodes = 64;
inline constexpr int kDefaultPhiNodes = 128;

std::vector<SurfaceSample> sample_surface(const LevelSetSurface& s,
                                          int n_theta = kDefaultThetaNodes,
                                          int n_phi = kDefaultPhiNodes);

// sqrt(det) of the induced 2x2 metric spanned by t1, t2.
double area_element(const Mat3& g, const Vec3& t1, const Vec3& t2);

double surface_area(const LevelSetSurface& s, const Sym2Field& g,
                    int n_theta = kDefaultThetaNodes, int n_phi = kDefaultPhiNodes);

}  // namespace jangbench
