#include "jangbench/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace jangbench {

ConstraintAtPoint energy_momentum_density(const Sym2Jet& g, const Sym2Jet& k) {
  const double pi = std::numbers::pi;
  const Sym2Jet gi_j = inverse_jet(g);
  const Mat3 gi = gi_j.values();
  const CurvatureAtPoint curv = riemann_ricci_scalar(g);
  const Mat3 kv = k.values();

  double trk = 0.0, norm2 = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      trk += gi[i][j] * kv[i][j];
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) norm2 += gi[i][a] * gi[j][b] * kv[i][j] * kv[a][b];
    }

  ScalarJet trk_jet = ScalarJet::constant(0.0, 1);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) trk_jet += gi_j.c[i][j].truncated(1) * k.c[i][j].truncated(1);

  const Vec3 divk = divergence_sym2(christoffel(g, gi), gi, k);
  ConstraintAtPoint out;
  out.mu = (curv.scalar + trk * trk - norm2) / (16.0 * pi);
  for (int j = 0; j < 3; ++j) out.J[j] = (divk[j] - trk_jet.grad[j]) / (8.0 * pi);
  out.margin = out.mu - std::sqrt(std::max(0.0, quad(gi, out.J, out.J)));
  return out;
}

ConstraintAtPoint energy_momentum_density(const CauchyData& data, const Point3& p) {
  return energy_momentum_density(data.g.jet(p, 2), data.k.jet(p, 1));
}

double dominant_energy_margin(const CauchyData& data, const Point3& p) {
  return energy_momentum_density(data, p).margin;
}

std::string to_string(HorizonClass c) {
  switch (c) {
    case HorizonClass::future_AH: return "future_AH";
    case HorizonClass::past_AH: return "past_AH";
    case HorizonClass::future_and_past_AH: return "future_and_past_AH";
    case HorizonClass::generalized_AH: return "generalized_AH";
    case HorizonClass::generalized_trapped: return "generalized_trapped";
    case HorizonClass::untrapped: return "untrapped";
  }
  return "unknown";
}

bool SurfaceExpansion::has(HorizonClass c) const {
  return std::find(candidates.begin(), candidates.end(), c) != candidates.end();
}

namespace {

std::vector<HorizonClass> labels(double H, double trk, double eps) {
  std::vector<HorizonClass> out;
  const bool fut = std::abs(H + trk) < eps;
  const bool past = std::abs(H - trk) < eps;
  if (fut && past) out.push_back(HorizonClass::future_and_past_AH);
  if (fut) out.push_back(HorizonClass::future_AH);
  if (past) out.push_back(HorizonClass::past_AH);
  if (std::abs(H - std::abs(trk)) < eps) out.push_back(HorizonClass::generalized_AH);
  if (H < std::abs(trk) - eps) out.push_back(HorizonClass::generalized_trapped);
  if (out.empty()) out.push_back(HorizonClass::untrapped);
  return out;
}

}  // namespace

SurfaceExpansion classify_expansion(double H, double trk, double eps) {
  // A band of +-10% around eps separates clear verdicts from boundary cases.
  constexpr double kBand = 0.1;
  SurfaceExpansion s;
  s.H = H;
  s.trk = trk;
  const auto tight = labels(H, trk, eps * (1.0 - kBand));
  const auto loose = labels(H, trk, eps * (1.0 + kBand));
  const auto mid = labels(H, trk, eps);
  s.classification = mid.front();
  s.candidates = mid;
  s.ambiguous = tight != loose;
  if (s.ambiguous)
    for (const auto& set : {tight, loose})
      for (HorizonClass c : set)
        if (!s.has(c)) s.candidates.push_back(c);
  return s;
}

Vec3 unit_normal(const Mat3& gi, const Vec3& dl) {
  const Vec3 up = raise(gi, dl);
  const double n2 = up[0] * dl[0] + up[1] * dl[1] + up[2] * dl[2];
  if (!(n2 > 1e-300)) throw Error("level set: vanishing gradient");
  const double n = std::sqrt(n2);
  return {up[0] / n, up[1] / n, up[2] / n};
}

double surface_trace(const Mat3& gi, const Vec3& nu, const Mat3& k) {
  double s = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) s += (gi[i][j] - nu[i] * nu[j]) * k[i][j];
  return s;
}

SurfaceExpansion surface_expansion(const CauchyData& data, const ScalarField& level,
                                   const Point3& p, double eps) {
  const Sym2Jet g = data.g.jet(p, 1);
  const ScalarJet s = level.jet(p, 2);
  const Mat3 gi = inverse3(g.values());
  const double H = level_set_mean_curvature(g, s);
  const Vec3 nu = unit_normal(gi, s.grad);
  const double trk = surface_trace(gi, nu, data.k.value(p));
  return classify_expansion(H, trk, eps);
}

}  // namespace jangbench
