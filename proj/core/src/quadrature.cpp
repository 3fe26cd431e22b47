#include "jangbench/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace jangbench {

namespace {

GaussLegendre build_rule(int n) {
  GaussLegendre r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      const double p = std::legendre(n, x);
      const double pm = std::legendre(n - 1, x);
      dp = n * (x * p - pm) / (x * x - 1.0);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double p = std::legendre(n, x);
    const double pm = std::legendre(n - 1, x);
    dp = n * (x * p - pm) / (x * x - 1.0);
    r.nodes[n - 1 - i] = x;
    r.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

}  // namespace

const GaussLegendre& gauss_legendre(int n) {
  if (n < 1) throw Error("Gauss-Legendre rule needs at least one node");
  static std::mutex mu;
  static std::map<int, GaussLegendre> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) {
    if (n == 1)
      it = cache.emplace(n, GaussLegendre{{0.0}, {2.0}}).first;
    else
      it = cache.emplace(n, build_rule(n)).first;
  }
  return it->second;
}

LevelSetSurface LevelSetSurface::coordinate_sphere(double radius, Point3 center) {
  LevelSetSurface s;
  s.center = center;
  s.value = radius;
  s.radius_guess = radius;
  s.level = ScalarField::closed_form([center](const JetVec& x) {
    const ScalarJet a = x[0] - center[0], b = x[1] - center[1], c = x[2] - center[2];
    return sqrt(a * a + b * b + c * c);
  });
  return s;
}

namespace {

double ray_radius(const LevelSetSurface& s, const Vec3& w) {
  auto point = [&](double R) {
    return Point3{s.center[0] + R * w[0], s.center[1] + R * w[1], s.center[2] + R * w[2]};
  };
  auto F = [&](double R) { return s.level.value(point(R)) - s.value; };
  double R = s.radius_guess;
  // Newton first; fall back to bracketing.
  for (int it = 0; it < 50; ++it) {
    const ScalarJet j = s.level.jet(point(R), 1);
    const double dF = j.grad[0] * w[0] + j.grad[1] * w[1] + j.grad[2] * w[2];
    const double f = j.value - s.value;
    if (dF <= 0.0) break;
    const double step = f / dF;
    const double next = R - step;
    if (!(next > 0.0)) break;
    R = next;
    if (std::abs(step) <= 1e-15 * std::max(1.0, R)) return R;
  }
  double lo = s.radius_guess, hi = s.radius_guess;
  while (F(lo) > 0.0) {
    lo *= 0.5;
    if (lo < 1e-12) throw Error("level-set surface: ray root not bracketed");
  }
  while (F(hi) < 0.0) {
    hi *= 2.0;
    if (hi > 1e12) throw Error("level-set surface: ray root not bracketed");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (F(mid) > 0.0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::vector<SurfaceSample> sample_surface(const LevelSetSurface& s, int n_theta, int n_phi) {
  const auto& rt = gauss_legendre(n_theta);
  const auto& rp = gauss_legendre(n_phi);
  const double pi = std::numbers::pi;
  std::vector<SurfaceSample> out;
  out.reserve(static_cast<std::size_t>(n_theta) * n_phi);
  for (int a = 0; a < n_theta; ++a) {
    const double th = 0.5 * pi * (rt.nodes[a] + 1.0);
    const double wt = 0.5 * pi * rt.weights[a];
    for (int b = 0; b < n_phi; ++b) {
      const double ph = pi * (rp.nodes[b] + 1.0);
      const double wp = pi * rp.weights[b];
      const Vec3 w{std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)};
      const Vec3 w_th{std::cos(th) * std::cos(ph), std::cos(th) * std::sin(ph), -std::sin(th)};
      const Vec3 w_ph{-std::sin(th) * std::sin(ph), std::sin(th) * std::cos(ph), 0.0};
      const double R = ray_radius(s, w);
      SurfaceSample smp;
      smp.x = {s.center[0] + R * w[0], s.center[1] + R * w[1], s.center[2] + R * w[2]};
      const ScalarJet j = s.level.jet(smp.x, 1);
      const double gw = j.grad[0] * w[0] + j.grad[1] * w[1] + j.grad[2] * w[2];
      if (!(std::abs(gw) > 0.0)) throw Error("level-set surface: ray tangent to surface");
      const double Rth =
          -R * (j.grad[0] * w_th[0] + j.grad[1] * w_th[1] + j.grad[2] * w_th[2]) / gw;
      const double Rph =
          -R * (j.grad[0] * w_ph[0] + j.grad[1] * w_ph[1] + j.grad[2] * w_ph[2]) / gw;
      for (int i = 0; i < 3; ++i) {
        smp.t_theta[i] = Rth * w[i] + R * w_th[i];
        smp.t_phi[i] = Rph * w[i] + R * w_ph[i];
      }
      smp.weight = wt * wp;
      out.push_back(smp);
    }
  }
  return out;
}

double area_element(const Mat3& g, const Vec3& t1, const Vec3& t2) {
  double a = 0, b = 0, c = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      a += g[i][j] * t1[i] * t1[j];
      b += g[i][j] * t1[i] * t2[j];
      c += g[i][j] * t2[i] * t2[j];
    }
  const double d = a * c - b * b;
  return d > 0.0 ? std::sqrt(d) : 0.0;
}

double surface_area(const LevelSetSurface& s, const Sym2Field& g, int n_theta, int n_phi) {
  double A = 0.0;
  for (const auto& smp : sample_surface(s, n_theta, n_phi))
    A += smp.weight * area_element(g.value(smp.x), smp.t_theta, smp.t_phi);
  return A;
}

}  // namespace jangbench
