#include <doctest.h>

#include <cmath>
#include <random>

#include "jangbench/random_data.hpp"
#include "jangbench/schwarzschild_models.hpp"
#include "jangbench/static_spacetime.hpp"
#include "test_support.hpp"

using namespace jangbench;
using namespace testsupport;

namespace {

constexpr double kPi = 3.14159265358979323846;

double alpha_ref(double m, double r) { return (r - 2.0 * m) * std::exp(r / (2.0 * m) - 1.0); }

// Plain bisection on [0, hi] for alpha(r) = uv.
double bisect_r(double m, double uv) {
  double lo = 0.0, hi = 4.0 * m;
  while (alpha_ref(m, hi) < uv) hi *= 2.0;
  for (int i = 0; i < 400; ++i) {
    const double mid = 0.5 * (lo + hi);
    (alpha_ref(m, mid) < uv ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

Point3 point_at(double r, std::mt19937_64& rng) {
  std::normal_distribution<double> N;
  Vec3 d{N(rng), N(rng), N(rng)};
  const double n = std::sqrt(dot3(d, d));
  return {r * d[0] / n, r * d[1] / n, r * d[2] / n};
}

CoESliceSpec line(double u_b, double v_b, double slope) {
  CoESliceSpec s;
  s.u_b = u_b;
  s.v_b = v_b;
  s.slope = slope;
  return s;
}

}  // namespace

TEST_CASE("Kruskal alpha and beta at special radii") {
  for (double m : {0.5, 1.0, 2.0}) {
    CHECK(kruskal_functions(m, 2.0 * m).alpha == 0.0);
    CHECK(kruskal_functions(m, 2.0 * m).beta == doctest::Approx(4.0 * m).epsilon(1e-15));
    CHECK(kruskal_functions(m, 4.0 * m).alpha == doctest::Approx(2.0 * m * std::exp(1.0)).epsilon(1e-15));
  }
  CHECK_THROWS_AS(kruskal_functions(1.0, 0.0), Error);
  CHECK_THROWS_AS(kruskal_functions(1.0, -1.0), Error);
  CHECK_THROWS_AS(kruskal_functions(0.0, 1.0), Error);
}

TEST_CASE("r_from_uv inverts alpha") {
  const double m = 1.0;
  CHECK(r_from_uv(m, 0.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(r_from_uv(m, 2.0 * std::exp(1.0)) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK_THROWS_AS(r_from_uv(m, -2.0 / std::exp(1.0)), Error);
  CHECK_THROWS_AS(r_from_uv(m, -1.0), Error);
  CHECK_THROWS_AS(r_from_uv(m, NAN), Error);

  std::mt19937_64 rng(11);
  for (double mm : {0.5, 1.0, 2.0}) {
    const double floor = -2.0 * mm / std::exp(1.0);
    std::uniform_real_distribution<double> U(floor * 0.999, 50.0 * mm);
    std::uniform_real_distribution<double> L(-3.0, 40.0);
    for (int i = 0; i < 200; ++i) {
      const double uv = i % 2 ? U(rng) : std::pow(10.0, L(rng));
      const double r = r_from_uv(mm, uv);
      CHECK(r > 0.0);
      CHECK(std::abs(alpha_ref(mm, r) - uv) <= 1e-12 * std::max(1.0, std::abs(uv)));
    }
  }
}

TEST_CASE("r_from_uv approaches zero monotonically near the floor, matching bisection") {
  const double m = 1.0;
  const double floor = -2.0 * m / std::exp(1.0);
  double prev = 2.0 * m;
  for (double eps : {1e-1, 1e-2, 1e-4, 1e-6, 1e-8, 1e-10}) {
    const double uv = floor + eps;
    const double r = r_from_uv(m, uv);
    const double rb = bisect_r(m, uv);
    const double slope = std::exp(rb / (2.0 * m) - 1.0) * rb / (2.0 * m);
    CHECK(r < prev);
    CHECK(std::abs(r - rb) <= 2e-13 * std::max(1.0, std::abs(uv)) / slope + 1e-15);
    prev = r;
  }
  CHECK(prev < 1e-4);
}

TEST_CASE("exterior isometry lands in the first quadrant with uv = alpha") {
  const double m = 1.0;
  const KruskalPoint p = exterior_isometry(m, 0.0, 3.0);
  CHECK(p.u == p.v);
  CHECK(p.u == doctest::Approx(std::sqrt(alpha_ref(m, 3.0))).epsilon(1e-15));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> T(-10.0, 10.0), R(2.01, 30.0);
  for (int i = 0; i < 50; ++i) {
    const double t = T(rng), r = R(rng);
    const KruskalPoint k = exterior_isometry(m, t, r);
    CHECK(k.u > 0.0);
    CHECK(k.v > 0.0);
    CHECK(k.u * k.v == doctest::Approx(alpha_ref(m, r)).epsilon(1e-14));
    CHECK(r_from_uv(m, k.u * k.v) == doctest::Approx(r).epsilon(1e-13));
  }
  CHECK_THROWS_AS(exterior_isometry(m, 0.0, 2.0), Error);
  CHECK_THROWS_AS(exterior_isometry(m, 0.0, 1.0), Error);
}

TEST_CASE("Kruskal metric pulls back to the standard exterior metric") {
  std::mt19937_64 rng(17);
  for (double m : {0.5, 1.0, 2.0}) {
    std::uniform_real_distribution<double> T(-5.0 * m, 5.0 * m), R(2.05 * m, 20.0 * m);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) worst = std::max(worst, kruskal_pullback_fd(m, T(rng), R(rng)).residual);
    CHECK(worst < 1e-8);
  }
  // Lorentzian signature in the (t, r) plane.
  const auto p = kruskal_pullback_fd(1.0, 0.3, 5.0);
  CHECK(p.g_tt < 0.0);
  CHECK(p.g_rr > 0.0);
}

TEST_CASE("isotropic slice: zero scalar curvature and horizon area 16 pi m^2") {
  for (double m : {0.5, 1.0, 2.0}) {
    const CauchyData d = isotropic_slice(m);
    CHECK(d.asymptotics.mass_hint.value() == m);
    const double A = surface_area(LevelSetSurface::coordinate_sphere(0.5 * m), d.g);
    CHECK(std::abs(A - 16.0 * kPi * m * m) < 1e-10 * A);
    CHECK(std::abs(std::sqrt(A / (16.0 * kPi)) - m) < 1e-10);
    for (const Point3& p : random_points(5, 10, 3.0 * m)) {
      if (std::sqrt(dot3(p, p)) < 0.2 * m) continue;
      CHECK(std::abs(riemann_ricci_scalar(d.g.jet(p, 2)).scalar) < 1e-11);
      CHECK(energy_momentum_density(d, p).mu == doctest::Approx(0.0).epsilon(1e-12));
    }
    // The radial description gives the same metric.
    const Sym2Field cart = cartesian_metric(isotropic_schwarzschild_radial(m));
    const Point3 q{0.7 * m, -0.4 * m, 1.1 * m};
    CHECK(max_abs(cart.value(q), d.g.value(q)) < 1e-13);
    CHECK(total_mass_from_profile(isotropic_schwarzschild_radial(m), 50.0 * m, 200.0 * m).m ==
          doctest::Approx(m).epsilon(1e-8));
  }
}

TEST_CASE("isotropic and standard charts are isometric") {
  for (double m : {0.5, 1.0, 2.0}) {
    for (const Point3& p : random_points(9, 20, 10.0 * m)) {
      if (std::sqrt(dot3(p, p)) < 0.6 * m) continue;
      CHECK(chart_isometry_residual(m, p) < 1e-10);
    }
    for (double rho : {0.5 * m, 0.9 * m, 3.0 * m, 100.0 * m}) {
      const double r = standard_radius_from_isotropic(m, rho);
      CHECK(isotropic_radius_from_standard(m, r) == doctest::Approx(rho).epsilon(1e-13));
    }
    CHECK(standard_radius_from_isotropic(m, 0.5 * m) == doctest::Approx(2.0 * m).epsilon(1e-15));
  }
  CHECK_THROWS_AS(isotropic_radius_from_standard(1.0, 1.0), Error);
  CHECK_THROWS_AS(chart_isometry_residual(1.0, {0.1, 0.0, 0.0}), Error);
}

TEST_CASE("t = const slice is the standard slice with constant f") {
  const double m = 1.0;
  const CoESlice s = coe_slice(m, line(0.0, 0.0, 2.0));
  CHECK_FALSE(s.smooth_horizon);
  const CauchyData std_slice = standard_slice(m);
  std::mt19937_64 rng(1);
  for (double r : {2.5, 4.0, 9.0}) {
    const Point3 p = point_at(r, rng);
    CHECK(s.pair.f.value(p) == doctest::Approx(2.0 * m * std::log(2.0)).epsilon(1e-13));
    CHECK(max_abs(s.pair.f.jet(p, 1).grad, Vec3{}) < 1e-13);
    CHECK(max_abs(s.data.k.value(p), Mat3{}) < 1e-13);
    CHECK(max_abs(s.data.g.value(p), std_slice.g.value(p)) < 1e-12);
  }
}

TEST_CASE("Kruskal line slices: induced metric, f and phi match the Kruskal picture") {
  const double m = 1.5;
  for (const auto& spec : {line(0.0, 1.0, 1.0), line(0.0, 0.3, 2.5), line(0.8, 0.0, 0.7)}) {
    const CoESlice s = coe_slice(m, spec);
    CHECK(s.smooth_horizon);
    std::mt19937_64 rng(4);
    for (double r : {2.2 * m, 3.0 * m, 6.0 * m, 12.0 * m}) {
      const KruskalPoint k = coe_slice_point(s, r);
      CHECK(k.u >= 0.0);
      CHECK(k.v >= 0.0);
      CHECK(k.u * k.v == doctest::Approx(alpha_ref(m, r)).epsilon(1e-12));
      // g_rr = 2 beta u'(r) v'(r) along the line, by central differences.
      const double h = 1e-4 * m;
      const double du = (coe_slice_point(s, r + h).u - coe_slice_point(s, r - h).u) / (2.0 * h);
      const double dv = (coe_slice_point(s, r + h).v - coe_slice_point(s, r - h).v) / (2.0 * h);
      const double grr_fd = 2.0 * kruskal_functions(m, r).beta * du * dv;
      CHECK(s.radial.g.grr(r) == doctest::Approx(grr_fd).epsilon(1e-7));

      const Point3 p = point_at(r, rng);
      CHECK(s.pair.f.value(p) == doctest::Approx(2.0 * m * std::log(k.v / k.u)).epsilon(1e-12));
      const double p2 = std::pow(s.pair.phi.value(p), 2);
      CHECK(2.0 * m * p2 / (1.0 - p2) * std::exp(p2 / (1.0 - p2)) ==
            doctest::Approx(k.u * k.v).epsilon(1e-12));
    }
  }
}

TEST_CASE("case-of-equality slices solve the generalized Jang equation with k = h") {
  const double m = 1.0;
  CoESliceSpec boosted;
  boosted.kind = CoEKind::boosted_graph;
  boosted.boost = 0.3;
  for (const auto& spec : {line(0.0, 1.0, 1.0), line(0.5, 0.0, 2.0), boosted}) {
    const CoESlice s = coe_slice(m, spec);
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> R(2.5 * m, 10.0 * m);
    for (int i = 0; i < 20; ++i) {
      const Point3 p = point_at(R(rng), rng);
      const auto geom = deformation_at_point(s.data, s.pair, p);
      CHECK(max_abs(geom.h, s.data.k.value(p)) < 1e-9);
      CHECK(std::abs(generalized_jang_residual(s.data, s.pair, p)) < 1e-9);
      CHECK(schoen_yau_residual(s.data, s.pair, p) < 1e-8);
      CHECK(std::abs(jang_reduced_residual(s.data, s.pair, p)) < 1e-8);
      const auto c = energy_momentum_density(s.data, p);
      CHECK(std::abs(c.mu) < 1e-6);
      CHECK(max_abs(c.J, Vec3{}) < 1e-6);
      CHECK(std::abs(zero_divergence_residual(s.data, s.pair, p).div_phi_q) < 1e-8);
      CHECK(std::abs(blowup_level_set_relation(s.data, s.pair, p)) < 1e-8);
      // The deformed metric is the static slice itself.
      CHECK(max_abs(geom.gbar, standard_slice(m).g.value(p)) < 1e-9);
    }
  }
}

TEST_CASE("coe_slice rejects invalid slice parameters") {
  CHECK_THROWS_AS(coe_slice(1.0, line(0.0, 1.0, 0.0)), Error);
  CHECK_THROWS_AS(coe_slice(1.0, line(0.0, 1.0, -1.0)), Error);
  CHECK_THROWS_AS(coe_slice(1.0, line(0.5, 0.5, 1.0)), Error);
  CHECK_THROWS_AS(coe_slice(1.0, line(-0.5, 0.0, 1.0)), Error);
  CHECK_THROWS_AS(coe_slice(0.0, line(0.0, 1.0, 1.0)), Error);
  CoESliceSpec steep;
  steep.kind = CoEKind::boosted_graph;
  steep.boost = 50.0;
  CHECK_THROWS_AS(coe_slice(1.0, steep), Error);
  CoESliceSpec boosted = steep;
  boosted.boost = 0.2;
  CHECK_THROWS_AS(coe_slice_point(coe_slice(1.0, boosted), 3.0), Error);
}

TEST_CASE("near the horizon phi^2 is linear in uv and f diverges logarithmically") {
  const double m = 1.0;
  const CoESlice s = coe_slice(m, line(0.0, 1.0, 1.0));
  std::mt19937_64 rng(2);
  double prev_gap = 1.0;
  std::vector<double> fs, logs;
  for (double eps : {1e-2, 1e-4, 1e-6, 1e-8}) {
    const double r = 2.0 * m * (1.0 + eps);
    const KruskalPoint k = coe_slice_point(s, r);
    const Point3 p = point_at(r, rng);
    const double p2 = s.pair.phi_squared->value(p);
    const double gap = std::abs(2.0 * m * p2 / (k.u * k.v) - 1.0);
    CHECK(gap < prev_gap);
    prev_gap = gap;
    fs.push_back(s.pair.f.value(p));
    logs.push_back(std::log(1.0 / eps));
  }
  CHECK(prev_gap < 1e-7);
  // f ~ 2m log(1/eps) + const as u -> 0 with v -> v_b.
  const double slope = (fs[3] - fs[2]) / (logs[3] - logs[2]);
  CHECK(slope == doctest::Approx(2.0 * m).epsilon(1e-6));
}

TEST_CASE("boundary conditions on the horizon of Kruskal line slices") {
  const double m = 1.0;
  struct Case {
    CoESliceSpec spec;
    HorizonClass expected;
  };
  for (const auto& c : {Case{line(0.0, 1.0, 1.0), HorizonClass::future_AH},
                        Case{line(0.6, 0.0, 1.5), HorizonClass::past_AH}}) {
    const CoESlice s = coe_slice(m, c.spec);
    const auto horizon = LevelSetSurface::coordinate_sphere(2.0 * m);
    const auto probe = LevelSetSurface::coordinate_sphere(2.0 * m * (1.0 + 1e-3));
    const auto rep = boundary_condition_check(s.pair, s.data, horizon, probe);
    CHECK(rep.horizon_class == c.expected);
    CHECK(rep.sup_phi < 5e-2);
    CHECK(rep.sup_normal_mismatch < 5e-2);
  }
}

TEST_CASE("Penrose equality end to end on case-of-equality slices") {
  for (double m : {0.5, 1.0, 2.0}) {
    const CoESlice s = coe_slice(m, line(0.0, 1.0, 1.0));
    const double mass = total_mass_from_profile(s.radial.g, 50.0 * m, 200.0 * m).m;
    const double A = surface_area(LevelSetSurface::coordinate_sphere(2.0 * m), s.data.g);
    CHECK(std::abs(penrose_margin(mass, A).margin) < 1e-6);
  }
}

TEST_CASE("boundary flux terms vanish and their parts decay over the sweeps") {
  const double m = 1.0;
  const CoESlice s = coe_slice(m, line(0.0, 1.0, 1.0));
  double prev_h = INFINITY, prev_k = INFINITY;
  for (double r : {4.0, 6.0, 10.0, 16.0, 24.0}) {
    const auto f = boundary_flux(s.data, s.pair, LevelSetSurface::coordinate_sphere(r * m));
    CHECK(std::abs(f.total) < 1e-6);
    CHECK(std::abs(f.h_part) < prev_h);
    CHECK(std::abs(f.k_part) < prev_k);
    prev_h = std::abs(f.h_part);
    prev_k = std::abs(f.k_part);
  }
  prev_h = INFINITY;
  for (double eps : {1e-1, 1e-2, 1e-3, 1e-4}) {
    const auto f = boundary_flux(s.data, s.pair,
                                 LevelSetSurface::coordinate_sphere(2.0 * m * (1.0 + eps)),
                                 FluxSide::inward);
    CHECK(std::abs(f.total) < 1e-6);
    CHECK(std::abs(f.h_part) < prev_h);
    prev_h = std::abs(f.h_part);
  }
}
