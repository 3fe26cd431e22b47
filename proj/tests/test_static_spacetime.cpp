#include <doctest.h>

#include <cmath>

#include "jangbench/random_data.hpp"
#include "jangbench/static_spacetime.hpp"
#include "test_support.hpp"

using namespace jangbench;
using namespace testsupport;

namespace {

ScalarField schwarzschild_lapse(double m) {
  return ScalarField::closed_form([m](const JetVec& x) { return sqrt(1.0 - 2.0 * m / radius(x)); });
}

// Exact 4-metric jets of -phi^2 dt^2 + gbar from closed-form jets.
MetricJetND static_metric_exact(const Sym2Field& gbar, const ScalarField& phi, const Point3& p) {
  const Sym2Jet g = gbar.jet(p, 2);
  const ScalarJet f = phi.jet(p, 2);
  const ScalarJet lapse2 = -(f * f);
  MetricJetND m;
  m.n = 4;
  m.g.assign(16, 0.0);
  m.dg.assign(64, 0.0);
  m.ddg.assign(256, 0.0);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      if ((a == 0) != (b == 0)) continue;
      const ScalarJet& J = a == 0 ? lapse2 : g.c[a - 1][b - 1];
      m.g[a * 4 + b] = J.value;
      for (int d = 1; d < 4; ++d) {
        m.dg[(a * 4 + b) * 4 + d] = J.grad[d - 1];
        for (int e = 1; e < 4; ++e) m.ddg[((a * 4 + b) * 4 + d) * 4 + e] = J.hess[d - 1][e - 1];
      }
    }
  return m;
}

// Conformally flat w^4 delta with w = 1 + sum c_i / sqrt(|x - x_i|^2 + a_i^2): R >= 0.
Sym2Field positive_scalar_metric() {
  return Sym2Field::closed_form([](const JetVec& x) {
    auto bump = [&](double c, Point3 q, double a) {
      const ScalarJet dx = x[0] - q[0], dy = x[1] - q[1], dz = x[2] - q[2];
      return c / sqrt(dx * dx + dy * dy + dz * dz + a * a);
    };
    const ScalarJet w = 1.0 + bump(0.3, {0.2, 0.0, -0.1}, 1.2) + bump(0.2, {-0.4, 0.3, 0.2}, 1.5);
    Sym2Jet g = Sym2Jet::constant({}, x[0].order);
    for (int i = 0; i < 3; ++i) g.c[i][i] = pow(w, 4.0);
    return g;
  });
}

}  // namespace

TEST_CASE("Minkowski has vanishing static curvature") {
  const auto s = static_curvature(Sym2Field::flat(), ScalarField::constant(1.0), {0.1, 0.2, 0.3});
  CHECK(s.ric00 == 0.0);
  CHECK(s.scalar4 == 0.0);
  CHECK(s.einstein00 == 0.0);
  CHECK(max_abs(s.ric_spatial, Mat3{}) == 0.0);
  CHECK(max_abs(s.einstein_spatial, Mat3{}) == 0.0);
  CHECK_THROWS_AS(static_curvature(Sym2Field::flat(), ScalarField::constant(0.0), {0, 0, 0}), Error);
}

TEST_CASE("Schwarzschild is a static vacuum") {
  const double m = 1.0;
  const auto g = standard_schwarzschild(m);
  const auto phi = schwarzschild_lapse(m);
  const auto gfd = Sym2Field::finite_difference([g](const Point3& x) { return g.value(x); }, 1e-3);
  const auto pfd = ScalarField::finite_difference([phi](const Point3& x) { return phi.value(x); },
                                                  1e-3);
  for (const Point3& p : {Point3{3, 0, 0}, Point3{2.5, 2, -1}, Point3{-4, 1, 3}}) {
    for (const auto& s : {static_curvature(g, phi, p), static_curvature(gfd, pfd, p)}) {
      CHECK(std::abs(s.ric00) < 1e-8);
      CHECK(std::abs(s.scalar4) < 1e-8);
      CHECK(std::abs(s.einstein00) < 1e-8);
      CHECK(max_abs(s.ric_spatial, Mat3{}) < 1e-8);
      CHECK(max_abs(s.einstein_spatial, Mat3{}) < 1e-8);
    }
  }
}

TEST_CASE("static curvature matches the four-dimensional fd oracle") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto g = random_metric(seed);
    const auto phi = random_trig_scalar(seed + 7, 1.0, 0.3);
    for (const Point3& p : random_points(seed + 20, 4)) {
      const auto s = static_curvature(g, phi, p);
      const auto c = curvature_nd(static_metric_fd(g, phi, p, 1e-3));
      CHECK(std::abs(c.ricci[0] - s.ric00) < 1e-7);
      for (int j = 0; j < 3; ++j) {
        CHECK(std::abs(c.ricci[j + 1]) < 1e-7);
        CHECK(std::abs(c.ricci[(j + 1) * 4]) < 1e-7);
        for (int k = 0; k < 3; ++k)
          CHECK(std::abs(c.ricci[(j + 1) * 4 + k + 1] - s.ric_spatial[j][k]) < 1e-7);
      }
      CHECK(std::abs(c.scalar - s.scalar4) < 1e-7);
      // Einstein tensor from the oracle.
      const double phi0 = phi.value(p);
      CHECK(std::abs(c.ricci[0] + 0.5 * c.scalar * phi0 * phi0 - s.einstein00) < 1e-7);
    }
  }
}

TEST_CASE("generic pipeline reproduces the three-dimensional curvature") {
  const auto g = random_metric(9);
  const Point3 p{0.1, 0.4, -0.3};
  const Sym2Jet gj = g.jet(p, 2);
  MetricJetND m;
  m.n = 3;
  m.g.resize(9);
  m.dg.resize(27);
  m.ddg.resize(81);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      m.g[a * 3 + b] = gj.comp(a, b);
      for (int c = 0; c < 3; ++c) {
        m.dg[(a * 3 + b) * 3 + c] = gj.d1(a, b, c);
        for (int d = 0; d < 3; ++d) m.ddg[((a * 3 + b) * 3 + c) * 3 + d] = gj.d2(a, b, c, d);
      }
    }
  const auto nd = curvature_nd(m);
  const auto c3 = riemann_ricci_scalar(gj);
  CHECK(std::abs(nd.scalar - c3.scalar) < 1e-12);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) CHECK(std::abs(nd.ricci[a * 3 + b] - c3.ricci[a][b]) < 1e-12);
  MetricJetND bad = m;
  bad.dg.pop_back();
  CHECK_THROWS_AS(curvature_nd(bad), Error);
}

TEST_CASE("the static Einstein tensor is divergence free") {
  const auto g = random_metric(31);
  const auto phi = random_trig_scalar(32, 1.0, 0.3);
  // 4D Einstein tensor samples (10 components), differenced in x.
  auto einstein = [&](const Point3& x, double* out) {
    const auto s = static_curvature(g, phi, x);
    int c = 0;
    for (int a = 0; a < 4; ++a)
      for (int b = a; b < 4; ++b) {
        double v = 0.0;
        if (a == 0 && b == 0) v = s.einstein00;
        else if (a > 0) v = s.einstein_spatial[a - 1][b - 1];
        out[c++] = v;
      }
  };
  for (const Point3& p : random_points(33, 3)) {
    const auto jets = fd_jets(einstein, 10, p, 1, 1e-3);
    double G[4][4] = {}, dG[4][4][4] = {};
    int c = 0;
    for (int a = 0; a < 4; ++a)
      for (int b = a; b < 4; ++b, ++c)
        for (auto [i, j] : {std::pair{a, b}, std::pair{b, a}}) {
          G[i][j] = jets[c].value;
          for (int d = 1; d < 4; ++d) dG[i][j][d] = jets[c].grad[d - 1];
        }
    const auto cur = curvature_nd(static_metric_exact(g, phi, p));
    auto gam = [&](int i, int j, int k) { return cur.christoffel[(i * 4 + j) * 4 + k]; };
    for (int nu = 0; nu < 4; ++nu) {
      double div = 0.0;
      for (int mu = 0; mu < 4; ++mu)
        for (int al = 0; al < 4; ++al) {
          double t = dG[mu][nu][al];
          for (int l = 0; l < 4; ++l) t -= gam(al, mu, l) * G[l][nu] + gam(al, nu, l) * G[mu][l];
          div += cur.g_inv[mu * 4 + al] * t;
        }
      CHECK(std::abs(div) < 1e-7);
    }
  }
}

TEST_CASE("normals of the graph and the t = 0 slice") {
  const auto g = random_metric(41);
  const Point3 p{0.2, 0.3, 0.1};
  const Mat3 gb = g.value(p);
  const double phi = 0.8;
  const Vec3 df{0.3, -0.2, 0.4};
  const auto s = static_normals(gb, phi, df);
  // The graph metric is g = gbar - phi^2 df^2.
  Mat3 gg = gb;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) gg[i][j] -= phi * phi * df[i] * df[j];
  const Mat3 ggi = inverse3(gg);
  const Vec3 fg = raise(ggi, df);
  const double W = 1.0 + dot3(fg, df) * phi * phi;
  auto ip = [&](const std::array<double, 4>& a, const std::array<double, 4>& b) {
    double r = -phi * phi * a[0] * b[0];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r += gb[i][j] * a[i + 1] * b[j + 1];
    return r;
  };
  CHECK(ip(s.n, s.n) == doctest::Approx(-1.0).epsilon(1e-13));
  CHECK(ip(s.nbar, s.nbar) == doctest::Approx(-1.0).epsilon(1e-13));
  CHECK(ip(s.n, s.nbar) == doctest::Approx(-std::sqrt(W)).epsilon(1e-13));
  // tan(nbar) = -phi grad_g f, pushed into the graph: time part equals its df.
  for (int i = 0; i < 3; ++i) CHECK(std::abs(s.tan_graph_nbar[i + 1] + phi * fg[i]) < 1e-12);
  CHECK(std::abs(s.tan_graph_nbar[0] + phi * dot3(fg, df)) < 1e-12);

  // G(n, nbar) = G(nbar, n) for the static Einstein tensor.
  const auto phif = random_trig_scalar(42, 1.0, 0.3);
  const auto st = static_curvature(g, phif, p);
  double G[4][4] = {};
  G[0][0] = st.einstein00;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) G[i + 1][j + 1] = st.einstein_spatial[i][j];
  double a = 0.0, b = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      a += G[i][j] * s.n[i] * s.nbar[j];
      b += G[i][j] * s.nbar[i] * s.n[j];
    }
  CHECK(a == doctest::Approx(b).epsilon(1e-14));
  CHECK_THROWS_AS(static_normals(gb, phi, {2.0, 0.0, 0.0}), Error);
}

TEST_CASE("Einstein-Hilbert action") {
  const double m = 1.0;
  {
    const auto r = eh_action(standard_schwarzschild(m), schwarzschild_lapse(m),
                             ShellDomain{{0, 0, 0}, 3.0, 6.0});
    CHECK(std::abs(r.action) < 1e-8);
    CHECK(std::abs(r.laplacian_term) < 1e-8);
  }
  {
    const auto bump = ScalarField::closed_form([](const JetVec& x) {
      return 1.0 + 0.5 * exp(-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]));
    });
    const auto r = eh_action(Sym2Field::flat(), bump, BoxDomain{{-1, -1, -1}, {1, 1, 1}});
    CHECK(r.action == 0.0);
    CHECK(r.laplacian_term < 0.0);
  }
  {
    const auto g = positive_scalar_metric();
    for (const Point3& p : random_points(5, 10, 1.5))
      CHECK(riemann_ricci_scalar(g.jet(p, 2)).scalar >= 0.0);
    const auto phi = random_trig_scalar(51, 1.0, 0.4);
    const BoxDomain box{{-1, -1, -1}, {1, 1, 1}};
    const auto r = eh_action(g, phi, box);
    CHECK(r.action > 0.0);
    MESSAGE("action on an R >= 0 metric: " << r.action << " +- " << r.error_estimate);
    // Linear in phi.
    const auto phi3 = ScalarField::derived(
        [phi](const Point3& q, int o) { return 3.0 * phi.jet(q, o); }, 3);
    const auto r3 = eh_action(g, phi3, box);
    CHECK(r3.action == doctest::Approx(3.0 * r.action).epsilon(1e-9));
    CHECK(r.spacetime_action == doctest::Approx(r.action - r.laplacian_term).epsilon(1e-14));
  }
  QuadratureSpec tight;
  tight.max_nodes = 8;
  CHECK_THROWS_AS(eh_action(positive_scalar_metric(), ScalarField::constant(1.0),
                            BoxDomain{{-1, -1, -1}, {1, 1, 1}}, tight),
                  Error);
}

TEST_CASE("boundary flux vanishes for k = h") {
  const auto cfg = random_configuration(61);
  const auto kh = data_with_k_equal_h(cfg.data.g, cfg.pair);
  const auto r = boundary_flux(kh, cfg.pair, LevelSetSurface::coordinate_sphere(0.8), FluxSide::outward,
                               8, 16);
  CHECK(std::abs(r.total) < 1e-13);
  CHECK(std::abs(r.h_part) > 1e-3);
  const auto rin = boundary_flux(cfg.data, cfg.pair, LevelSetSurface::coordinate_sphere(0.8),
                                 FluxSide::inward, 8, 16);
  const auto rout = boundary_flux(cfg.data, cfg.pair, LevelSetSurface::coordinate_sphere(0.8),
                                  FluxSide::outward, 8, 16);
  CHECK(rin.total == doctest::Approx(-rout.total).epsilon(1e-14));
}

TEST_CASE("deformed unit normal agrees with the gbar-normal of the level set") {
  const auto cfg = random_configuration(71);
  const auto level = ScalarField::closed_form(
      [](const JetVec& x) { return x[0] * x[0] + 0.5 * x[1] * x[1] + x[2] * x[2] + 0.2 * x[0]; });
  for (const Point3& p : random_points(72, 5)) {
    const auto geom = deformation_at_point(cfg.data, cfg.pair, p, 1);
    const Vec3 dl = level.jet(p, 1).grad;
    const Vec3 nb = deformed_unit_normal(geom, unit_normal(geom.g_inv, dl));
    CHECK(max_abs(nb, unit_normal(geom.gbar_inv, dl)) < 1e-13);
  }
}

TEST_CASE("overdetermined equation of the case of equality") {
  const double m = 1.0;
  const auto g = standard_schwarzschild(m);
  const Point3 p{3.0, 1.0, -0.5};
  const Sym2Jet gj = g.jet(p, 1);
  const ScalarJet phi0 = schwarzschild_lapse(m).jet(p, 2);
  const ScalarJet f = ScalarField::closed_form([](const JetVec& x) {
                        return x[0] + 0.3 * x[1] * x[2];
                      }).jet(p, 1);
  CHECK(max_abs(coe_overdetermined_residual(gj, phi0, phi0, f), Vec3{}) == 0.0);
  CHECK(max_abs(coe_overdetermined_residual(gj, 2.5 * phi0, phi0, f), Vec3{}) < 1e-15);
  const ScalarJet bumped =
      phi0 + 0.1 * exp(-square(radius(coordinates(p, 2)) - 3.0)).truncated(2);
  const Vec3 r = coe_overdetermined_residual(gj, bumped, phi0, f);
  CHECK(std::max({std::abs(r[0]), std::abs(r[1]), std::abs(r[2])}) > 1e-3);
  CHECK_THROWS_AS(coe_overdetermined_residual(gj, phi0, phi0, ScalarJet::constant(1.0, 1)), Error);
}
