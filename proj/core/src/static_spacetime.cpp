#include "jangbench/static_spacetime.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

namespace jangbench {

StaticCurvature static_curvature(const Sym2Jet& gbar, const ScalarJet& phi) {
  if (!(phi.value > 0.0)) throw Error("static curvature: phi must be positive");
  if (gbar.order() < 2 || phi.order < 2) throw Error("static curvature needs order-2 jets");
  const CurvatureAtPoint c = riemann_ricci_scalar(gbar);
  const HessianLaplacian hl = hessian_laplacian(gbar, phi);
  const Mat3 g = gbar.values();
  const double p = phi.value;
  StaticCurvature s;
  s.rbar = c.scalar;
  s.ric00 = p * hl.laplacian;
  s.scalar4 = c.scalar - 2.0 * hl.laplacian / p;
  s.einstein00 = 0.5 * c.scalar * p * p;
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) {
      s.ric_spatial[j][k] = c.ricci[j][k] - hl.hess[j][k] / p;
      s.einstein_spatial[j][k] =
          s.ric_spatial[j][k] + (hl.laplacian / p - 0.5 * c.scalar) * g[j][k];
    }
  return s;
}

StaticCurvature static_curvature(const Sym2Field& gbar, const ScalarField& phi, const Point3& p) {
  return static_curvature(gbar.jet(p, 2), phi.jet(p, 2));
}

CurvatureND curvature_nd(const MetricJetND& m) {
  const int n = m.n;
  if (n < 2 || static_cast<int>(m.g.size()) != n * n ||
      static_cast<int>(m.dg.size()) != n * n * n ||
      static_cast<int>(m.ddg.size()) != n * n * n * n)
    throw Error("metric jet arrays have inconsistent sizes");
  Eigen::MatrixXd G(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) G(a, b) = m.g[a * n + b];
  Eigen::FullPivLU<Eigen::MatrixXd> lu(G);
  if (!lu.isInvertible() || std::abs(lu.determinant()) < kMinMetricDet)
    throw Error("singular metric");
  const Eigen::MatrixXd Gi = lu.inverse();

  auto dg = [&](int a, int b, int c) { return m.dg[(a * n + b) * n + c]; };
  auto ddg = [&](int a, int b, int c, int d) { return m.ddg[((a * n + b) * n + c) * n + d]; };

  CurvatureND out;
  out.n = n;
  out.g_inv.resize(n * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) out.g_inv[a * n + b] = Gi(a, b);

  // Gamma_ij^k and d_d Gamma_ij^k.
  std::vector<double> low(n * n * n);  // [ (i*n+j)*n+m ] = Gamma_ijm (first kind)
  std::vector<double> dlow(n * n * n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) {
        low[(i * n + j) * n + l] = 0.5 * (dg(i, l, j) + dg(j, l, i) - dg(i, j, l));
        for (int d = 0; d < n; ++d)
          dlow[((i * n + j) * n + l) * n + d] =
              0.5 * (ddg(i, l, j, d) + ddg(j, l, i, d) - ddg(i, j, l, d));
      }
  // d_d g^{kl} = -g^{ka} d_d g_ab g^{bl}
  std::vector<double> dginv(n * n * n);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l)
      for (int d = 0; d < n; ++d) {
        double s = 0.0;
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) s -= Gi(k, a) * dg(a, b, d) * Gi(b, l);
        dginv[(k * n + l) * n + d] = s;
      }
  std::vector<double>& gam = out.christoffel;
  gam.assign(n * n * n, 0.0);
  std::vector<double> dgam(n * n * n * n, 0.0);  // [((i*n+j)*n+k)*n+d]
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          gam[(i * n + j) * n + k] += Gi(k, l) * low[(i * n + j) * n + l];
          for (int d = 0; d < n; ++d)
            dgam[((i * n + j) * n + k) * n + d] +=
                dginv[(k * n + l) * n + d] * low[(i * n + j) * n + l] +
                Gi(k, l) * dlow[((i * n + j) * n + l) * n + d];
        }
  auto Gm = [&](int i, int j, int k) { return gam[(i * n + j) * n + k]; };
  auto dG = [&](int i, int j, int k, int d) { return dgam[((i * n + j) * n + k) * n + d]; };

  // Ric_jk = R_ijk^i with R_ijk^l = d_i G_jk^l - d_j G_ik^l + G_jk^a G_ia^l - G_ik^a G_ja^l.
  out.ricci.assign(n * n, 0.0);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) {
        s += dG(j, k, i, i) - dG(i, k, i, j);
        for (int a = 0; a < n; ++a) s += Gm(j, k, a) * Gm(i, a, i) - Gm(i, k, a) * Gm(j, a, i);
      }
      out.ricci[j * n + k] = s;
    }
  out.scalar = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) out.scalar += Gi(a, b) * out.ricci[a * n + b];
  return out;
}

MetricJetND static_metric_fd(const Sym2Field& gbar, const ScalarField& phi, const Point3& p,
                             double step) {
  // Components of the 4-metric, indexed 0..3 with 0 = t.
  auto sampler = [&](const Point3& x, double* out) {
    const Mat3 g = gbar.value(x);
    const double f = phi.value(x);
    int c = 0;
    for (int a = 0; a < 4; ++a)
      for (int b = a; b < 4; ++b) {
        double v = 0.0;
        if (a == 0 && b == 0)
          v = -f * f;
        else if (a > 0)
          v = g[a - 1][b - 1];
        out[c++] = v;
      }
  };
  const auto jets = fd_jets(sampler, 10, p, 2, step);
  MetricJetND m;
  m.n = 4;
  m.g.assign(16, 0.0);
  m.dg.assign(64, 0.0);
  m.ddg.assign(256, 0.0);
  int c = 0;
  for (int a = 0; a < 4; ++a)
    for (int b = a; b < 4; ++b, ++c)
      for (const auto& [i, j] : {std::pair{a, b}, std::pair{b, a}}) {
        const ScalarJet& J = jets[c];
        m.g[i * 4 + j] = J.value;
        for (int d = 1; d < 4; ++d) {
          m.dg[(i * 4 + j) * 4 + d] = J.grad[d - 1];
          for (int e = 1; e < 4; ++e) m.ddg[((i * 4 + j) * 4 + d) * 4 + e] = J.hess[d - 1][e - 1];
        }
      }
  return m;
}

StaticNormals static_normals(const Mat3& gbar, double phi, const Vec3& df) {
  if (!(phi > 0.0)) throw Error("static normals: phi must be positive");
  const Mat3 gbi = inverse3(gbar);
  const Vec3 fbar = raise(gbi, df);  // gbar-gradient of f
  const double dfbar2 = dot3(fbar, df);
  if (!(phi * phi * dfbar2 < 1.0)) throw Error("static normals: graph is not spacelike");
  const double W = 1.0 / (1.0 - phi * phi * dfbar2);
  const double sW = std::sqrt(W);
  StaticNormals s;
  s.nbar = {1.0 / phi, 0.0, 0.0, 0.0};
  s.n[0] = sW / phi;
  for (int i = 0; i < 3; ++i) s.n[i + 1] = phi * sW * fbar[i];
  // <nbar, n> with the 4-metric; then nbar + <nbar, n> n.
  const double ip = -phi * phi * s.nbar[0] * s.n[0];
  for (int a = 0; a < 4; ++a) s.tan_graph_nbar[a] = s.nbar[a] + ip * s.n[a];
  return s;
}

namespace {

template <class F>
double integrate_domain(const VolumeDomain& domain, int nodes, F&& f) {
  const auto& rule = gauss_legendre(nodes);
  double total = 0.0;
  if (const auto* box = std::get_if<BoxDomain>(&domain)) {
    double half[3], mid[3];
    for (int i = 0; i < 3; ++i) {
      half[i] = 0.5 * (box->hi[i] - box->lo[i]);
      mid[i] = 0.5 * (box->hi[i] + box->lo[i]);
    }
    for (int a = 0; a < nodes; ++a)
      for (int b = 0; b < nodes; ++b)
        for (int c = 0; c < nodes; ++c) {
          const Point3 x{mid[0] + half[0] * rule.nodes[a], mid[1] + half[1] * rule.nodes[b],
                         mid[2] + half[2] * rule.nodes[c]};
          total += rule.weights[a] * rule.weights[b] * rule.weights[c] * f(x);
        }
    return total * half[0] * half[1] * half[2];
  }
  const auto& sh = std::get<ShellDomain>(domain);
  const double pi = std::numbers::pi;
  const double hr = 0.5 * (sh.r_out - sh.r_in), mr = 0.5 * (sh.r_out + sh.r_in);
  // Azimuth uses a doubled rule on [0, 2 pi].
  const auto& rp = gauss_legendre(2 * nodes);
  for (int a = 0; a < nodes; ++a) {
    const double r = mr + hr * rule.nodes[a];
    for (int b = 0; b < nodes; ++b) {
      const double th = 0.5 * pi * (1.0 + rule.nodes[b]);
      for (int c = 0; c < 2 * nodes; ++c) {
        const double ph = pi * (1.0 + rp.nodes[c]);
        const Point3 x{sh.center[0] + r * std::sin(th) * std::cos(ph),
                       sh.center[1] + r * std::sin(th) * std::sin(ph),
                       sh.center[2] + r * std::cos(th)};
        total += rule.weights[a] * rule.weights[b] * rp.weights[c] * r * r * std::sin(th) * f(x);
      }
    }
  }
  return total * hr * (0.5 * pi) * pi;
}

}  // namespace

ActionReport eh_action(const Sym2Field& gbar, const ScalarField& phi, const VolumeDomain& domain,
                       const QuadratureSpec& quad) {
  if (const auto* sh = std::get_if<ShellDomain>(&domain))
    if (!(sh->r_in >= 0.0 && sh->r_out > sh->r_in)) throw Error("invalid shell domain");
  struct Triple {
    double e = 0.0, lap = 0.0;
  };
  auto run = [&](int nodes) {
    Triple t;
    t.e = integrate_domain(domain, nodes, [&](const Point3& x) {
      const Sym2Jet g = gbar.jet(x, 2);
      const double vol = std::sqrt(det3(g.values()));
      return riemann_ricci_scalar(g).scalar * phi.value(x) * vol;
    });
    t.lap = integrate_domain(domain, nodes, [&](const Point3& x) {
      const Sym2Jet g = gbar.jet(x, 1);
      return 2.0 * hessian_laplacian(g, phi.jet(x, 2)).laplacian * std::sqrt(det3(g.values()));
    });
    return t;
  };
  int n = quad.initial_nodes;
  Triple prev = run(n);
  double err = 0.0;
  while (2 * n <= quad.max_nodes) {
    const Triple next = run(2 * n);
    err = std::max(std::abs(next.e - prev.e), std::abs(next.lap - prev.lap));
    const double scale = std::max(std::abs(next.e), std::abs(next.lap));
    n *= 2;
    if (err <= std::max(quad.rel_tol * scale, quad.abs_tol)) {
      ActionReport r;
      r.action = next.e;
      r.laplacian_term = next.lap;
      r.spacetime_action = next.e - next.lap;
      r.error_estimate = err;
      r.nodes = n;
      return r;
    }
    prev = next;
  }
  throw Error("action quadrature did not converge within " + std::to_string(quad.max_nodes) +
              " nodes per dimension (last change " + std::to_string(err) + ")");
}

Vec3 deformed_unit_normal(const DeformedGeometry& geom, const Vec3& nu) {
  const Vec3 nu_lo = {geom.g[0][0] * nu[0] + geom.g[0][1] * nu[1] + geom.g[0][2] * nu[2],
                      geom.g[1][0] * nu[0] + geom.g[1][1] * nu[1] + geom.g[1][2] * nu[2],
                      geom.g[2][0] * nu[0] + geom.g[2][1] * nu[1] + geom.g[2][2] * nu[2]};
  const double nu_v = dot3(nu_lo, geom.v_up);
  const double phi2 = geom.phi * geom.phi;
  const double dfg2 = contract(geom.g_inv, geom.df, geom.df);
  const double nu_f = dot3(geom.df, nu);
  const double WS = 1.0 + phi2 * (dfg2 - nu_f * nu_f);
  const double c = std::sqrt(geom.W / WS);
  return {c * (nu[0] - nu_v * geom.v_up[0]), c * (nu[1] - nu_v * geom.v_up[1]),
          c * (nu[2] - nu_v * geom.v_up[2])};
}

FluxReport boundary_flux(const CauchyData& data, const JangPair& pair,
                         const LevelSetSurface& surface, FluxSide side, int n_theta, int n_phi) {
  const double sign = side == FluxSide::outward ? 1.0 : -1.0;
  FluxReport r;
  for (const auto& s : sample_surface(surface, n_theta, n_phi)) {
    const DeformedGeometry geom = deformation_at_point(data, pair, s.x, 1);
    const Vec3 nu = unit_normal(geom.g_inv, surface.level.jet(s.x, 1).grad);
    const Vec3 nub = deformed_unit_normal(geom, nu);
    const Mat3 k = data.k.value(s.x);
    const double w = s.weight * area_element(geom.gbar, s.t_theta, s.t_phi) * 2.0 * geom.phi;
    r.h_part += sign * w * quad(geom.h, geom.v_up, nub);
    r.k_part += sign * w * quad(k, geom.v_up, nub);
    ++r.samples;
  }
  r.total = r.h_part - r.k_part;
  return r;
}

Vec3 coe_overdetermined_residual(const Sym2Jet& gbar, const ScalarJet& phi, const ScalarJet& phi0,
                                 const ScalarJet& f) {
  if (!(phi.value > 0.0) || !(phi0.value > 0.0))
    throw Error("overdetermined equation: phi and phi0 must be positive");
  const Mat3 g = gbar.values();
  const Mat3 gi = inverse3(g);
  const Vec3 fup = raise(gi, f.grad);
  if (!(dot3(fup, f.grad) > 1e-28)) throw Error("overdetermined equation: df vanishes");
  const HessianLaplacian a = hessian_laplacian(gbar, phi);
  const HessianLaplacian b = hessian_laplacian(gbar, phi0);
  const double c = a.laplacian / phi.value - b.laplacian / phi0.value;
  Vec3 out{};
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 3; ++i)
      out[j] += (b.hess[i][j] / phi0.value - a.hess[i][j] / phi.value + c * g[i][j]) * fup[i];
  return out;
}

}  // namespace jangbench
