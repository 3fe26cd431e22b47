#include "jangbench/jang_deformation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace jangbench {

namespace {

Mat3 mat(const Sym2Jet& s) { return s.values(); }

double trace(const Mat3& gi, const Mat3& t) {
  double s = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) s += gi[i][j] * t[i][j];
  return s;
}

double norm2(const Mat3& gi, const Mat3& t) {
  double s = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) s += gi[i][a] * gi[j][b] * t[i][j] * t[a][b];
  return s;
}

// t(v, .)
Vec3 contract1(const Mat3& t, const Vec3& v) {
  Vec3 r{};
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 3; ++i) r[j] += t[i][j] * v[i];
  return r;
}

Vec3 lower(const Mat3& g, const Vec3& v) {
  Vec3 r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[i] += g[i][j] * v[j];
  return r;
}

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

ScalarJet trace_jet(const Sym2Jet& gi, const Sym2Jet& t) {
  ScalarJet s = ScalarJet::constant(0.0, std::min(gi.order(), t.order()));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) s += gi.c[i][j] * t.c[i][j];
  return s;
}

// (nabla_i t)_{jl}
Ten3 covariant_sym2(const Ten3& gamma, const Sym2Jet& t) {
  Ten3 r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int l = 0; l < 3; ++l) {
        double s = t.d1(j, l, i);
        for (int m = 0; m < 3; ++m)
          s -= gamma[i][j][m] * t.comp(m, l) + gamma[i][l][m] * t.comp(j, m);
        r[i][j][l] = s;
      }
  return r;
}

// (div t)(w) = g^{ij} (nabla_i t)_{j a} w^a
double div_applied(const Ten3& nabla_t, const Mat3& gi, const Vec3& w) {
  double s = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int a = 0; a < 3; ++a) s += gi[i][j] * nabla_t[i][j][a] * w[a];
  return s;
}

double directional_value(const ScalarJet& s, const Vec3& v) { return dot(s.grad, v); }

void require_phi(double phi, const char* what) {
  if (!(phi > kPhiFloor)) throw Error(std::string(what) + ": phi below floor");
}

}  // namespace

DeformationJets deformation_jets(const Sym2Jet& g, const Sym2Jet& k, const ScalarJet& f,
                                 const ScalarJet& phi) {
  DeformationJets d;
  d.g = g;
  d.k = k;
  d.f = f;
  d.phi = phi;
  d.g_inv = inverse_jet(g);
  if (g.order() >= 1) d.gamma = christoffel_jet(g, d.g_inv);
  for (int i = 0; i < 3; ++i) {
    d.df[i] = partial(f, i);
    d.dphi[i] = phi.order >= 1 ? partial(phi, i) : ScalarJet::constant(0.0, 0);
  }
  ScalarJet df2 = ScalarJet::constant(0.0, d.df[0].order);
  for (int i = 0; i < 3; ++i) {
    d.f_up[i] = ScalarJet::constant(0.0, std::min(d.g_inv.order(), d.df[0].order));
    for (int j = 0; j < 3; ++j) d.f_up[i] += d.g_inv.c[i][j] * d.df[j];
    df2 += d.df[i] * d.f_up[i];
  }
  const ScalarJet phi2 = phi * phi;
  d.W = 1.0 + phi2 * df2;
  const ScalarJet sqrtW = sqrt(d.W);
  const ScalarJet c = phi2 / d.W;
  for (int i = 0; i < 3; ++i) {
    d.v_up[i] = phi * d.f_up[i] / sqrtW;
    for (int j = i; j < 3; ++j) {
      d.gbar.c[i][j] = g.c[i][j] + phi2 * d.df[i] * d.df[j];
      d.gbar_inv.c[i][j] = d.g_inv.c[i][j] - c * d.f_up[i] * d.f_up[j];
      d.gbar.c[j][i] = d.gbar.c[i][j];
      d.gbar_inv.c[j][i] = d.gbar_inv.c[i][j];
    }
  }
  // det gbar = det g * W; evaluating det3 on gbar directly loses everything for steep f.
  if (!(det3(g.values()) * d.W.value >= kMinMetricDet)) throw Error("singular deformed metric");
  if (d.gbar.order() >= 1) d.gamma_bar = christoffel_jet(d.gbar, d.gbar_inv);

  if (f.order >= 2 && g.order() >= 1) {
    const Sym2Jet hess = hessian_jet(d.gamma, f);
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) {
        d.h.c[i][j] = (phi * hess.c[i][j] + d.df[i] * d.dphi[j] + d.dphi[i] * d.df[j]) / sqrtW;
        d.h.c[j][i] = d.h.c[i][j];
      }
  } else {
    throw Error("deformation: f needs order >= 2 and g order >= 1");
  }
  for (int j = 0; j < 3; ++j) {
    d.q[j] = ScalarJet::constant(0.0, std::min({d.h.order(), k.order(), d.v_up[0].order}));
    for (int i = 0; i < 3; ++i) d.q[j] += (d.h.c[i][j] - k.c[i][j]) * d.v_up[i];
  }
  return d;
}

DeformationJets deformation_jets(const CauchyData& data, const JangPair& pair, const Point3& p,
                                 bool allow_phi_limit) {
  const ScalarJet phi = pair.phi.jet(p, 2);
  if (!(phi.value > 0.0) && !(allow_phi_limit && phi.value == 0.0))
    throw Error("deformation: phi must be positive");
  return deformation_jets(data.g.jet(p, 2), data.k.jet(p, 1), pair.f.jet(p, 3), phi);
}

Mat3 h_bar_representation(const DeformationJets& d) {
  const Mat3 gbi = mat(d.gbar_inv);
  const Vec3 df = values(d.df), dphi = values(d.dphi);
  const double phi = d.phi.value;
  const double dfdphi = contract(gbi, df, dphi);
  const double dfbar2 = contract(gbi, df, df);
  const double denom = std::sqrt(1.0 - phi * phi * dfbar2);
  const Christoffel3 gb = values(d.gamma_bar);
  Mat3 h{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double hess = d.f.hess[i][j];
      for (int m = 0; m < 3; ++m) hess -= gb.gamma[i][j][m] * df[m];
      h[i][j] = (phi * hess + df[i] * dphi[j] + dphi[i] * df[j] -
                 phi * phi * dfdphi * df[i] * df[j]) /
                denom;
    }
  return h;
}

DeformedGeometry geometry_values(const DeformationJets& d) {
  DeformedGeometry r;
  r.g = mat(d.g);
  r.g_inv = mat(d.g_inv);
  r.gbar = mat(d.gbar);
  r.gbar_inv = mat(d.gbar_inv);
  r.v_up = values(d.v_up);
  r.vbar_norm2 = quad(r.gbar, r.v_up, r.v_up);
  r.h = mat(d.h);
  r.q = values(d.q);
  r.phi = d.phi.value;
  r.df = values(d.df);
  r.dphi = values(d.dphi);
  r.W = d.W.value;
  r.dfbar_norm2 = contract(r.gbar_inv, r.df, r.df);
  if (d.gbar.order() >= 1 && d.f.order >= 2) r.h_bar_form = h_bar_representation(d);
  return r;
}

DeformedGeometry deformation_at_point(const CauchyData& data, const JangPair& pair,
                                      const Point3& p, int order, bool allow_phi_limit) {
  if (order < 1 || order > 2) throw Error("deformation order must be 1 or 2");
  const ScalarJet phi = pair.phi.jet(p, order);
  if (!(phi.value > 0.0) && !(allow_phi_limit && phi.value == 0.0))
    throw Error("deformation: phi must be positive");
  const auto d = deformation_jets(data.g.jet(p, order), data.k.jet(p, order - 1),
                                  pair.f.jet(p, order + 1), phi);
  DeformedGeometry r = geometry_values(d);
  if (order < 2) r.h_bar_form.reset();
  return r;
}

double reciprocal_norm_residual(const DeformedGeometry& geom) {
  const double p2 = geom.phi * geom.phi;
  const double dfg2 = contract(geom.g_inv, geom.df, geom.df);
  return std::abs((1.0 - p2 * geom.dfbar_norm2) * (1.0 + p2 * dfg2) - 1.0);
}

double generalized_jang_residual(const DeformationJets& d) {
  return trace(mat(d.gbar_inv), mat(d.h - d.k));
}

double generalized_jang_residual(const CauchyData& data, const JangPair& pair, const Point3& p) {
  const ScalarJet phi = pair.phi.jet(p, 1);
  if (!(phi.value > 0.0)) throw Error("deformation: phi must be positive");
  return generalized_jang_residual(
      deformation_jets(data.g.jet(p, 1), data.k.jet(p, 0), pair.f.jet(p, 2), phi));
}

double ResidualVector::max() const {
  double m = 0.0;
  for (const auto& e : entries) m = std::max(m, e.value);
  return m;
}

bool ResidualVector::all_pass() const {
  return std::all_of(entries.begin(), entries.end(), [](const auto& e) { return e.pass(); });
}

ResidualVector deformation_identity_residuals(const DeformationJets& d, const Sym2Jet& kt) {
  if (kt.order() < 1 || d.gbar.order() < 2 || d.f.order < 3)
    throw Error("identities need g, phi of order 2, f of order 3, k of order 1");
  const double phi = d.phi.value;
  require_phi(phi, "identities");
  const Mat3 gi = mat(d.g_inv), gb = mat(d.gbar), gbi = mat(d.gbar_inv);
  const Mat3 k = kt.values(), h = mat(d.h);
  const Vec3 v = values(d.v_up), df = values(d.df), dphi = values(d.dphi);
  const Christoffel3 G = values(d.gamma), Gb = values(d.gamma_bar);
  const Vec3 grad_phi_bar = raise(gbi, dphi);  // nabla-bar phi as a vector
  const Vec3 kv = contract1(k, v), hv = contract1(h, v);
  const double kvv = dot(kv, v), hvv = dot(hv, v);
  const double trbk = trace(gbi, k), trbh = trace(gbi, h);
  const double vbar2 = quad(gb, v, v);
  const double k_v_gphi = dot(kv, grad_phi_bar) / phi;
  const double hv_kv = contract(gbi, hv, kv);
  double hk = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) hk += gbi[i][a] * gbi[j][b] * h[i][j] * k[a][b];

  const Ten3 nabla_k = covariant_sym2(G.gamma, kt);
  const Ten3 nablab_k = covariant_sym2(Gb.gamma, kt);
  const double div_k_v = div_applied(nabla_k, gi, v);
  const double divb_k_v = div_applied(nablab_k, gbi, v);
  double nabv_k_vv = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) nabv_k_vv += v[i] * nablab_k[i][a][b] * v[a] * v[b];

  // Jets of scalars that get differentiated along v.
  const Sym2Jet k1 = kt.truncated(1);
  const ScalarJet tr_g_k = trace_jet(d.g_inv.truncated(1), k1);
  const ScalarJet tr_gb_k = trace_jet(d.gbar_inv.truncated(1), k1);
  JetVec kv_jet;
  ScalarJet kvv_jet = ScalarJet::constant(0.0, 1);
  for (int j = 0; j < 3; ++j) {
    kv_jet[j] = ScalarJet::constant(0.0, 1);
    for (int i = 0; i < 3; ++i) kv_jet[j] += k1.c[i][j] * d.v_up[i].truncated(1);
    kvv_jet += kv_jet[j] * d.v_up[j].truncated(1);
  }
  const double divb_kv = divergence_covector(Gb, gbi, kv_jet);

  ResidualVector out;
  auto add = [&out](const char* name, double value) {
    out.entries.push_back({name, value, kIdentityTolerance});
  };

  // 1
  add("identity_1",
      std::abs(trace(gi, k) * trace(gi, k) - norm2(gi, k) -
               (trbk * trbk - norm2(gbi, k) + 2.0 * kvv * trbk - 2.0 * contract(gbi, kv, kv))));
  // 2
  add("identity_2", std::abs(directional_value(tr_g_k, v) -
                             directional_value(tr_gb_k + kvv_jet, v)));
  // 3
  double r3 = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int m = 0; m < 3; ++m) {
        const double lhs = Gb.gamma[i][j][m] - G.gamma[i][j][m];
        const double rhs = h[i][j] * v[m] - phi * df[i] * df[j] * grad_phi_bar[m];
        r3 = std::max(r3, std::abs(lhs - rhs));
      }
  add("identity_3", r3);
  // 4
  add("identity_4", std::abs(div_k_v - (divb_k_v + nabv_k_vv - 2.0 * vbar2 * k_v_gphi + hv_kv +
                                        2.0 * hvv * kvv + trbh * kvv)));
  // 5: the gbar-covariant derivative of the gbar-lowered v.
  {
    JetVec vb;
    for (int i = 0; i < 3; ++i) {
      vb[i] = ScalarJet::constant(0.0, 1);
      for (int m = 0; m < 3; ++m) vb[i] += d.gbar.c[i][m].truncated(1) * d.v_up[m].truncated(1);
    }
    const Vec3 vbv = values(vb);
    double r5 = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double lhs = vb[i].grad[j];
        for (int m = 0; m < 3; ++m) lhs -= Gb.gamma[j][i][m] * vbv[m];
        const double rhs = h[i][j] + vbv[i] * hv[j] - dphi[i] * vbv[j] / phi;
        r5 = std::max(r5, std::abs(lhs - rhs));
      }
    add("identity_5", r5);
  }
  // 6
  add("identity_6", std::abs(divb_k_v - (divb_kv - hk - hv_kv + k_v_gphi)));
  // 7
  add("identity_7", std::abs(nabv_k_vv - (directional_value(kvv_jet, v) - 2.0 * hv_kv -
                                          2.0 * hvv * kvv + 2.0 * vbar2 * k_v_gphi)));
  // 8
  add("identity_8", std::abs(div_k_v - (divb_kv + directional_value(kvv_jet, v) + k_v_gphi - hk -
                                        2.0 * hv_kv + trbh * kvv)));
  return out;
}

ResidualVector deformation_identity_residuals(const CauchyData& data, const JangPair& pair,
                                             const Sym2Field& k_test, const Point3& p) {
  return deformation_identity_residuals(deformation_jets(data, pair, p), k_test.jet(p, 1));
}

SchoenYauTerms schoen_yau_terms(const DeformationJets& d) {
  if (d.gbar.order() < 2 || d.h.order() < 1 || d.k.order() < 1)
    throw Error("Schoen-Yau identity needs g, phi of order 2, f of order 3, k of order 1");
  const double phi = d.phi.value;
  require_phi(phi, "Schoen-Yau identity");
  const double pi = std::numbers::pi;
  const Mat3 gbi = mat(d.gbar_inv);
  const Mat3 k = mat(d.k), h = mat(d.h);
  const Vec3 v = values(d.v_up), dphi = values(d.dphi), q = values(d.q);

  SchoenYauTerms t;
  t.rbar_direct = riemann_ricci_scalar(d.gbar).scalar;
  const ConstraintAtPoint c = energy_momentum_density(d.g, d.k);
  t.energy = 16.0 * pi * (c.mu - dot(c.J, v));
  t.h_minus_k_norm2 = norm2(gbi, mat(d.h - d.k));
  t.q_norm2 = contract(gbi, q, q);
  const Christoffel3 Gb = values(d.gamma_bar);
  t.div_term = -2.0 * divergence_covector(Gb, gbi, d.q) - 2.0 * contract(gbi, q, dphi) / phi;

  const ScalarJet tr_diff = trace_jet(d.gbar_inv.truncated(1), (d.h - d.k).truncated(1));
  const double trbh = trace(gbi, h), trbk = trace(gbi, k);
  const double kvv = quad(k, v, v);
  t.jang_residual = tr_diff.value;
  t.trace_terms = trbh * trbh - trbk * trbk + 2.0 * directional_value(tr_diff, v) +
                  2.0 * kvv * tr_diff.value;
  t.rhs = t.energy + t.h_minus_k_norm2 + 2.0 * t.q_norm2 + t.div_term + t.trace_terms;
  return t;
}

double schoen_yau_residual(const CauchyData& data, const JangPair& pair, const Point3& p) {
  const SchoenYauTerms t = schoen_yau_terms(deformation_jets(data, pair, p));
  return std::abs(t.rbar_direct - t.rhs);
}

double schoen_yau_intermediate_residual(const DeformationJets& d) {
  const double pi = std::numbers::pi;
  const Mat3 gi = mat(d.g_inv);
  const Mat3 k = mat(d.k), h = mat(d.h);
  const Vec3 v = values(d.v_up);
  const double rbar = riemann_ricci_scalar(d.gbar).scalar;
  const ConstraintAtPoint c = energy_momentum_density(d.g, d.k);
  const Sym2Jet gi1 = d.g_inv.truncated(1);
  const ScalarJet trh = trace_jet(gi1, d.h.truncated(1));
  const ScalarJet trk = trace_jet(gi1, d.k.truncated(1));
  const Christoffel3 G = values(d.gamma);
  const double div_h_v = div_applied(covariant_sym2(G.gamma, d.h), gi, v);
  const double div_k_v = div_applied(covariant_sym2(G.gamma, d.k), gi, v);
  const double rhs = 16.0 * pi * (c.mu - dot(c.J, v)) + trh.value * trh.value -
                     trk.value * trk.value - norm2(gi, h) + norm2(gi, k) +
                     2.0 * directional_value(trh, v) - 2.0 * directional_value(trk, v) -
                     2.0 * div_h_v + 2.0 * div_k_v;
  return std::abs(rbar - rhs);
}

double jang_reduced_residual(const CauchyData& data, const JangPair& pair, const Point3& p,
                             double jang_tol) {
  const SchoenYauTerms t = schoen_yau_terms(deformation_jets(data, pair, p));
  if (std::abs(t.jang_residual) > jang_tol)
    throw Error("reduced identity: point is not on a generalized Jang solution (residual " +
                std::to_string(t.jang_residual) + ")");
  return std::abs(t.rbar_direct -
                  (t.energy + t.h_minus_k_norm2 + 2.0 * t.q_norm2 + t.div_term));
}

ZeroDivergence zero_divergence_residual(const CauchyData& data, const JangPair& pair,
                                        const Point3& p) {
  const DeformationJets d = deformation_jets(data, pair, p);
  require_phi(d.phi.value, "zero divergence");
  JetVec phiq;
  for (int i = 0; i < 3; ++i) phiq[i] = d.phi.truncated(1) * d.q[i];
  ZeroDivergence z;
  z.div_phi_q = divergence_covector(values(d.gamma_bar), mat(d.gbar_inv), phiq);
  z.div_st = z.div_phi_q / d.phi.value;
  return z;
}

MeanCurvatureTransform mean_curvature_transform(const CauchyData& data, const JangPair& pair,
                                                const ScalarField& level, const Point3& p) {
  const ScalarJet phi_j = pair.phi.jet(p, 1);
  if (!(phi_j.value > 0.0)) throw Error("deformation: phi must be positive");
  const DeformationJets d =
      deformation_jets(data.g.jet(p, 1), data.k.jet(p, 0), pair.f.jet(p, 2), phi_j);
  const ScalarJet l = level.jet(p, 2);
  const Mat3 g = mat(d.g), gi = mat(d.g_inv);
  const Vec3 dl = l.grad;
  if (!(contract(gi, dl, dl) > 1e-24)) throw Error("mean curvature: vanishing surface gradient");

  MeanCurvatureTransform out;
  out.H = level_set_mean_curvature(d.g, l);
  out.direct = level_set_mean_curvature(d.gbar, l);

  const Vec3 nu = unit_normal(gi, dl);
  const double grad_l = std::sqrt(contract(gi, dl, dl));
  const Mat3 hess_l = hessian_laplacian(d.g, l).hess;
  const Vec3 df = values(d.df), dphi = values(d.dphi);
  const Mat3 h = mat(d.h);
  const double phi = d.phi.value, phi2 = phi * phi, W = d.W.value;
  const double nu_f = dot(df, nu), nu_phi = dot(dphi, nu);
  const Vec3 f_up = raise(gi, df);
  Vec3 sf{};  // tangential gradient of f
  for (int i = 0; i < 3; ++i) sf[i] = f_up[i] - nu_f * nu[i];
  const double sf2 = quad(g, sf, sf);
  const double WS = 1.0 + phi2 * sf2;
  const double II_ff = quad(hess_l, sf, sf) / grad_l;
  const double h_ff = quad(h, sf, sf);
  const double trS_h = surface_trace(gi, nu, h);
  const double nu_v = dot(lower(g, nu), values(d.v_up));
  const double dfdphi = contract(gi, df, dphi);

  // The tangential inverse of gbar restricted to the surface carries 1 + phi^2 |grad_S f|^2,
  // not 1 + phi^2 |df|^2.
  out.formula = std::sqrt(W / WS) *
                (out.H - phi2 * II_ff / WS - (trS_h - phi2 * h_ff / WS) * nu_v +
                 phi * sf2 / WS * (nu_phi - phi2 * nu_f * dfdphi / W));

  // On level sets of phi, grad phi = nu(phi) nu. With T = phi grad_S f / sqrt(W),
  // phi^2 X(grad_S f, grad_S f) / WS = (W / WS) X(T, T).
  const double II_TT = phi2 * II_ff / W, h_TT = phi2 * h_ff / W;
  out.formula_phi_level =
      std::sqrt(W / WS) * ((out.H - (W / WS) * II_TT) - (trS_h - (W / WS) * h_TT) * nu_v) +
      phi * nu_phi * sf2 / std::sqrt(W * WS);
  return out;
}

namespace {

struct GammaField {
  JetVec gamma;  // phi^2 df, order 1
  double phi2 = 0.0;
};

GammaField phi2_df_jets(const JangPair& pair, const Point3& p) {
  GammaField r;
  if (pair.phi2_df) {
    for (int i = 0; i < 3; ++i) r.gamma[i] = (*pair.phi2_df)[i].jet(p, 1);
  } else {
    const ScalarJet phi = pair.phi.jet(p, 1);
    const ScalarJet f = pair.f.jet(p, 2);
    for (int i = 0; i < 3; ++i) r.gamma[i] = phi * phi * partial(f, i);
  }
  if (pair.phi_squared) {
    r.phi2 = pair.phi_squared->value(p);
  } else {
    const double phi = pair.phi.value(p);
    r.phi2 = phi * phi;
  }
  return r;
}

}  // namespace

double boundary_hnn(const JangPair& pair, const Sym2Jet& g, const Vec3& nu, const Point3& p) {
  if (g.order() < 1) throw Error("boundary h(nu, nu): metric jet needs order 1");
  const GammaField gf = phi2_df_jets(pair, p);
  const Mat3 gi = inverse3(g.values());
  const Christoffel3 G = christoffel(g, gi);
  const Vec3 gam = values(gf.gamma);
  const double denom2 = gf.phi2 + contract(gi, gam, gam);
  if (!(denom2 > 1e-300)) throw Error("boundary h(nu, nu): denominator underflow");
  double num = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double nab = gf.gamma[j].grad[i];
      for (int m = 0; m < 3; ++m) nab -= G.gamma[i][j][m] * gam[m];
      num += nu[i] * nu[j] * nab;
    }
  return num / std::sqrt(denom2);
}

double normal_velocity(const JangPair& pair, const Mat3& g_inv, const Vec3& nu,
                       const Point3& p) {
  Vec3 gam{};
  double phi2 = 0.0;
  if (pair.phi2_df) {
    for (int i = 0; i < 3; ++i) gam[i] = (*pair.phi2_df)[i].value(p);
    phi2 = pair.phi_squared ? pair.phi_squared->value(p) : std::pow(pair.phi.value(p), 2);
  } else {
    const GammaField gf = phi2_df_jets(pair, p);
    gam = values(gf.gamma);
    phi2 = gf.phi2;
  }
  const double denom2 = phi2 + contract(g_inv, gam, gam);
  if (!(denom2 > 1e-300)) return 0.0;
  return dot(nu, gam) / std::sqrt(denom2);
}

double blowup_level_set_relation(const CauchyData& data, const JangPair& pair,
                                 const Point3& p) {
  const ScalarJet phi = pair.phi.jet(p, 1);
  if (!(phi.value > 0.0)) throw Error("deformation: phi must be positive");
  const DeformationJets d =
      deformation_jets(data.g.jet(p, 1), data.k.jet(p, 0), pair.f.jet(p, 2), phi);
  const Mat3 g = mat(d.g), gi = mat(d.g_inv);
  const Vec3 df = values(d.df);
  if (!(contract(gi, df, df) > 1e-24)) throw Error("blowup relation: vanishing grad f");
  const Vec3 nu = unit_normal(gi, df);
  const double H = level_set_mean_curvature(d.g, d.f.truncated(2));
  const double nu_v = dot(lower(g, nu), values(d.v_up));
  const Mat3 hk = mat(d.h - d.k);
  return nu_v * H - surface_trace(gi, nu, mat(d.k)) + quad(hk, nu, nu) / d.W.value;
}

BoundaryConditionReport boundary_condition_check(const JangPair& pair, const CauchyData& data,
                                                 const LevelSetSurface& horizon,
                                                 const std::optional<LevelSetSurface>& probe,
                                                 int n_theta, int n_phi, double eps) {
  const auto on_horizon = sample_surface(horizon, n_theta, n_phi);
  bool all_future = true, all_past = true;
  double trk_sum = 0.0, wsum = 0.0;
  for (const auto& s : on_horizon) {
    const SurfaceExpansion e = surface_expansion(data, horizon.level, s.x, eps);
    if (!e.has(HorizonClass::generalized_AH))
      throw Error("boundary check: surface is not a generalized apparent horizon");
    all_future = all_future && e.has(HorizonClass::future_AH);
    all_past = all_past && e.has(HorizonClass::past_AH);
    trk_sum += s.weight * e.trk;
    wsum += s.weight;
  }
  BoundaryConditionReport r;
  r.horizon_class = all_future && all_past ? HorizonClass::future_and_past_AH
                    : all_future           ? HorizonClass::future_AH
                    : all_past             ? HorizonClass::past_AH
                                           : HorizonClass::generalized_AH;
  r.mean_trk = trk_sum / wsum;
  const double target = r.horizon_class == HorizonClass::future_and_past_AH ? 0.0
                        : r.mean_trk > 0.0                                   ? 1.0
                                                                             : -1.0;
  const LevelSetSurface& where = probe ? *probe : horizon;
  const auto samples = sample_surface(where, n_theta, n_phi);
  for (const auto& s : samples) {
    const Mat3 gi = inverse3(data.g.value(s.x));
    const Vec3 nu = unit_normal(gi, where.level.jet(s.x, 1).grad);
    const double phi = pair.phi_squared ? std::sqrt(std::max(0.0, pair.phi_squared->value(s.x)))
                                        : std::abs(pair.phi.value(s.x));
    r.sup_phi = std::max(r.sup_phi, phi);
    r.sup_normal_mismatch =
        std::max(r.sup_normal_mismatch, std::abs(normal_velocity(pair, gi, nu, s.x) - target));
  }
  r.samples = static_cast<int>(samples.size());
  return r;
}

}  // namespace jangbench
