#include "jangbench/schwarzschild_models.hpp"

#include <boost/math/special_functions/lambert_w.hpp>
#include <cmath>

namespace jangbench {

namespace {

void check_mass(double m) {
  if (!(m > 0.0) || !std::isfinite(m)) throw Error("Schwarzschild mass must be positive");
}

double alpha_of(double m, double r) { return (r - 2.0 * m) * std::exp(r / (2.0 * m) - 1.0); }

double alpha_prime(double m, double r) { return std::exp(r / (2.0 * m) - 1.0) * r / (2.0 * m); }

}  // namespace

KruskalFunctions kruskal_functions(double m, double r) {
  check_mass(m);
  if (!(r > 0.0)) throw Error("kruskal_functions: r must be positive");
  return {alpha_of(m, r), 8.0 * m * m / r * std::exp(1.0 - r / (2.0 * m))};
}

double r_from_uv(double m, double uv) {
  check_mass(m);
  const double floor = -2.0 * m / std::exp(1.0);
  if (!(uv > floor) || !std::isfinite(uv)) throw Error("r_from_uv: uv must exceed -2m/e");
  const double tol = 1e-13 * std::max(1.0, std::abs(uv));

  // alpha = 2m w e^w with w = r/2m - 1, so r = 2m (1 + W0(uv / 2m)).
  double r;
  try {
    r = 2.0 * m * (1.0 + boost::math::lambert_w0(uv / (2.0 * m)));
  } catch (const std::exception&) {
    r = 2.0 * m;
  }
  double lo = 0.0, hi = std::max(4.0 * m, 2.0 * r);
  while (alpha_of(m, hi) < uv) hi *= 2.0;
  if (!(r > lo && r < hi)) r = 0.5 * (lo + hi);

  for (int it = 0; it < kKruskalMaxIterations; ++it) {
    const double res = alpha_of(m, r) - uv;
    if (std::abs(res) <= tol) return r;
    if (res > 0.0)
      hi = r;
    else
      lo = r;
    const double d = alpha_prime(m, r);
    double next = r - res / d;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == r) {
      // No representable improvement; accept when the bracket has collapsed.
      if (std::abs(res) <= 4.0 * tol) return r;
      break;
    }
    r = next;
  }
  throw Error("r_from_uv: no convergence after 100 iterations");
}

KruskalPoint exterior_isometry(double m, double t, double r) {
  check_mass(m);
  if (!(r > 2.0 * m)) throw Error("exterior_isometry: r must exceed 2m");
  const double s = std::sqrt(alpha_of(m, r));
  return {s * std::exp(-t / (4.0 * m)), s * std::exp(t / (4.0 * m)), r};
}

KruskalPullback kruskal_pullback_fd(double m, double t, double r, double step) {
  check_mass(m);
  if (!(r > 2.0 * m)) throw Error("kruskal_pullback_fd: r must exceed 2m");
  if (step <= 0.0) step = 1e-3 * std::min(4.0 * m, r - 2.0 * m);
  if (r - 3.0 * step <= 2.0 * m) throw Error("kruskal_pullback_fd: step reaches the horizon");
  auto sampler = [m](const Point3& q, double* out) {
    const KruskalPoint k = exterior_isometry(m, q[0], q[1]);
    out[0] = k.u;
    out[1] = k.v;
  };
  const auto jets = fd_jets(sampler, 2, {t, r, 0.0}, 1, step);
  const double beta = kruskal_functions(m, r).beta;
  const Vec3 du = jets[0].grad, dv = jets[1].grad;
  KruskalPullback out;
  out.g_tt = 2.0 * beta * du[0] * dv[0];
  out.g_tr = beta * (du[0] * dv[1] + du[1] * dv[0]);
  out.g_rr = 2.0 * beta * du[1] * dv[1];
  const double lapse2 = 1.0 - 2.0 * m / r;
  out.residual = std::max({std::abs(out.g_tt + lapse2) / lapse2,
                           std::abs(out.g_tr),
                           std::abs(out.g_rr * lapse2 - 1.0)});
  return out;
}

Sym2Jet isotropic_metric_jet(double m, const JetVec& x) {
  const ScalarJet w = pow(1.0 + 0.5 * m / radius(x), 4.0);
  Sym2Jet g = Sym2Jet::constant({}, x[0].order);
  for (int i = 0; i < 3; ++i) g.c[i][i] = w;
  return g;
}

Sym2Jet standard_metric_jet(double m, const JetVec& x) {
  const ScalarJet r = radius(x);
  const ScalarJet c = 2.0 * m / ((r - 2.0 * m) * r * r);
  Sym2Jet g = Sym2Jet::identity(x[0].order);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) g.c[i][j] += c * x[i] * x[j];
  return g;
}

CauchyData isotropic_slice(double m) {
  check_mass(m);
  CauchyData d;
  d.domain = "isotropic Schwarzschild, |x| > 0; horizon neck at |x| = m/2";
  d.g = Sym2Field::closed_form([m](const JetVec& x) { return isotropic_metric_jet(m, x); });
  d.k = Sym2Field::constant({});
  d.asymptotics.mass_hint = m;
  d.asymptotics.end_radius = 0.5 * m;
  return d;
}

CauchyData standard_slice(double m) {
  check_mass(m);
  CauchyData d;
  d.domain = "standard Schwarzschild, |x| > 2m";
  d.g = Sym2Field::closed_form([m](const JetVec& x) { return standard_metric_jet(m, x); });
  d.k = Sym2Field::constant({});
  d.asymptotics.mass_hint = m;
  d.asymptotics.end_radius = 2.0 * m;
  return d;
}

double standard_radius_from_isotropic(double m, double rho) {
  check_mass(m);
  if (!(rho > 0.0)) throw Error("isotropic radius must be positive");
  const double w = 1.0 + 0.5 * m / rho;
  return rho * w * w;
}

double isotropic_radius_from_standard(double m, double r) {
  check_mass(m);
  if (!(r >= 2.0 * m)) throw Error("standard radius must be at least 2m");
  return 0.5 * (r - m + std::sqrt(r * r - 2.0 * m * r));
}

double chart_isometry_residual(double m, const Point3& p) {
  check_mass(m);
  const JetVec x = coordinates(p, 1);
  const ScalarJet rho = radius(x);
  if (!(rho.value > 0.5 * m)) throw Error("chart_isometry_residual: point inside the neck");
  const ScalarJet w = 1.0 + 0.5 * m / rho;
  const JetVec y{x[0] * w * w, x[1] * w * w, x[2] * w * w};
  const Mat3 gs = standard_metric_jet(m, y).values();
  const Mat3 gi = isotropic_metric_jet(m, x).values();
  double res = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) s += y[a].grad[i] * gs[a][b] * y[b].grad[j];
      res = std::max(res, std::abs(s - gi[i][j]));
    }
  return res;
}

namespace {

struct LineParams {
  double m, a, c;
};

// The Kruskal line v = c + a u, parameterized by r on r >= 2m.
ScalarJet line_E(const LineParams& L, const ScalarJet& r) { return exp(r / (2.0 * L.m) - 1.0); }

ScalarJet line_D(const LineParams& L, const ScalarJet& r) {
  return sqrt(L.c * L.c + 4.0 * L.a * (r - 2.0 * L.m) * line_E(L, r));
}

ScalarJet line_u(const LineParams& L, const ScalarJet& r) {
  const ScalarJet D = line_D(L, r);
  if (L.c >= 0.0) return 2.0 * (r - 2.0 * L.m) * line_E(L, r) / (L.c + D);
  return (D - L.c) / (2.0 * L.a);
}

// Sign-stable pieces built from the radial factors, phi^2 and the radial
// component of phi^2 df.
struct RadialPieces {
  RadialFunction grr_inv, gss, phi2, gamma_r;
};

ScalarJet gamma_nu(const RadialPieces& P, const ScalarJet& r) {
  return P.gamma_r(r) * sqrt(P.grr_inv(r));
}

RadialCauchyData radial_data_from(const RadialPieces& P, double r_min, const std::string& name) {
  RadialCauchyData d;
  d.g.grr_inv = P.grr_inv;
  d.g.gss = P.gss;
  d.g.r_min = r_min;
  d.g.name = name;
  const RadialFunction gnu = [P](const ScalarJet& r) { return gamma_nu(P, r); };
  const RadialFunction dgnu = radial_derivative(gnu);
  const RadialFunction dgss = radial_derivative(P.gss);
  // h(nu, nu) = d_s(gamma_nu) / sqrt(phi^2 + gamma_nu^2), h(e, e) = gamma_nu (H/2) / (same).
  d.k_rr = [P, gnu, dgnu](const ScalarJet& r) {
    const ScalarJet w = gnu(r);
    return dgnu(r) / (sqrt(P.grr_inv(r)) * sqrt(P.phi2(r) + w * w));
  };
  d.k_ss = [P, gnu, dgss](const ScalarJet& r) {
    const ScalarJet w = gnu(r);
    return 0.5 * dgss(r) * sqrt(P.grr_inv(r)) * w / sqrt(P.phi2(r) + w * w);
  };
  return d;
}

}  // namespace

CoESlice coe_slice(double m, const CoESliceSpec& spec) {
  check_mass(m);
  if (spec.resolution < 2) throw Error("coe_slice: resolution must be at least 2");
  CoESlice s;
  s.m = m;
  s.spec = spec;
  RadialPieces P;
  P.gss = [](const ScalarJet& r) { return r * r; };
  P.phi2 = [m](const ScalarJet& r) { return 1.0 - 2.0 * m / r; };

  if (spec.kind == CoEKind::kruskal_line) {
    if (!(spec.slope > 0.0) || !std::isfinite(spec.slope))
      throw Error("coe_slice: slice not spacelike (slope must be positive)");
    if (spec.u_b < 0.0 || spec.v_b < 0.0)
      throw Error("coe_slice: slice touches the quadrant boundary outside the exterior");
    if (spec.u_b > 0.0 && spec.v_b > 0.0)
      throw Error("coe_slice: boundary point must lie on the horizon uv = 0");
    const LineParams L{m, spec.slope, spec.v_b - spec.slope * spec.u_b};
    s.smooth_horizon = L.c != 0.0;
    P.grr_inv = [L](const ScalarJet& r) {
      return 1.0 - 2.0 * L.m / r + L.c * L.c * exp(1.0 - r / (2.0 * L.m)) / (4.0 * L.a * r);
    };
    P.gamma_r = [L](const ScalarJet& r) { return -L.c / line_D(L, r); };
    s.f_radial = [L](const ScalarJet& r) {
      const ScalarJet u = line_u(L, r);
      return 2.0 * L.m * (log(L.c + L.a * u) - log(u));
    };
    s.data.domain = "Kruskal line slice, |x| >= 2m";
  } else {
    const double b = spec.boost, w = spec.width * m;
    if (!std::isfinite(b) || !(w > 0.0)) throw Error("coe_slice: invalid boosted graph");
    s.f_radial = [m, b, w](const ScalarJet& r) {
      const ScalarJet x = r - 3.0 * m;
      return b * x * exp(-(x * x) / (w * w));
    };
    const auto df = [m, b, w](const ScalarJet& r) {
      const ScalarJet x = r - 3.0 * m;
      return b * exp(-(x * x) / (w * w)) * (1.0 - 2.0 * x * x / (w * w));
    };
    // Spacelike iff phi^4 f'^2 < 1.
    for (int i = 1; i <= 20000; ++i) {
      const double r = 2.0 * m + i * (3.0 * m + 20.0 * w) / 20000.0;
      const double p2 = 1.0 - 2.0 * m / r;
      const double d = df(ScalarJet(r)).value;
      if (!(p2 * p2 * d * d < 1.0)) throw Error("coe_slice: slice not spacelike");
    }
    P.grr_inv = [m, df](const ScalarJet& r) {
      const ScalarJet p2 = 1.0 - 2.0 * m / r;
      const ScalarJet d = df(r);
      return p2 / (1.0 - p2 * p2 * d * d);
    };
    P.gamma_r = [m, df](const ScalarJet& r) { return (1.0 - 2.0 * m / r) * df(r); };
    s.data.domain = "boosted graph over the standard slice, |x| > 2m";
  }

  s.gamma_radial = P.gamma_r;
  s.phi_radial = [m](const ScalarJet& r) { return sqrt(1.0 - 2.0 * m / r); };
  s.s_radial = [P](const ScalarJet& r) {
    const ScalarJet w = gamma_nu(P, r);
    return w / sqrt(P.phi2(r) + w * w);
  };
  s.radial = radial_data_from(P, 2.0 * m, spec.kind == CoEKind::kruskal_line ? "kruskal line"
                                                                              : "boosted graph");
  const CauchyData cart = cartesian_data(s.radial);
  s.data.g = cart.g;
  s.data.k = cart.k;
  s.data.asymptotics.mass_hint = m;
  s.data.asymptotics.end_radius = 2.0 * m;

  s.pair.f = cartesian_scalar(s.f_radial);
  s.pair.phi = cartesian_scalar(s.phi_radial);
  s.phi0 = s.pair.phi;
  s.pair.phi_squared = cartesian_scalar(P.phi2);
  std::array<ScalarField, 3> g2;
  for (int i = 0; i < 3; ++i)
    g2[i] = ScalarField::closed_form([gr = P.gamma_r, i](const JetVec& x) {
      const ScalarJet r = radius(x);
      return gr(r) * x[i] / r;
    });
  s.pair.phi2_df = g2;
  return s;
}

KruskalPoint coe_slice_point(const CoESlice& slice, double r) {
  if (slice.spec.kind != CoEKind::kruskal_line)
    throw Error("coe_slice_point: only defined for Kruskal line slices");
  if (!(r >= 2.0 * slice.m)) throw Error("coe_slice_point: r must be at least 2m");
  const LineParams L{slice.m, slice.spec.slope, slice.spec.v_b - slice.spec.slope * slice.spec.u_b};
  const double u = line_u(L, ScalarJet(r)).value;
  return {u, L.c + L.a * u, r};
}

}  // namespace jangbench
