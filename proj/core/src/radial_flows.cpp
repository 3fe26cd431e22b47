#include "jangbench/radial_flows.hpp"

#include <Eigen/Dense>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_spline.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <random>
#include <sstream>

namespace jangbench {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Re-expresses a jet in the first variable as a function of an arbitrary jet r.
ScalarJet lift(const ScalarJet& q, const ScalarJet& r) {
  return compose(r, q.value, q.order >= 1 ? q.grad[0] : 0.0, q.order >= 2 ? q.hess[0][0] : 0.0,
                 q.order >= 3 ? q.third[0][0][0] : 0.0);
}

}  // namespace

ScalarJet radial_jet(const RadialFunction& fn, double r, int order) {
  return fn(ScalarJet::variable(r, 0, order));
}

RadialFunction radial_derivative(RadialFunction fn) {
  return [fn = std::move(fn)](const ScalarJet& r) {
    if (r.order + 1 > kMaxJetOrder) throw Error("radial derivative needs jets of order <= 2");
    const ScalarJet q = fn(ScalarJet::variable(r.value, 0, r.order + 1));
    return lift(partial(q, 0), r);
  };
}

double RadialMetric::grr(double r) const {
  check_range(r);
  return 1.0 / radial_jet(grr_inv, r, 0).value;
}

void RadialMetric::check_range(double r) const {
  if (!(r >= r_min && r <= r_max))
    throw Error("radius " + std::to_string(r) + " outside the profile range [" +
                std::to_string(r_min) + ", " + std::to_string(r_max) + "]");
}

RadialMetric flat_radial() {
  RadialMetric g;
  g.grr_inv = [](const ScalarJet& r) { return ScalarJet::constant(1.0, r.order); };
  g.gss = [](const ScalarJet& r) { return r * r; };
  g.name = "flat";
  return g;
}

RadialMetric standard_schwarzschild_radial(double m) {
  if (!(m > 0.0)) throw Error("mass must be positive");
  RadialMetric g;
  g.grr_inv = [m](const ScalarJet& r) { return 1.0 - 2.0 * m / r; };
  g.gss = [](const ScalarJet& r) { return r * r; };
  g.r_min = 2.0 * m;
  g.name = "schwarzschild-standard";
  return g;
}

RadialMetric isotropic_schwarzschild_radial(double m) {
  if (!(m > 0.0)) throw Error("mass must be positive");
  RadialMetric g;
  g.grr_inv = [m](const ScalarJet& r) { return pow(1.0 + 0.5 * m / r, -4.0); };
  g.gss = [m](const ScalarJet& r) { return r * r * pow(1.0 + 0.5 * m / r, 4.0); };
  g.r_min = 1e-3 * m;
  g.name = "schwarzschild-isotropic";
  return g;
}

MassProfileMetric positive_curvature_radial(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const double m0 = 0.2 + 0.8 * U(rng);
  struct Step {
    double delta, center, width;
  };
  std::vector<Step> steps(3);
  double m_max = m0;
  for (auto& s : steps) {
    s.delta = 0.05 + 0.45 * U(rng);
    s.center = 4.0 + 16.0 * U(rng);
    s.width = 0.5 + 2.5 * U(rng);
    m_max += s.delta;
  }
  MassProfileMetric out;
  out.r_start = 4.0 * m_max;
  out.metric.grr_inv = [m0, steps](const ScalarJet& r) {
    ScalarJet M = ScalarJet::constant(m0, r.order);
    for (const auto& s : steps) M += 0.5 * s.delta * (1.0 + tanh((r - s.center) / s.width));
    return 1.0 - 2.0 * M / r;
  };
  out.metric.gss = [](const ScalarJet& r) { return r * r; };
  out.metric.r_min = out.r_start;
  out.metric.name = "mass-profile seed " + std::to_string(seed);
  return out;
}

namespace {

struct SplineHandle {
  std::vector<double> x;
  std::unique_ptr<gsl_spline, void (*)(gsl_spline*)> s{nullptr, gsl_spline_free};
};

const bool kGslQuiet = [] {
  gsl_set_error_handler_off();
  return true;
}();

}  // namespace

RadialFunction spline_function(std::vector<double> r, std::vector<double> y) {
  (void)kGslQuiet;
  if (r.size() != y.size() || r.size() < 4) throw Error("spline needs at least 4 matching samples");
  for (std::size_t i = 1; i < r.size(); ++i)
    if (!(r[i] > r[i - 1])) throw Error("spline radii must be strictly increasing");
  auto h = std::make_shared<SplineHandle>();
  h->s.reset(gsl_spline_alloc(gsl_interp_cspline, r.size()));
  if (!h->s || gsl_spline_init(h->s.get(), r.data(), y.data(), r.size()) != GSL_SUCCESS)
    throw Error("spline construction failed");
  h->x = std::move(r);
  return [h](const ScalarJet& rj) {
    const double x = rj.value;
    const auto& xs = h->x;
    if (!(x >= xs.front() && x <= xs.back())) throw Error("spline evaluated outside its samples");
    std::unique_ptr<gsl_interp_accel, void (*)(gsl_interp_accel*)> acc(gsl_interp_accel_alloc(),
                                                                       gsl_interp_accel_free);
    const double f0 = gsl_spline_eval(h->s.get(), x, acc.get());
    const double f1 = gsl_spline_eval_deriv(h->s.get(), x, acc.get());
    const double f2 = gsl_spline_eval_deriv2(h->s.get(), x, acc.get());
    // Piecewise-constant third derivative from the second derivative at the knots.
    std::size_t i = std::upper_bound(xs.begin(), xs.end(), x) - xs.begin();
    i = std::clamp<std::size_t>(i, 1, xs.size() - 1);
    const double f3 = (gsl_spline_eval_deriv2(h->s.get(), xs[i], acc.get()) -
                       gsl_spline_eval_deriv2(h->s.get(), xs[i - 1], acc.get())) /
                      (xs[i] - xs[i - 1]);
    return compose(rj, f0, f1, f2, f3);
  };
}

Sym2Field cartesian_metric(const RadialMetric& g) {
  return Sym2Field::closed_form([g](const JetVec& x) {
    const ScalarJet r = radius(x);
    const ScalarJet a = 1.0 / g.grr_inv(r);
    const ScalarJet b = g.gss(r) / (r * r);
    const ScalarJet c = (a - b) / (r * r);
    Sym2Jet out;
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) {
        out.c[i][j] = c * x[i] * x[j];
        if (i == j) out.c[i][j] += b;
        out.c[j][i] = out.c[i][j];
      }
    return out;
  });
}

ScalarField cartesian_scalar(const RadialFunction& fn) {
  return ScalarField::closed_form([fn](const JetVec& x) { return fn(radius(x)); });
}

CauchyData cartesian_data(const RadialCauchyData& data) {
  CauchyData out;
  out.domain = "radial data " + data.g.name;
  out.g = cartesian_metric(data.g);
  out.k = Sym2Field::closed_form([d = data](const JetVec& x) {
    const ScalarJet r = radius(x);
    const ScalarJet a = d.k_rr(r);
    const ScalarJet b = d.k_ss(r) / (r * r);
    const ScalarJet c = (a - b) / (r * r);
    Sym2Jet out;
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) {
        out.c[i][j] = c * x[i] * x[j];
        if (i == j) out.c[i][j] += b;
        out.c[j][i] = out.c[i][j];
      }
    return out;
  });
  return out;
}

SphereGeometry sphere_geometry(const RadialMetric& g, double r) {
  g.check_range(r);
  const ScalarJet gss = radial_jet(g.gss, r, 1);
  const double q = radial_jet(g.grr_inv, r, 0).value;
  if (!(gss.value > 0.0) || !(q >= 0.0)) throw Error("radial metric not positive");
  return {4.0 * kPi * gss.value, gss.grad[0] * std::sqrt(q) / gss.value};
}

double radial_scalar_curvature(const RadialMetric& g, double r) {
  g.check_range(r);
  const ScalarJet rj = ScalarJet::variable(r, 0, 2);
  const ScalarJet psi = sqrt(g.gss(rj));
  const ScalarJet q = sqrt(g.grr_inv(rj));
  const ScalarJet psi_s = partial(psi, 0) * q.truncated(1);
  const double psi_ss = partial(psi_s, 0).value * q.value;
  const double p = psi.value;
  return 2.0 / (p * p) * (1.0 - psi_s.value * psi_s.value) - 4.0 * psi_ss / p;
}

double hawking_mass(double area, double mean_sq_integral) {
  if (!(area > 0.0)) throw Error("hawking_mass: area must be positive");
  return std::sqrt(area / (16.0 * kPi)) * (1.0 - mean_sq_integral / (16.0 * kPi));
}

namespace {

// du/dx with x = log r.
double flow_rate(const RadialMetric& g, double x) {
  const ScalarJet gss = radial_jet(g.gss, std::exp(x), 1);
  return std::exp(x) * gss.grad[0] / gss.value;
}

std::vector<double> rk4_flow(const RadialMetric& g, double x0, double x1, int n) {
  std::vector<double> u(n + 1, 0.0);
  const double h = (x1 - x0) / n;
  for (int i = 0; i < n; ++i) {
    const double x = x0 + i * h;
    const double k1 = flow_rate(g, x);
    const double k2 = flow_rate(g, x + 0.5 * h);
    const double k4 = flow_rate(g, x + h);
    // The right-hand side does not depend on u, so k2 = k3.
    u[i + 1] = u[i] + h * (k1 + 4.0 * k2 + k4) / 6.0;
  }
  return u;
}

}  // namespace

FlowState imcf_radial_solve(const RadialMetric& gbar, double r0, double r1, int steps) {
  if (!(r0 > 0.0) || !(r1 > r0)) throw Error("imcf_radial_solve: need 0 < r0 < r1");
  gbar.check_range(r0);
  gbar.check_range(r1);
  if (steps <= 0)
    steps = std::max(100, static_cast<int>(std::ceil(kStepsPerDecade * std::log10(r1 / r0))));
  const double x0 = std::log(r0), x1 = std::log(r1);

  FlowState fs;
  fs.r.resize(steps + 1);
  for (int i = 0; i <= steps; ++i) fs.r[i] = std::exp(x0 + (x1 - x0) * i / steps);
  fs.r.front() = r0;
  fs.r.back() = r1;
  for (int i = 0; i <= steps; ++i) {
    const SphereGeometry sg = sphere_geometry(gbar, fs.r[i]);
    if (sg.H < 0.0 || (i > 0 && !(sg.H > 0.0)))
      throw Error("monotone mean curvature violated at r = " + std::to_string(fs.r[i]) +
                  " (H = " + std::to_string(sg.H) + "); the flow would jump");
    fs.area.push_back(sg.area);
    fs.H.push_back(sg.H);
  }
  fs.u = rk4_flow(gbar, x0, x1, steps);
  const std::vector<double> fine = rk4_flow(gbar, x0, x1, 2 * steps);
  fs.step_error = std::abs(fine.back() - fs.u.back()) / 15.0;

  const double a0 = fs.area.front();
  for (int i = 0; i <= steps; ++i) {
    const double A = fs.area[i], H = fs.H[i];
    fs.hawking.push_back(hawking_mass(A, A * H * H));
    const double q = std::sqrt(radial_jet(gbar.grr_inv, fs.r[i], 0).value);
    const double du = flow_rate(gbar, std::log(fs.r[i])) / fs.r[i];
    fs.Q.push_back(du * q * std::sqrt(a0 * std::exp(fs.u[i]) / (16.0 * kPi)));
    fs.area_law_error = std::max(fs.area_law_error, std::abs(std::log(A / a0) - fs.u[i]));
  }
  return fs;
}

GerochReport geroch_monotonicity_check(const FlowState& flow, const RadialMetric& gbar) {
  const std::size_t n = flow.r.size();
  if (n < 3 || flow.u.size() != n || flow.hawking.size() != n || flow.area.size() != n)
    throw Error("geroch_monotonicity_check: invalid flow");
  GerochReport rep;
  rep.margin = std::numeric_limits<double>::infinity();
  rep.min_umbilic_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < n; ++i)
    rep.max_hawking_decrease =
        std::max(rep.max_hawking_decrease, flow.hawking[i] - flow.hawking[i + 1]);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h1 = flow.u[i] - flow.u[i - 1], h2 = flow.u[i + 1] - flow.u[i];
    if (!(h1 > 0.0) || !(h2 > 0.0)) throw Error("geroch_monotonicity_check: flow time not increasing");
    double dm;
    if (n >= 5) {
      // Fourth-order differences on the uniform log r grid, one-sided next to the
      // ends, then dt/dlog r exactly.
      const double hx = (std::log(flow.r.back()) - std::log(flow.r.front())) / static_cast<double>(n - 1);
      const auto& m = flow.hawking;
      double dmdx;
      if (i == 1)
        dmdx = (-3.0 * m[0] - 10.0 * m[1] + 18.0 * m[2] - 6.0 * m[3] + m[4]) / (12.0 * hx);
      else if (i + 2 == n)
        dmdx = (-m[i - 3] + 6.0 * m[i - 2] - 18.0 * m[i - 1] + 10.0 * m[i] + 3.0 * m[i + 1]) / (12.0 * hx);
      else
        dmdx = (m[i - 2] - 8.0 * m[i - 1] + 8.0 * m[i + 1] - m[i + 2]) / (12.0 * hx);
      dm = dmdx / flow_rate(gbar, std::log(flow.r[i]));
    } else {
      dm = (h1 * h1 * flow.hawking[i + 1] - h2 * h2 * flow.hawking[i - 1] -
            (h1 * h1 - h2 * h2) * flow.hawking[i]) /
           (h1 * h2 * (h1 + h2));
    }
    const double A = flow.area[i];
    const double rhs =
        std::sqrt(A / (16.0 * kPi)) * radial_scalar_curvature(gbar, flow.r[i]) * A / (16.0 * kPi);
    rep.t.push_back(flow.u[i]);
    rep.dmdt.push_back(dm);
    rep.rhs.push_back(rhs);
    rep.margin = std::min(rep.margin, dm - rhs);

    // Round spheres: II = (H/2) gamma and K = 1/gss.
    const ScalarJet gss = radial_jet(gbar.gss, flow.r[i], 1);
    const double q = std::sqrt(radial_jet(gbar.grr_inv, flow.r[i], 0).value);
    const double ii = 0.5 * gss.grad[0] * q / gss.value;  // principal curvature
    const double H = 2.0 * ii;
    rep.min_umbilic_gap = std::min(rep.min_umbilic_gap, 2.0 * ii * ii - 0.5 * H * H);
    rep.gauss_bonnet_error =
        std::max(rep.gauss_bonnet_error, std::abs((1.0 / gss.value) * (4.0 * kPi * gss.value) - 4.0 * kPi));
  }
  return rep;
}

double q_weight(const FlowState& flow, const RadialMetric& gbar, double r) {
  if (flow.r.size() < 2) throw Error("q_weight: empty flow");
  if (!(r >= flow.r.front() && r <= flow.r.back())) throw Error("q_weight: r outside the flow");
  const std::size_t i = std::min<std::size_t>(
      flow.r.size() - 1,
      std::max<std::size_t>(1, std::lower_bound(flow.r.begin(), flow.r.end(), r) - flow.r.begin()));
  const double w = (r - flow.r[i - 1]) / (flow.r[i] - flow.r[i - 1]);
  const double u = (1.0 - w) * flow.u[i - 1] + w * flow.u[i];
  const SphereGeometry sg = sphere_geometry(gbar, r);
  return sg.H * std::sqrt(flow.area.front() * std::exp(u) / (16.0 * kPi));
}

PhiFromUF phi_from_u_f(const ScalarJet& u, const ScalarJet& f, const Mat3& g) {
  Eigen::Matrix3d G;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) G(i, j) = g[i][j];
  const Eigen::LLT<Eigen::Matrix3d> llt(G);
  if (llt.info() != Eigen::Success) throw Error("phi_from_u_f: metric is not positive definite");
  // Orthonormal components: g^{-1} = L^{-T} L^{-1}.
  const Eigen::Vector3d F = llt.matrixL().solve(Eigen::Vector3d(f.grad[0], f.grad[1], f.grad[2]));
  const Eigen::Vector3d D = llt.matrixL().solve(Eigen::Vector3d(u.grad[0], u.grad[1], u.grad[2]));
  const double a = F.squaredNorm();
  const double b = D.squaredNorm();
  const double gram = F.cross(D).squaredNorm();  // ab - <df, du>^2 without cancellation
  const double E = std::exp(u.value);
  PhiFromUF out;
  out.B = 1.0 - E * gram;
  const double disc = std::sqrt(out.B * out.B + 4.0 * E * a * b);
  // Both branches are the positive root; each avoids cancellation on its side.
  const double phi2 = out.B >= 0.0 ? 2.0 * E * b / (out.B + disc) : (disc - out.B) / (2.0 * a);
  out.phi = std::sqrt(std::max(0.0, phi2));
  const double scale = a * phi2 * phi2 + std::abs(out.B) * phi2 + E * b;
  out.quadratic_residual =
      scale > 0.0 ? std::abs(a * phi2 * phi2 + out.B * phi2 - E * b) / scale : 0.0;
  // |du|^2 in gbar = g + phi^2 df^2 through the rank-one inverse update.
  out.roundtrip = std::sqrt((b + phi2 * gram) / (1.0 + phi2 * a)) * std::exp(0.5 * u.value);
  return out;
}

namespace {

struct JangRhs {
  const RadialCauchyData& d;
  const RadialFunction& phi;

  // Returns (s', f').
  std::array<double, 2> operator()(double r, double s) const {
    const ScalarJet gss = radial_jet(d.g.gss, r, 1);
    const double q = radial_jet(d.g.grr_inv, r, 0).value;  // 1/grr
    const ScalarJet ph = radial_jet(phi, r, 1);
    if (!(ph.value > 0.0)) throw Error("radial Jang: phi must be positive");
    const double sg = 1.0 / std::sqrt(q);  // sqrt(grr)
    const double H = gss.grad[0] / (gss.value * sg);
    const double trk = 2.0 * radial_jet(d.k_ss, r, 0).value / gss.value;
    const double knn = radial_jet(d.k_rr, r, 0).value * q;
    const double w = 1.0 - s * s;
    const double ds = sg * (trk - s * H + w * knn) - w * s * ph.grad[0] / ph.value;
    if (!(w > 0.0)) return {ds, std::numeric_limits<double>::infinity()};
    return {ds, s * sg / (ph.value * std::sqrt(w))};
  }
};

}  // namespace

JangRadialSolution generalized_jang_radial_solve(const RadialCauchyData& data,
                                                 const RadialFunction& phi, double r0, double r1,
                                                 const JangRadialOptions& opt) {
  if (!(r0 > 0.0) || !(r1 > r0)) throw Error("radial Jang: need 0 < r0 < r1");
  if (!(std::abs(opt.s_end) < 1.0)) throw Error("radial Jang: |s_end| must be below 1");
  data.g.check_range(r0);
  data.g.check_range(r1);
  const JangRhs rhs{data, phi};
  using State = std::array<double, 2>;  // (s, f)
  auto deriv = [&](double r, const State& y) {
    const auto d = rhs(r, y[0]);
    return State{d[0], d[1]};
  };
  auto rk4 = [&](double r, const State& y, double h) {
    const State k1 = deriv(r, y);
    const State k2 = deriv(r + 0.5 * h, {y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]});
    const State k3 = deriv(r + 0.5 * h, {y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]});
    const State k4 = deriv(r + h, {y[0] + h * k3[0], y[1] + h * k3[1]});
    State out;
    for (int c = 0; c < 2; ++c) out[c] = y[c] + h * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]) / 6.0;
    return out;
  };
  auto check_barrier = [&](double r, const State& y) {
    const auto d = rhs(r, y[0]);
    const double grr = data.g.grr(r);
    if (!(std::abs(y[0]) < 1.0) || !std::isfinite(d[1]) ||
        std::abs(d[1]) > 1.0 / (opt.blowup_eps * std::sqrt(grr)))
      throw Error("radial Jang: blowup at r = " + std::to_string(r) +
                  " (|H_S| = |tr_S k| barrier)");
    return d;
  };

  JangRadialSolution sol;
  State y{opt.s_end, 0.0};
  double r = r1;
  double h = -(r1 - r0) / 1000.0;
  auto record = [&](double rr, const State& yy) {
    const auto d = check_barrier(rr, yy);
    sol.r.push_back(rr);
    sol.s.push_back(yy[0]);
    sol.f.push_back(yy[1]);
    sol.ds.push_back(d[0]);
  };
  record(r, y);
  int steps = 0;
  while (r > r0) {
    if (++steps > opt.max_steps) throw Error("radial Jang: step budget exhausted (stiff)");
    if (r + h < r0) h = r0 - r;
    State full, half;
    try {
      full = rk4(r, y, h);
      half = rk4(r + 0.5 * h, rk4(r, y, 0.5 * h), 0.5 * h);
    } catch (const Error&) {
      h *= 0.25;
      if (std::abs(h) < 1e-14 * r) throw;
      continue;
    }
    double err = 0.0;
    for (int c = 0; c < 2; ++c)
      err = std::max(err, std::abs(half[c] - full[c]) / (15.0 * std::max(1.0, std::abs(half[c]))));
    if (!std::isfinite(err) || std::abs(half[0]) >= 1.0) {
      h *= 0.25;
      if (std::abs(h) < 1e-14 * r) check_barrier(r, y);
      continue;
    }
    if (err <= opt.tolerance) {
      r = (r + h - r0 < 1e-14 * r0) ? r0 : r + h;
      y = half;
      record(r, y);
    }
    const double fac = err > 0.0 ? 0.9 * std::pow(opt.tolerance / err, 0.2) : 4.0;
    h *= std::clamp(fac, 0.2, 4.0);
    if (std::abs(h) < 1e-14 * r) throw Error("radial Jang: step size underflow (stiff)");
  }
  return sol;
}

double jang_radial_residual_3d(const RadialCauchyData& data, const RadialFunction& phi,
                               const JangRadialSolution& sol, std::size_t index,
                               const Vec3& direction) {
  if (index >= sol.r.size()) throw Error("jang_radial_residual_3d: index out of range");
  const double n = std::sqrt(dot3(direction, direction));
  if (!(n > 0.0)) throw Error("jang_radial_residual_3d: zero direction");
  const double r = sol.r[index];
  const Point3 p{r * direction[0] / n, r * direction[1] / n, r * direction[2] / n};

  // f' as a function of r with s linearized at the node, for f''.
  const ScalarJet rj = ScalarJet::variable(r, 0, 1);
  const ScalarJet s = sol.s[index] + sol.ds[index] * (rj - r);
  const ScalarJet fp = s / (sqrt(data.g.grr_inv(rj)) * phi(rj) * sqrt(1.0 - s * s));
  const JetVec x = coordinates(p, 3);
  const ScalarJet f = compose(radius(x), sol.f[index], fp.value, fp.grad[0], 0.0);

  const CauchyData cart = cartesian_data(data);
  const DeformationJets d = deformation_jets(cart.g.jet(p, 2), cart.k.jet(p, 1), f,
                                             cartesian_scalar(phi).jet(p, 2));
  return generalized_jang_residual(d);
}

MassFit total_mass_from_profile(const RadialMetric& g, double r_lo, double r_hi, int samples,
                                double max_residual) {
  if (!(r_hi > r_lo) || samples < 2) throw Error("total_mass_from_profile: invalid fit window");
  g.check_range(r_lo);
  g.check_range(r_hi);
  std::vector<double> R(samples), y(samples);
  for (int i = 0; i < samples; ++i) {
    const double r = r_lo + (r_hi - r_lo) * i / (samples - 1);
    const ScalarJet gss = radial_jet(g.gss, r, 1);
    const double q = radial_jet(g.grr_inv, r, 0).value;
    R[i] = std::sqrt(gss.value);
    const double dR = 0.5 * gss.grad[0] / R[i] * std::sqrt(q);
    y[i] = 1.0 - dR * dR;
  }
  double num = 0.0, den = 0.0;
  for (int i = 0; i < samples; ++i) {
    num += y[i] / R[i];
    den += 1.0 / (R[i] * R[i]);
  }
  MassFit fit;
  fit.samples = samples;
  fit.m = num / (2.0 * den);
  double ss = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double d = 0.5 * R[i] * y[i] - fit.m;
    ss += d * d;
  }
  fit.residual = std::sqrt(ss / samples);
  if (fit.residual > max_residual)
    throw Error("total_mass_from_profile: fit residual " + std::to_string(fit.residual) +
                " exceeds threshold; data not Schwarzschild at infinity on the window");
  return fit;
}

PenroseReport penrose_margin(double m, double A) {
  if (!(A >= 0.0)) throw Error("penrose_margin: area must be nonnegative");
  return {m, A, m - std::sqrt(A / (16.0 * kPi))};
}

std::size_t RadialProfile::rows() const { return data.empty() ? 0 : data.begin()->second.size(); }

bool RadialProfile::has(const std::string& c) const { return data.count(c) != 0; }

const std::vector<double>& RadialProfile::column(const std::string& name) const {
  auto it = data.find(name);
  if (it == data.end()) throw Error("profile has no column '" + name + "'");
  return it->second;
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
  }
  return out;
}

}  // namespace

RadialProfile read_profile_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read profile " + path);
  std::string line;
  if (!std::getline(in, line)) throw Error("profile " + path + " is empty");
  RadialProfile p;
  p.columns = split_csv(line);
  for (const char* req : {"r", "grr", "gss"})
    if (std::find(p.columns.begin(), p.columns.end(), req) == p.columns.end())
      throw Error("profile " + path + " lacks required column '" + req + "'");
  for (const auto& c : p.columns) {
    if (p.data.count(c)) throw Error("profile " + path + " repeats column '" + c + "'");
    p.data[c];
  }
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split_csv(line);
    if (cells.size() != p.columns.size())
      throw Error("profile " + path + ": wrong number of cells on line " + std::to_string(lineno));
    for (std::size_t i = 0; i < cells.size(); ++i) {
      std::size_t used = 0;
      double v;
      try {
        v = std::stod(cells[i], &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != cells[i].size() || used == 0)
        throw Error("profile " + path + ": bad number on line " + std::to_string(lineno));
      p.data[p.columns[i]].push_back(v);
    }
  }
  return p;
}

std::string format_profile_csv(const RadialProfile& p) {
  std::string out;
  for (std::size_t i = 0; i < p.columns.size(); ++i) out += (i ? "," : "") + p.columns[i];
  out += "\n";
  char buf[64];
  for (std::size_t row = 0; row < p.rows(); ++row) {
    for (std::size_t i = 0; i < p.columns.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", p.column(p.columns[i])[row]);
      if (i) out += ",";
      out += buf;
    }
    out += "\n";
  }
  return out;
}

void write_profile_csv(const std::string& path, const RadialProfile& p) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write profile " + path);
  out << format_profile_csv(p);
  if (!out) throw Error("write failed for profile " + path);
}

RadialProfile sample_profile(const RadialMetric& g, const std::vector<double>& r_grid) {
  RadialProfile p;
  p.columns = {"r", "grr", "gss"};
  for (const auto& c : p.columns) p.data[c];
  for (double r : r_grid) {
    g.check_range(r);
    p.data["r"].push_back(r);
    p.data["grr"].push_back(1.0 / radial_jet(g.grr_inv, r, 0).value);
    p.data["gss"].push_back(radial_jet(g.gss, r, 0).value);
  }
  return p;
}

RadialMetric metric_from_profile(const RadialProfile& p) {
  const auto& r = p.column("r");
  const auto& grr = p.column("grr");
  std::vector<double> inv(grr.size());
  for (std::size_t i = 0; i < grr.size(); ++i) {
    if (!(grr[i] > 0.0) || !(p.column("gss")[i] > 0.0))
      throw Error("profile metric factors must be positive");
    inv[i] = 1.0 / grr[i];
  }
  RadialMetric g;
  g.grr_inv = spline_function(r, inv);
  g.gss = spline_function(r, p.column("gss"));
  g.r_min = r.front();
  g.r_max = r.back();
  g.name = "csv profile";
  return g;
}

}  // namespace jangbench
