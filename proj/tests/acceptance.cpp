// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include <json.hpp>

#include "jangbench/cli_reporting.hpp"
#include "jangbench/random_data.hpp"
#include "jangbench/schwarzschild_models.hpp"
#include "jangbench/static_spacetime.hpp"

using namespace jangbench;

namespace {

constexpr double kPi = 3.14159265358979323846;

using Clock = std::chrono::steady_clock;

double seconds(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& title, const std::function<Outcome()>& fn) {
  Outcome o;
  const auto t0 = Clock::now();
  try {
    o = fn();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  if (!o.pass) ++failures;
  std::printf("%s %2d %s: %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), o.detail.c_str(),
              seconds(t0));
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

Point3 on_sphere(double r, std::mt19937_64& rng) {
  std::normal_distribution<double> N;
  Vec3 d{N(rng), N(rng), N(rng)};
  const double n = std::sqrt(dot3(d, d));
  return {r * d[0] / n, r * d[1] / n, r * d[2] / n};
}

CoESliceSpec kruskal_line(double u_b, double v_b, double slope) {
  CoESliceSpec s;
  s.u_b = u_b;
  s.v_b = v_b;
  s.slope = slope;
  return s;
}

std::string strip_wall_time(const std::string& json) {
  auto j = nlohmann::ordered_json::parse(json);
  j.erase("wall_time_s");
  return j.dump();
}

}  // namespace

int main() {
  criterion(1, "identity suite", [] {
    const auto t0 = Clock::now();
    std::vector<double> worst(8, 0.0);
    for (std::uint64_t s = 1; s <= 100; ++s) {
      const auto cfg = random_configuration(s);
      const auto res = deformation_identity_residuals(cfg.data, cfg.pair, cfg.k_test, random_points(s, 1)[0]);
      for (int i = 0; i < 8; ++i) worst[i] = std::max(worst[i], res.entries.at(i).value);
    }
    const double w = *std::max_element(worst.begin(), worst.end());
    const double t = seconds(t0);
    return Outcome{w < 1e-10 && t < 10.0, fmt("max identity residual %.3g", w) + fmt(", %.2f s", t)};
  });

  criterion(2, "generalized Schoen-Yau identity", [] {
    const auto t0 = Clock::now();
    double worst = 0.0;
    for (std::uint64_t s = 101; s <= 200; ++s) {
      const auto cfg = random_configuration(s);
      worst = std::max(worst, schoen_yau_residual(cfg.data, cfg.pair, random_points(s, 1)[0]));
    }
    // Fourth-order fd jets of sampled gbar against the exact right side.
    const auto cfg = random_configuration(7);
    const Point3 p{0.2, -0.1, 0.3};
    const double rhs = schoen_yau_terms(deformation_jets(cfg.data, cfg.pair, p)).rhs;
    auto sample = [&](const Point3& x) { return deformation_at_point(cfg.data, cfg.pair, x, 1).gbar; };
    auto err = [&](double h) {
      return std::abs(riemann_ricci_scalar(Sym2Field::finite_difference(sample, h).jet(p, 2)).scalar - rhs);
    };
    const double e1 = err(4e-2), e2 = err(2e-2), e3 = err(1e-2);
    const double ratio = std::min(e1 / e2, e2 / e3);
    const double t = seconds(t0);
    return Outcome{worst < 1e-8 && ratio >= 12.0 && t < 30.0,
                   fmt("exact residual %.3g", worst) + fmt(", fd halving ratio %.2f", ratio) +
                       fmt(", %.2f s", t)};
  });

  criterion(3, "static curvature vs 4D fd oracle", [] {
    double worst = 0.0;
    for (std::uint64_t s = 1; s <= 50; ++s) {
      const auto g = random_metric(s);
      const auto phi = random_trig_scalar(s + 1000, 1.0, 0.3);
      const Point3 p = random_points(s + 2000, 1)[0];
      const auto sc = static_curvature(g, phi, p);
      const auto c = curvature_nd(static_metric_fd(g, phi, p, 1e-3));
      const double phi0 = phi.value(p);
      const Mat3 gv = g.value(p);
      worst = std::max({worst, std::abs(c.ricci[0] - sc.ric00), std::abs(c.scalar - sc.scalar4),
                        std::abs(c.ricci[0] + 0.5 * c.scalar * phi0 * phi0 - sc.einstein00)});
      for (int j = 0; j < 3; ++j) {
        worst = std::max({worst, std::abs(c.ricci[j + 1]), std::abs(c.ricci[(j + 1) * 4])});
        for (int k = 0; k < 3; ++k) {
          const double rjk = c.ricci[(j + 1) * 4 + k + 1];
          worst = std::max({worst, std::abs(rjk - sc.ric_spatial[j][k]),
                            std::abs(rjk - 0.5 * c.scalar * gv[j][k] - sc.einstein_spatial[j][k])});
        }
      }
    }
    double vac = 0.0;
    const double m = 1.0;
    const Sym2Field gs = standard_slice(m).g;
    const ScalarField lapse =
        ScalarField::closed_form([m](const JetVec& x) { return sqrt(1.0 - 2.0 * m / radius(x)); });
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> R(2.2, 20.0);
    for (int i = 0; i < 20; ++i) {
      const auto sc = static_curvature(gs, lapse, on_sphere(R(rng), rng));
      vac = std::max({vac, std::abs(sc.ric00), std::abs(sc.scalar4), std::abs(sc.einstein00)});
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k)
          vac = std::max({vac, std::abs(sc.ric_spatial[j][k]), std::abs(sc.einstein_spatial[j][k])});
    }
    return Outcome{worst < 1e-7 && vac < 1e-8,
                   fmt("max discrepancy %.3g", worst) + fmt(", Schwarzschild vacuum %.3g", vac)};
  });

  criterion(4, "Kruskal exterior isometry", [] {
    std::mt19937_64 rng(4);
    double pull = 0.0, trip = 0.0;
    for (double m : {0.5, 1.0, 2.0}) {
      std::uniform_real_distribution<double> T(-5.0 * m, 5.0 * m), R(2.05 * m, 20.0 * m), RR(0.01 * m, 30.0 * m);
      for (int i = 0; i < 50; ++i) {
        const double t = T(rng), r = R(rng);
        pull = std::max(pull, kruskal_pullback_fd(m, t, r).residual);
        const double r2 = RR(rng);
        trip = std::max(trip, std::abs(r_from_uv(m, kruskal_functions(m, r2).alpha) - r2) / std::max(1.0, r2));
      }
    }
    return Outcome{pull < 1e-8 && trip < 1e-12,
                   fmt("pullback residual %.3g", pull) + fmt(", r_from_uv round trip %.3g", trip)};
  });

  criterion(5, "Penrose equality on Schwarzschild", [] {
    const double A = surface_area(LevelSetSurface::coordinate_sphere(0.5), isotropic_slice(1.0).g);
    const double neck = std::abs(1.0 - std::sqrt(A / (16.0 * kPi)));
    double coe = 0.0;
    // Slices whose chart stays regular on the horizon sphere r = 2m.
    for (const auto& spec : {kruskal_line(0.0, 1.0, 1.0), kruskal_line(0.5, 0.0, 2.0)}) {
      const CoESlice s = coe_slice(1.0, spec);
      const double mass = total_mass_from_profile(s.radial.g, 50.0, 200.0).m;
      const double area = surface_area(LevelSetSurface::coordinate_sphere(2.0), s.data.g);
      coe = std::max(coe, std::abs(penrose_margin(mass, area).margin));
    }
    return Outcome{neck < 1e-10 && coe < 1e-6,
                   fmt("|m - sqrt(A/16pi)| at the neck %.3g", neck) + fmt(", graph slices %.3g", coe)};
  });

  criterion(6, "radial IMCF", [] {
    auto t0 = Clock::now();
    const FlowState flat = imcf_radial_solve(flat_radial(), 1.0, 100.0);
    const double t_flat = seconds(t0);
    double mh = 0.0, u = 0.0;
    for (std::size_t i = 0; i < flat.r.size(); ++i) {
      mh = std::max(mh, std::abs(flat.hawking[i]));
      u = std::max(u, std::abs(flat.u[i] - 2.0 * std::log(flat.r[i])));
    }
    t0 = Clock::now();
    const RadialMetric g = standard_schwarzschild_radial(1.0);
    const FlowState sch = imcf_radial_solve(g, 2.0, 200.0);
    const double t_sch = seconds(t0);
    double ms = 0.0, q = 0.0;
    for (std::size_t i = 0; i < sch.r.size(); ++i) {
      ms = std::max(ms, std::abs(sch.hawking[i] - 1.0));
      // Same weight through the public interpolating accessor.
      q = std::max(q, std::abs(q_weight(sch, g, sch.r[i]) - std::sqrt(1.0 - 2.0 / sch.r[i])));
    }
    const bool ok = mh < 1e-8 && u < 1e-6 && ms < 1e-4 && sch.area_law_error < 1e-6 && q < 1e-6 &&
                    t_flat < 5.0 && t_sch < 5.0;
    return Outcome{ok, fmt("flat m_H %.3g", mh) + fmt(", u %.3g", u) + fmt("; Schwarzschild m_H %.3g", ms) +
                           fmt(", area law %.3g", sch.area_law_error) + fmt(", Q %.3g", q) +
                           fmt("; %.2f s", t_flat) + fmt(" / %.2f s", t_sch)};
  });

  criterion(7, "Geroch monotonicity", [] {
    double margin = INFINITY, min_R = INFINITY;
    for (std::uint64_t s = 1; s <= 20; ++s) {
      const auto mp = positive_curvature_radial(s);
      const FlowState fs = imcf_radial_solve(mp.metric, mp.r_start, 40.0 * mp.r_start);
      for (std::size_t i = 0; i < fs.r.size(); i += 11)
        min_R = std::min(min_R, radial_scalar_curvature(mp.metric, fs.r[i]));
      margin = std::min(margin, geroch_monotonicity_check(fs, mp.metric).margin);
    }
    return Outcome{margin >= -1e-6 && min_R >= -1e-15,
                   fmt("min margin %.3g", margin) + fmt(", min scalar curvature %.3g", min_R)};
  });

  criterion(8, "phi from (u, f)", [] {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    double qr = 0.0, rt = 0.0;
    for (int i = 0; i < 1000; ++i) {
      ScalarJet u = ScalarJet::constant(2.0 * U(rng), 1), f = ScalarJet::constant(U(rng), 1);
      const double su = std::pow(10.0, 2.0 * U(rng)), sf = std::pow(10.0, 3.0 * U(rng));
      for (int k = 0; k < 3; ++k) {
        u.grad[k] = su * U(rng);
        f.grad[k] = sf * U(rng);
      }
      Mat3 g{};
      for (int a = 0; a < 3; ++a)
        for (int b = a; b < 3; ++b) g[a][b] = g[b][a] = (a == b ? 1.0 : 0.0) + 0.2 * U(rng);
      const PhiFromUF r = phi_from_u_f(u, f, g);
      qr = std::max(qr, r.quadratic_residual);
      rt = std::max(rt, std::abs(r.roundtrip - r.phi) / std::max(1.0, r.phi));
    }
    return Outcome{qr < 1e-12 && rt < 1e-10, fmt("quadratic residual %.3g", qr) + fmt(", round trip %.3g", rt)};
  });

  criterion(9, "mean-curvature transformation", [] {
    const auto level = ScalarField::closed_form([](const JetVec& x) {
      return x[0] * x[0] + 2.0 * x[1] * x[1] + x[2] * x[2] + 0.3 * sin(x[0] + x[2]);
    });
    double worst = 0.0, degenerate = 0.0;
    for (std::uint64_t s = 1; s <= 50; ++s) {
      auto cfg = random_configuration(s + 300);
      const Point3 p = random_points(s + 400, 1, 0.8)[0];
      const auto t = mean_curvature_transform(cfg.data, cfg.pair, level, p);
      worst = std::max(worst, std::abs(t.formula - t.direct));
      if (s <= 10) {
        cfg.pair.f = ScalarField::constant(0.0);
        const auto t0 = mean_curvature_transform(cfg.data, cfg.pair, level, p);
        degenerate = std::max(degenerate, std::abs(t0.formula - t0.H));
      }
    }
    return Outcome{worst < 1e-6 && degenerate == 0.0,
                   fmt("max |formula - direct| %.3g", worst) + fmt(", degenerate case %.3g", degenerate)};
  });

  criterion(10, "case-of-equality pipeline", [] {
    CoESliceSpec boosted;
    boosted.kind = CoEKind::boosted_graph;
    boosted.boost = 0.3;
    double worst = 0.0;
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> R(2.5, 10.0);
    for (const auto& spec : {kruskal_line(0.0, 1.0, 1.0), kruskal_line(0.5, 0.0, 2.0), boosted}) {
      const CoESlice s = coe_slice(1.0, spec);
      for (int i = 0; i < 20; ++i) {
        const Point3 p = on_sphere(R(rng), rng);
        const auto t = schoen_yau_terms(deformation_jets(s.data, s.pair, p));
        worst = std::max({worst, std::abs(t.jang_residual), std::sqrt(t.q_norm2), std::sqrt(t.h_minus_k_norm2),
                          std::abs(t.energy) / (16.0 * kPi),
                          std::abs(zero_divergence_residual(s.data, s.pair, p).div_phi_q)});
      }
    }
    const CoESlice s = coe_slice(1.0, kruskal_line(0.0, 1.0, 1.0));
    bool monotone = true;
    double prev_h = INFINITY, prev_k = INFINITY, total = 0.0;
    for (double r : {4.0, 6.0, 10.0, 16.0, 24.0}) {
      const auto f = boundary_flux(s.data, s.pair, LevelSetSurface::coordinate_sphere(r));
      monotone = monotone && std::abs(f.h_part) < prev_h && std::abs(f.k_part) < prev_k;
      prev_h = std::abs(f.h_part);
      prev_k = std::abs(f.k_part);
      total = std::max(total, std::abs(f.total));
    }
    prev_h = INFINITY;
    for (double eps : {1e-1, 1e-2, 1e-3, 1e-4}) {
      const auto f = boundary_flux(s.data, s.pair, LevelSetSurface::coordinate_sphere(2.0 * (1.0 + eps)),
                                   FluxSide::inward);
      monotone = monotone && std::abs(f.h_part) < prev_h;
      prev_h = std::abs(f.h_part);
      total = std::max(total, std::abs(f.total));
    }
    return Outcome{worst < 1e-6 && monotone && total < 1e-6,
                   fmt("max residual %.3g", worst) + fmt(", flux totals %.3g", total) +
                       (monotone ? ", sweeps decay monotonically" : ", sweeps not monotone")};
  });

  criterion(11, "CLI all --seed 42", [] {
    const std::string dir = std::filesystem::temp_directory_path().string();
    const std::string a = dir + "/jangbench_acceptance_a.json", b = dir + "/jangbench_acceptance_b.json";
    auto run = [](const std::string& out) {
      const std::string cmd = std::string(JANGBENCH_CLI) + " all --seed 42 --out " + out + " 2>/dev/null";
      const int status = std::system(cmd.c_str());
      return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    };
    auto slurp = [](const std::string& p) {
      std::ifstream in(p, std::ios::binary);
      std::stringstream ss;
      ss << in.rdbuf();
      return ss.str();
    };
    const auto t0 = Clock::now();
    const int code = run(a);
    const double t = seconds(t0);
    const int code2 = run(b);
    const std::string ja = slurp(a), jb = slurp(b);
    const auto j = nlohmann::json::parse(ja);
    const int checks = static_cast<int>(j.at("checks").size());
    const bool complete = j.at("schema") == 1 && checks > 0 &&
                          j.at("summary").at("passed").get<int>() == checks && j.contains("wall_time_s");
    const bool same = strip_wall_time(ja) == strip_wall_time(jb);
    return Outcome{code == 0 && code2 == 0 && complete && same && t < 120.0,
                   "exit " + std::to_string(code) + ", " + std::to_string(checks) + " checks" +
                       (same ? ", rerun identical" : ", rerun differs") + fmt(", %.2f s", t)};
  });

  std::printf("%s: %d criteria failed\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
  return failures == 0 ? 0 : 1;
}
