#include "jangbench/cli_reporting.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

#include "jangbench/random_data.hpp"
#include "jangbench/schwarzschild_models.hpp"
#include "jangbench/static_spacetime.hpp"

namespace jangbench {

namespace {

constexpr double kPi = 3.14159265358979323846;

}  // namespace

// ---------------------------------------------------------------------------
// Expressions

struct Expression::Node {
  enum Kind { number, var_r, var_x, var_m, add, sub, mul, div, pow, neg, fn_sin, fn_cos, fn_exp, fn_log };
  Kind kind = number;
  double value = 0.0;
  int index = 0;
  std::shared_ptr<const Node> a, b;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Node = Expression::Node;

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr parse() {
    NodePtr n = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return n;
  }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("expression \"" + s_ + "\": " + what + " at position " + std::to_string(pos_));
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  static NodePtr make(Node::Kind k, NodePtr a = nullptr, NodePtr b = nullptr) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
  }

  NodePtr expr() {
    NodePtr n = term();
    for (;;) {
      if (accept('+')) n = make(Node::add, n, term());
      else if (accept('-')) n = make(Node::sub, n, term());
      else return n;
    }
  }

  NodePtr term() {
    NodePtr n = unary();
    for (;;) {
      if (accept('*')) n = make(Node::mul, n, unary());
      else if (accept('/')) n = make(Node::div, n, unary());
      else return n;
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Node::neg, unary());
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make(Node::pow, base, unary());
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    if (accept('(')) {
      NodePtr n = expr();
      if (!accept(')')) fail("expected ')'");
      return n;
    }
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) fail("bad number");
      pos_ += static_cast<std::size_t>(end - begin);
      auto n = std::make_shared<Node>();
      n->value = v;
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t end = pos_;
      while (end < s_.size() && std::isalnum(static_cast<unsigned char>(s_[end]))) ++end;
      const std::string id = s_.substr(pos_, end - pos_);
      pos_ = end;
      if (id == "r") return make(Node::var_r);
      if (id == "m") return make(Node::var_m);
      if (id == "x1" || id == "x2" || id == "x3") {
        auto n = std::make_shared<Node>();
        n->kind = Node::var_x;
        n->index = id[1] - '1';
        return n;
      }
      const std::map<std::string, Node::Kind> fns{
          {"sin", Node::fn_sin}, {"cos", Node::fn_cos}, {"exp", Node::fn_exp}, {"log", Node::fn_log}};
      const auto it = fns.find(id);
      if (it == fns.end()) fail("unknown name '" + id + "'");
      if (!accept('(')) fail("expected '(' after " + id);
      NodePtr arg = expr();
      if (!accept(')')) fail("expected ')'");
      return make(it->second, arg);
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }
};

struct EvalContext {
  const JetVec* x = nullptr;
  ScalarJet r;
  double m = 0.0;
  int order = 0;
};

ScalarJet eval_node(const Node& n, const EvalContext& c) {
  switch (n.kind) {
    case Node::number: return ScalarJet::constant(n.value, c.order);
    case Node::var_r: return c.x ? radius(*c.x) : c.r;
    case Node::var_m: return ScalarJet::constant(c.m, c.order);
    case Node::var_x:
      if (c.x == nullptr) throw ConfigError("x1, x2, x3 are not available in radial expressions");
      return (*c.x)[n.index];
    case Node::add: return eval_node(*n.a, c) + eval_node(*n.b, c);
    case Node::sub: return eval_node(*n.a, c) - eval_node(*n.b, c);
    case Node::mul: return eval_node(*n.a, c) * eval_node(*n.b, c);
    case Node::div: return eval_node(*n.a, c) / eval_node(*n.b, c);
    case Node::neg: return -eval_node(*n.a, c);
    case Node::fn_sin: return sin(eval_node(*n.a, c));
    case Node::fn_cos: return cos(eval_node(*n.a, c));
    case Node::fn_exp: return exp(eval_node(*n.a, c));
    case Node::fn_log: return log(eval_node(*n.a, c));
    case Node::pow: {
      const ScalarJet base = eval_node(*n.a, c);
      if (n.b->kind == Node::number) {
        const double p = n.b->value;
        // Small integer powers by multiplication, so negative bases work.
        if (p == std::round(p) && std::abs(p) <= 8.0) {
          ScalarJet out = ScalarJet::constant(1.0, c.order);
          for (int i = 0; i < static_cast<int>(std::abs(p)); ++i) out = out * base;
          return p < 0.0 ? 1.0 / out : out;
        }
        return pow(base, p);
      }
      return pow(base, eval_node(*n.b, c));
    }
  }
  throw Error("expression: bad node");
}

bool mentions_x(const Node& n) {
  if (n.kind == Node::var_x) return true;
  return (n.a && mentions_x(*n.a)) || (n.b && mentions_x(*n.b));
}

}  // namespace

Expression Expression::parse(const std::string& text) {
  Expression e;
  e.text_ = text;
  e.root_ = Parser(text).parse();
  return e;
}

ScalarJet Expression::eval(const JetVec& x, double m) const {
  EvalContext c;
  c.x = &x;
  c.order = x[0].order;
  c.m = m;
  return eval_node(*root_, c);
}

ScalarJet Expression::eval_radial(const ScalarJet& r, double m) const {
  EvalContext c;
  c.r = r;
  c.order = r.order;
  c.m = m;
  return eval_node(*root_, c);
}

bool Expression::uses_cartesian() const { return mentions_x(*root_); }

RadialFunction Expression::radial(double m) const {
  if (uses_cartesian()) throw ConfigError("expression \"" + text_ + "\" is not radial");
  const Expression self = *this;
  return [self, m](const ScalarJet& r) { return self.eval_radial(r, m); };
}

ScalarField Expression::field(double m) const {
  const Expression self = *this;
  return ScalarField::closed_form([self, m](const JetVec& x) { return self.eval(x, m); });
}

// ---------------------------------------------------------------------------
// Configuration

const std::vector<std::string>& known_anchors() {
  static const std::vector<std::string> anchors{
      "deformation identities",      "generalized Schoen-Yau identity",
      "mean curvature transformation", "static curvature",
      "Kruskal extension",           "Schwarzschild charts",
      "case of equality",            "boundary flux conditions",
      "Penrose inequality",          "total mass",
      "inverse mean curvature flow", "Geroch monotonicity",
      "phi from (u, f)",             "generalized Jang equation"};
  return anchors;
}

double RunConfig::number(const std::string& key, double fallback) const {
  const auto it = settings.find(key);
  if (it == settings.end()) return fallback;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(it->second, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != it->second.size() || !std::isfinite(v))
    throw ConfigError("option " + key + ": not a number: " + it->second);
  return v;
}

int RunConfig::integer(const std::string& key, int fallback) const {
  const double v = number(key, fallback);
  if (v != std::round(v) || v < 1.0 || v > 1e7)
    throw ConfigError("option " + key + ": expected a positive integer");
  return static_cast<int>(v);
}

std::string RunConfig::text(const std::string& key, const std::string& fallback) const {
  const auto it = settings.find(key);
  return it == settings.end() ? fallback : it->second;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double positive_tolerance(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size() || !(v > 0.0) || !std::isfinite(v))
    throw ConfigError(key + ": tolerance must be a positive number, got " + value);
  return v;
}

}  // namespace

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos || trim(line.substr(0, eq)).empty())
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value");
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

RunConfig make_run_config(const std::string& suite, std::map<std::string, std::string> settings) {
  const auto& names = suite_names();
  if (std::find(names.begin(), names.end(), suite) == names.end())
    throw ConfigError("unknown suite '" + suite + "'");
  RunConfig c;
  c.suite = suite;
  for (auto it = settings.begin(); it != settings.end();) {
    const std::string& key = it->first;
    const std::string& value = it->second;
    if (key == "seed") {
      std::size_t used = 0;
      unsigned long long s = 0;
      try {
        s = std::stoull(value, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != value.size() || value[0] == '-')
        throw ConfigError("seed must be a nonnegative integer, got " + value);
      c.seed = s;
    } else if (key == "tol") {
      c.tolerance = positive_tolerance(key, value);
    } else if (key.rfind("tol.", 0) == 0) {
      c.check_tolerances[key.substr(4)] = positive_tolerance(key, value);
    } else if (key == "out") {
      c.out = value;
    } else if (key == "profile") {
      c.profile = value;
    } else {
      ++it;
      continue;
    }
    it = settings.erase(it);
  }
  c.settings = std::move(settings);
  if (c.has("m") && !(c.number("m", 1.0) > 0.0)) throw ConfigError("m must be positive");
  for (const char* key : {"grr", "gss", "k_rr", "k_ss", "phi", "f", "w"})
    if (c.has(key)) Expression::parse(c.settings.at(key));
  return c;
}

// ---------------------------------------------------------------------------
// Radial models and profiles

RadialMetric radial_model(const RunConfig& config) {
  const double m = config.number("m", 1.0);
  if (!config.profile.empty()) {
    try {
      return metric_from_profile(read_profile_csv(config.profile));
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      throw ConfigError(std::string("unreadable profile: ") + e.what());
    }
  }
  if (config.has("grr") || config.has("gss")) {
    if (!config.has("grr") || !config.has("gss"))
      throw ConfigError("analytic metrics need both grr and gss");
    RadialMetric g;
    const RadialFunction grr = Expression::parse(config.text("grr", "")).radial(m);
    g.grr_inv = [grr](const ScalarJet& r) { return 1.0 / grr(r); };
    g.gss = Expression::parse(config.text("gss", "")).radial(m);
    g.r_min = config.number("r_min", 0.0);
    if (config.has("r_max")) g.r_max = config.number("r_max", 0.0);
    g.name = "analytic";
    return g;
  }
  const std::string model = config.text("model", "schwarzschild-standard");
  if (model == "flat") return flat_radial();
  if (model == "schwarzschild-standard") return standard_schwarzschild_radial(m);
  if (model == "schwarzschild-isotropic") return isotropic_schwarzschild_radial(m);
  if (model == "mass-profile")
    return positive_curvature_radial(static_cast<std::uint64_t>(config.integer("model_seed", 1))).metric;
  throw ConfigError("unknown model '" + model + "'");
}

RadialProfile export_profile(const RadialMetric& model, double r_min, double r_max, int points) {
  if (points < 2 || !(r_max > r_min)) throw ConfigError("export: need r_min < r_max and >= 2 points");
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) grid[i] = r_min + (r_max - r_min) * i / (points - 1);
  grid.back() = r_max;
  return sample_profile(model, grid);
}

// ---------------------------------------------------------------------------
// Suites

namespace {

struct CheckSpec {
  std::string name;
  std::string anchor;
  double tolerance;
  std::string relation = "<=";
};

class Runner {
 public:
  Runner(const RunConfig& config, Report& report) : config_(config), report_(report), rng_(config.seed) {}

  const RunConfig& config() const { return config_; }
  double m() const { return config_.number("m", 1.0); }
  std::uint64_t draw() { return rng_(); }
  std::mt19937_64& rng() { return rng_; }

  bool custom_radial() const {
    return !config_.profile.empty() || config_.has("grr") || config_.has("model");
  }

  // Evaluates several checks from one computation; an exception fails them all.
  void emit(const std::string& suite, const std::vector<CheckSpec>& specs,
            const std::function<std::vector<double>()>& fn) {
    std::vector<double> values;
    std::string diag;
    try {
      values = fn();
      if (values.size() != specs.size()) throw Error("internal: value count mismatch");
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      diag = e.what();
      values.assign(specs.size(), std::numeric_limits<double>::quiet_NaN());
    }
    for (std::size_t i = 0; i < specs.size(); ++i) {
      Check c;
      c.suite = suite;
      c.name = specs[i].name;
      c.anchor = specs[i].anchor;
      c.value = values[i];
      c.relation = specs[i].relation;
      c.tolerance = specs[i].tolerance;
      const auto it = config_.check_tolerances.find(c.name);
      if (it != config_.check_tolerances.end()) c.tolerance = overridden(specs[i], it->second);
      else if (config_.tolerance) c.tolerance = overridden(specs[i], *config_.tolerance);
      c.pass = diag.empty() && (c.relation == ">=" ? c.value >= c.tolerance : c.value <= c.tolerance);
      c.diagnostic = diag;
      report_.checks.push_back(std::move(c));
    }
  }

  // Overrides are positive slacks: value <= tol, or value >= -tol for margins.
  // Positive lower thresholds (convergence ratios) keep their own value unless
  // named explicitly.
  static double overridden(const CheckSpec& spec, double tol) {
    if (spec.relation == "<=") return tol;
    return spec.tolerance <= 0.0 ? -tol : spec.tolerance;
  }

  void emit(const std::string& suite, const CheckSpec& spec, const std::function<double()>& fn) {
    emit(suite, std::vector<CheckSpec>{spec}, [&] { return std::vector<double>{fn()}; });
  }

 private:
  const RunConfig& config_;
  Report& report_;
  std::mt19937_64 rng_;
};

double max_abs_diff(const Mat3& a, const Mat3& b) {
  double out = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out = std::max(out, std::abs(a[i][j] - b[i][j]));
  return out;
}

Point3 point_on_sphere(double r, std::mt19937_64& rng) {
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

CoESliceSpec boosted_graph(double boost) {
  CoESliceSpec s;
  s.kind = CoEKind::boosted_graph;
  s.boost = boost;
  return s;
}

// --- identities ------------------------------------------------------------

void suite_identities(Runner& run) {
  const std::string S = "identities";
  const int configs = run.config().integer("configs", 100);
  const bool custom_pair = run.config().has("f") || run.config().has("phi");

  std::vector<RandomConfiguration> cfgs;
  std::vector<Point3> points;
  for (int i = 0; i < configs; ++i) {
    const std::uint64_t s = run.draw();
    cfgs.push_back(random_configuration(s));
    if (custom_pair) {
      if (run.config().has("f")) cfgs.back().pair.f = Expression::parse(run.config().text("f", "")).field(run.m());
      if (run.config().has("phi"))
        cfgs.back().pair.phi = Expression::parse(run.config().text("phi", "")).field(run.m());
    }
    points.push_back(random_points(s, 1)[0]);
  }

  std::vector<CheckSpec> ids;
  for (int i = 1; i <= 8; ++i)
    ids.push_back({"identity_" + std::to_string(i), "deformation identities", kIdentityTolerance});
  run.emit(S, ids, [&] {
    std::vector<double> worst(8, 0.0);
    for (std::size_t c = 0; c < cfgs.size(); ++c) {
      const auto res = deformation_identity_residuals(cfgs[c].data, cfgs[c].pair, cfgs[c].k_test, points[c]);
      for (std::size_t i = 0; i < 8; ++i) worst[i] = std::max(worst[i], res.entries.at(i).value);
    }
    return worst;
  });

  run.emit(S, {"schoen_yau_residual", "generalized Schoen-Yau identity", 1e-8}, [&] {
    double worst = 0.0;
    for (std::size_t c = 0; c < cfgs.size(); ++c)
      worst = std::max(worst, schoen_yau_residual(cfgs[c].data, cfgs[c].pair, points[c]));
    return worst;
  });

  // Scalar curvature of fd-differenced gbar samples against the exact right side.
  const std::uint64_t fd_seed = run.draw();
  run.emit(S, {"schoen_yau_fd_halving_ratio", "generalized Schoen-Yau identity", 12.0, ">="}, [&] {
    const auto cfg = random_configuration(fd_seed);
    const Point3 p = random_points(fd_seed, 1, 0.5)[0];
    const double rhs = schoen_yau_terms(deformation_jets(cfg.data, cfg.pair, p)).rhs;
    auto sample = [&](const Point3& x) { return deformation_at_point(cfg.data, cfg.pair, x, 1).gbar; };
    auto err = [&](double step) {
      return std::abs(riemann_ricci_scalar(Sym2Field::finite_difference(sample, step).jet(p, 2)).scalar - rhs);
    };
    const double e1 = err(4e-2), e2 = err(2e-2), e3 = err(1e-2);
    return std::min(e1 / e2, e2 / e3);
  });

  const int surfaces = run.config().integer("surface_samples", 50);
  std::vector<std::uint64_t> surface_seeds;
  for (int i = 0; i < surfaces; ++i) surface_seeds.push_back(run.draw());
  const auto level = ScalarField::closed_form([](const JetVec& x) {
    return x[0] * x[0] + 2.0 * x[1] * x[1] + x[2] * x[2] + 0.3 * sin(x[0] + x[2]);
  });
  run.emit(S, {"mean_curvature_transform", "mean curvature transformation", 1e-6}, [&] {
    double worst = 0.0;
    for (const std::uint64_t s : surface_seeds) {
      const auto cfg = random_configuration(s);
      const auto t = mean_curvature_transform(cfg.data, cfg.pair, level, random_points(s, 1, 0.8)[0]);
      worst = std::max(worst, std::abs(t.formula - t.direct));
    }
    return worst;
  });
  run.emit(S, {"mean_curvature_degenerate", "mean curvature transformation", 0.0}, [&] {
    double worst = 0.0;
    for (std::size_t i = 0; i < std::min<std::size_t>(surface_seeds.size(), 10); ++i) {
      auto cfg = random_configuration(surface_seeds[i]);
      cfg.pair.f = ScalarField::constant(0.0);
      const auto t = mean_curvature_transform(cfg.data, cfg.pair, level,
                                              random_points(surface_seeds[i], 1, 0.8)[0]);
      worst = std::max(worst, std::abs(t.formula - t.H));
    }
    return worst;
  });
}

// --- static curvature ------------------------------------------------------

void suite_static_curvature(Runner& run) {
  const std::string S = "static-curvature";
  const int samples = run.config().integer("samples", 50);
  const double m = run.m();
  const bool custom = run.config().has("phi") || run.config().has("w");
  const ScalarField custom_phi = Expression::parse(run.config().text("phi", "1")).field(m);
  const Expression w = Expression::parse(run.config().text("w", "1"));
  const Sym2Field custom_g = Sym2Field::closed_form([w, m](const JetVec& x) {
    const ScalarJet w4 = pow(w.eval(x, m), 4.0);
    Sym2Jet g = Sym2Jet::constant({}, x[0].order);
    for (int i = 0; i < 3; ++i) g.c[i][i] = w4;
    return g;
  });

  struct Sample {
    Sym2Field g;
    ScalarField phi;
    Point3 p;
  };
  std::vector<Sample> sample;
  for (int i = 0; i < samples; ++i) {
    const std::uint64_t s = run.draw();
    if (custom)
      sample.push_back({custom_g, custom_phi, random_points(s, 1, run.config().number("half_width", 1.0))[0]});
    else
      sample.push_back({random_metric(s), random_trig_scalar(s + 1, 1.0, 0.3), random_points(s + 2, 1)[0]});
  }

  run.emit(S,
           std::vector<CheckSpec>{{"ricci_vs_4d_fd", "static curvature", 1e-7},
                                  {"einstein_vs_4d_fd", "static curvature", 1e-7},
                                  {"scalar_vs_4d_fd", "static curvature", 1e-7}},
           [&] {
             double ric = 0.0, ein = 0.0, sc = 0.0;
             for (const auto& smp : sample) {
               const auto s = static_curvature(smp.g, smp.phi, smp.p);
               const auto c = curvature_nd(static_metric_fd(smp.g, smp.phi, smp.p, 1e-3));
               const double phi0 = smp.phi.value(smp.p);
               const Mat3 g = smp.g.value(smp.p);
               ric = std::max(ric, std::abs(c.ricci[0] - s.ric00));
               ein = std::max(ein, std::abs(c.ricci[0] + 0.5 * c.scalar * phi0 * phi0 - s.einstein00));
               for (int j = 0; j < 3; ++j) {
                 ric = std::max({ric, std::abs(c.ricci[j + 1]), std::abs(c.ricci[(j + 1) * 4])});
                 ein = std::max({ein, std::abs(c.ricci[j + 1]), std::abs(c.ricci[(j + 1) * 4])});
                 for (int k = 0; k < 3; ++k) {
                   const double rjk = c.ricci[(j + 1) * 4 + k + 1];
                   ric = std::max(ric, std::abs(rjk - s.ric_spatial[j][k]));
                   ein = std::max(ein, std::abs(rjk - 0.5 * c.scalar * g[j][k] - s.einstein_spatial[j][k]));
                 }
               }
               sc = std::max(sc, std::abs(c.scalar - s.scalar4));
             }
             return std::vector<double>{ric, ein, sc};
           });

  run.emit(S, {"schwarzschild_vacuum", "static curvature", 1e-8}, [&] {
    const Sym2Field g = standard_slice(m).g;
    const ScalarField phi =
        ScalarField::closed_form([m](const JetVec& x) { return sqrt(1.0 - 2.0 * m / radius(x)); });
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      std::uniform_real_distribution<double> R(2.2 * m, 20.0 * m);
      const Point3 p = point_on_sphere(R(run.rng()), run.rng());
      const auto s = static_curvature(g, phi, p);
      worst = std::max({worst, std::abs(s.ric00), std::abs(s.scalar4), std::abs(s.einstein00),
                        max_abs_diff(s.ric_spatial, Mat3{}), max_abs_diff(s.einstein_spatial, Mat3{})});
    }
    return worst;
  });
}

// --- Schwarzschild ---------------------------------------------------------

void suite_schwarzschild(Runner& run) {
  const std::string S = "schwarzschild";
  const std::vector<double> masses =
      run.config().has("m") ? std::vector<double>{run.m()} : std::vector<double>{0.5, 1.0, 2.0};
  const int samples = run.config().integer("samples", 50);

  run.emit(S, {"kruskal_pullback", "Kruskal extension", 1e-8}, [&] {
    double worst = 0.0;
    for (double m : masses) {
      std::uniform_real_distribution<double> T(-5.0 * m, 5.0 * m), R(2.05 * m, 20.0 * m);
      for (int i = 0; i < samples; ++i) {
        const double t = T(run.rng()), r = R(run.rng());
        worst = std::max(worst, kruskal_pullback_fd(m, t, r).residual);
      }
    }
    return worst;
  });

  run.emit(S, {"r_from_uv_roundtrip", "Kruskal extension", 1e-12}, [&] {
    double worst = 0.0;
    for (double m : masses) {
      std::uniform_real_distribution<double> R(0.01 * m, 30.0 * m);
      for (int i = 0; i < samples; ++i) {
        const double r = R(run.rng());
        const double uv = kruskal_functions(m, r).alpha;
        worst = std::max(worst, std::abs(r_from_uv(m, uv) - r) / std::max(1.0, r));
      }
    }
    return worst;
  });

  run.emit(S, {"chart_isometry", "Schwarzschild charts", 1e-10}, [&] {
    double worst = 0.0;
    for (double m : masses) {
      std::uniform_real_distribution<double> R(0.6 * m, 20.0 * m);
      for (int i = 0; i < samples; ++i)
        worst = std::max(worst, chart_isometry_residual(m, point_on_sphere(R(run.rng()), run.rng())));
    }
    return worst;
  });

  const double m = run.m();
  const std::vector<std::pair<std::string, CoESliceSpec>> slices{
      {"kruskal_line", kruskal_line(0.0, 1.0, 1.0)},
      {"kruskal_line_past", kruskal_line(0.5, 0.0, 2.0)},
      {"boosted_graph", boosted_graph(0.3)}};
  for (const auto& [label, spec] : slices) {
    run.emit(S,
             std::vector<CheckSpec>{{"coe_" + label + "_jang_residual", "generalized Jang equation", 1e-6},
                                    {"coe_" + label + "_q_norm", "case of equality", 1e-6},
                                    {"coe_" + label + "_h_minus_k", "case of equality", 1e-6},
                                    {"coe_" + label + "_mu_minus_J", "case of equality", 1e-6},
                                    {"coe_" + label + "_div_phi_q", "case of equality", 1e-6}},
             [&] {
               const CoESlice s = coe_slice(m, spec);
               std::uniform_real_distribution<double> R(2.5 * m, 10.0 * m);
               std::vector<double> worst(5, 0.0);
               for (int i = 0; i < 20; ++i) {
                 const Point3 p = point_on_sphere(R(run.rng()), run.rng());
                 const auto t = schoen_yau_terms(deformation_jets(s.data, s.pair, p));
                 const double div = zero_divergence_residual(s.data, s.pair, p).div_phi_q;
                 const double vals[5] = {std::abs(t.jang_residual), std::sqrt(t.q_norm2),
                                         std::sqrt(t.h_minus_k_norm2), std::abs(t.energy) / (16.0 * kPi),
                                         std::abs(div)};
                 for (int k = 0; k < 5; ++k) worst[k] = std::max(worst[k], vals[k]);
               }
               return worst;
             });
  }

  run.emit(S,
           std::vector<CheckSpec>{{"flux_outer_total", "boundary flux conditions", 1e-6},
                                  {"flux_outer_nonmonotone_steps", "boundary flux conditions", 0.0},
                                  {"flux_inner_total", "boundary flux conditions", 1e-6},
                                  {"flux_inner_nonmonotone_steps", "boundary flux conditions", 0.0}},
           [&] {
             const CoESlice s = coe_slice(m, kruskal_line(0.0, 1.0, 1.0));
             double outer = 0.0, inner = 0.0, bad_outer = 0.0, bad_inner = 0.0;
             double prev_h = INFINITY, prev_k = INFINITY;
             for (double r : {4.0, 6.0, 10.0, 16.0, 24.0}) {
               const auto f = boundary_flux(s.data, s.pair, LevelSetSurface::coordinate_sphere(r * m));
               outer = std::max(outer, std::abs(f.total));
               if (!(std::abs(f.h_part) < prev_h) || !(std::abs(f.k_part) < prev_k)) bad_outer += 1.0;
               prev_h = std::abs(f.h_part);
               prev_k = std::abs(f.k_part);
             }
             prev_h = INFINITY;
             for (double eps : {1e-1, 1e-2, 1e-3, 1e-4}) {
               const auto f = boundary_flux(s.data, s.pair,
                                            LevelSetSurface::coordinate_sphere(2.0 * m * (1.0 + eps)),
                                            FluxSide::inward);
               inner = std::max(inner, std::abs(f.total));
               if (!(std::abs(f.h_part) < prev_h)) bad_inner += 1.0;
               prev_h = std::abs(f.h_part);
             }
             return std::vector<double>{outer, bad_outer, inner, bad_inner};
           });
}

// --- IMCF ------------------------------------------------------------------

void imcf_custom(Runner& run) {
  const std::string S = "imcf";
  const RadialMetric g = radial_model(run.config());
  const double r0 = run.config().number("r0", g.r_min > 0.0 ? g.r_min : 1.0);
  const double r1 = run.config().number("r1", std::isfinite(g.r_max) ? g.r_max : 100.0 * r0);
  const int steps = run.config().has("steps") ? run.config().integer("steps", 1) : 0;
  FlowState flow;
  bool solved = false;
  run.emit(S, {"monotone_mean_curvature", "inverse mean curvature flow", 0.0, ">="}, [&] {
    flow = imcf_radial_solve(g, r0, r1, steps);
    solved = true;
    return *std::min_element(flow.H.begin() + 1, flow.H.end());
  });
  run.emit(S,
           std::vector<CheckSpec>{{"area_law", "inverse mean curvature flow", 1e-6},
                                  {"step_error", "inverse mean curvature flow", 1e-8},
                                  {"geroch_margin", "Geroch monotonicity", -1e-6, ">="}},
           [&] {
             if (!solved) throw Error("flow not available");
             const auto rep = geroch_monotonicity_check(flow, g);
             return std::vector<double>{flow.area_law_error, flow.step_error, rep.margin};
           });
}

void suite_imcf(Runner& run) {
  if (run.custom_radial()) return imcf_custom(run);
  const std::string S = "imcf";
  run.emit(S,
           std::vector<CheckSpec>{{"flat_hawking_mass", "inverse mean curvature flow", 1e-8},
                                  {"flat_u_vs_2_log_r", "inverse mean curvature flow", 1e-6}},
           [&] {
             const FlowState fs = imcf_radial_solve(flat_radial(), 1.0, 100.0);
             double em = 0.0, eu = 0.0;
             for (std::size_t i = 0; i < fs.r.size(); ++i) {
               em = std::max(em, std::abs(fs.hawking[i]));
               eu = std::max(eu, std::abs(fs.u[i] - 2.0 * std::log(fs.r[i])));
             }
             return std::vector<double>{em, eu};
           });
  run.emit(S,
           std::vector<CheckSpec>{{"schwarzschild_hawking_mass", "inverse mean curvature flow", 1e-4},
                                  {"schwarzschild_area_law", "inverse mean curvature flow", 1e-6},
                                  {"schwarzschild_q_weight", "inverse mean curvature flow", 1e-6}},
           [&] {
             const RadialMetric g = standard_schwarzschild_radial(1.0);
             const FlowState fs = imcf_radial_solve(g, 2.0, 200.0);
             double em = 0.0, eq = 0.0;
             for (std::size_t i = 0; i < fs.r.size(); ++i) {
               em = std::max(em, std::abs(fs.hawking[i] - 1.0));
               eq = std::max(eq, std::abs(fs.Q[i] - std::sqrt(1.0 - 2.0 / fs.r[i])));
             }
             return std::vector<double>{em, fs.area_law_error, eq};
           });
  const int metrics = run.config().integer("geroch_metrics", 20);
  std::vector<std::uint64_t> seeds;
  for (int i = 0; i < metrics; ++i) seeds.push_back(run.draw());
  run.emit(S,
           std::vector<CheckSpec>{{"geroch_min_scalar_curvature", "Geroch monotonicity", -1e-15, ">="},
                                  {"geroch_margin", "Geroch monotonicity", -1e-6, ">="}},
           [&] {
             double min_R = INFINITY, margin = INFINITY;
             for (const std::uint64_t s : seeds) {
               const auto mp = positive_curvature_radial(s);
               const FlowState fs = imcf_radial_solve(mp.metric, mp.r_start, 40.0 * mp.r_start);
               for (std::size_t i = 0; i < fs.r.size(); i += 37)
                 min_R = std::min(min_R, radial_scalar_curvature(mp.metric, fs.r[i]));
               margin = std::min(margin, geroch_monotonicity_check(fs, mp.metric).margin);
             }
             return std::vector<double>{min_R, margin};
           });
}

// --- radial Jang -----------------------------------------------------------

RadialFunction profile_or_expression(const RunConfig& c, const RadialProfile* profile,
                                     const std::string& key, const std::string& fallback) {
  if (c.has(key)) return Expression::parse(c.text(key, "")).radial(c.number("m", 1.0));
  if (profile && profile->has(key)) return spline_function(profile->column("r"), profile->column(key));
  return Expression::parse(fallback).radial(c.number("m", 1.0));
}

void jang_custom(Runner& run) {
  const std::string S = "jang-radial";
  const RunConfig& c = run.config();
  std::optional<RadialProfile> profile;
  if (!c.profile.empty()) {
    try {
      profile = read_profile_csv(c.profile);
    } catch (const Error& e) {
      throw ConfigError(std::string("unreadable profile: ") + e.what());
    }
  }
  RadialCauchyData d;
  d.g = radial_model(c);
  d.k_rr = profile_or_expression(c, profile ? &*profile : nullptr, "k_rr", "0");
  d.k_ss = profile_or_expression(c, profile ? &*profile : nullptr, "k_ss", "0");
  const RadialFunction phi = profile_or_expression(c, profile ? &*profile : nullptr, "phi", "1");
  const double r0 = c.number("r0", profile ? profile->column("r").front() : std::max(1.0, d.g.r_min));
  const double r1 = c.number("r1", profile ? profile->column("r").back() : 20.0 * r0);
  JangRadialOptions opt;
  opt.s_end = c.number("s_end", 0.0);
  JangRadialSolution sol;
  bool solved = false;
  run.emit(S, {"radial_jang_solve", "generalized Jang equation", 0.0}, [&] {
    sol = generalized_jang_radial_solve(d, phi, r0, r1, opt);
    solved = true;
    return 0.0;
  });
  run.emit(S, {"radial_jang_3d_residual", "generalized Jang equation", 1e-6}, [&] {
    if (!solved) throw Error("no radial Jang solution");
    double worst = 0.0;
    const std::size_t stride = std::max<std::size_t>(1, sol.r.size() / 20);
    for (std::size_t i = 0; i < sol.r.size(); i += stride)
      worst = std::max(worst, std::abs(jang_radial_residual_3d(d, phi, sol, i, {0.36, 0.48, 0.8})));
    return worst;
  });
}

void suite_jang_radial(Runner& run) {
  if (run.custom_radial() || run.config().has("k_rr") || run.config().has("k_ss")) return jang_custom(run);
  const std::string S = "jang-radial";
  run.emit(S, {"zero_data_gives_zero_f", "generalized Jang equation", 1e-14}, [&] {
    RadialCauchyData d{flat_radial(), Expression::parse("0").radial(1.0), Expression::parse("0").radial(1.0)};
    const auto sol = generalized_jang_radial_solve(d, Expression::parse("1").radial(1.0), 0.5, 10.0);
    double worst = 0.0;
    for (double f : sol.f) worst = std::max(worst, std::abs(f));
    return worst;
  });
  const double m = run.m();
  for (const auto& [label, spec] : std::vector<std::pair<std::string, CoESliceSpec>>{
           {"kruskal_line", kruskal_line(0.0, 1.0, 1.0)}, {"boosted_graph", boosted_graph(0.4)}}) {
    run.emit(S,
             std::vector<CheckSpec>{{"coe_" + label + "_graph_recovery", "generalized Jang equation", 1e-5},
                                    {"coe_" + label + "_3d_residual", "generalized Jang equation", 1e-6}},
             [&] {
               const CoESlice s = coe_slice(m, spec);
               const double r0 = 3.0 * m, r1 = 20.0 * m;
               JangRadialOptions opt;
               opt.s_end = radial_jet(s.s_radial, r1, 0).value;
               const auto sol = generalized_jang_radial_solve(s.radial, s.phi_radial, r0, r1, opt);
               const double f1 = radial_jet(s.f_radial, r1, 0).value;
               double err = 0.0, res = 0.0;
               for (std::size_t i = 0; i < sol.r.size(); ++i)
                 err = std::max(err, std::abs(sol.f[i] + f1 - radial_jet(s.f_radial, sol.r[i], 0).value));
               const std::size_t stride = std::max<std::size_t>(1, sol.r.size() / 10);
               for (std::size_t i = 0; i < sol.r.size(); i += stride)
                 res = std::max(res, std::abs(jang_radial_residual_3d(s.radial, s.phi_radial, sol, i, {0.3, -0.5, 0.8})));
               return std::vector<double>{err, res};
             });
  }

  const int samples = run.config().integer("phi_samples", 1000);
  run.emit(S,
           std::vector<CheckSpec>{{"phi_quadratic_residual", "phi from (u, f)", 1e-12},
                                  {"phi_roundtrip", "phi from (u, f)", 1e-10}},
           [&] {
             std::uniform_real_distribution<double> U(-1.0, 1.0);
             auto& rng = run.rng();
             double q = 0.0, rt = 0.0;
             for (int i = 0; i < samples; ++i) {
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
               q = std::max(q, r.quadratic_residual);
               rt = std::max(rt, std::abs(r.roundtrip - r.phi) / std::max(1.0, r.phi));
             }
             return std::vector<double>{q, rt};
           });
}

// --- Penrose ---------------------------------------------------------------

void penrose_custom(Runner& run) {
  const std::string S = "penrose";
  const RunConfig& c = run.config();
  const RadialMetric g = radial_model(c);
  double r_h = c.number("r_horizon", g.r_min);
  if (!c.has("r_horizon") && !c.profile.empty()) r_h = read_profile_csv(c.profile).column("r").front();
  if (!(r_h > 0.0)) throw ConfigError("penrose: set r_horizon");
  const double hi = c.number("mass_r_hi", std::isfinite(g.r_max) ? g.r_max : 200.0 * r_h);
  const double lo = c.number("mass_r_lo", 0.25 * hi);
  MassFit fit;
  run.emit(S, {"mass_fit_residual", "total mass", 1e-6}, [&] {
    fit = total_mass_from_profile(g, lo, hi, 64, INFINITY);
    return fit.residual;
  });
  run.emit(S, {"penrose_margin", "Penrose inequality", -1e-6, ">="}, [&] {
    return penrose_margin(fit.m, sphere_geometry(g, r_h).area).margin;
  });
}

void suite_penrose(Runner& run) {
  if (run.custom_radial()) return penrose_custom(run);
  const std::string S = "penrose";
  const double m = run.m();
  run.emit(S, {"isotropic_neck_equality", "Penrose inequality", 1e-10}, [&] {
    const double A = surface_area(LevelSetSurface::coordinate_sphere(0.5 * m), isotropic_slice(m).g);
    return std::abs(m - std::sqrt(A / (16.0 * kPi)));
  });
  run.emit(S, {"coe_slice_margin", "Penrose inequality", 1e-6}, [&] {
    double worst = 0.0;
    for (double mm : {0.5 * m, m, 2.0 * m}) {
      const CoESlice s = coe_slice(mm, kruskal_line(0.0, 1.0, 1.0));
      const double mass = total_mass_from_profile(s.radial.g, 50.0 * mm, 200.0 * mm).m;
      const double A = surface_area(LevelSetSurface::coordinate_sphere(2.0 * mm), s.data.g);
      worst = std::max(worst, std::abs(penrose_margin(mass, A).margin));
    }
    return worst;
  });
}

}  // namespace

Report run_suite(const RunConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  Report report;
  report.suite = config.suite;
  report.seed = config.seed;
  report.config = config.settings;
  report.config["seed"] = std::to_string(config.seed);
  if (config.tolerance) {
    std::ostringstream os;
    os.precision(17);
    os << *config.tolerance;
    report.config["tol"] = os.str();
  }
  if (!config.profile.empty()) report.config["profile"] = config.profile;

  Runner run(config, report);
  const std::map<std::string, std::function<void(Runner&)>> suites{
      {"identities", suite_identities}, {"static-curvature", suite_static_curvature},
      {"schwarzschild", suite_schwarzschild}, {"imcf", suite_imcf},
      {"jang-radial", suite_jang_radial}, {"penrose", suite_penrose}};
  if (config.suite == "all") {
    for (const std::string& name : suite_names())
      if (name != "all") suites.at(name)(run);
  } else {
    const auto it = suites.find(config.suite);
    if (it == suites.end()) throw ConfigError("unknown suite '" + config.suite + "'");
    it->second(run);
  }
  for (const Check& c : report.checks) (c.pass ? report.passed : report.failed) += 1;
  report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

int exit_code(const Report& report) { return report.failed == 0 && !report.checks.empty() ? 0 : 1; }

std::string report_json(const Report& report, bool include_wall_time) {
  nlohmann::ordered_json j;
  j["schema"] = 1;
  j["suite"] = report.suite;
  j["seed"] = report.seed;
  j["config"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : report.config) j["config"][k] = v;
  j["checks"] = nlohmann::ordered_json::array();
  for (const Check& c : report.checks) {
    nlohmann::ordered_json r;
    r["suite"] = c.suite;
    r["name"] = c.name;
    r["anchor"] = c.anchor;
    if (std::isfinite(c.value)) r["value"] = c.value;
    else r["value"] = nullptr;
    r["relation"] = c.relation;
    r["tolerance"] = c.tolerance;
    r["pass"] = c.pass;
    if (!c.diagnostic.empty()) r["diagnostic"] = c.diagnostic;
    j["checks"].push_back(std::move(r));
  }
  j["summary"] = {{"passed", report.passed}, {"failed", report.failed}};
  if (include_wall_time) j["wall_time_s"] = report.wall_time;
  return j.dump(2) + "\n";
}

}  // namespace jangbench
