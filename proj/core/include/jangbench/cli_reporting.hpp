#pragma once

// Verification suites behind the command-line front end: configuration, the
// tiny analytic expression language, check records and the JSON report.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "jangbench/radial_flows.hpp"

namespace jangbench {

// Bad input rather than a failed check: unknown suite, unreadable data, bad
// option values. Maps to exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Arithmetic over +, -, *, /, ^, sin, cos, exp, log and the variables r, x1,
// x2, x3, m. r is |x| in three-dimensional use and the argument in radial use.
class Expression {
 public:
  struct Node;

  static Expression parse(const std::string& text);

  ScalarJet eval(const JetVec& x, double m) const;
  ScalarJet eval_radial(const ScalarJet& r, double m) const;
  bool uses_cartesian() const;  // mentions x1, x2 or x3
  const std::string& text() const { return text_; }

  RadialFunction radial(double m) const;
  ScalarField field(double m) const;

 private:
  std::shared_ptr<const Node> root_;
  std::string text_;
};

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"identities", "static-curvature", "schwarzschild",
                                              "imcf",       "jang-radial",      "penrose",
                                              "all"};
  return names;
}

// Descriptive anchors naming the result each check exercises.
const std::vector<std::string>& known_anchors();

struct RunConfig {
  std::string suite;
  std::uint64_t seed = 42;
  std::optional<double> tolerance;          // overrides every check tolerance
  std::map<std::string, double> check_tolerances;  // "tol.<check name>" keys
  std::string out;                          // JSON report path; empty for none
  std::string profile;                      // radial CSV data source
  std::map<std::string, std::string> settings;  // remaining key=value entries

  double number(const std::string& key, double fallback) const;
  int integer(const std::string& key, int fallback) const;
  std::string text(const std::string& key, const std::string& fallback) const;
  bool has(const std::string& key) const { return settings.count(key) > 0; }
};

// Flat key=value text; '#' starts a comment. Throws ConfigError.
std::map<std::string, std::string> read_config_file(const std::string& path);

// Validates the suite name and moves the recognised keys (seed, tol, out,
// profile, tol.*) out of `settings`. Command-line values win over the file.
RunConfig make_run_config(const std::string& suite, std::map<std::string, std::string> settings);

struct Check {
  std::string suite;
  std::string name;
  std::string anchor;
  double value = 0.0;
  double tolerance = 0.0;
  std::string relation = "<=";  // value <= tolerance, or value >= tolerance
  bool pass = false;
  std::string diagnostic;
};

struct Report {
  std::string suite;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> config;
  std::vector<Check> checks;
  int passed = 0;
  int failed = 0;
  double wall_time = 0.0;
};

// Runs the suite. Numerical errors inside a check turn into failed checks with a
// diagnostic; ConfigError propagates.
Report run_suite(const RunConfig& config);

int exit_code(const Report& report);  // 0 all pass, 1 otherwise

// "schema": 1. With include_wall_time = false the text depends only on the
// configuration.
std::string report_json(const Report& report, bool include_wall_time = true);

// Radial model by name (flat, schwarzschild-standard, schwarzschild-isotropic,
// mass-profile) or from grr/gss expressions in the settings.
RadialMetric radial_model(const RunConfig& config);

RadialProfile export_profile(const RadialMetric& model, double r_min, double r_max, int points);

}  // namespace jangbench
