// jangbench: run verification suites and export radial profiles.
//
//   jangbench <suite> [--config FILE] [--seed N] [--tol X] [--out PATH] [--profile CSV]
//             [--set key=value]...
//   jangbench export-profile [--model NAME] [--m M] [--r-min A] [--r-max B]
//             [--points N] [--config FILE] --out PATH
//
// Exit codes: 0 all checks pass, 1 a check failed, 2 configuration or runtime error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "jangbench/cli_reporting.hpp"

namespace {

using namespace jangbench;

std::string join(const std::vector<std::string>& v, const char* sep) {
  std::string out;
  for (const auto& s : v) out += (out.empty() ? "" : sep) + s;
  return out;
}

void apply_sets(const std::vector<std::string>& sets, std::map<std::string, std::string>& settings) {
  for (const auto& kv : sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("--set expects key=value, got " + kv);
    settings[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
}

int run_export(int argc, char** argv) {
  CLI::App app{"Export a radial model as a CSV profile", "jangbench export-profile"};
  std::string config_path, out, model;
  std::vector<std::string> sets;
  double m = 1.0, r_min = 2.1, r_max = 50.0;
  int points = 100;
  app.add_option("--config", config_path, "key=value file (grr, gss, model, m)");
  app.add_option("--model", model, "flat | schwarzschild-standard | schwarzschild-isotropic | mass-profile");
  app.add_option("--m", m, "mass parameter");
  app.add_option("--r-min", r_min, "first radius");
  app.add_option("--r-max", r_max, "last radius");
  app.add_option("--points", points, "number of rows");
  app.add_option("--set", sets, "extra key=value setting");
  app.add_option("--out", out, "CSV path")->required();
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  try {
    std::map<std::string, std::string> settings;
    if (!config_path.empty()) settings = read_config_file(config_path);
    apply_sets(sets, settings);
    if (!model.empty()) settings["model"] = model;
    if (app.count("--m") || !settings.count("m")) settings["m"] = std::to_string(m);
    const RunConfig config = make_run_config("imcf", settings);
    write_profile_csv(out, export_profile(radial_model(config), r_min, r_max, points));
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "jangbench: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1 && std::string(argv[1]) == "export-profile") return run_export(argc - 1, argv + 1);

  CLI::App app{"Verification suites for deformed Cauchy data", "jangbench"};
  std::string suite, config_path, out, profile, seed, tol;
  std::vector<std::string> sets;
  app.add_option("suite", suite, join(suite_names(), " | "))->required();
  app.add_option("--config", config_path, "flat key=value configuration file");
  app.add_option("--seed", seed, "seed of the single random generator (default 42)");
  app.add_option("--tol", tol, "tolerance applied to every check");
  app.add_option("--out", out, "JSON report path (default: standard output)");
  app.add_option("--profile", profile, "radial CSV profile used as data source");
  app.add_option("--set", sets, "extra key=value setting, e.g. --set m=2");
  app.footer("Subcommand: jangbench export-profile --help");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    std::map<std::string, std::string> settings;
    if (!config_path.empty()) settings = read_config_file(config_path);
    apply_sets(sets, settings);
    if (!seed.empty()) settings["seed"] = seed;
    if (!tol.empty()) settings["tol"] = tol;
    if (!out.empty()) settings["out"] = out;
    if (!profile.empty()) settings["profile"] = profile;
    const RunConfig config = make_run_config(suite, settings);
    const Report report = run_suite(config);
    const std::string json = report_json(report);
    if (config.out.empty()) {
      std::cout << json;
    } else {
      std::ofstream f(config.out, std::ios::binary);
      if (!(f << json)) throw ConfigError("cannot write report to " + config.out);
    }
    for (const Check& c : report.checks)
      if (!c.pass)
        std::cerr << "FAILED " << c.suite << "/" << c.name << ": value " << c.value << " " << c.relation
                  << " " << c.tolerance << (c.diagnostic.empty() ? "" : " (" + c.diagnostic + ")") << "\n";
    std::cerr << report.suite << ": " << report.passed << " passed, " << report.failed << " failed in "
              << report.wall_time << " s\n";
    return exit_code(report);
  } catch (const std::exception& e) {
    std::cerr << "jangbench: " << e.what() << "\n";
    return 2;
  }
}
