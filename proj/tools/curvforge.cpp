#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

#include "curvforge/run.hpp"

using namespace curvforge;

namespace {

void print_checks(const RunReport& r) {
  for (const auto& c : r.body["checks"]) {
    const bool order = c["kind"] == "order";
    std::printf("%s  %-58s", c["pass"].get<bool>() ? "PASS" : "FAIL", c["name"].get<std::string>().c_str());
    if (order)
      std::printf(" order %.2f (>= %.2f)\n", c["order"].get<double>(), c["threshold"].get<double>());
    else if (c["kind"] == "lower")
      std::printf(" value %.3e (>= %.1e)\n", c["errors"][0].get<double>(), c["threshold"].get<double>());
    else
      std::printf(" error %.3e (<= %.1e)\n", c["errors"][0].get<double>(), c["threshold"].get<double>());
  }
  if (r.body.contains("message")) std::printf("message: %s\n", r.body["message"].get<std::string>().c_str());
  std::printf("status: %s\n", r.body["status"].get<std::string>().c_str());
}

int info() {
  std::printf("curvforge %s\n\nsuites (verify --suite NAME):\n", kVersion);
  for (const auto& s : suite_catalog()) std::printf("  %-13s %s\n", s.name.c_str(), s.summary.c_str());
  std::printf(
      "\ncheck names:\n"
      "  <suite>.<preset>.<line>          order check of one predicted line against the direct computation\n"
      "  synthesis.<check>@N              residual, scal_mismatch, metric_index, V_negative_definite,\n"
      "                                   preset_twisted, bracket; synthesis.scal_mismatch_order over refine\n"
      "  surface.<check>@N                residual, scal_mismatch, gauss_bonnet, angle_inside_range,\n"
      "                                   metric_index, admissible_target, energy_non_increasing,\n"
      "                                   shrink_factor, a_priori_linear_scaling\n"
      "\nexit codes: 0 pass, 2 failed check, 3 config error, 4 solver did not converge\n");
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudo-Riemannian metric surgery and prescribed scalar curvature on lattice tori"};
  app.require_subcommand(1, 1);
  std::string config_path, out_dir, scheme_name;
  std::vector<std::string> suites;
  int resolution = 0;
  long long seed = -1;
  auto add_common = [&](CLI::App* sub, bool config_required) {
    auto* c = sub->add_option("--config", config_path, "JSON run configuration");
    if (config_required) c->required();
    sub->add_option("--out", out_dir, "output directory for report.json and field dumps");
    sub->add_option("--resolution", resolution, "nodes per axis (verify: finest ladder size)");
    sub->add_option("--scheme", scheme_name, "fd4 or spectral");
    sub->add_option("--seed", seed, "seed for randomized fields");
  };
  auto* verify = app.add_subcommand("verify", "run identity suites and measure convergence orders");
  add_common(verify, false);
  verify->add_option("--suite", suites, "suite name(s), overriding the config");
  auto* synth = app.add_subcommand("synthesize", "find a metric with prescribed scalar curvature");
  add_common(synth, true);
  auto* surface = app.add_subcommand("surface2d", "Lorentz surfaces with prescribed scalar curvature");
  add_common(surface, true);
  app.add_subcommand("info", "version, suite catalog and check names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  if (command == "info") return info();

  RunConfig cfg;
  try {
    cfg = config_path.empty() ? parse_config(nlohmann::json::object()) : load_config(config_path);
    if (!cfg.command.empty() && cfg.command != command)
      throw ConfigError("config.command: is '" + cfg.command + "' but the command line asks for '" + command + "'");
    cfg.command = command;
    Overrides o;
    if (resolution > 0) o.resolution = resolution;
    if (!scheme_name.empty()) {
      try {
        o.scheme = parse_scheme(scheme_name);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("--scheme: ") + e.what());
      }
    }
    if (seed >= 0) o.seed = static_cast<std::uint64_t>(seed);
    if (!out_dir.empty()) o.out = out_dir;
    o.suites = suites;
    apply_overrides(cfg, o);
    if (cfg.out.empty()) cfg.out = "curvforge-out";
    const RunReport r = run(cfg);
    write_report(r, cfg.out);
    print_checks(r);
    std::printf("report: %s/report.json\n", cfg.out.c_str());
    return r.exit_code;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitSolver;
  }
}
