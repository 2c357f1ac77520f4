#include "curvforge/run.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "curvforge/surface.hpp"

namespace curvforge {

using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

class Stopwatch {
 public:
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - last_).count();
    last_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

json trace_json(const std::vector<TraceEntry>& trace) {
  json out = json::array();
  for (const auto& t : trace) out.push_back({t.stage, t.iteration, t.residual, t.extra});
  return out;
}

constexpr const char* kLadderNote =
    "the absolute scal mismatch bound applies at the finest resolution; coarser ones are judged by the "
    "refinement order";

double scal_tolerance(const SolverSpec& spec, const ScalarField& s) {
  return spec.scal_tolerance > 0.0 ? spec.scal_tolerance : 1e-2 * (1.0 + max_abs(s));
}

// Largest eigenvalue over nodes of the Gram matrix h(v_a, v_b) of the spans.
double max_gram_eigenvalue(const MetricField& h, const Distribution& V) {
  const int q = V.rank();
  std::vector<ScalarField> gram;
  for (int a = 0; a < q; ++a)
    for (int b = 0; b < q; ++b) gram.push_back(inner(h, V.spans[static_cast<std::size_t>(a)], V.spans[static_cast<std::size_t>(b)]));
  double worst = -HUGE_VAL;
  Eigen::MatrixXd G(q, q);
  for (std::size_t p = 0; p < h.grid()->nodes; ++p) {
    for (int a = 0; a < q; ++a)
      for (int b = 0; b < q; ++b) G(a, b) = gram[static_cast<std::size_t>(a * q + b)][p];
    worst = std::max(worst, Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(G, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff());
  }
  return worst;
}

struct Output {
  std::string dir;
  json artifacts = json::array();
  void dump(const std::string& name, const ScalarField& f) {
    if (dir.empty()) return;
    write_csv((std::filesystem::path(dir) / name).string(), f);
    artifacts.push_back(name);
  }
  void dump(const std::string& name, const MatrixField& m) {
    if (dir.empty()) return;
    write_csv((std::filesystem::path(dir) / name).string(), m);
    artifacts.push_back(name);
  }
};

ScalarField build_s(const RunConfig& cfg, const GridPtr& grid, const UpsilonContext* ctx) {
  switch (cfg.s.kind) {
    case FieldSpec::Kind::expression: return evaluate(cfg.s.expr, grid);
    case FieldSpec::Kind::csv: {
      const std::filesystem::path p(cfg.s.path);
      return read_scalar_csv(p.is_absolute() ? cfg.s.path : (std::filesystem::path(cfg.base_dir) / p).string(), grid);
    }
    case FieldSpec::Kind::planted: break;
  }
  if (!ctx) throw ConfigError("config.s.planted: planted targets need the synthesize command");
  return s_map(*ctx, random_trig_field(grid, cfg.s.mid, cfg.s.half_width, cfg.s.seed));
}

std::vector<int> ladder(const RunConfig& cfg, int native) {
  if (!cfg.refine.empty()) return cfg.refine;
  return {native};
}

void require_grid(const RunConfig& cfg) {
  if (cfg.grid.sizes.empty()) throw ConfigError("config.grid: required for " + cfg.command);
  if (!cfg.refine.empty()) {
    if (cfg.s.kind == FieldSpec::Kind::csv) throw ConfigError("config.refine: a csv target fixes the resolution");
    if (cfg.metric.kind == MetricSpec::Kind::csv) throw ConfigError("config.refine: a csv metric fixes the resolution");
  }
}

json effective(const RunConfig& cfg) {
  json e = {{"scheme", to_string(cfg.scheme)}, {"seed", cfg.seed}};
  if (cfg.command == "verify") {
    e["suite"] = cfg.suites;
    e["sizes"] = cfg.sizes;
  } else {
    e["grid"] = cfg.grid.sizes;
    if (!cfg.refine.empty()) e["refine"] = cfg.refine;
  }
  return e;
}

// ---------------------------------------------------------------- commands

void run_verify(const RunConfig& cfg, json& body, json& timings, std::vector<CheckRecord>& checks) {
  if (cfg.suites.empty()) throw ConfigError("config.suite: verify needs a suite (see `curvforge info`)");
  if (cfg.scheme != Scheme::fd4)
    throw ConfigError("config.scheme: the verification suites measure fd4 orders; their spectral checks are built in");
  SuiteOptions opt;
  opt.sizes = cfg.sizes;
  opt.amplitude = cfg.amplitude;
  opt.seed = cfg.seed;
  opt.presets = cfg.presets;
  opt.order_threshold = cfg.order_threshold;
  Stopwatch clock;
  for (const auto& name : cfg.suites) {
    std::vector<CheckRecord> got;
    try {
      got = run_suite(name, opt);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("config.suite: ") + e.what());
    }
    checks.insert(checks.end(), got.begin(), got.end());
    timings["suite:" + name] = clock.lap();
  }
  body["suites"] = cfg.suites;
}

void run_synthesize(const RunConfig& cfg, json& body, json& timings, std::vector<CheckRecord>& checks, Output& out,
                    int& exit_code) {
  require_grid(cfg);
  if (cfg.grid.annulus) throw ConfigError("config.grid: synthesis runs on tori");
  const int native = cfg.grid.sizes.front();
  const std::vector<int> sizes = ladder(cfg, native);
  std::vector<double> mismatches;
  double s_scale = 0.0;
  json runs = json::array();
  Stopwatch clock;
  for (std::size_t r = 0; r < sizes.size(); ++r) {
    const int n = sizes[r];
    const GridSpec spec = cfg.refine.empty() ? cfg.grid : resized(cfg.grid, n);
    const GridPtr grid = build_grid(spec);
    const MetricField g = build_metric(cfg.metric, grid, cfg.base_dir);
    if (g.index != 0) throw ConfigError("config.metric: synthesis needs a Riemannian metric");
    SplitDistribution split;
    try {
      split = preset_split(cfg.distribution.preset, g, cfg.distribution.normal, cfg.distribution.q);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("config.distribution: ") + e.what());
    }
    const UpsilonContext ctx(g, split.V, split.W, cfg.scheme);
    const ScalarField s = build_s(cfg, grid, &ctx);
    s_scale = std::max(s_scale, max_abs(s));
    const std::string tag = "@" + std::to_string(n);
    timings["setup" + tag] = clock.lap();

    if (cfg.distribution.preset != PresetKind::coordinate) {
      const ScalarField& twist = cfg.distribution.normal ? ctx.twist_H() : ctx.twist_V();
      checks.push_back(lower_check("synthesis.preset_twisted" + tag, n, min_value(twist), 1e-12));
    }

    SynthesisOptions opt;
    opt.strategy = cfg.solver.strategy;
    opt.monotone.tol = cfg.solver.tol;
    opt.monotone.max_iter = cfg.solver.max_iter;
    opt.newton.tol = cfg.solver.tol;
    SolveReport rep;
    try {
      rep = synthesize(ctx, s, opt);
    } catch (const TargetRejected& e) {
      checks.push_back(absolute_check("synthesis.bracket" + tag, n, 1.0, 0.0));
      body["message"] = e.what();
      runs.push_back({{"n", n}, {"message", e.what()}});
      exit_code = kExitCheckFailed;
      break;
    } catch (const SolverError& e) {
      body["message"] = e.what();
      runs.push_back({{"n", n}, {"message", e.what()}});
      exit_code = kExitSolver;
      break;
    }
    timings["solve" + tag] = clock.lap();
    json run = {{"n", n},
                {"converged", rep.converged},
                {"iterations", rep.iterations},
                {"residual", rep.residual},
                {"s_rescale", rep.scale},
                {"bracket", {rep.bracket_low, rep.bracket_high}},
                {"f_range", {rep.f_min, rep.f_max}},
                {"enclosure_held", rep.enclosure_held},
                {"scal_mismatch", rep.scal_mismatch},
                {"message", rep.message},
                {"trace", trace_json(rep.trace)}};
    checks.push_back(absolute_check("synthesis.residual" + tag, n, rep.residual, cfg.solver.tol));
    if (!rep.converged) {
      runs.push_back(run);
      body["message"] = rep.message;
      exit_code = kExitSolver;
      break;
    }
    const MetricField& h = *rep.h;
    double tolerance = scal_tolerance(cfg.solver, s);
    if (cfg.s.kind == FieldSpec::Kind::planted && cfg.solver.scal_tolerance == 0.0) {
      // The planted metric itself fixes the discretisation error to expect.
      const ScalarField f_true = random_trig_field(grid, cfg.s.mid, cfg.s.half_width, cfg.s.seed);
      const MetricField h_true = change(g, f_true, ctx.table().K(f_true), split.V);
      const double fd_error = max_abs(scal_oracle(h_true, cfg.scheme) - s);
      tolerance = 10.0 * fd_error + 1e-8;
      run["planted_fd_error"] = fd_error;
    }
    run["scal_tolerance"] = tolerance;
    if (r + 1 == sizes.size())
      checks.push_back(absolute_check("synthesis.scal_mismatch" + tag, n, rep.scal_mismatch, tolerance));
    checks.push_back(absolute_check("synthesis.metric_index" + tag, n, std::abs(h.index - ctx.q()), 0.0));
    checks.push_back(lower_check("synthesis.V_negative_definite" + tag, n, -max_gram_eigenvalue(h, split.V), 1e-12));
    mismatches.push_back(rep.scal_mismatch);
    runs.push_back(run);
    if (r + 1 == sizes.size()) {
      out.dump("h.csv", h.m);
      out.dump("f.csv", rep.f);
      out.dump("s.csv", s);
      const ScalarField scal = scal_oracle(h, cfg.scheme);
      out.dump("scal.csv", scal);
      out.dump("scal_error.csv", scal - s);
      timings["dump"] = clock.lap();
    }
    timings["verify" + tag] = clock.lap();
  }
  if (sizes.size() > 1 && mismatches.size() == sizes.size())
    checks.push_back(order_check("synthesis.scal_mismatch_order", sizes, mismatches, cfg.refine_order, s_scale));
  body["runs"] = runs;
  body["notes"] = json::array(
      {"s is rescaled by lambda = 2^k until both constant scans succeed; the reported metric is lambda * "
       "change(g, f, K(f), V), whose scalar curvature is s"});
  body["notes"].push_back(kLadderNote);
}

void run_surface(const RunConfig& cfg, json& body, json& timings, std::vector<CheckRecord>& checks, Output& out,
                 int& exit_code) {
  require_grid(cfg);
  if (cfg.grid.sizes.size() != 2) throw ConfigError("config.grid: surface2d needs a 2D grid");
  if (cfg.s.kind == FieldSpec::Kind::planted) throw ConfigError("config.s.planted: only synthesize plants targets");
  const int native = cfg.grid.sizes[1];
  const std::vector<int> sizes = ladder(cfg, native);
  std::vector<double> mismatches;
  double s_scale = 0.0;
  json runs = json::array();
  Stopwatch clock;
  for (std::size_t r = 0; r < sizes.size(); ++r) {
    const int n = sizes[r];
    const GridSpec spec = cfg.refine.empty() ? cfg.grid : resized(cfg.grid, n);
    const GridPtr grid = build_grid(spec);
    const ScalarField s = build_s(cfg, grid, nullptr);
    s_scale = std::max(s_scale, max_abs(s));
    const std::string tag = "@" + std::to_string(n);
    SolveReport rep;
    try {
      if (cfg.grid.annulus) {
        BoundarySurfaceOptions opt;
        opt.tol = cfg.solver.tol;
        rep = solve_sine_boundary(s, opt);
      } else {
        ClosedSurfaceOptions opt;
        opt.tol = cfg.solver.tol;
        opt.dt0 = 1.0 / cfg.solver.continuation_steps;
        opt.scheme = cfg.scheme;
        rep = solve_sine_closed(s, build_diffeo(cfg.phi, 2), opt);
      }
    } catch (const TargetRejected& e) {
      checks.push_back(absolute_check("surface.admissible_target" + tag, n, 1.0, 0.0));
      body["message"] = e.what();
      runs.push_back({{"n", n}, {"message", e.what()}});
      exit_code = kExitCheckFailed;
      break;
    } catch (const SolverError& e) {
      body["message"] = e.what();
      runs.push_back({{"n", n}, {"message", e.what()}});
      exit_code = kExitSolver;
      break;
    }
    timings["solve" + tag] = clock.lap();
    json run = {{"n", n},
                {"converged", rep.converged},
                {"iterations", rep.iterations},
                {"residual", rep.residual},
                {"scale", rep.scale},
                {"u_range", {rep.f_min, rep.f_max}},
                {"message", rep.message},
                {"trace", trace_json(rep.trace)}};
    checks.push_back(absolute_check("surface.residual" + tag, n, rep.residual, cfg.solver.tol));
    if (!rep.converged) {
      runs.push_back(run);
      body["message"] = rep.message;
      exit_code = kExitSolver;
      break;
    }
    const MetricField& h = *rep.h;
    checks.push_back(lower_check("surface.angle_inside_range" + tag, n, std::min(rep.f_min, kPi - rep.f_max), 0.0));
    checks.push_back(absolute_check("surface.metric_index" + tag, n, std::abs(h.index - 1), 0.0));
    double mismatch = 0.0;
    if (cfg.grid.annulus) {
      mismatch = interior_scal_mismatch(h, s, Scheme::fd4);
      int increases = 0;
      double last = HUGE_VAL, c_last = -1.0;
      for (const auto& t : rep.trace) {
        if (t.stage != "descent") continue;
        if (t.extra == c_last && t.residual > last) ++increases;
        last = t.residual;
        c_last = t.extra;
      }
      checks.push_back(absolute_check("surface.energy_non_increasing" + tag, n, increases, 0.0));
      checks.push_back(lower_check("surface.shrink_factor" + tag, n, rep.scale, 1e-6));
      run["interior_scal_mismatch"] = mismatch;
      if (cfg.a_priori_probe) {
        std::vector<double> slopes;
        for (double c : {rep.scale, rep.scale / 2, rep.scale / 4}) {
          BoundarySurfaceOptions opt;
          opt.tol = cfg.solver.tol;
          opt.c_start = c;
          const SolveReport probe = solve_sine_boundary(s, opt);
          slopes.push_back(probe.scale == c ? a_priori_slope(probe, s) : HUGE_VAL);
        }
        const double spread =
            *std::max_element(slopes.begin(), slopes.end()) / *std::min_element(slopes.begin(), slopes.end()) - 1.0;
        run["a_priori_slopes"] = slopes;
        checks.push_back(absolute_check("surface.a_priori_linear_scaling" + tag, n, spread, 0.25));
      }
    } else {
      mismatch = rep.scal_mismatch;
      run["scal_mismatch"] = mismatch;
      run["gauss_bonnet"] = rep.gauss_bonnet;
      checks.push_back(absolute_check("surface.gauss_bonnet" + tag, n, rep.gauss_bonnet, 1e-8));
    }
    run["scal_tolerance"] = scal_tolerance(cfg.solver, s);
    if (r + 1 == sizes.size())
      checks.push_back(absolute_check("surface.scal_mismatch" + tag, n, mismatch, scal_tolerance(cfg.solver, s)));
    mismatches.push_back(mismatch);
    runs.push_back(run);
    if (r + 1 == sizes.size()) {
      out.dump("u.csv", rep.f);
      out.dump("h.csv", h.m);
      out.dump("s.csv", s);
      out.dump("scal.csv", scal_oracle(h, cfg.grid.annulus ? Scheme::fd4 : cfg.scheme));
    }
    timings["verify" + tag] = clock.lap();
  }
  if (sizes.size() > 1 && mismatches.size() == sizes.size())
    checks.push_back(order_check("surface.scal_mismatch_order", sizes, mismatches, cfg.refine_order, s_scale));
  body["runs"] = runs;
  body["notes"] = cfg.grid.annulus
                      ? json::array({"the reported metric is c * h with h built from u = v + pi/2; c is halved until "
                                     "the solution stays inside the range guard"})
                      : json::array({"the amplitude c and the map phi come from the default continuation (c chosen "
                                     "so that c * (s o phi) spans the seed curvature), a pragmatic choice rather "
                                     "than an optimised one; the reported metric c * h has scalar curvature s o phi"});
  body["notes"].push_back(kLadderNote);
}

}  // namespace

json to_json(const CheckRecord& c) {
  json j = {{"name", c.name}, {"kind", c.kind}, {"sizes", c.sizes}, {"errors", c.errors}, {"threshold", c.threshold}};
  if (c.kind == "order") {
    j["order"] = c.order;
    j["fit_order"] = c.fit_order;
    j["scale"] = c.scale;
  }
  j["pass"] = c.pass;
  return j;
}

RunReport run(const RunConfig& cfg) {
  RunReport rep;
  json body = {{"version", kVersion}, {"command", cfg.command}, {"config", cfg.echo}, {"effective", effective(cfg)}};
  std::vector<CheckRecord> checks;
  Output out;
  if (!cfg.out.empty()) {
    std::filesystem::create_directories(cfg.out);
    out.dir = cfg.out;
  }
  Stopwatch total;
  int exit_code = kExitPass;
  if (cfg.command == "verify") {
    run_verify(cfg, body, rep.timings, checks);
  } else if (cfg.command == "synthesize") {
    run_synthesize(cfg, body, rep.timings, checks, out, exit_code);
  } else if (cfg.command == "surface2d") {
    run_surface(cfg, body, rep.timings, checks, out, exit_code);
  } else {
    throw ConfigError("config.command: expected verify, synthesize or surface2d");
  }
  rep.timings["total"] = total.lap();
  json list = json::array();
  for (const auto& c : checks) list.push_back(to_json(c));
  body["checks"] = list;
  body["artifacts"] = out.artifacts;
  if (exit_code == kExitPass && !all_pass(checks)) exit_code = kExitCheckFailed;
  body["status"] = exit_code == kExitPass ? "pass" : exit_code == kExitSolver ? "solver_failure" : "check_failure";
  rep.body = std::move(body);
  rep.exit_code = exit_code;
  return rep;
}

std::string body_text(const RunReport& r) { return r.body.dump(2); }

void write_report(const RunReport& r, const std::string& dir) {
  std::filesystem::create_directories(dir);
  std::ofstream f(std::filesystem::path(dir) / "report.json");
  if (!f) throw std::runtime_error("cannot write report.json in '" + dir + "'");
  f << json{{"body", r.body}, {"timings", r.timings}}.dump(2) << "\n";
}

}  // namespace curvforge
