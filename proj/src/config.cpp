#include "curvforge/config.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace curvforge {

using nlohmann::json;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError(where + ": " + what);
}

void allow_keys(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
  if (!j.is_object()) fail(where, "expected an object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key)) fail(where, "unknown key '" + key + "'");
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(where, "expected a finite number");
  return v;
}

int integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where, "expected an integer");
  return j.get<int>();
}

std::uint64_t unsigned_integer(const json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long long>() < 0) fail(where, "expected a non-negative integer");
  return j.get<std::uint64_t>();
}

std::string text(const json& j, const std::string& where) {
  if (!j.is_string()) fail(where, "expected a string");
  return j.get<std::string>();
}

std::vector<int> int_list(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of integers");
  std::vector<int> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(integer(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<double> number_list(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

template <class T, class Parse>
T parsed(const json& j, const std::string& where, Parse parse) {
  const std::string name = text(j, where);
  try {
    return parse(name);
  } catch (const std::invalid_argument& e) {
    fail(where, e.what());
  }
}

TrigTerm parse_trig(const json& j, const std::string& where) {
  allow_keys(j, where, {"coeff", "fn", "k", "entry"});
  TrigTerm t;
  if (!j.contains("k")) fail(where, "missing 'k' (wavenumber per axis)");
  t.coeff = j.contains("coeff") ? number(j["coeff"], where + ".coeff") : 1.0;
  const std::string fn = j.contains("fn") ? text(j["fn"], where + ".fn") : "cos";
  if (fn != "cos" && fn != "sin") fail(where + ".fn", "must be 'cos' or 'sin'");
  t.cosine = fn == "cos";
  t.k = int_list(j["k"], where + ".k");
  return t;
}

FieldExpression parse_expression(const json& j, const std::string& where) {
  allow_keys(j, where, {"constant", "trig", "poly"});
  FieldExpression e;
  if (j.contains("constant")) e.constant = number(j["constant"], where + ".constant");
  if (j.contains("trig")) {
    if (!j["trig"].is_array()) fail(where + ".trig", "expected an array");
    for (std::size_t i = 0; i < j["trig"].size(); ++i)
      e.trig.push_back(parse_trig(j["trig"][i], where + ".trig[" + std::to_string(i) + "]"));
  }
  if (j.contains("poly")) {
    if (!j["poly"].is_array()) fail(where + ".poly", "expected an array");
    for (std::size_t i = 0; i < j["poly"].size(); ++i) {
      const std::string w = where + ".poly[" + std::to_string(i) + "]";
      allow_keys(j["poly"][i], w, {"coeff", "powers"});
      if (!j["poly"][i].contains("powers")) fail(w, "missing 'powers'");
      PolyTerm p;
      p.coeff = j["poly"][i].contains("coeff") ? number(j["poly"][i]["coeff"], w + ".coeff") : 1.0;
      p.powers = int_list(j["poly"][i]["powers"], w + ".powers");
      for (int e2 : p.powers)
        if (e2 < 0) fail(w + ".powers", "powers must be non-negative");
      e.poly.push_back(p);
    }
  }
  return e;
}

void check_expression(const FieldExpression& e, const GridSpec& grid, const std::string& where) {
  const std::size_t dim = grid.sizes.size();
  for (std::size_t i = 0; i < e.trig.size(); ++i)
    if (e.trig[i].k.size() != dim)
      fail(where + ".trig[" + std::to_string(i) + "].k", "needs one wavenumber per axis (" + std::to_string(dim) + ")");
  for (std::size_t i = 0; i < e.poly.size(); ++i) {
    const std::string w = where + ".poly[" + std::to_string(i) + "].powers";
    if (e.poly[i].powers.size() != dim) fail(w, "needs one power per axis (" + std::to_string(dim) + ")");
    for (std::size_t a = 0; a < dim; ++a)
      if (e.poly[i].powers[a] != 0 && !(grid.annulus && a == 0))
        fail(w, "polynomial powers are only allowed along the bounded axis (axis 0 of an annulus)");
  }
}

FieldSpec parse_field(const json& j, const std::string& where) {
  FieldSpec f;
  if (j.is_number()) {
    f.expr.constant = number(j, where);
    return f;
  }
  if (!j.is_object()) fail(where, "expected a number or an object");
  if (j.contains("planted")) {
    allow_keys(j, where, {"planted"});
    const json& p = j["planted"];
    allow_keys(p, where + ".planted", {"mid", "half_width", "seed"});
    f.kind = FieldSpec::Kind::planted;
    if (p.contains("mid")) f.mid = number(p["mid"], where + ".planted.mid");
    if (p.contains("half_width")) f.half_width = number(p["half_width"], where + ".planted.half_width");
    if (p.contains("seed")) f.seed = unsigned_integer(p["seed"], where + ".planted.seed");
    if (!(f.mid - std::abs(f.half_width) > 0.0)) fail(where + ".planted", "planted f must stay positive (mid > half_width)");
    return f;
  }
  if (j.contains("csv")) {
    allow_keys(j, where, {"csv"});
    f.kind = FieldSpec::Kind::csv;
    f.path = text(j["csv"], where + ".csv");
    return f;
  }
  f.expr = parse_expression(j, where);
  return f;
}

GridSpec parse_grid(const json& j, const std::string& where) {
  allow_keys(j, where, {"topology", "dims", "sizes", "lengths"});
  GridSpec g;
  const std::string topo = j.contains("topology") ? text(j["topology"], where + ".topology") : "torus";
  if (topo != "torus" && topo != "annulus") fail(where + ".topology", "must be 'torus' or 'annulus'");
  g.annulus = topo == "annulus";
  if (!j.contains("sizes")) fail(where, "missing 'sizes'");
  g.sizes = int_list(j["sizes"], where + ".sizes");
  if (g.sizes.empty() || g.sizes.size() > 6) fail(where + ".sizes", "needs 1 to 6 axes");
  if (j.contains("dims") && integer(j["dims"], where + ".dims") != static_cast<int>(g.sizes.size()))
    fail(where + ".dims", "does not match the number of sizes");
  g.lengths = j.contains("lengths") ? number_list(j["lengths"], where + ".lengths")
                                    : std::vector<double>(g.sizes.size(), 1.0);
  if (g.lengths.size() != g.sizes.size()) fail(where + ".lengths", "needs one length per axis");
  for (double L : g.lengths)
    if (!(L > 0.0)) fail(where + ".lengths", "lengths must be positive");
  for (int n : g.sizes)
    if (n < 8) fail(where + ".sizes", "need at least 8 nodes per axis");
  if (g.annulus && g.sizes.size() != 2) fail(where, "an annulus is two-dimensional");
  return g;
}

MetricSpec parse_metric(const json& j, const std::string& where) {
  MetricSpec m;
  if (j.is_string()) {
    if (j.get<std::string>() != "flat") fail(where, "the only string form is \"flat\"");
    return m;
  }
  allow_keys(j, where, {"kind", "amplitude", "seed", "terms", "csv"});
  const std::string kind = j.contains("kind") ? text(j["kind"], where + ".kind") : "flat";
  if (kind == "flat") {
    if (j.size() != (j.contains("kind") ? 1u : 0u)) fail(where, "a flat metric takes no parameters");
    return m;
  }
  if (kind == "csv") {
    m.kind = MetricSpec::Kind::csv;
    if (!j.contains("csv")) fail(where, "missing 'csv' path");
    m.path = text(j["csv"], where + ".csv");
    return m;
  }
  if (kind != "perturbed") fail(where + ".kind", "must be 'flat', 'perturbed' or 'csv'");
  m.kind = MetricSpec::Kind::perturbed;
  if (!j.contains("amplitude")) fail(where, "missing 'amplitude'");
  m.amplitude = number(j["amplitude"], where + ".amplitude");
  if (!(m.amplitude >= 0.0 && m.amplitude <= kMaxPerturbation))
    fail(where + ".amplitude", "must lie in [0, 0.3]");
  if (j.contains("seed")) m.seed = unsigned_integer(j["seed"], where + ".seed");
  if (j.contains("terms")) {
    if (!j["terms"].is_array()) fail(where + ".terms", "expected an array");
    for (std::size_t i = 0; i < j["terms"].size(); ++i) {
      const std::string w = where + ".terms[" + std::to_string(i) + "]";
      const json& t = j["terms"][i];
      MetricTerm mt;
      mt.term = parse_trig(t, w);
      if (!t.contains("entry")) fail(w, "missing 'entry' [i, j]");
      const auto e = int_list(t["entry"], w + ".entry");
      if (e.size() != 2) fail(w + ".entry", "expected [i, j]");
      mt.i = e[0];
      mt.j = e[1];
      if (std::abs(mt.term.coeff) > 1.0) fail(w + ".coeff", "term coefficients must lie in [-1, 1]; scale with amplitude");
      m.terms.push_back(mt);
    }
  }
  if (m.seed && !m.terms.empty()) fail(where, "give either 'seed' or 'terms', not both");
  return m;
}

DistributionSpec parse_distribution(const json& j, const std::string& where) {
  allow_keys(j, where, {"preset", "role", "rank"});
  DistributionSpec d;
  if (!j.contains("preset")) fail(where, "missing 'preset'");
  d.preset = parsed<PresetKind>(j["preset"], where + ".preset", parse_preset);
  const std::string role = j.contains("role") ? text(j["role"], where + ".role") : "plane";
  if (role != "plane" && role != "normal") fail(where + ".role", "must be 'plane' or 'normal'");
  d.normal = role == "normal";
  if (j.contains("rank")) d.q = integer(j["rank"], where + ".rank");
  if (d.q < 1) fail(where + ".rank", "must be at least 1");
  return d;
}

SolverSpec parse_solver(const json& j, const std::string& where) {
  allow_keys(j, where, {"strategy", "tol", "max_iter", "continuation_steps", "scal_tolerance"});
  SolverSpec s;
  if (j.contains("strategy")) s.strategy = parsed<Strategy>(j["strategy"], where + ".strategy", parse_strategy);
  if (j.contains("tol")) s.tol = number(j["tol"], where + ".tol");
  if (j.contains("max_iter")) s.max_iter = integer(j["max_iter"], where + ".max_iter");
  if (j.contains("continuation_steps"))
    s.continuation_steps = integer(j["continuation_steps"], where + ".continuation_steps");
  if (j.contains("scal_tolerance")) s.scal_tolerance = number(j["scal_tolerance"], where + ".scal_tolerance");
  if (!(s.tol > 0.0)) fail(where + ".tol", "must be positive");
  if (s.max_iter < 1) fail(where + ".max_iter", "must be positive");
  if (s.continuation_steps < 1) fail(where + ".continuation_steps", "must be positive");
  if (s.scal_tolerance < 0.0) fail(where + ".scal_tolerance", "must be non-negative");
  return s;
}

TorusMap parse_map(const json& j, const std::string& where) {
  if (!j.is_object() || j.size() != 1) fail(where, "expected one of {translate|shear|warp: ...}");
  TorusMap m;
  if (j.contains("translate")) {
    m.kind = TorusMap::Kind::translate;
    m.shift = number_list(j["translate"], where + ".translate");
  } else if (j.contains("shear")) {
    const json& s = j["shear"];
    const std::string w = where + ".shear";
    allow_keys(s, w, {"axis", "source", "cos", "sin"});
    m.kind = TorusMap::Kind::shear;
    if (!s.contains("axis") || !s.contains("source")) fail(w, "needs 'axis' and 'source'");
    m.axis = integer(s["axis"], w + ".axis");
    m.source = integer(s["source"], w + ".source");
    if (s.contains("cos")) m.cos_coeffs = number_list(s["cos"], w + ".cos");
    if (s.contains("sin")) m.sin_coeffs = number_list(s["sin"], w + ".sin");
  } else if (j.contains("warp")) {
    const json& s = j["warp"];
    const std::string w = where + ".warp";
    allow_keys(s, w, {"axis", "rho", "phase"});
    m.kind = TorusMap::Kind::warp;
    if (!s.contains("axis") || !s.contains("rho")) fail(w, "needs 'axis' and 'rho'");
    m.axis = integer(s["axis"], w + ".axis");
    m.rho = number(s["rho"], w + ".rho");
    if (s.contains("phase")) m.phase = number(s["phase"], w + ".phase");
  } else {
    fail(where, "expected one of translate, shear, warp");
  }
  return m;
}

std::string resolve(const std::string& base, const std::string& path) {
  const std::filesystem::path p(path);
  return p.is_absolute() ? path : (std::filesystem::path(base) / p).string();
}

}  // namespace

// ---------------------------------------------------------------- parsing

RunConfig parse_config(const json& j, const std::string& base_dir) {
  allow_keys(j, "config",
             {"command", "suite", "sizes", "amplitude", "presets", "order_threshold", "grid", "refine", "refine_order",
              "metric", "distribution", "s", "solver", "phi", "a_priori_probe", "scheme", "seed", "out"});
  RunConfig c;
  c.base_dir = base_dir;
  c.echo = j;
  if (j.contains("command")) {
    c.command = text(j["command"], "config.command");
    if (c.command != "verify" && c.command != "synthesize" && c.command != "surface2d")
      fail("config.command", "must be 'verify', 'synthesize' or 'surface2d'");
  }
  if (j.contains("suite")) {
    if (j["suite"].is_string()) {
      c.suites.push_back(j["suite"].get<std::string>());
    } else if (j["suite"].is_array()) {
      for (std::size_t i = 0; i < j["suite"].size(); ++i)
        c.suites.push_back(text(j["suite"][i], "config.suite[" + std::to_string(i) + "]"));
    } else {
      fail("config.suite", "expected a suite name or an array of names");
    }
  }
  if (j.contains("sizes")) c.sizes = int_list(j["sizes"], "config.sizes");
  if (c.sizes.size() < 2) fail("config.sizes", "a refinement ladder needs at least two sizes");
  for (std::size_t i = 0; i < c.sizes.size(); ++i) {
    if (c.sizes[i] < 8) fail("config.sizes", "need at least 8 nodes per axis");
    if (i && c.sizes[i] <= c.sizes[i - 1]) fail("config.sizes", "sizes must increase");
  }
  if (j.contains("amplitude")) c.amplitude = number(j["amplitude"], "config.amplitude");
  if (!(c.amplitude >= 0.0 && c.amplitude <= kMaxPerturbation)) fail("config.amplitude", "must lie in [0, 0.3]");
  if (j.contains("presets")) {
    if (!j["presets"].is_array() || j["presets"].empty()) fail("config.presets", "expected a non-empty array");
    c.presets.clear();
    for (std::size_t i = 0; i < j["presets"].size(); ++i) {
      const auto kind = parsed<PresetKind>(j["presets"][i], "config.presets[" + std::to_string(i) + "]", parse_preset);
      if (kind != PresetKind::coordinate && kind != PresetKind::contact3)
        fail("config.presets", "the verification suites run on T^3 with 'coordinate' or 'contact3'");
      c.presets.push_back(kind);
    }
  }
  if (j.contains("order_threshold")) c.order_threshold = number(j["order_threshold"], "config.order_threshold");
  if (j.contains("grid")) c.grid = parse_grid(j["grid"], "config.grid");
  if (j.contains("refine")) {
    c.refine = int_list(j["refine"], "config.refine");
    for (std::size_t i = 0; i < c.refine.size(); ++i) {
      if (c.refine[i] < 8) fail("config.refine", "need at least 8 nodes per axis");
      if (i && c.refine[i] <= c.refine[i - 1]) fail("config.refine", "resolutions must increase");
    }
  }
  if (j.contains("refine_order")) c.refine_order = number(j["refine_order"], "config.refine_order");
  if (j.contains("metric")) c.metric = parse_metric(j["metric"], "config.metric");
  if (j.contains("distribution")) c.distribution = parse_distribution(j["distribution"], "config.distribution");
  if (j.contains("s")) c.s = parse_field(j["s"], "config.s");
  if (j.contains("solver")) c.solver = parse_solver(j["solver"], "config.solver");
  if (j.contains("phi")) {
    if (!j["phi"].is_array()) fail("config.phi", "expected an array of maps");
    for (std::size_t i = 0; i < j["phi"].size(); ++i)
      c.phi.push_back(parse_map(j["phi"][i], "config.phi[" + std::to_string(i) + "]"));
  }
  if (j.contains("a_priori_probe")) {
    if (!j["a_priori_probe"].is_boolean()) fail("config.a_priori_probe", "expected true or false");
    c.a_priori_probe = j["a_priori_probe"].get<bool>();
  }
  if (j.contains("scheme")) c.scheme = parsed<Scheme>(j["scheme"], "config.scheme", parse_scheme);
  if (j.contains("seed")) c.seed = unsigned_integer(j["seed"], "config.seed");
  if (j.contains("out")) c.out = text(j["out"], "config.out");

  if (!c.grid.sizes.empty()) {
    if (c.s.kind == FieldSpec::Kind::expression) check_expression(c.s.expr, c.grid, "config.s");
    for (std::size_t i = 0; i < c.metric.terms.size(); ++i) {
      const auto& t = c.metric.terms[i];
      const int n = static_cast<int>(c.grid.sizes.size());
      const std::string w = "config.metric.terms[" + std::to_string(i) + "]";
      if (t.i < 0 || t.j < 0 || t.i >= n || t.j >= n) fail(w + ".entry", "index out of range");
      if (t.term.k.size() != c.grid.sizes.size()) fail(w + ".k", "needs one wavenumber per axis");
    }
    if (c.grid.annulus && !c.phi.empty()) fail("config.phi", "diffeomorphisms act on tori only");
    if (c.distribution.q > static_cast<int>(c.grid.sizes.size()))
      fail("config.distribution.rank", "exceeds the grid dimension");
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": malformed JSON: " + e.what());
  }
  const auto dir = std::filesystem::path(path).parent_path();
  return parse_config(j, dir.empty() ? "." : dir.string());
}

void apply_overrides(RunConfig& cfg, const Overrides& o) {
  if (!o.suites.empty()) cfg.suites = o.suites;
  if (o.scheme) cfg.scheme = *o.scheme;
  if (o.seed) cfg.seed = *o.seed;
  if (o.out) cfg.out = *o.out;
  if (o.resolution) {
    const int n = *o.resolution;
    if (n < 8) throw ConfigError("--resolution: need at least 8 nodes per axis");
    if (!cfg.grid.sizes.empty()) cfg.grid = resized(cfg.grid, n);
    cfg.refine.clear();
    const int top = cfg.sizes.back();
    for (int& m : cfg.sizes) m = std::max(8, static_cast<int>(std::lround(static_cast<double>(m) * n / top)));
    for (std::size_t i = 1; i < cfg.sizes.size(); ++i)
      if (cfg.sizes[i] <= cfg.sizes[i - 1]) throw ConfigError("--resolution: too small for the refinement ladder");
  }
}

// ---------------------------------------------------------------- builders

ScalarField evaluate(const FieldExpression& e, const GridPtr& grid) {
  const Grid& g = *grid;
  return sample(grid, [&](std::span<const double> x) {
    double v = e.constant;
    for (const auto& t : e.trig) {
      double phase = 0.0;
      for (int a = 0; a < g.dim; ++a) phase += t.k[static_cast<std::size_t>(a)] * x[static_cast<std::size_t>(a)] / g.lengths[static_cast<std::size_t>(a)];
      v += t.coeff * (t.cosine ? std::cos(kTwoPi * phase) : std::sin(kTwoPi * phase));
    }
    for (const auto& p : e.poly) {
      double m = p.coeff;
      for (int a = 0; a < g.dim; ++a)
        m *= std::pow(x[static_cast<std::size_t>(a)] / g.lengths[static_cast<std::size_t>(a)], p.powers[static_cast<std::size_t>(a)]);
      v += m;
    }
    return v;
  });
}

GridPtr build_grid(const GridSpec& spec) {
  if (spec.sizes.empty()) throw ConfigError("config.grid: missing");
  if (spec.annulus) return make_annulus(spec.sizes, spec.lengths);
  return make_torus(static_cast<int>(spec.sizes.size()), spec.sizes, spec.lengths);
}

GridSpec resized(const GridSpec& spec, int n) {
  GridSpec out = spec;
  for (std::size_t a = 0; a < out.sizes.size(); ++a) out.sizes[a] = (spec.annulus && a == 0) ? n + 1 : n;
  return out;
}

MetricField build_metric(const MetricSpec& spec, const GridPtr& grid, const std::string& base_dir) {
  switch (spec.kind) {
    case MetricSpec::Kind::flat: return flat_metric(grid);
    case MetricSpec::Kind::csv: {
      try {
        return make_metric(read_matrix_csv(resolve(base_dir, spec.path), grid));
      } catch (const GeometryError& e) {
        throw ConfigError(std::string("config.metric.csv: ") + e.what());
      }
    }
    case MetricSpec::Kind::perturbed: break;
  }
  if (spec.terms.empty()) return perturbed_flat_metric(grid, spec.amplitude, spec.seed.value_or(1));
  const int n = grid->dim;
  MatrixField m(grid);
  for (int i = 0; i < n; ++i) m(i, i) = ScalarField(grid, 1.0);
  for (const auto& t : spec.terms) {
    FieldExpression e;
    e.trig.push_back(t.term);
    const ScalarField p = spec.amplitude / n * evaluate(e, grid);
    m(t.i, t.j) += p;
    if (t.i != t.j) m(t.j, t.i) += p;
  }
  MetricField g;
  try {
    g = make_metric(m);
  } catch (const GeometryError& e) {
    throw ConfigError(std::string("config.metric.terms: ") + e.what());
  }
  if (g.index != 0) throw ConfigError("config.metric.terms: perturbation is not Riemannian");
  return g;
}

TorusDiffeo build_diffeo(const std::vector<TorusMap>& maps, int dim) {
  TorusDiffeo phi(dim);
  try {
    for (const auto& m : maps) {
      switch (m.kind) {
        case TorusMap::Kind::translate: phi.translate(m.shift); break;
        case TorusMap::Kind::shear: phi.shear(m.axis, m.source, m.cos_coeffs, m.sin_coeffs); break;
        case TorusMap::Kind::warp: phi.warp(m.axis, m.rho, m.phase); break;
      }
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config.phi: ") + e.what());
  }
  return phi;
}

// ---------------------------------------------------------------- csv input

namespace {

std::vector<std::vector<double>> read_table(const std::string& path, const GridPtr& grid, std::size_t columns) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open field dump");
  std::string line;
  std::getline(in, line);
  std::vector<std::vector<double>> rows;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> values;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        values.push_back(std::stod(cell, &used));
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw ConfigError(path + ": row " + std::to_string(row + 1) + ": not a number '" + cell + "'");
      }
    }
    if (values.size() != static_cast<std::size_t>(grid->dim) + columns)
      throw ConfigError(path + ": row " + std::to_string(row + 1) + ": expected " +
                        std::to_string(grid->dim + static_cast<int>(columns)) + " columns");
    if (row >= grid->nodes) throw ConfigError(path + ": more rows than grid nodes");
    for (int a = 0; a < grid->dim; ++a)
      if (std::abs(values[static_cast<std::size_t>(a)] - grid->coordinate(row, a)) > 1e-9 * (1 + grid->lengths[static_cast<std::size_t>(a)]))
        throw ConfigError(path + ": row " + std::to_string(row + 1) + ": coordinates do not match the grid");
    rows.emplace_back(values.begin() + grid->dim, values.end());
    ++row;
  }
  if (row != grid->nodes)
    throw ConfigError(path + ": " + std::to_string(row) + " rows for " + std::to_string(grid->nodes) + " grid nodes");
  return rows;
}

}  // namespace

ScalarField read_scalar_csv(const std::string& path, const GridPtr& grid) {
  const auto rows = read_table(path, grid, 1);
  ScalarField f(grid);
  for (std::size_t p = 0; p < rows.size(); ++p) f[p] = rows[p][0];
  return f;
}

MatrixField read_matrix_csv(const std::string& path, const GridPtr& grid) {
  const auto n = static_cast<std::size_t>(grid->dim);
  const auto rows = read_table(path, grid, n * n);
  MatrixField m(grid);
  for (std::size_t k = 0; k < n * n; ++k)
    for (std::size_t p = 0; p < rows.size(); ++p) m.m[k][p] = rows[p][k];
  return m;
}

}  // namespace curvforge
