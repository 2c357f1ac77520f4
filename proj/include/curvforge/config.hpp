#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "curvforge/presets.hpp"
#include "curvforge/solve.hpp"

namespace curvforge {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kMaxPerturbation = 0.3;

// coeff * cos|sin(2 pi sum_a k_a x_a / L_a).
struct TrigTerm {
  double coeff = 0.0;
  bool cosine = true;
  std::vector<int> k;
};

// coeff * prod_a (x_a / L_a)^p_a; only bounded axes may carry a nonzero power.
struct PolyTerm {
  double coeff = 0.0;
  std::vector<int> powers;
};

// constant + sum of trig terms + sum of polynomial terms.
struct FieldExpression {
  double constant = 0.0;
  std::vector<TrigTerm> trig;
  std::vector<PolyTerm> poly;
};

ScalarField evaluate(const FieldExpression& e, const GridPtr& grid);

struct FieldSpec {
  enum class Kind { expression, planted, csv } kind = Kind::expression;
  FieldExpression expr;
  double mid = 1.0, half_width = 0.5;  // planted f, s = S(f)
  std::uint64_t seed = 1;
  std::string path;
};

struct MetricTerm {
  int i = 0, j = 0;
  TrigTerm term;
};

struct MetricSpec {
  enum class Kind { flat, perturbed, csv } kind = Kind::flat;
  double amplitude = 0.0;
  std::optional<std::uint64_t> seed;  // random perturbation when no terms are listed
  std::vector<MetricTerm> terms;      // g = I + amplitude * sum of symmetric terms
  std::string path;
};

struct GridSpec {
  bool annulus = false;
  std::vector<int> sizes;
  std::vector<double> lengths;
};

// V is the preset of rank `q` (role "plane") or its orthogonal complement
// (role "normal").
struct DistributionSpec {
  PresetKind preset = PresetKind::coordinate;
  bool normal = false;
  int q = 1;
};

struct SolverSpec {
  Strategy strategy = Strategy::hybrid;
  double tol = 1e-8;
  int max_iter = 400;
  int continuation_steps = 10;
  double scal_tolerance = 0.0;  // 0 = 1e-2 (1 + max |s|)
};

struct RunConfig {
  std::string command;
  // verify
  std::vector<std::string> suites;
  std::vector<int> sizes{32, 48, 64};
  double amplitude = 0.2;
  std::vector<PresetKind> presets{PresetKind::coordinate, PresetKind::contact3};
  double order_threshold = 3.5;
  // synthesize / surface2d
  GridSpec grid;
  std::vector<int> refine;  // extra resolutions for a refinement study
  double refine_order = 3.0;
  MetricSpec metric;
  DistributionSpec distribution;
  FieldSpec s;
  SolverSpec solver;
  std::vector<TorusMap> phi;
  bool a_priori_probe = false;
  // common
  Scheme scheme = Scheme::fd4;
  std::uint64_t seed = 1;
  std::string out;
  std::string base_dir;  // relative csv paths resolve against this
  nlohmann::json echo;
};

// Throws ConfigError with a path-qualified diagnostic on any schema violation.
RunConfig parse_config(const nlohmann::json& j, const std::string& base_dir = ".");
RunConfig load_config(const std::string& path);

struct Overrides {
  std::optional<int> resolution;
  std::optional<Scheme> scheme;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::vector<std::string> suites;
};
void apply_overrides(RunConfig& cfg, const Overrides& o);

GridPtr build_grid(const GridSpec& spec);
// Resolution-specific copy: every axis of a torus gets n nodes; an annulus gets
// n + 1 nodes on its bounded axis and n on the other.
GridSpec resized(const GridSpec& spec, int n);
MetricField build_metric(const MetricSpec& spec, const GridPtr& grid, const std::string& base_dir);
TorusDiffeo build_diffeo(const std::vector<TorusMap>& maps, int dim);

// Reads a field dump (header axis0..,value or g00..) onto the given grid; the
// coordinates must match the grid nodes.
ScalarField read_scalar_csv(const std::string& path, const GridPtr& grid);
MatrixField read_matrix_csv(const std::string& path, const GridPtr& grid);

}  // namespace curvforge
