#pragma once

#include <optional>
#include <string>
#include <vector>

#include "curvforge/presets.hpp"
#include "curvforge/upsilon.hpp"

namespace curvforge {

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The prescribed curvature admits no solution on this route (no bracket, or a
// topological obstruction); distinct from a solver failing to converge.
class TargetRejected : public SolverError {
 public:
  using SolverError::SolverError;
};

struct TraceEntry {
  std::string stage;
  int iteration = 0;
  double residual = 0.0;
  double extra = 0.0;  // step length, continuation parameter or energy
};

struct SolveReport {
  bool converged = false;
  int iterations = 0;
  double residual = 0.0;  // infinity norm of the final residual
  ScalarField f;          // solution (f for the operator, u for the surface problems)
  double f_min = 0.0, f_max = 0.0;
  std::vector<TraceEntry> trace;
  std::string message;

  // Synthesis and surface extras.
  std::optional<MetricField> h;
  double scal_mismatch = 0.0;
  double gauss_bonnet = 0.0;
  double scale = 1.0;  // h is the solved metric multiplied by this factor
  double bracket_low = 0.0, bracket_high = 0.0;
  bool enclosure_held = true;
};

// ---------------------------------------------------------------- brackets

struct ScanOptions {
  double c_limit = 1e4;  // c_max for the supersolution scan, c_min = 1 / c_limit for the subsolution scan
  int samples = 200;
  double margin = 1e-8;  // relative to 1 + max |s|
};

// Smallest c on a log grid in [1, c_limit] (1 first) with max Upsilon(c) < -margin.
double find_constant_supersolution(const UpsilonContext& ctx, const ScalarField& s, const ScanOptions& opt = {});
// Largest c on a log grid in [1 / c_limit, 1] (1 first) with min Upsilon(c) > margin.
double find_constant_subsolution(const UpsilonContext& ctx, const ScalarField& s, const ScanOptions& opt = {});

// ---------------------------------------------------------------- solvers

struct MonotoneOptions {
  double lambda_shift = 0.0;  // 0 = 10 x max |d a / d f| sampled over the bracket slab
  double tol = 1e-8;
  int max_iter = 400;
  double escape = 0.05;  // allowed relative overshoot of the bracket
  double linear_tol = 1e-10;
};

SolveReport monotone_solve(const UpsilonContext& ctx, const ScalarField& s, double f_minus, double f_plus,
                           const MonotoneOptions& opt = {});

struct NewtonOptions {
  double tol = 1e-8;
  int max_iter = 40;
  double min_value = 1e-6;
  double linear_tol = 1e-6;
  int linear_restart = 60;
  int linear_max = 600;
};

SolveReport newton_solve(const UpsilonContext& ctx, const ScalarField& s, const ScalarField& f0,
                         const NewtonOptions& opt = {});

enum class Strategy { monotone, newton, hybrid };
Strategy parse_strategy(const std::string& name);
std::string to_string(Strategy s);

struct SynthesisOptions {
  Strategy strategy = Strategy::hybrid;
  ScanOptions scan;
  MonotoneOptions monotone;
  NewtonOptions newton;
  double hybrid_switch = 1e-3;  // monotone residual below which Newton takes over
  int hybrid_monotone_steps = 25;  // or after this many monotone steps
  int max_rescale_doublings = 24;
};

// Finds f with Upsilon(f) = 0 for lambda * s (lambda = 2^k >= 1 chosen as the
// first value for which both constant scans succeed) and returns
// h = lambda * change(g, f, K(f), V), which has scalar curvature s.
SolveReport synthesize(const UpsilonContext& ctx, const ScalarField& s, const SynthesisOptions& opt = {});

// ---------------------------------------------------------------- diffeomorphisms

struct TorusMap {
  enum class Kind { translate, shear, warp } kind = Kind::translate;
  std::vector<double> shift;   // translate: per-axis offsets
  int axis = 0, source = 1;    // shear: x_axis += psi(x_source); warp: x_axis += rho sin(2 pi x_axis + phase)
  std::vector<double> cos_coeffs, sin_coeffs;  // psi(t) = sum_k c_k cos(2 pi k t) + s_k sin(2 pi k t), k >= 1
  double rho = 0.0, phase = 0.0;
};

// Composition p_last o ... o p_first of primitive degree-one torus maps.
class TorusDiffeo {
 public:
  explicit TorusDiffeo(int dim);
  TorusDiffeo& translate(std::vector<double> shift);
  TorusDiffeo& shear(int axis, int source, std::vector<double> cos_coeffs, std::vector<double> sin_coeffs);
  TorusDiffeo& warp(int axis, double rho, double phase);
  int dim() const { return dim_; }
  bool identity() const { return maps_.empty(); }
  const std::vector<TorusMap>& maps() const { return maps_; }

  // phi(x) (not reduced mod 1) and its Jacobian d phi^a / d x^i, row-major [a * n + i].
  void evaluate(std::vector<double>& x, std::vector<double>& jac) const;

 private:
  int dim_;
  std::vector<TorusMap> maps_;
};

// s o phi by trigonometric interpolation.
ScalarField pullback(const ScalarField& s, const TorusDiffeo& phi);
// (phi^* g)_ij = d_i phi^a d_j phi^b g_ab o phi.
MetricField pullback(const MetricField& g, const TorusDiffeo& phi);

}  // namespace curvforge
