#include "curvforge/solve.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "curvforge/linear.hpp"

namespace curvforge {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

ScalarField constant(const GridPtr& g, double c) { return ScalarField(g, c); }

double inf_norm(const ScalarField& f) { return max_abs(f); }

void require_torus(const GridPtr& g) {
  if (!g->fully_periodic()) throw SolverError("the operator solvers need a fully periodic grid");
}

void finish(SolveReport& r) {
  r.f_min = min_value(r.f);
  r.f_max = max_value(r.f);
}

LinearMap field_map(const GridPtr& grid, std::function<ScalarField(const ScalarField&)> op) {
  return [grid, op](const Vec& x) { return op(ScalarField(grid, x)).values(); };
}

}  // namespace

// ---------------------------------------------------------------- brackets

namespace {

// Upsilon at a constant f = c is affine in s: base(c) - c^mu (1 + c^2)^nu s.
struct ConstantScan {
  std::vector<double> c;
  std::vector<ScalarField> base;
};

ConstantScan constant_scan(const UpsilonContext& ctx, const ScanOptions& opt, bool upward) {
  ConstantScan scan;
  const int m = std::max(opt.samples, 2);
  const ScalarField zero(ctx.grid(), 0.0);
  for (int k = 0; k < m; ++k) {
    const double c = std::exp((upward ? 1.0 : -1.0) * std::log(opt.c_limit) * k / (m - 1));
    scan.c.push_back(c);
    scan.base.push_back(upsilon(ctx, zero, constant(ctx.grid(), c)));
  }
  return scan;
}

double scan_value(const UpsilonContext& ctx, const ConstantScan& scan, std::size_t k, const ScalarField& s,
                  bool want_max) {
  const double c = scan.c[k];
  const double w = std::pow(c, ctx.mu()) * std::pow(1.0 + c * c, ctx.nu());
  const ScalarField& b = scan.base[k];
  double out = want_max ? -HUGE_VAL : HUGE_VAL;
  for (std::size_t p = 0; p < b.size(); ++p) {
    const double v = b[p] - w * s[p];
    out = want_max ? std::max(out, v) : std::min(out, v);
  }
  return out;
}

std::optional<double> super_from(const UpsilonContext& ctx, const ConstantScan& scan, const ScalarField& s,
                                 double margin) {
  for (std::size_t k = 0; k < scan.c.size(); ++k)
    if (scan_value(ctx, scan, k, s, true) < -margin) return scan.c[k];
  return std::nullopt;
}

std::optional<double> sub_from(const UpsilonContext& ctx, const ConstantScan& scan, const ScalarField& s,
                               double margin) {
  for (std::size_t k = 0; k < scan.c.size(); ++k)
    if (scan_value(ctx, scan, k, s, false) > margin) return scan.c[k];
  return std::nullopt;
}

}  // namespace

double find_constant_supersolution(const UpsilonContext& ctx, const ScalarField& s, const ScanOptions& opt) {
  const auto c = super_from(ctx, constant_scan(ctx, opt, true), s, opt.margin * (1.0 + max_abs(s)));
  if (!c) throw SolverError("no constant supersolution found: V may be untwisted and s not sufficiently positive");
  return *c;
}

double find_constant_subsolution(const UpsilonContext& ctx, const ScalarField& s, const ScanOptions& opt) {
  const auto c = sub_from(ctx, constant_scan(ctx, opt, false), s, opt.margin * (1.0 + max_abs(s)));
  if (!c) throw SolverError("no constant subsolution found: H may be untwisted and s not sufficiently negative");
  return *c;
}

// ---------------------------------------------------------------- monotone iteration

namespace {

SolveReport monotone_run(const UpsilonContext& ctx, const ScalarField& s, double f_minus, double f_plus,
                         const ScalarField* start, const MonotoneOptions& opt) {
  const GridPtr& grid = ctx.grid();
  require_torus(grid);
  if (!(f_minus > 0.0 && f_minus < f_plus)) throw SolverError("monotone iteration needs 0 < f_minus < f_plus");
  if (!(min_value(upsilon(ctx, s, constant(grid, f_minus))) > 0.0))
    throw SolverError("f_minus is not a subsolution");
  if (!(max_value(upsilon(ctx, s, constant(grid, f_plus))) < 0.0))
    throw SolverError("f_plus is not a supersolution");

  double lambda = opt.lambda_shift;
  if (lambda <= 0.0) {
    double worst = 0.0;
    for (int k = 0; k <= 16; ++k) {
      const double c = f_minus * std::pow(f_plus / f_minus, k / 16.0);
      worst = std::max(worst, max_abs(zeroth_order_coefficient(ctx, s, constant(grid, c))));
    }
    lambda = std::max(10.0 * worst, 1.0);
  }

  PeriodicLaplaceInverse pre(grid, ctx.scheme());
  const LinearMap A = field_map(grid, [&](const ScalarField& v) { return 2.0 * ctx.laplace(v) - lambda * v; });
  const LinearMap M = [&](const Vec& r) { return pre.solve(r, 2.0, lambda); };

  SolveReport rep;
  rep.f = start ? *start : constant(grid, f_plus);
  rep.bracket_low = f_minus;
  rep.bracket_high = f_plus;
  const double lo = f_minus * (1.0 - opt.escape), hi = f_plus * (1.0 + opt.escape);
  for (int it = 0;; ++it) {
    const ScalarField r = upsilon(ctx, s, rep.f);
    rep.residual = inf_norm(r);
    rep.iterations = it;
    rep.trace.push_back({"monotone", it, rep.residual, lambda});
    if (min_value(rep.f) < f_minus || max_value(rep.f) > f_plus) rep.enclosure_held = false;
    if (rep.residual <= opt.tol) {
      rep.converged = true;
      break;
    }
    if (it >= opt.max_iter) {
      rep.message = "monotone iteration reached max_iter";
      break;
    }
    const GmresReport g = gmres(A, (-1.0 * r).values(), M, {}, opt.linear_tol, 40, 400);
    rep.f += ScalarField(grid, g.x);
    if (min_value(rep.f) < lo || max_value(rep.f) > hi) {
      finish(rep);
      throw SolverError("monotone iterate escaped the bracket [" + std::to_string(f_minus) + ", " +
                        std::to_string(f_plus) + "]");
    }
  }
  finish(rep);
  return rep;
}

}  // namespace

SolveReport monotone_solve(const UpsilonContext& ctx, const ScalarField& s, double f_minus, double f_plus,
                           const MonotoneOptions& opt) {
  return monotone_run(ctx, s, f_minus, f_plus, nullptr, opt);
}

// ---------------------------------------------------------------- Newton

SolveReport newton_solve(const UpsilonContext& ctx, const ScalarField& s, const ScalarField& f0,
                         const NewtonOptions& opt) {
  const GridPtr& grid = ctx.grid();
  require_torus(grid);
  if (!(min_value(f0) > 0.0)) throw SolverError("Newton start must be positive");
  PeriodicLaplaceInverse pre(grid, ctx.scheme());
  SolveReport rep;
  rep.f = f0;
  ScalarField r = upsilon(ctx, s, rep.f);
  rep.residual = inf_norm(r);
  rep.trace.push_back({"newton", 0, rep.residual, 0.0});
  for (int it = 1; rep.residual > opt.tol; ++it) {
    if (it > opt.max_iter) {
      rep.message = "Newton reached max_iter";
      break;
    }
    const LinearizedOperator J(ctx, s, rep.f);
    const ScalarField& c0 = J.zeroth();
    double mean = 0.0;
    for (double v : c0.values()) mean += v;
    mean /= static_cast<double>(c0.size());
    const double beta = std::max({-mean, 0.1 * max_abs(c0), 1e-8});
    const LinearMap A = field_map(grid, [&](const ScalarField& v) { return J.apply(v); });
    const LinearMap M = [&](const Vec& x) { return pre.solve(x, 2.0, beta); };
    const GmresReport g = gmres(A, (-1.0 * r).values(), M, {}, opt.linear_tol, opt.linear_restart, opt.linear_max);
    if (!g.converged && g.relative_residual > 0.5) {
      rep.message = "Jacobian solve stagnated";
      break;
    }
    const ScalarField delta(grid, g.x);
    double t = 1.0;
    for (std::size_t p = 0; p < delta.size(); ++p)
      if (rep.f[p] + delta[p] < opt.min_value)
        t = std::min(t, 0.9 * (rep.f[p] - opt.min_value) / -delta[p]);
    bool accepted = false;
    for (int k = 0; k < 30; ++k, t *= 0.5) {
      const ScalarField trial = rep.f + t * delta;
      const ScalarField rt = upsilon(ctx, s, trial);
      const double nt = inf_norm(rt);
      if (nt <= (1.0 - 1e-4 * t) * rep.residual) {
        rep.f = trial;
        r = rt;
        rep.residual = nt;
        accepted = true;
        break;
      }
    }
    rep.iterations = it;
    rep.trace.push_back({"newton", it, rep.residual, accepted ? t : 0.0});
    if (!accepted) {
      rep.message = "Newton line search failed";
      break;
    }
  }
  rep.converged = rep.residual <= opt.tol;
  finish(rep);
  return rep;
}

Strategy parse_strategy(const std::string& name) {
  if (name == "monotone") return Strategy::monotone;
  if (name == "newton") return Strategy::newton;
  if (name == "hybrid") return Strategy::hybrid;
  throw std::invalid_argument("unknown strategy '" + name + "' (monotone, newton, hybrid)");
}

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::monotone: return "monotone";
    case Strategy::newton: return "newton";
    case Strategy::hybrid: return "hybrid";
  }
  return "";
}

// ---------------------------------------------------------------- synthesis

SolveReport synthesize(const UpsilonContext& ctx, const ScalarField& s, const SynthesisOptions& opt) {
  const GridPtr& grid = ctx.grid();
  require_torus(grid);
  double lambda = 1.0;
  double lo = 0.0, hi = 0.0;
  bool found = false;
  std::string last;
  const ConstantScan up = constant_scan(ctx, opt.scan, true);
  const ConstantScan down = constant_scan(ctx, opt.scan, false);
  for (int k = 0; k <= opt.max_rescale_doublings; ++k, lambda *= 2.0) {
    const ScalarField ls = lambda * s;
    const double margin = opt.scan.margin * (1.0 + max_abs(ls));
    const auto h = super_from(ctx, up, ls, margin);
    const auto l = h ? sub_from(ctx, down, ls, margin) : std::nullopt;
    if (!h) {
      last = "no constant supersolution";
    } else if (!l) {
      last = "no constant subsolution";
    } else if (!(*l < *h)) {
      last = "constant bracket is inverted";
    } else {
      hi = *h;
      lo = *l;
      found = true;
      break;
    }
  }
  if (!found) throw TargetRejected("bracket not found: " + last);
  const ScalarField ls = lambda * s;

  SolveReport rep;
  if (opt.strategy == Strategy::newton) {
    rep = newton_solve(ctx, ls, constant(grid, std::sqrt(lo * hi)), opt.newton);
  } else {
    MonotoneOptions mo = opt.monotone;
    if (opt.strategy == Strategy::hybrid) {
      mo.tol = std::max(opt.hybrid_switch, opt.monotone.tol);
      mo.max_iter = std::min(opt.hybrid_monotone_steps, opt.monotone.max_iter);
    }
    rep = monotone_run(ctx, ls, lo, hi, nullptr, mo);
    if (opt.strategy == Strategy::hybrid) {
      SolveReport nr = newton_solve(ctx, ls, rep.f, opt.newton);
      std::vector<TraceEntry> trace = rep.trace;
      trace.insert(trace.end(), nr.trace.begin(), nr.trace.end());
      bool held = rep.enclosure_held;
      if (!nr.converged) {
        SolveReport full = monotone_run(ctx, ls, lo, hi, &rep.f, opt.monotone);
        trace.insert(trace.end(), full.trace.begin(), full.trace.end());
        held = held && full.enclosure_held;
        nr = std::move(full);
      }
      nr.iterations += rep.iterations;
      rep = std::move(nr);
      rep.trace = std::move(trace);
      rep.enclosure_held = held;
    }
  }
  rep.bracket_low = lo;
  rep.bracket_high = hi;
  rep.scale = lambda;
  if (!rep.converged) {
    if (rep.message.empty()) rep.message = "solver did not converge";
    return rep;
  }
  const FrameGeometry& geo = ctx.geometry();
  MetricField h = scaled(change(geo.metric(), rep.f, ctx.table().K(rep.f), geo.v_distribution()), lambda);
  rep.scal_mismatch = max_abs(scal_oracle(h, ctx.scheme()) - s);
  rep.h = std::move(h);
  return rep;
}

// ---------------------------------------------------------------- diffeomorphisms

TorusDiffeo::TorusDiffeo(int dim) : dim_(dim) {
  if (dim < 1) throw std::invalid_argument("diffeomorphism dimension must be positive");
}

TorusDiffeo& TorusDiffeo::translate(std::vector<double> shift) {
  if (static_cast<int>(shift.size()) != dim_) throw std::invalid_argument("translation needs one offset per axis");
  TorusMap m;
  m.kind = TorusMap::Kind::translate;
  m.shift = std::move(shift);
  maps_.push_back(std::move(m));
  return *this;
}

TorusDiffeo& TorusDiffeo::shear(int axis, int source, std::vector<double> cos_coeffs, std::vector<double> sin_coeffs) {
  if (axis < 0 || axis >= dim_ || source < 0 || source >= dim_ || axis == source)
    throw std::invalid_argument("shear needs two distinct axes");
  TorusMap m;
  m.kind = TorusMap::Kind::shear;
  m.axis = axis;
  m.source = source;
  m.cos_coeffs = std::move(cos_coeffs);
  m.sin_coeffs = std::move(sin_coeffs);
  maps_.push_back(std::move(m));
  return *this;
}

TorusDiffeo& TorusDiffeo::warp(int axis, double rho, double phase) {
  if (axis < 0 || axis >= dim_) throw std::invalid_argument("warp axis out of range");
  if (!(1.0 - std::abs(kTwoPi * rho) > 0.05)) throw std::invalid_argument("warp needs 1 - |2 pi rho| > 0.05");
  TorusMap m;
  m.kind = TorusMap::Kind::warp;
  m.axis = axis;
  m.rho = rho;
  m.phase = phase;
  maps_.push_back(std::move(m));
  return *this;
}

void TorusDiffeo::evaluate(std::vector<double>& x, std::vector<double>& jac) const {
  const int n = dim_;
  jac.assign(static_cast<std::size_t>(n * n), 0.0);
  for (int i = 0; i < n; ++i) jac[static_cast<std::size_t>(i * n + i)] = 1.0;
  for (const TorusMap& m : maps_) {
    switch (m.kind) {
      case TorusMap::Kind::translate:
        for (int a = 0; a < n; ++a) x[a] += m.shift[a];
        break;
      case TorusMap::Kind::shear: {
        const double t = x[m.source];
        double psi = 0.0, dpsi = 0.0;
        for (std::size_t k = 0; k < m.cos_coeffs.size(); ++k) {
          const double w = kTwoPi * static_cast<double>(k + 1);
          psi += m.cos_coeffs[k] * std::cos(w * t);
          dpsi -= w * m.cos_coeffs[k] * std::sin(w * t);
        }
        for (std::size_t k = 0; k < m.sin_coeffs.size(); ++k) {
          const double w = kTwoPi * static_cast<double>(k + 1);
          psi += m.sin_coeffs[k] * std::sin(w * t);
          dpsi += w * m.sin_coeffs[k] * std::cos(w * t);
        }
        x[m.axis] += psi;
        // row axis += dpsi * row source
        for (int i = 0; i < n; ++i)
          jac[static_cast<std::size_t>(m.axis * n + i)] += dpsi * jac[static_cast<std::size_t>(m.source * n + i)];
        break;
      }
      case TorusMap::Kind::warp: {
        const double arg = kTwoPi * x[m.axis] + m.phase;
        const double d = 1.0 + kTwoPi * m.rho * std::cos(arg);
        x[m.axis] += m.rho * std::sin(arg);
        for (int i = 0; i < n; ++i) jac[static_cast<std::size_t>(m.axis * n + i)] *= d;
        break;
      }
    }
  }
}

namespace {

// Weights of the trigonometric interpolant through N equispaced samples on a
// circle of length L, evaluated at y.
void interpolation_weights(int N, double L, double y, std::vector<double>& w) {
  w.resize(static_cast<std::size_t>(N));
  const double h = L / N;
  for (int j = 0; j < N; ++j) {
    const double t = (y - j * h) / L;  // in periods
    const double st = std::sin(std::numbers::pi * t);
    if (std::abs(st) < 1e-14) {
      w[j] = 1.0;
      continue;
    }
    const double num = std::sin(std::numbers::pi * N * t);
    w[j] = N % 2 == 0 ? num * std::cos(std::numbers::pi * t) / (N * st) : num / (N * st);
  }
}

std::vector<ScalarField> interpolate_many(const std::vector<const ScalarField*>& fields, const TorusDiffeo& phi,
                                          std::vector<std::vector<double>>* jacobians) {
  const GridPtr& grid = fields.front()->grid();
  const Grid& g = *grid;
  if (!g.fully_periodic()) throw SolverError("pullback needs a fully periodic grid");
  if (phi.dim() != g.dim) throw std::invalid_argument("diffeomorphism dimension does not match the grid");
  const int n = g.dim;
  std::vector<ScalarField> out(fields.size(), ScalarField(grid, 0.0));
  if (jacobians) jacobians->assign(g.nodes, {});
  std::vector<double> x(static_cast<std::size_t>(n)), jac;
  std::vector<std::vector<double>> w(static_cast<std::size_t>(n));
  std::vector<int> idx(static_cast<std::size_t>(n));
  for (std::size_t p = 0; p < g.nodes; ++p) {
    g.coordinates(p, x);
    phi.evaluate(x, jac);
    if (jacobians) (*jacobians)[p] = jac;
    for (int a = 0; a < n; ++a) interpolation_weights(g.sizes[a], g.lengths[a], x[a], w[a]);
    std::vector<double> acc(fields.size(), 0.0);
    std::fill(idx.begin(), idx.end(), 0);
    for (std::size_t q = 0; q < g.nodes; ++q) {
      double weight = 1.0;
      for (int a = 0; a < n; ++a) weight *= w[a][idx[a]];
      for (std::size_t k = 0; k < fields.size(); ++k) acc[k] += weight * (*fields[k])[q];
      for (int a = n - 1; a >= 0; --a) {
        if (++idx[a] < g.sizes[a]) break;
        idx[a] = 0;
      }
    }
    for (std::size_t k = 0; k < fields.size(); ++k) out[k][p] = acc[k];
  }
  return out;
}

}  // namespace

ScalarField pullback(const ScalarField& s, const TorusDiffeo& phi) {
  if (phi.identity()) return s;
  return interpolate_many({&s}, phi, nullptr).front();
}

MetricField pullback(const MetricField& g, const TorusDiffeo& phi) {
  if (phi.identity()) return g;
  const int n = g.dim();
  std::vector<const ScalarField*> entries;
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) entries.push_back(&g(a, b));
  std::vector<std::vector<double>> jac;
  const std::vector<ScalarField> moved = interpolate_many(entries, phi, &jac);
  const auto entry = [&](int a, int b) -> const ScalarField& {
    if (a > b) std::swap(a, b);
    return moved[static_cast<std::size_t>(a * n - a * (a - 1) / 2 + (b - a))];
  };
  MatrixField m(g.grid());
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      ScalarField v(g.grid(), 0.0);
      for (std::size_t p = 0; p < v.size(); ++p) {
        double s = 0.0;
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b)
            s += jac[p][static_cast<std::size_t>(a * n + i)] * jac[p][static_cast<std::size_t>(b * n + j)] *
                 entry(a, b)[p];
        v[p] = s;
      }
      m(i, j) = v;
      m(j, i) = v;
    }
  return make_metric(std::move(m));
}

}  // namespace curvforge
