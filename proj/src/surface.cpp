#include "curvforge/surface.hpp"

#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "curvforge/deform.hpp"
#include "curvforge/linear.hpp"

namespace curvforge {

namespace {

constexpr double kPi = std::numbers::pi;

ScalarField flat_laplace(const ScalarField& u, Scheme scheme) {
  ScalarField out(u.grid(), 0.0);
  for (int a = 0; a < u.grid()->dim; ++a) out += partial(partial(u, a, scheme), a, scheme);
  return out;
}

void require_range(const ScalarField& u, double guard) {
  if (!(min_value(u) > guard && max_value(u) < kPi - guard)) throw SolverError("u left the admissible range (0, pi)");
}

double quadrature(const ScalarField& f) {
  const std::vector<double> w = quadrature_weights(*f.grid());
  double s = 0.0;
  for (std::size_t p = 0; p < f.size(); ++p) s += w[p] * f[p];
  return s;
}

}  // namespace

MetricField lorentz_closed_form(const ScalarField& u) {
  if (u.grid()->dim != 2) throw std::invalid_argument("Lorentz surface metrics live on 2D grids");
  require_range(u, 0.0);
  MatrixField m(u.grid());
  m(0, 0) = -1.0 * map(u, [](double x) { return std::pow(std::cos(0.5 * x), 2); });
  m(1, 1) = map(u, [](double x) { return std::pow(std::sin(0.5 * x), 2); });
  m(0, 1) = ScalarField(u.grid(), 0.0);
  m(1, 0) = m(0, 1);
  return make_metric(std::move(m));
}

MetricField lorentz_from_u(const ScalarField& u) {
  const MetricField closed = lorentz_closed_form(u);
  const GridPtr& grid = u.grid();
  const ScalarField f = map(u, [](double x) { return std::tan(0.5 * x); });
  const CoefficientTable table(2, 1);
  const MetricField h = change(flat_metric(grid), f, table.K(f), coordinate_distribution(grid, 1));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const ScalarField d = h(i, j) - closed(i, j);
      for (std::size_t p = 0; p < d.size(); ++p)
        if (std::abs(d[p]) > 1e-12 * (1.0 + std::abs(closed(i, j)[p])))
          throw SolverError("change route and closed form disagree");
    }
  return h;
}

double gauss_bonnet_residual(const MetricField& h, Scheme scheme) {
  if (h.dim() != 2 || !h.grid()->fully_periodic()) throw std::invalid_argument("Gauss-Bonnet check needs a 2-torus");
  if (h.index != 1) throw std::invalid_argument("Gauss-Bonnet check needs a Lorentz metric");
  return std::abs(quadrature(scal_oracle(h, scheme) * metric_density(h)));
}

// ---------------------------------------------------------------- closed torus

namespace {

struct NewtonOutcome {
  bool converged = false;
  int iterations = 0;
  double residual = 0.0;
};

// Damped Newton for Delta u - (s/2) sin u = 0 keeping u inside the guard.
NewtonOutcome sine_newton(ScalarField& u, const ScalarField& s, const PeriodicLaplaceInverse& pre, Scheme scheme,
                          const ClosedSurfaceOptions& opt) {
  const GridPtr& grid = u.grid();
  const auto residual = [&](const ScalarField& v) {
    return flat_laplace(v, scheme) - 0.5 * s * map(v, [](double x) { return std::sin(x); });
  };
  NewtonOutcome out;
  ScalarField r = residual(u);
  out.residual = max_abs(r);
  for (int it = 1; it <= opt.max_newton && out.residual > opt.tol; ++it) {
    const ScalarField c0 = -0.5 * s * map(u, [](double x) { return std::cos(x); });
    double mean = 0.0;
    for (double v : c0.values()) mean += v;
    mean /= static_cast<double>(c0.size());
    const double beta = std::max({-mean, 0.1 * max_abs(c0), 1e-8});
    const LinearMap A = [&](const Vec& x) {
      const ScalarField v(grid, x);
      return (flat_laplace(v, scheme) + c0 * v).values();
    };
    const LinearMap M = [&](const Vec& x) { return pre.solve(x, 1.0, beta); };
    const GmresReport g = gmres(A, (-1.0 * r).values(), M, {}, 1e-13, 80, 800);
    const ScalarField delta(grid, g.x);
    double t = 1.0;
    bool accepted = false;
    for (int k = 0; k < 20; ++k, t *= 0.5) {
      const ScalarField trial = u + t * delta;
      if (!(min_value(trial) > opt.range_guard && max_value(trial) < kPi - opt.range_guard)) continue;
      const ScalarField rt = residual(trial);
      const double nt = max_abs(rt);
      if (nt <= (1.0 - 1e-4 * t) * out.residual || nt <= opt.tol) {
        u = trial;
        r = rt;
        out.residual = nt;
        accepted = true;
        break;
      }
    }
    out.iterations = it;
    if (!accepted) break;
  }
  out.converged = out.residual <= opt.tol;
  return out;
}

}  // namespace

SolveReport solve_sine_closed(const ScalarField& s_in, const TorusDiffeo& phi, const ClosedSurfaceOptions& opt) {
  const GridPtr& grid = s_in.grid();
  if (grid->dim != 2 || !grid->fully_periodic()) throw std::invalid_argument("closed surface solver needs a 2-torus");
  const double scale = max_abs(s_in);
  const double smin = min_value(s_in), smax = max_value(s_in);
  SolveReport rep;
  if (scale == 0.0) {
    rep.f = ScalarField(grid, 0.5 * kPi);
    rep.converged = true;
    rep.scale = 1.0;
    rep.h = lorentz_from_u(rep.f);
    rep.scal_mismatch = max_abs(scal_oracle(*rep.h, opt.scheme));
    rep.gauss_bonnet = gauss_bonnet_residual(*rep.h, opt.scheme);
    rep.f_min = rep.f_max = 0.5 * kPi;
    return rep;
  }
  if (!(smin < 0.0 && smax > 0.0))
    throw TargetRejected(
        "inadmissible s: a closed Lorentz surface has total scalar curvature zero, so s must vanish or change sign");

  const ScalarField target = pullback(s_in, phi);
  const ScalarField x = coordinate_field(grid, 0);
  const double L = grid->lengths[0];
  ScalarField u = map(x, [L](double t) { return 0.5 * kPi + std::sin(2.0 * kPi * t / L); });
  const ScalarField s0 = 2.0 * flat_laplace(u, opt.scheme) / map(u, [](double t) { return std::sin(t); });
  const double c = std::max(min_value(s0) / min_value(target), max_value(s0) / max_value(target));
  const ScalarField cs = c * target;
  PeriodicLaplaceInverse pre(grid, opt.scheme);

  double t = 0.0, dt = opt.dt0;
  if (max_abs(cs - s0) <= opt.tol * (1.0 + max_abs(s0))) dt = 1.0;
  int step = 0;
  int total = 0;
  while (t < 1.0) {
    const double t_next = std::min(1.0, t + dt);
    const ScalarField st = (1.0 - t_next) * s0 + t_next * cs;
    ScalarField trial = u;
    const NewtonOutcome o = sine_newton(trial, st, pre, opt.scheme, opt);
    total += o.iterations;
    rep.trace.push_back({"continuation", step++, o.residual, t_next});
    if (o.converged) {
      u = trial;
      t = t_next;
      dt = std::min(2.0 * dt, 1.0);
    } else {
      dt *= 0.5;
      if (dt < opt.dt_min) {
        rep.f = u;
        rep.iterations = total;
        rep.residual = o.residual;
        rep.message = "continuation stalled at t = " + std::to_string(t);
        rep.f_min = min_value(u);
        rep.f_max = max_value(u);
        return rep;
      }
    }
  }
  rep.f = u;
  rep.iterations = total;
  rep.residual = max_abs(flat_laplace(u, opt.scheme) - 0.5 * cs * map(u, [](double v) { return std::sin(v); }));
  rep.converged = rep.residual <= opt.tol;
  rep.f_min = min_value(u);
  rep.f_max = max_value(u);
  rep.scale = c;
  const MetricField h = scaled(lorentz_from_u(u), c);
  rep.scal_mismatch = max_abs(scal_oracle(h, opt.scheme) - target);
  rep.gauss_bonnet = gauss_bonnet_residual(h, opt.scheme);
  rep.h = h;
  return rep;
}

SolveReport solve_sine_closed(const ScalarField& s, const ClosedSurfaceOptions& opt) {
  return solve_sine_closed(s, TorusDiffeo(s.grid()->dim), opt);
}

// ---------------------------------------------------------------- annulus

namespace {

struct AnnulusOps {
  GridPtr grid;
  std::vector<SparseMatrix> D;
  SparseMatrix L;
  Eigen::VectorXd w;
  std::vector<int> interior;  // node ids
  std::vector<int> slot;      // node -> interior slot or -1
  SparseMatrix A_II;          // sum_a (D_a^T W D_a) restricted to the interior
  SparseMatrix L_II;

  explicit AnnulusOps(const GridPtr& g) : grid(g) {
    const int n = g->dim;
    const int bounded = g->bounded_axis();
    const std::vector<double> q = quadrature_weights(*g);
    w = Eigen::Map<const Eigen::VectorXd>(q.data(), static_cast<Eigen::Index>(q.size()));
    SparseMatrix A(static_cast<Eigen::Index>(g->nodes), static_cast<Eigen::Index>(g->nodes));
    for (int a = 0; a < n; ++a) {
      D.push_back(derivative_matrix(g, a));
      A += SparseMatrix(D.back().transpose() * w.asDiagonal() * D.back());
    }
    L = laplace_matrix(g);
    slot.assign(g->nodes, -1);
    for (std::size_t p = 0; p < g->nodes; ++p) {
      const int i = g->index_along(p, bounded);
      if (i > 0 && i < g->sizes[bounded] - 1) {
        slot[p] = static_cast<int>(interior.size());
        interior.push_back(static_cast<int>(p));
      }
    }
    A_II = restrict(A);
    L_II = restrict(L);
  }

  SparseMatrix restrict(const SparseMatrix& M) const {
    std::vector<Eigen::Triplet<double>> t;
    for (int k = 0; k < M.outerSize(); ++k)
      for (SparseMatrix::InnerIterator it(M, k); it; ++it) {
        const int r = slot[static_cast<std::size_t>(it.row())], c = slot[static_cast<std::size_t>(it.col())];
        if (r >= 0 && c >= 0) t.emplace_back(r, c, it.value());
      }
    const auto m = static_cast<Eigen::Index>(interior.size());
    SparseMatrix out(m, m);
    out.setFromTriplets(t.begin(), t.end());
    return out;
  }

  Eigen::VectorXd expand(const Eigen::VectorXd& vi) const {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(grid->nodes));
    for (std::size_t k = 0; k < interior.size(); ++k) v[interior[k]] = vi[static_cast<Eigen::Index>(k)];
    return v;
  }

  Eigen::VectorXd shrink(const Eigen::VectorXd& v) const {
    Eigen::VectorXd vi(static_cast<Eigen::Index>(interior.size()));
    for (std::size_t k = 0; k < interior.size(); ++k) vi[static_cast<Eigen::Index>(k)] = v[interior[k]];
    return vi;
  }

  double energy(const Eigen::VectorXd& v, const Eigen::VectorXd& s) const {
    double e = 0.0;
    for (const SparseMatrix& d : D) {
      const Eigen::VectorXd dv = d * v;
      e += dv.cwiseProduct(dv).dot(w);
    }
    return e + w.dot(s.cwiseProduct(v.array().sin().matrix()));
  }

  Eigen::VectorXd gradient(const Eigen::VectorXd& vi, const Eigen::VectorXd& s) const {
    const Eigen::VectorXd v = expand(vi);
    Eigen::VectorXd g = Eigen::VectorXd::Zero(v.size());
    for (const SparseMatrix& d : D) g += 2.0 * (d.transpose() * (w.asDiagonal() * (d * v)));
    g += w.cwiseProduct(s.cwiseProduct(v.array().cos().matrix()));
    return shrink(g);
  }

  Eigen::VectorXd strong_residual(const Eigen::VectorXd& vi, const Eigen::VectorXd& s) const {
    const Eigen::VectorXd v = expand(vi);
    const Eigen::VectorXd r = 2.0 * (L * v) - s.cwiseProduct(v.array().cos().matrix());
    return shrink(r);
  }
};

}  // namespace

double sine_energy(const ScalarField& v, const ScalarField& s) {
  const AnnulusOps ops(v.grid());
  const auto vv = Eigen::Map<const Eigen::VectorXd>(v.values().data(), static_cast<Eigen::Index>(v.size()));
  const auto ss = Eigen::Map<const Eigen::VectorXd>(s.values().data(), static_cast<Eigen::Index>(s.size()));
  return ops.energy(vv, ss);
}

SolveReport solve_sine_boundary(const ScalarField& s, const BoundarySurfaceOptions& opt) {
  const GridPtr& grid = s.grid();
  if (grid->dim != 2 || grid->bounded_axis() < 0) throw std::invalid_argument("boundary surface solver needs an annulus");
  const AnnulusOps ops(grid);
  const auto s_full = Eigen::Map<const Eigen::VectorXd>(s.values().data(), static_cast<Eigen::Index>(s.size()));
  Eigen::SimplicialLDLT<SparseMatrix> sobolev(ops.A_II);
  if (sobolev.info() != Eigen::Success) throw SolverError("annulus energy matrix is singular");
  const auto m = static_cast<Eigen::Index>(ops.interior.size());
  const double limit = 0.5 * kPi - kRangeGuard;

  SolveReport rep;
  std::vector<double> energies;
  for (double c = opt.c_start; c >= opt.c_floor; c *= 0.5) {
    const Eigen::VectorXd cs = c * s_full;
    Eigen::VectorXd v = Eigen::VectorXd::Zero(m);
    double e = ops.energy(ops.expand(v), cs);
    Eigen::VectorXd g = ops.gradient(v, cs);
    Eigen::VectorXd pg = sobolev.solve(g);
    const double g0 = std::sqrt(std::max(g.dot(pg), 0.0)) + 1e-300;
    double alpha = 0.5;
    rep.trace.push_back({"descent", 0, e, c});
    int it = 0;
    for (; it < opt.max_descent; ++it) {
      const double gnorm = std::sqrt(std::max(g.dot(pg), 0.0));
      if (gnorm <= opt.descent_tol * g0 || gnorm < 1e-14) break;
      double step = alpha;
      bool accepted = false;
      Eigen::VectorXd v_new;
      double e_new = e;
      for (int k = 0; k < 40; ++k, step *= 0.5) {
        v_new = v - step * pg;
        e_new = ops.energy(ops.expand(v_new), cs);
        if (e_new <= e - 1e-4 * step * g.dot(pg)) {
          accepted = true;
          break;
        }
      }
      if (!accepted) break;
      const Eigen::VectorXd g_new = ops.gradient(v_new, cs);
      const Eigen::VectorXd pg_new = sobolev.solve(g_new);
      const Eigen::VectorXd dv = v_new - v, dg = g_new - g;
      const double curv = dv.dot(dg);
      alpha = curv > 0.0 ? std::clamp(dv.dot(ops.A_II * dv) / curv, 1e-3, 1e3) : 1.0;
      v = v_new;
      e = e_new;
      g = g_new;
      pg = pg_new;
      rep.trace.push_back({"descent", it + 1, e, c});
    }
    // Newton polish on 2 L v - c s cos v = 0.
    Eigen::VectorXd r = ops.strong_residual(v, cs);
    double res = r.lpNorm<Eigen::Infinity>();
    int newton = 0;
    const Eigen::VectorXd cs_i = ops.shrink(cs);
    for (; newton < opt.max_newton && res > opt.tol; ++newton) {
      SparseMatrix J = 2.0 * ops.L_II;
      const Eigen::VectorXd diag = cs_i.cwiseProduct(v.array().sin().matrix());
      for (Eigen::Index k = 0; k < m; ++k) J.coeffRef(k, k) += diag[k];
      Eigen::SparseLU<SparseMatrix> lu;
      lu.compute(J);
      if (lu.info() != Eigen::Success) break;
      const Eigen::VectorXd delta = lu.solve(-r);
      double t = 1.0;
      bool accepted = false;
      for (int k = 0; k < 20; ++k, t *= 0.5) {
        const Eigen::VectorXd trial = v + t * delta;
        const Eigen::VectorXd rt = ops.strong_residual(trial, cs);
        const double nt = rt.lpNorm<Eigen::Infinity>();
        if (nt <= (1.0 - 1e-4 * t) * res || nt <= opt.tol) {
          v = trial;
          r = rt;
          res = nt;
          accepted = true;
          break;
        }
      }
      rep.trace.push_back({"newton", newton + 1, res, c});
      if (!accepted) break;
    }
    const double vmax = v.lpNorm<Eigen::Infinity>();
    if (res > opt.tol || vmax >= limit) {
      rep.trace.push_back({"shrink", 0, vmax, c});
      continue;
    }
    const Eigen::VectorXd full = ops.expand(v);
    ScalarField u(grid, std::vector<double>(full.data(), full.data() + full.size()));
    u += 0.5 * kPi;
    rep.f = u;
    rep.converged = true;
    rep.iterations = it + newton;
    rep.residual = res;
    rep.scale = c;
    rep.f_min = min_value(u);
    rep.f_max = max_value(u);
    const MetricField h = scaled(lorentz_from_u(u), c);
    rep.h = h;
    return rep;
  }
  throw SolverError("a-priori shrink failed: c fell below " + std::to_string(opt.c_floor) + " on a " +
                    std::to_string(grid->sizes[0]) + "x" + std::to_string(grid->sizes[1]) + " annulus with max|s| = " +
                    std::to_string(max_abs(s)));
}

double interior_scal_mismatch(const MetricField& h, const ScalarField& s, Scheme scheme) {
  const GridPtr& grid = s.grid();
  const int axis = grid->bounded_axis();
  if (axis < 0) throw std::invalid_argument("interior mismatch needs a bounded axis");
  const int last = grid->sizes[axis] - 1;
  const ScalarField scal = scal_oracle(h, scheme);
  double worst = 0.0;
  for (std::size_t p = 0; p < grid->nodes; ++p) {
    const int i = grid->index_along(p, axis);
    if (4 * i >= last && 4 * i <= 3 * last) worst = std::max(worst, std::abs(scal[p] - s[p]));
  }
  return worst;
}

double a_priori_slope(const SolveReport& rep, const ScalarField& s) {
  const ScalarField cs = rep.scale * s;
  const double l2 = std::sqrt(integrate(cs * cs, ScalarField(s.grid(), 1.0)));
  return max_abs(rep.f - 0.5 * kPi) / l2;
}

}  // namespace curvforge
