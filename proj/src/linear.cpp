#include "curvforge/linear.hpp"

#include <cmath>

namespace curvforge {

namespace {

double norm(const Vec& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void axpy(double a, const Vec& x, Vec& y) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

Vec residual(const LinearMap& A, const Vec& b, const Vec& x) {
  Vec r = A(x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
  return r;
}

}  // namespace

GmresReport gmres(const LinearMap& A, const Vec& b, const LinearMap& M, const Vec& x0, double tol, int restart,
                  int max_iterations) {
  GmresReport rep;
  rep.x = x0.empty() ? Vec(b.size(), 0.0) : x0;
  const double bnorm = norm(b);
  if (bnorm == 0.0) {
    rep.x.assign(b.size(), 0.0);
    rep.converged = true;
    return rep;
  }
  const auto precond = [&](const Vec& v) { return M ? M(v) : v; };
  Vec r = residual(A, b, rep.x);
  double beta = norm(r);
  rep.relative_residual = beta / bnorm;
  while (rep.iterations < max_iterations && rep.relative_residual > tol) {
    const int m = restart;
    std::vector<Vec> V(1, r);
    for (double& v : V[0]) v /= beta;
    std::vector<Vec> Z;
    std::vector<std::vector<double>> H(static_cast<std::size_t>(m + 1), std::vector<double>(m, 0.0));
    std::vector<double> cs(m, 0.0), sn(m, 0.0), g(static_cast<std::size_t>(m + 1), 0.0);
    g[0] = beta;
    int k = 0;
    for (; k < m && rep.iterations < max_iterations; ++k) {
      ++rep.iterations;
      Z.push_back(precond(V[k]));
      Vec w = A(Z[k]);
      for (int i = 0; i <= k; ++i) {  // modified Gram-Schmidt, two passes
        const double h = dot(w, V[i]);
        H[i][k] = h;
        axpy(-h, V[i], w);
      }
      for (int i = 0; i <= k; ++i) {
        const double h = dot(w, V[i]);
        H[i][k] += h;
        axpy(-h, V[i], w);
      }
      const double hn = norm(w);
      H[k + 1][k] = hn;
      for (int i = 0; i < k; ++i) {
        const double t = cs[i] * H[i][k] + sn[i] * H[i + 1][k];
        H[i + 1][k] = -sn[i] * H[i][k] + cs[i] * H[i + 1][k];
        H[i][k] = t;
      }
      const double den = std::hypot(H[k][k], H[k + 1][k]);
      cs[k] = den == 0.0 ? 1.0 : H[k][k] / den;
      sn[k] = den == 0.0 ? 0.0 : H[k + 1][k] / den;
      H[k][k] = den;
      H[k + 1][k] = 0.0;
      g[k + 1] = -sn[k] * g[k];
      g[k] = cs[k] * g[k];
      rep.relative_residual = std::abs(g[k + 1]) / bnorm;
      if (rep.relative_residual <= tol || hn == 0.0) {
        ++k;
        break;
      }
      for (double& v : w) v /= hn;
      V.push_back(std::move(w));
    }
    std::vector<double> y(static_cast<std::size_t>(k), 0.0);
    for (int i = k - 1; i >= 0; --i) {
      double s = g[i];
      for (int j = i + 1; j < k; ++j) s -= H[i][j] * y[j];
      y[i] = H[i][i] == 0.0 ? 0.0 : s / H[i][i];
    }
    for (int i = 0; i < k; ++i) axpy(y[i], Z[i], rep.x);
    r = residual(A, b, rep.x);
    beta = norm(r);
    rep.relative_residual = beta / bnorm;
    if (beta == 0.0) break;
  }
  rep.converged = rep.relative_residual <= tol;
  return rep;
}

SparseMatrix derivative_matrix(const GridPtr& grid, int axis) {
  const Grid& g = *grid;
  const int n = g.sizes[axis];
  // The stencil acts identically on every grid line, so probe it on one line.
  auto line = make_grid({n}, {g.lengths[axis]}, {static_cast<bool>(g.periodic[axis])});
  std::vector<std::vector<std::pair<int, double>>> rows(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    ScalarField e(line, 0.0);
    e[static_cast<std::size_t>(j)] = 1.0;
    const ScalarField d = partial(e, 0, Scheme::fd4);
    for (int i = 0; i < n; ++i)
      if (d[static_cast<std::size_t>(i)] != 0.0) rows[i].push_back({j, d[static_cast<std::size_t>(i)]});
  }
  std::vector<Eigen::Triplet<double>> trip;
  const std::size_t stride = g.strides[axis];
  for (std::size_t p = 0; p < g.nodes; ++p) {
    const int i = g.index_along(p, axis);
    const std::size_t base = p - static_cast<std::size_t>(i) * stride;
    for (const auto& [j, w] : rows[i])
      trip.emplace_back(static_cast<int>(p), static_cast<int>(base + static_cast<std::size_t>(j) * stride), w);
  }
  SparseMatrix D(static_cast<Eigen::Index>(g.nodes), static_cast<Eigen::Index>(g.nodes));
  D.setFromTriplets(trip.begin(), trip.end());
  return D;
}

SparseMatrix laplace_matrix(const GridPtr& grid) {
  SparseMatrix L(static_cast<Eigen::Index>(grid->nodes), static_cast<Eigen::Index>(grid->nodes));
  for (int a = 0; a < grid->dim; ++a) {
    const SparseMatrix D = derivative_matrix(grid, a);
    L += SparseMatrix(D * D);
  }
  return L;
}

}  // namespace curvforge
