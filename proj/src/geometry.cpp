#include "curvforge/geometry.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

namespace curvforge {

namespace {

using NodeMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 8, 8>;

NodeMatrix node_matrix(const MatrixField& g, std::size_t node) {
  NodeMatrix a(g.n, g.n);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) a(i, j) = g(i, j)[node];
  return a;
}

ScalarField zero(const GridPtr& grid) { return ScalarField(grid, 0.0); }

// v^a e_i^b-style contraction helper: sum_a x[a] * y[a] node-wise.
ScalarField dot(const std::vector<ScalarField>& x, const std::vector<ScalarField>& y) {
  ScalarField out(x.front().grid());
  for (std::size_t a = 0; a < x.size(); ++a)
    for (std::size_t p = 0; p < out.size(); ++p) out[p] += x[a][p] * y[a][p];
  return out;
}

struct FrameData {
  std::vector<std::vector<ScalarField>> omega;
  std::vector<std::vector<ScalarField>> grad;
};

FrameData frame_data(const MetricField& g, const AdaptedFrame& frame, Scheme scheme) {
  const int n = g.dim();
  FrameData d;
  d.omega.resize(static_cast<std::size_t>(n));
  d.grad.resize(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    d.omega[k].assign(static_cast<std::size_t>(n), zero(g.grid()));
    for (int b = 0; b < n; ++b)
      for (int a = 0; a < n; ++a) d.omega[k][b] += g(b, a) * frame.e[k].c[a];
    d.grad[k].resize(static_cast<std::size_t>(n * n));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) d.grad[k][a * n + b] = partial(frame.e[k].c[b], a, scheme);
  }
  return d;
}

std::vector<ScalarField> frame_bracket(const AdaptedFrame& frame, const FrameData& d, int i, int j) {
  const int n = frame.dim();
  std::vector<ScalarField> out(static_cast<std::size_t>(n), zero(frame.grid));
  const std::size_t nodes = frame.grid->nodes;
  for (int b = 0; b < n; ++b) {
    double* o = out[b].values().data();
    for (int a = 0; a < n; ++a) {
      const double* ei = frame.e[i].c[a].values().data();
      const double* ej = frame.e[j].c[a].values().data();
      const double* dj = d.grad[j][a * n + b].values().data();
      const double* di = d.grad[i][a * n + b].values().data();
      for (std::size_t p = 0; p < nodes; ++p) o[p] += ei[p] * dj[p] - ej[p] * di[p];
    }
  }
  return out;
}

OnChristoffel covariant_gamma(const AdaptedFrame& frame, const FrameData& d, const CoordChristoffel& cc) {
  const int n = frame.dim();
  const std::size_t nodes = frame.grid->nodes;
  OnChristoffel G;
  G.n = n;
  G.G.assign(static_cast<std::size_t>(n * n * n), zero(frame.grid));
  std::vector<std::vector<ScalarField>> raw(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      // D = nabla_{e_i} e_j in coordinates
      std::vector<ScalarField> D(static_cast<std::size_t>(n), zero(frame.grid));
      for (int b = 0; b < n; ++b) {
        double* o = D[b].values().data();
        for (int a = 0; a < n; ++a) {
          const double* ei = frame.e[i].c[a].values().data();
          const double* dj = d.grad[j][a * n + b].values().data();
          for (std::size_t p = 0; p < nodes; ++p) o[p] += ei[p] * dj[p];
          for (int c = 0; c < n; ++c) {
            const double* gam = cc(b, a, c).values().data();
            const double* ej = frame.e[j].c[c].values().data();
            for (std::size_t p = 0; p < nodes; ++p) o[p] += gam[p] * ei[p] * ej[p];
          }
        }
      }
      raw[i * n + j].resize(static_cast<std::size_t>(n));
      for (int k = 0; k < n; ++k) raw[i * n + j][k] = dot(d.omega[k], D);
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) G(i, j, k) = 0.5 * (raw[i * n + j][k] - raw[i * n + k][j]);
  return G;
}

OnChristoffel koszul_gamma(const AdaptedFrame& frame, const FrameData& d) {
  const int n = frame.dim();
  std::vector<ScalarField> C(static_cast<std::size_t>(n * n * n), zero(frame.grid));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const std::vector<ScalarField> br = frame_bracket(frame, d, i, j);
      for (int k = 0; k < n; ++k) {
        C[(i * n + j) * n + k] = dot(d.omega[k], br);
        C[(j * n + i) * n + k] = -C[(i * n + j) * n + k];
      }
    }
  OnChristoffel G;
  G.n = n;
  G.G.assign(static_cast<std::size_t>(n * n * n), zero(frame.grid));
  auto c = [&](int i, int j, int k) -> const ScalarField& { return C[(i * n + j) * n + k]; };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) G(i, j, k) = 0.5 * (c(i, j, k) + c(k, i, j) + c(k, j, i));
  return G;
}

}  // namespace

// ---------------------------------------------------------------- metrics

int metric_index(const MatrixField& g, double index_tol) {
  int index = -1;
  for (std::size_t p = 0; p < g.grid->nodes; ++p) {
    const NodeMatrix a = node_matrix(g, p);
    Eigen::SelfAdjointEigenSolver<NodeMatrix> es(a, Eigen::EigenvaluesOnly);
    int neg = 0;
    for (int i = 0; i < g.n; ++i) {
      const double lam = es.eigenvalues()(i);
      if (!std::isfinite(lam)) throw GeometryError("metric has non-finite entries");
      if (std::abs(lam) <= index_tol) throw GeometryError("metric is degenerate at node " + std::to_string(p));
      if (lam < 0.0) ++neg;
    }
    if (index < 0)
      index = neg;
    else if (neg != index)
      throw GeometryError("metric index varies across nodes");
  }
  return index;
}

MetricField make_metric(MatrixField m, double index_tol) {
  for (int i = 0; i < m.n; ++i)
    for (int j = i + 1; j < m.n; ++j)
      for (std::size_t p = 0; p < m.grid->nodes; ++p) {
        const double a = m(i, j)[p], b = m(j, i)[p];
        if (std::abs(a - b) > 1e-13 * std::max(1.0, std::abs(a))) throw GeometryError("metric is not symmetric");
      }
  MetricField g;
  g.index = metric_index(m, index_tol);
  g.m = std::move(m);
  return g;
}

MetricField constant_metric(const GridPtr& grid, const std::vector<double>& entries) {
  const int n = grid->dim;
  if (static_cast<int>(entries.size()) != n * n) throw GeometryError("constant metric needs n*n entries");
  MatrixField m(grid);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = ScalarField(grid, entries[static_cast<std::size_t>(i * n + j)]);
  return make_metric(std::move(m));
}

MetricField flat_metric(const GridPtr& grid) {
  MatrixField m(grid);
  for (int i = 0; i < grid->dim; ++i) m(i, i) = ScalarField(grid, 1.0);
  MetricField g;
  g.m = std::move(m);
  g.index = 0;
  return g;
}

MatrixField inverse(const MatrixField& g) {
  MatrixField out(g.grid);
  for (std::size_t p = 0; p < g.grid->nodes; ++p) {
    const NodeMatrix a = node_matrix(g, p);
    Eigen::FullPivLU<NodeMatrix> lu(a);
    if (!lu.isInvertible()) throw GeometryError("singular metric at node " + std::to_string(p));
    const NodeMatrix inv = lu.inverse();
    for (int i = 0; i < g.n; ++i)
      for (int j = 0; j < g.n; ++j) out(i, j)[p] = inv(i, j);
  }
  return out;
}

ScalarField metric_density(const MetricField& g) {
  ScalarField out(g.grid());
  for (std::size_t p = 0; p < out.size(); ++p) out[p] = std::sqrt(std::abs(node_matrix(g.m, p).determinant()));
  return out;
}

MetricField scaled(const MetricField& g, double c) {
  if (c == 0.0) throw GeometryError("cannot scale a metric by zero");
  MetricField out = g;
  for (ScalarField& f : out.m.m) f *= c;
  if (c < 0.0) out.index = g.dim() - g.index;
  return out;
}

double max_entry_difference(const MatrixField& a, const MatrixField& b) {
  if (a.n != b.n) throw GeometryError("matrix fields differ in size");
  double m = 0.0;
  for (std::size_t k = 0; k < a.m.size(); ++k) m = std::max(m, max_abs(a.m[k] - b.m[k]));
  return m;
}

ScalarField inner(const MetricField& g, const VectorField& v, const VectorField& w) {
  ScalarField out(g.grid());
  const int n = g.dim();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const double* gab = g(a, b).values().data();
      const double* va = v.c[a].values().data();
      const double* wb = w.c[b].values().data();
      for (std::size_t p = 0; p < out.size(); ++p) out[p] += gab[p] * va[p] * wb[p];
    }
  return out;
}

// ---------------------------------------------------------------- distributions

double min_singular_value(const Distribution& d) {
  if (d.rank() == 0) return 0.0;
  const int n = d.grid->dim, q = d.rank();
  double m = INFINITY;
  for (std::size_t p = 0; p < d.grid->nodes; ++p) {
    NodeMatrix b(n, q);
    for (int j = 0; j < q; ++j)
      for (int a = 0; a < n; ++a) b(a, j) = d.spans[j].c[a][p];
    Eigen::JacobiSVD<NodeMatrix> svd(b);
    m = std::min(m, svd.singularValues()(q - 1));
  }
  return m;
}

Distribution make_distribution(const GridPtr& grid, std::vector<VectorField> spans, double rank_tol) {
  Distribution d{grid, std::move(spans)};
  if (d.rank() > grid->dim) throw GeometryError("distribution rank exceeds dimension");
  for (const VectorField& v : d.spans) {
    require_same_grid(*grid, *v.grid);
    if (!all_finite(v)) throw GeometryError("distribution span has non-finite components");
  }
  if (d.rank() > 0 && !(min_singular_value(d) > rank_tol))
    throw GeometryError("distribution spans are not of full rank at every node");
  return d;
}

Distribution coordinate_distribution(const GridPtr& grid, int q) {
  if (q < 0 || q > grid->dim) throw GeometryError("coordinate distribution rank out of range");
  std::vector<VectorField> spans;
  for (int a = 0; a < q; ++a) spans.push_back(coordinate_vector(grid, a));
  return Distribution{grid, std::move(spans)};
}

namespace {

// Projects w off V with respect to g, using the Gram matrix of the V spans.
std::vector<VectorField> project_off(const MetricField& g, const Distribution& V, const std::vector<VectorField>& ws) {
  const int n = g.dim(), q = V.rank();
  std::vector<VectorField> out = ws;
  if (q == 0) return out;
  const std::size_t nodes = g.grid()->nodes;
  for (std::size_t p = 0; p < nodes; ++p) {
    const NodeMatrix G = node_matrix(g.m, p);
    NodeMatrix B(n, q);
    for (int j = 0; j < q; ++j)
      for (int a = 0; a < n; ++a) B(a, j) = V.spans[j].c[a][p];
    const NodeMatrix gram = B.transpose() * G * B;
    Eigen::FullPivLU<NodeMatrix> lu(gram);
    if (!lu.isInvertible() || std::abs(gram.determinant()) < 1e-14)
      throw GeometryError("V not g-good: metric restricted to V is degenerate");
    for (auto& w : out) {
      Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 8, 1> x(n);
      for (int a = 0; a < n; ++a) x(a) = w.c[a][p];
      const Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 8, 1> coef = lu.solve(B.transpose() * G * x);
      x -= B * coef;
      for (int a = 0; a < n; ++a) w.c[a][p] = x(a);
    }
  }
  return out;
}

}  // namespace

Distribution orthogonal_complement(const MetricField& g, const Distribution& V, double rank_tol) {
  const int n = g.dim(), q = V.rank();
  const GridPtr& grid = g.grid();
  if (q == n) return Distribution{grid, {}};
  if (q == 0) return coordinate_distribution(grid, n);
  if (q == n - 1) {
    // Cofactor covector annihilating every V span, raised with g^{-1}.
    const MatrixField ginv = inverse(g.m);
    VectorField alpha(grid);
    for (std::size_t p = 0; p < grid->nodes; ++p) {
      NodeMatrix B(n, n);
      for (int j = 0; j < q; ++j)
        for (int a = 0; a < n; ++a) B(a, j) = V.spans[j].c[a][p];
      for (int a = 0; a < n; ++a) {
        NodeMatrix minor(n - 1, n - 1);
        for (int r = 0, rr = 0; r < n; ++r) {
          if (r == a) continue;
          for (int j = 0; j < q; ++j) minor(rr, j) = B(r, j);
          ++rr;
        }
        alpha.c[a][p] = ((a % 2) ? -1.0 : 1.0) * minor.determinant();
      }
    }
    VectorField h(grid);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) h.c[a] += ginv(a, b) * alpha.c[b];
    Distribution W{grid, {h}};
    for (std::size_t p = 0; p < grid->nodes; ++p) {
      const NodeMatrix G = node_matrix(g.m, p);
      Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 8, 1> x(n);
      for (int a = 0; a < n; ++a) x(a) = h.c[a][p];
      if (std::abs(x.dot(G * x)) < 1e-14) throw GeometryError("V not g-good: complement is lightlike");
    }
    if (!(min_singular_value(W) > rank_tol)) throw GeometryError("orthogonal complement lost rank");
    return W;
  }
  // Projected coordinate vectors: choose the subset of size n - q with best conditioning.
  std::vector<VectorField> coords;
  for (int a = 0; a < n; ++a) coords.push_back(coordinate_vector(grid, a));
  const std::vector<VectorField> proj = project_off(g, V, coords);
  double best = -1.0;
  Distribution best_d;
  const int m = n - q;
  std::vector<int> pick(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) pick[i] = i;
  while (true) {
    Distribution d{grid, {}};
    for (int i : pick) d.spans.push_back(proj[i]);
    const double s = min_singular_value(d);
    if (s > best) {
      best = s;
      best_d = d;
    }
    int i = m - 1;
    while (i >= 0 && pick[i] == n - m + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int k = i + 1; k < m; ++k) pick[k] = pick[k - 1] + 1;
  }
  if (!(best > rank_tol))
    throw GeometryError("no coordinate subset spans the orthogonal complement; supply a complementary distribution");
  return best_d;
}

Part complement(Part p) {
  switch (p) {
    case Part::V: return Part::H;
    case Part::H: return Part::V;
    case Part::full: return Part::none;
    case Part::none: return Part::full;
  }
  return Part::none;
}

bool AdaptedFrame::in(Part p, int i) const {
  switch (p) {
    case Part::V: return i < v_count;
    case Part::H: return i >= v_count;
    case Part::full: return true;
    case Part::none: return false;
  }
  return false;
}

AdaptedFrame orthonormalize(const MetricField& g, const Distribution& V, const Distribution& W,
                            double lightlike_tol) {
  const int n = g.dim();
  if (V.rank() + W.rank() != n) throw GeometryError("V and W ranks must add up to the dimension");
  AdaptedFrame f;
  f.grid = g.grid();
  f.v_count = V.rank();
  std::vector<VectorField> input = V.spans;
  input.insert(input.end(), W.spans.begin(), W.spans.end());
  f.e.assign(static_cast<std::size_t>(n), VectorField(g.grid()));
  f.eps.assign(static_cast<std::size_t>(n), 0);
  const std::size_t nodes = g.grid()->nodes;
  using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 8, 1>;
  std::vector<Vec> e(static_cast<std::size_t>(n));
  for (std::size_t p = 0; p < nodes; ++p) {
    const NodeMatrix G = node_matrix(g.m, p);
    for (int k = 0; k < n; ++k) {
      Vec w(n);
      for (int a = 0; a < n; ++a) w(a) = input[k].c[a][p];
      // Two passes of modified Gram-Schmidt for stability.
      for (int pass = 0; pass < 2; ++pass)
        for (int l = 0; l < k; ++l) w -= (f.eps[l] * e[l].dot(G * w)) * e[l];
      const double nn = w.dot(G * w);
      if (!(std::abs(nn) >= lightlike_tol))
        throw GeometryError("near-lightlike direction during orthonormalization at node " + std::to_string(p));
      const int s = nn > 0.0 ? 1 : -1;
      if (p == 0)
        f.eps[k] = s;
      else if (f.eps[k] != s)
        throw GeometryError("frame signature varies across nodes");
      e[k] = w / std::sqrt(std::abs(nn));
      for (int a = 0; a < n; ++a) f.e[k].c[a][p] = e[k](a);
    }
  }
  const int neg = static_cast<int>(std::count(f.eps.begin(), f.eps.end(), -1));
  if (neg != g.index) throw GeometryError("frame signature does not match the metric index");
  return f;
}

double frame_orthonormality_error(const MetricField& g, const AdaptedFrame& f) {
  double m = 0.0;
  for (int i = 0; i < f.dim(); ++i)
    for (int j = 0; j < f.dim(); ++j) {
      ScalarField d = inner(g, f.e[i], f.e[j]);
      if (i == j) d -= static_cast<double>(f.eps[i]);
      m = std::max(m, max_abs(d));
    }
  return m;
}

// ---------------------------------------------------------------- coordinate curvature

int CoordChristoffel::pair(int n, int i, int j) {
  if (i > j) std::swap(i, j);
  return i * n - i * (i - 1) / 2 + (j - i);
}

CoordChristoffel coord_christoffel(const MetricField& g, Scheme scheme) {
  const int n = g.dim();
  const int np = n * (n + 1) / 2;
  const GridPtr& grid = g.grid();
  const MatrixField ginv = inverse(g.m);
  // dg[a][pair(b,c)] = d_a g_bc
  std::vector<std::vector<ScalarField>> dg(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) {
    dg[a].resize(static_cast<std::size_t>(np));
    for (int b = 0; b < n; ++b)
      for (int c = b; c < n; ++c) dg[a][CoordChristoffel::pair(n, b, c)] = partial(g(b, c), a, scheme);
  }
  auto D = [&](int a, int b, int c) -> const ScalarField& { return dg[a][CoordChristoffel::pair(n, b, c)]; };
  CoordChristoffel cc;
  cc.n = n;
  cc.data.assign(static_cast<std::size_t>(n * np), zero(grid));
  const std::size_t nodes = grid->nodes;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      std::vector<ScalarField> lower(static_cast<std::size_t>(n), zero(grid));
      for (int k = 0; k < n; ++k) {
        const double* a1 = D(i, j, k).values().data();
        const double* a2 = D(j, i, k).values().data();
        const double* a3 = D(k, i, j).values().data();
        double* o = lower[k].values().data();
        for (std::size_t p = 0; p < nodes; ++p) o[p] = 0.5 * (a1[p] + a2[p] - a3[p]);
      }
      for (int m = 0; m < n; ++m) {
        ScalarField& out = cc.data[static_cast<std::size_t>(m * np + CoordChristoffel::pair(n, i, j))];
        for (int k = 0; k < n; ++k) {
          const double* gi = ginv(m, k).values().data();
          const double* lo = lower[k].values().data();
          double* o = out.values().data();
          for (std::size_t p = 0; p < nodes; ++p) o[p] += gi[p] * lo[p];
        }
      }
    }
  return cc;
}

ScalarField scal_oracle(const MetricField& g, Scheme scheme) {
  const int n = g.dim();
  const GridPtr& grid = g.grid();
  const std::size_t nodes = grid->nodes;
  const CoordChristoffel cc = coord_christoffel(g, scheme);
  const MatrixField ginv = inverse(g.m);
  std::vector<ScalarField> w(static_cast<std::size_t>(n), zero(grid));
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) w[i] += cc(k, i, k);
  ScalarField scal = zero(grid);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      // Ric_ij = d_k G^k_ij - d_j G^k_ik + G^k_kl G^l_ij - G^k_jl G^l_ik
      ScalarField ric = zero(grid);
      for (int k = 0; k < n; ++k) ric += partial(cc(k, i, j), k, scheme);
      ric -= partial(w[i], j, scheme);
      double* r = ric.values().data();
      for (int l = 0; l < n; ++l) {
        const double* wl = w[l].values().data();
        const double* gl = cc(l, i, j).values().data();
        for (std::size_t p = 0; p < nodes; ++p) r[p] += wl[p] * gl[p];
        for (int k = 0; k < n; ++k) {
          const double* a = cc(k, j, l).values().data();
          const double* b = cc(l, i, k).values().data();
          for (std::size_t p = 0; p < nodes; ++p) r[p] -= a[p] * b[p];
        }
      }
      const double* gij = ginv(i, j).values().data();
      for (std::size_t p = 0; p < nodes; ++p) scal[p] += gij[p] * r[p];
    }
  return scal;
}

// ---------------------------------------------------------------- orthonormal symbols

double antisymmetry_defect(const OnChristoffel& G) {
  double m = 0.0;
  for (int i = 0; i < G.n; ++i)
    for (int j = 0; j < G.n; ++j)
      for (int k = 0; k < G.n; ++k) m = std::max(m, max_abs(G(i, j, k) + G(i, k, j)));
  return m;
}

OnChristoffel on_christoffel(const MetricField& g, const AdaptedFrame& frame, ChristoffelMethod method,
                             Scheme scheme) {
  const FrameData d = frame_data(g, frame, scheme);
  if (method == ChristoffelMethod::koszul) return koszul_gamma(frame, d);
  return covariant_gamma(frame, d, coord_christoffel(g, scheme));
}

FrameGeometry::FrameGeometry(const MetricField& g, const Distribution& V, Scheme scheme)
    : FrameGeometry(g, V, orthogonal_complement(g, V), scheme) {}

FrameGeometry::FrameGeometry(const MetricField& g, const Distribution& V, const Distribution& W, Scheme scheme)
    : g_(g), V_(V), scheme_(scheme) {
  H_ = Distribution{g.grid(), project_off(g, V, W.spans)};
  build(scheme);
}

void FrameGeometry::build(Scheme scheme) {
  frame_ = orthonormalize(g_, V_, H_);
  FrameData d = frame_data(g_, frame_, scheme);
  coord_ = coord_christoffel(g_, scheme);
  gamma_ = covariant_gamma(frame_, d, coord_);
  omega_ = std::move(d.omega);
  frame_grad_ = std::move(d.grad);
}

OnChristoffel FrameGeometry::koszul() const {
  FrameData d{omega_, frame_grad_};
  return koszul_gamma(frame_, d);
}

std::vector<ScalarField> FrameGeometry::frame_components(const ScalarField& f) const {
  const int n = dim();
  std::vector<ScalarField> df;
  for (int a = 0; a < n; ++a) df.push_back(partial(f, a, scheme_));
  std::vector<ScalarField> out;
  for (int i = 0; i < n; ++i) out.push_back(dot(frame_.e[i].c, df));
  return out;
}

ScalarField FrameGeometry::along(int i, const ScalarField& f) const {
  ScalarField out = zero(grid());
  for (int a = 0; a < dim(); ++a) {
    const ScalarField& ea = frame_.e[i].c[a];
    bool nonzero = false;
    for (double v : ea.values())
      if (v != 0.0) {
        nonzero = true;
        break;
      }
    if (nonzero) out += ea * partial(f, a, scheme_);
  }
  return out;
}

VectorField FrameGeometry::bracket(int i, int j) const {
  FrameData d{omega_, frame_grad_};
  return VectorField(grid(), frame_bracket(frame_, d, i, j));
}

ScalarField FrameGeometry::bracket_component(int i, int j, int k) const {
  return dot(omega_[k], bracket(i, j).c);
}

ScalarField FrameGeometry::div_leg(Part U, int j) const {
  ScalarField out = zero(grid());
  for (int k = 0; k < dim(); ++k)
    if (in(U, k)) out += static_cast<double>(eps(k)) * gamma_(k, j, k);
  return out;
}

ScalarField FrameGeometry::divergence(Part U, const VectorField& X) const {
  const int n = dim();
  std::vector<ScalarField> comp(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) comp[j] = static_cast<double>(eps(j)) * dot(omega_[j], X.c);
  ScalarField out = zero(grid());
  for (int i = 0; i < n; ++i) {
    if (!in(U, i)) continue;
    out += along(i, comp[i]);
    for (int j = 0; j < n; ++j) out += static_cast<double>(eps(i)) * comp[j] * gamma_(i, j, i);
  }
  return out;
}

ScalarField FrameGeometry::laplacian(const ScalarField& f, Part upper, Part lower) const {
  const std::vector<ScalarField> ef = frame_components(f);
  ScalarField out = zero(grid());
  for (int i = 0; i < dim(); ++i) {
    if (!in(lower, i)) continue;
    const double e = eps(i);
    if (in(upper, i)) out += e * along(i, ef[i]);
    out += e * div_leg(upper, i) * ef[i];
  }
  return out;
}

ScalarField FrameGeometry::pair_div(Part U, const ScalarField& f, Part W) const {
  const std::vector<ScalarField> ef = frame_components(f);
  ScalarField out = zero(grid());
  for (int i = 0; i < dim(); ++i)
    if (in(W, i)) out += static_cast<double>(eps(i)) * div_leg(U, i) * ef[i];
  return out;
}

ScalarField FrameGeometry::pair_div_div(Part U, Part W) const {
  ScalarField out = zero(grid());
  for (int i = 0; i < dim(); ++i)
    if (in(W, i)) {
      const ScalarField d = div_leg(U, i);
      out += static_cast<double>(eps(i)) * d * d;
    }
  return out;
}

ScalarField FrameGeometry::pair_d(const ScalarField& f, const ScalarField& h, Part W) const {
  const std::vector<ScalarField> ef = frame_components(f);
  const std::vector<ScalarField> eh = frame_components(h);
  ScalarField out = zero(grid());
  for (int i = 0; i < dim(); ++i)
    if (in(W, i)) out += static_cast<double>(eps(i)) * ef[i] * eh[i];
  return out;
}

ScalarField FrameGeometry::sigma(Part U) const {
  ScalarField out = zero(grid());
  const Part C = complement(U);
  for (int i = 0; i < dim(); ++i)
    for (int k = 0; k < dim(); ++k)
      for (int j = 0; j < dim(); ++j)
        if (in(U, i) && in(U, k) && in(C, j)) {
          const ScalarField& G = gamma_(i, j, k);
          out += static_cast<double>(eps(i) * eps(j) * eps(k)) * G * G;
        }
  return out;
}

ScalarField FrameGeometry::tau(Part U) const {
  ScalarField out = zero(grid());
  const Part C = complement(U);
  for (int i = 0; i < dim(); ++i)
    for (int k = 0; k < dim(); ++k)
      for (int j = 0; j < dim(); ++j)
        if (in(U, i) && in(U, k) && in(C, j))
          out += static_cast<double>(eps(i) * eps(j) * eps(k)) * gamma_(i, j, k) * gamma_(k, j, i);
  return out;
}

ScalarField FrameGeometry::qual(Part U) const {
  const Part C = complement(U);
  ScalarField out = tau(U);
  for (int j = 0; j < dim(); ++j) {
    if (!in(U, j)) continue;
    const ScalarField dc = div_leg(C, j);
    const double e = eps(j);
    out += e * along(j, dc);
    out += e * div_leg(U, j) * dc;
  }
  return out;
}

ScalarField FrameGeometry::sectional(int i, int k) const {
  const int n = dim();
  ScalarField out = along(i, gamma_(k, k, i)) - along(k, gamma_(i, k, i));
  const std::size_t nodes = grid()->nodes;
  double* o = out.values().data();
  for (int m = 0; m < n; ++m) {
    const double e = eps(m);
    const double* a1 = gamma_(i, m, i).values().data();
    const double* b1 = gamma_(k, k, m).values().data();
    const double* a2 = gamma_(k, m, i).values().data();
    const double* b2 = gamma_(i, k, m).values().data();
    const double* c1 = gamma_(k, i, m).values().data();
    const double* c2 = gamma_(m, k, i).values().data();
    for (std::size_t p = 0; p < nodes; ++p)
      o[p] += e * (a1[p] * b1[p] - a2[p] * b2[p] - (b2[p] - c1[p]) * c2[p]);
  }
  return out;
}

ScalarField FrameGeometry::scal_block(Part U, Part W) const {
  ScalarField out = zero(grid());
  for (int i = 0; i < dim(); ++i)
    for (int k = 0; k < dim(); ++k)
      if (i != k && in(U, i) && in(W, k)) out += static_cast<double>(eps(i) * eps(k)) * sectional(i, k);
  return out;
}

ScalarField FrameGeometry::twist_direct(Part U) const {
  ScalarField out = zero(grid());
  const Part C = complement(U);
  for (int i = 0; i < dim(); ++i)
    for (int j = 0; j < dim(); ++j) {
      if (i == j || !in(U, i) || !in(U, j)) continue;
      const VectorField br = bracket(i, j);
      for (int k = 0; k < dim(); ++k)
        if (in(C, k)) {
          const ScalarField c = dot(omega_[k], br.c);
          out += static_cast<double>(eps(i) * eps(j) * eps(k)) * c * c;
        }
    }
  return out;
}

ScalarField FrameGeometry::density() const { return metric_density(g_); }

ScalarField sub_divergence(const FrameGeometry& geo, Part U, const VectorField& X) { return geo.divergence(U, X); }

ScalarField sub_laplacian(const FrameGeometry& geo, const ScalarField& f, Part upper, Part lower) {
  return geo.laplacian(f, upper, lower);
}

// ---------------------------------------------------------------- distribution scalars

ScalarField DistributionScalars::twist_norm_V() const { return sigma_V - tau_V; }
ScalarField DistributionScalars::twist_norm_H() const { return sigma_H - tau_H; }

DistributionScalars distribution_scalars(const FrameGeometry& geo) {
  DistributionScalars d;
  d.sigma_V = geo.sigma(Part::V);
  d.tau_V = geo.tau(Part::V);
  d.sigma_H = geo.sigma(Part::H);
  d.tau_H = geo.tau(Part::H);
  d.divV_divV_H = geo.pair_div_div(Part::V, Part::H);
  d.divH_divH_V = geo.pair_div_div(Part::H, Part::V);
  d.qual_V = geo.qual(Part::V);
  d.qual_H = geo.qual(Part::H);
  d.scal_VV = geo.scal_block(Part::V, Part::V);
  d.scal_HH = geo.scal_block(Part::H, Part::H);
  d.scal_VH = geo.scal_block(Part::V, Part::H);
  d.scal = d.scal_VV + d.scal_HH + 2.0 * d.scal_VH;
  d.xi = d.divH_divH_V - d.divV_divV_H + 0.5 * (d.sigma_H + d.tau_H) - 0.5 * (d.sigma_V + d.tau_V) - d.scal_VV +
         2.0 * d.qual_V;
  d.chi = d.scal + d.xi + 0.5 * (d.sigma_H - d.tau_H);
  d.twist2_V = geo.twist_direct(Part::V);
  d.twist2_H = geo.twist_direct(Part::H);
  d.twist2_V_from_gamma = 2.0 * (d.sigma_V - d.tau_V);
  d.twist2_H_from_gamma = 2.0 * (d.sigma_H - d.tau_H);
  return d;
}

DistributionScalars distribution_scalars(const MetricField& g, const Distribution& V, Scheme scheme) {
  return distribution_scalars(FrameGeometry(g, V, scheme));
}

LineScalars line_distribution_scalars(const FrameGeometry& geo) {
  if (geo.q() != 1) throw GeometryError("line scalars need a rank-1 distribution");
  LineScalars l;
  const ScalarField div = geo.div_leg(Part::full, 0);
  l.d_div = geo.along(0, div);
  l.div_sq = div * div;
  l.eps = geo.eps(0);
  l.accel = VectorField(geo.grid());
  l.accel_sq = zero(geo.grid());
  for (int i = 0; i < geo.dim(); ++i) {
    const ScalarField& G = geo.gamma()(0, 0, i);
    const double e = geo.eps(i);
    for (int a = 0; a < geo.dim(); ++a) l.accel.c[a] += e * G * geo.frame().e[i].c[a];
    l.accel_sq += e * G * G;
  }
  return l;
}

LineScalars line_distribution_scalars(const MetricField& g, const Distribution& V, Scheme scheme) {
  return line_distribution_scalars(FrameGeometry(g, V, scheme));
}

ScalarField foliation_scal(const MetricField& g, const Distribution& H, Scheme scheme, double integrable_tol) {
  const FrameGeometry geo(g, H, scheme);
  if (max_abs(geo.twist_direct(Part::V)) > integrable_tol) throw GeometryError("H not integrable");
  return geo.scal_block(Part::V, Part::V) + geo.pair_div_div(Part::V, Part::H) - geo.sigma(Part::V);
}

std::array<double, 2> integration_identity_residuals(const FrameGeometry& geo, const ScalarField& f,
                                                     const ScalarField& h, const ScalarField& u) {
  const Grid& grid = *geo.grid();
  const int b = grid.bounded_axis();
  if (b >= 0) {
    for (std::size_t p = 0; p < grid.nodes; ++p) {
      const int k = grid.index_along(p, b);
      if ((k == 0 || k == grid.sizes[b] - 1) && (std::abs(h[p]) > 1e-12 || std::abs(u[p]) > 1e-12))
        throw GeometryError("test functions must vanish on the boundary");
    }
  }
  const ScalarField rho = geo.density();
  const double l1 = integrate(geo.pair_d(f, h, Part::H), rho);
  const double r1 =
      -integrate((geo.laplacian(f, Part::H, Part::H) + geo.pair_div(Part::V, f, Part::H)) * h, rho);
  const double l2 = integrate(geo.pair_div(Part::V, u, Part::H), rho);
  const double r2 =
      -integrate((geo.qual(Part::H) + geo.pair_div_div(Part::V, Part::H) - geo.tau(Part::H)) * u, rho);
  return {std::abs(l1 - r1), std::abs(l2 - r2)};
}

}  // namespace curvforge
