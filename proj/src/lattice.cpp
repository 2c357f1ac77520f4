#include "curvforge/lattice.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>

namespace curvforge {

Scheme parse_scheme(const std::string& name) {
  if (name == "fd4") return Scheme::fd4;
  if (name == "spectral") return Scheme::spectral;
  throw std::invalid_argument("unknown derivative scheme '" + name + "'");
}

std::string to_string(Scheme s) { return s == Scheme::fd4 ? "fd4" : "spectral"; }

bool Grid::fully_periodic() const {
  return std::all_of(periodic.begin(), periodic.end(), [](bool p) { return p; });
}

int Grid::bounded_axis() const {
  for (int a = 0; a < dim; ++a)
    if (!periodic[a]) return a;
  return -1;
}

int Grid::index_along(std::size_t node, int axis) const {
  return static_cast<int>((node / strides[axis]) % static_cast<std::size_t>(sizes[axis]));
}

double Grid::coordinate(std::size_t node, int axis) const {
  return index_along(node, axis) * spacing[axis];
}

void Grid::coordinates(std::size_t node, std::span<double> x) const {
  for (int a = 0; a < dim; ++a) x[a] = coordinate(node, a);
}

double Grid::cell_volume() const {
  double v = 1.0;
  for (double h : spacing) v *= h;
  return v;
}

bool Grid::same_shape(const Grid& o) const {
  return dim == o.dim && sizes == o.sizes && lengths == o.lengths && periodic == o.periodic;
}

GridPtr make_grid(const std::vector<int>& sizes, const std::vector<double>& lengths,
                  const std::vector<bool>& periodic) {
  const int n = static_cast<int>(sizes.size());
  if (n < 1) throw GeometryError("grid dimension must be at least 1");
  if (lengths.size() != sizes.size() || periodic.size() != sizes.size())
    throw GeometryError("grid sizes, lengths and periodicity must have equal length");
  int bounded = 0;
  for (int a = 0; a < n; ++a) {
    if (sizes[a] < 8) throw GeometryError("resolution too low for stencils (need N >= 8 per axis)");
    if (!(lengths[a] > 0.0)) throw GeometryError("axis lengths must be positive");
    if (!periodic[a]) ++bounded;
  }
  if (bounded > 1) throw GeometryError("at most one bounded axis is supported");
  auto g = std::make_shared<Grid>();
  g->dim = n;
  g->sizes = sizes;
  g->lengths = lengths;
  g->periodic = periodic;
  g->spacing.resize(n);
  g->strides.resize(n);
  std::size_t stride = 1;
  for (int a = n - 1; a >= 0; --a) {
    g->strides[a] = stride;
    stride *= static_cast<std::size_t>(sizes[a]);
    g->spacing[a] = periodic[a] ? lengths[a] / sizes[a] : lengths[a] / (sizes[a] - 1);
  }
  g->nodes = stride;
  return g;
}

GridPtr make_torus(int n, const std::vector<int>& sizes, const std::vector<double>& lengths) {
  if (n < 1 || static_cast<int>(sizes.size()) != n)
    throw GeometryError("torus dimension does not match the size list");
  return make_grid(sizes, lengths, std::vector<bool>(static_cast<std::size_t>(n), true));
}

GridPtr make_annulus(const std::vector<int>& sizes, const std::vector<double>& lengths) {
  if (sizes.size() != 2 || lengths.size() != 2) throw GeometryError("annulus needs two axes");
  return make_grid(sizes, lengths, {false, true});
}

// ---------------------------------------------------------------- fields

void require_same_grid(const Grid& a, const Grid& b) {
  if (&a != &b && !a.same_shape(b)) throw GeometryError("fields live on different grids");
}

ScalarField::ScalarField(GridPtr grid, double fill)
    : grid_(std::move(grid)), values_(grid_->nodes, fill) {}

ScalarField::ScalarField(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_->nodes) throw GeometryError("value count does not match grid");
}

#define CURVFORGE_FIELD_OP(op)                                              \
  ScalarField& ScalarField::operator op##=(const ScalarField& o) {          \
    require_same_grid(*grid_, *o.grid_);                                    \
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] op## = o.values_[i]; \
    return *this;                                                           \
  }                                                                         \
  ScalarField& ScalarField::operator op##=(double c) {                      \
    for (double& v : values_) v op## = c;                                   \
    return *this;                                                           \
  }                                                                         \
  ScalarField operator op(ScalarField a, const ScalarField& b) { return a op## = b; } \
  ScalarField operator op(ScalarField a, double c) { return a op## = c; }

CURVFORGE_FIELD_OP(+)
CURVFORGE_FIELD_OP(-)
CURVFORGE_FIELD_OP(*)
CURVFORGE_FIELD_OP(/)
#undef CURVFORGE_FIELD_OP

ScalarField operator+(double c, ScalarField a) { return a += c; }
ScalarField operator*(double c, ScalarField a) { return a *= c; }
ScalarField operator-(double c, ScalarField a) {
  for (double& v : a.values()) v = c - v;
  return a;
}
ScalarField operator/(double c, ScalarField a) {
  for (double& v : a.values()) v = c / v;
  return a;
}
ScalarField operator-(ScalarField a) {
  for (double& v : a.values()) v = -v;
  return a;
}

ScalarField map(const ScalarField& f, const std::function<double(double)>& fn) {
  ScalarField out(f.grid());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = fn(f[i]);
  return out;
}

ScalarField pow(const ScalarField& f, double p) {
  return map(f, [p](double x) { return std::pow(x, p); });
}

ScalarField sample(const GridPtr& grid, const std::function<double(std::span<const double>)>& fn) {
  ScalarField out(grid);
  std::vector<double> x(static_cast<std::size_t>(grid->dim));
  for (std::size_t i = 0; i < grid->nodes; ++i) {
    grid->coordinates(i, x);
    out[i] = fn(x);
  }
  return out;
}

ScalarField coordinate_field(const GridPtr& grid, int axis) {
  ScalarField out(grid);
  for (std::size_t i = 0; i < grid->nodes; ++i) out[i] = grid->coordinate(i, axis);
  return out;
}

double max_abs(const ScalarField& f) {
  double m = 0.0;
  for (double v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

double min_value(const ScalarField& f) { return *std::min_element(f.values().begin(), f.values().end()); }
double max_value(const ScalarField& f) { return *std::max_element(f.values().begin(), f.values().end()); }

bool all_finite(const ScalarField& f) {
  return std::all_of(f.values().begin(), f.values().end(), [](double v) { return std::isfinite(v); });
}

VectorField::VectorField(GridPtr g) : grid(std::move(g)) {
  c.assign(static_cast<std::size_t>(grid->dim), ScalarField(grid));
}

VectorField::VectorField(GridPtr g, std::vector<ScalarField> comps) : grid(std::move(g)), c(std::move(comps)) {
  if (static_cast<int>(c.size()) != grid->dim) throw GeometryError("vector field needs one component per axis");
}

CovectorField::CovectorField(GridPtr g) : grid(std::move(g)) {
  c.assign(static_cast<std::size_t>(grid->dim), ScalarField(grid));
}

MatrixField::MatrixField(GridPtr g) : grid(std::move(g)), n(grid->dim) {
  m.assign(static_cast<std::size_t>(n * n), ScalarField(grid));
}

VectorField coordinate_vector(const GridPtr& grid, int axis) {
  VectorField v(grid);
  v.c[axis] = ScalarField(grid, 1.0);
  return v;
}

bool all_finite(const VectorField& v) {
  return std::all_of(v.c.begin(), v.c.end(), [](const ScalarField& f) { return all_finite(f); });
}

bool all_finite(const MatrixField& m) {
  return std::all_of(m.m.begin(), m.m.end(), [](const ScalarField& f) { return all_finite(f); });
}

// ---------------------------------------------------------------- derivatives

namespace {

struct LinePlan {
  int n = 0;
  double* in = nullptr;
  fftw_complex* spec = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

LinePlan& line_plan(int n) {
  static std::map<int, LinePlan> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  LinePlan p;
  p.n = n;
  p.in = fftw_alloc_real(static_cast<std::size_t>(n));
  p.spec = fftw_alloc_complex(static_cast<std::size_t>(n / 2 + 1));
  p.forward = fftw_plan_dft_r2c_1d(n, p.in, p.spec, FFTW_ESTIMATE);
  p.backward = fftw_plan_dft_c2r_1d(n, p.spec, p.in, FFTW_ESTIMATE);
  return cache.emplace(n, p).first->second;
}

void fd4_line(const double* f, double* out, int n, double h, bool periodic) {
  const double s = 1.0 / (12.0 * h);
  if (periodic) {
    for (int i = 0; i < n; ++i) {
      const int im2 = (i - 2 + n) % n, im1 = (i - 1 + n) % n, ip1 = (i + 1) % n, ip2 = (i + 2) % n;
      out[i] = (-f[ip2] + 8.0 * f[ip1] - 8.0 * f[im1] + f[im2]) * s;
    }
    return;
  }
  out[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) * s;
  out[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) * s;
  for (int i = 2; i < n - 2; ++i) out[i] = (-f[i + 2] + 8.0 * f[i + 1] - 8.0 * f[i - 1] + f[i - 2]) * s;
  const int m = n - 1;
  out[m - 1] = -(-3.0 * f[m] - 10.0 * f[m - 1] + 18.0 * f[m - 2] - 6.0 * f[m - 3] + f[m - 4]) * s;
  out[m] = -(-25.0 * f[m] + 48.0 * f[m - 1] - 36.0 * f[m - 2] + 16.0 * f[m - 3] - 3.0 * f[m - 4]) * s;
}

void spectral_line(const double* f, double* out, int n, double length) {
  LinePlan& p = line_plan(n);
  std::copy(f, f + n, p.in);
  fftw_execute(p.forward);
  const double base = 2.0 * std::numbers::pi / length;
  for (int k = 0; k <= n / 2; ++k) {
    double kk = base * k;
    if (n % 2 == 0 && k == n / 2) kk = 0.0;
    const double re = p.spec[k][0], im = p.spec[k][1];
    p.spec[k][0] = -kk * im / n;
    p.spec[k][1] = kk * re / n;
  }
  fftw_execute(p.backward);
  std::copy(p.in, p.in + n, out);
}

}  // namespace

ScalarField partial(const ScalarField& f, int axis, Scheme scheme) {
  const Grid& g = *f.grid();
  if (axis < 0 || axis >= g.dim) throw GeometryError("axis out of range");
  if (scheme == Scheme::spectral && !g.periodic[axis])
    throw GeometryError("spectral derivative requested on a bounded axis");
  const int n = g.sizes[axis];
  const std::size_t stride = g.strides[axis];
  const std::size_t block = stride * static_cast<std::size_t>(n);
  ScalarField out(f.grid());
  std::vector<double> line(static_cast<std::size_t>(n)), res(static_cast<std::size_t>(n));
  const double* src = f.values().data();
  double* dst = out.values().data();
  for (std::size_t outer = 0; outer < g.nodes; outer += block) {
    for (std::size_t inner = 0; inner < stride; ++inner) {
      const std::size_t base = outer + inner;
      for (int i = 0; i < n; ++i) line[i] = src[base + i * stride];
      if (scheme == Scheme::fd4)
        fd4_line(line.data(), res.data(), n, g.spacing[axis], g.periodic[axis]);
      else
        spectral_line(line.data(), res.data(), n, g.lengths[axis]);
      for (int i = 0; i < n; ++i) dst[base + i * stride] = res[i];
    }
  }
  return out;
}

CovectorField differential(const ScalarField& f, Scheme scheme) {
  CovectorField df(f.grid());
  for (int a = 0; a < f.grid()->dim; ++a) df.c[a] = partial(f, a, scheme);
  return df;
}

ScalarField directional(const VectorField& v, const ScalarField& f, Scheme scheme) {
  require_same_grid(*v.grid, *f.grid());
  ScalarField out(f.grid());
  for (int a = 0; a < f.grid()->dim; ++a) out += v.c[a] * partial(f, a, scheme);
  return out;
}

VectorField lie_bracket(const VectorField& v, const VectorField& w, Scheme scheme) {
  require_same_grid(*v.grid, *w.grid);
  VectorField out(v.grid);
  for (int i = 0; i < v.grid->dim; ++i) {
    const ScalarField a = directional(v, w.c[i], scheme);
    const ScalarField b = directional(w, v.c[i], scheme);
    out.c[i] = a - b;
  }
  return out;
}

// ---------------------------------------------------------------- quadrature

std::vector<double> quadrature_weights(const Grid& g) {
  std::vector<double> w(g.nodes, g.cell_volume());
  const int b = g.bounded_axis();
  if (b >= 0) {
    for (std::size_t i = 0; i < g.nodes; ++i) {
      const int k = g.index_along(i, b);
      if (k == 0 || k == g.sizes[b] - 1) w[i] *= 0.5;
    }
  }
  return w;
}

namespace {
double pairwise_sum(const double* x, std::size_t n) {
  if (n <= 16) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_sum(x, h) + pairwise_sum(x + h, n - h);
}
}  // namespace

double integrate(const ScalarField& f, const ScalarField& density) {
  require_same_grid(*f.grid(), *density.grid());
  for (double d : density.values())
    if (!(d > 0.0)) throw GeometryError("integration density must be positive at every node");
  const std::vector<double> w = quadrature_weights(*f.grid());
  std::vector<double> terms(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) terms[i] = f[i] * density[i] * w[i];
  return pairwise_sum(terms.data(), terms.size());
}

// ---------------------------------------------------------------- periodic inverse

struct PeriodicLaplaceInverse::Impl {
  std::vector<int> dims;
  std::size_t real_size = 0, spec_size = 0;
  double* real = nullptr;
  fftw_complex* spec = nullptr;
  fftw_plan forward = nullptr, backward = nullptr;
  ~Impl() {
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
    if (real) fftw_free(real);
    if (spec) fftw_free(spec);
  }
};

PeriodicLaplaceInverse::PeriodicLaplaceInverse(GridPtr grid, Scheme scheme)
    : grid_(std::move(grid)), impl_(std::make_unique<Impl>()) {
  const Grid& g = *grid_;
  if (!g.fully_periodic()) throw GeometryError("periodic Laplace inverse needs a fully periodic grid");
  impl_->dims = g.sizes;
  impl_->real_size = g.nodes;
  const int last = g.sizes.back();
  impl_->spec_size = g.nodes / static_cast<std::size_t>(last) * static_cast<std::size_t>(last / 2 + 1);
  impl_->real = fftw_alloc_real(impl_->real_size);
  impl_->spec = fftw_alloc_complex(impl_->spec_size);
  impl_->forward = fftw_plan_dft_r2c(g.dim, impl_->dims.data(), impl_->real, impl_->spec, FFTW_ESTIMATE);
  impl_->backward = fftw_plan_dft_c2r(g.dim, impl_->dims.data(), impl_->spec, impl_->real, FFTW_ESTIMATE);

  std::vector<std::vector<double>> axis_symbol(static_cast<std::size_t>(g.dim));
  for (int a = 0; a < g.dim; ++a) {
    const int n = g.sizes[a];
    axis_symbol[a].resize(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
      const int ks = k <= n / 2 ? k : k - n;
      double s = 0.0;
      if (scheme == Scheme::spectral) {
        const double kk = (n % 2 == 0 && k == n / 2) ? 0.0 : 2.0 * std::numbers::pi * ks / g.lengths[a];
        s = -kk * kk;
      } else {
        const double th = 2.0 * std::numbers::pi * ks / n;
        const double d = (8.0 * std::sin(th) - std::sin(2.0 * th)) / (6.0 * g.spacing[a]);
        s = -d * d;
      }
      axis_symbol[a][k] = s;
    }
  }
  symbol_.assign(impl_->spec_size, 0.0);
  std::vector<int> idx(static_cast<std::size_t>(g.dim), 0);
  for (std::size_t m = 0; m < impl_->spec_size; ++m) {
    std::size_t rem = m;
    for (int a = g.dim - 1; a >= 0; --a) {
      const std::size_t extent = a == g.dim - 1 ? static_cast<std::size_t>(last / 2 + 1)
                                                : static_cast<std::size_t>(g.sizes[a]);
      idx[a] = static_cast<int>(rem % extent);
      rem /= extent;
    }
    double s = 0.0;
    for (int a = 0; a < g.dim; ++a) s += axis_symbol[a][idx[a]];
    symbol_[m] = s;
  }
}

PeriodicLaplaceInverse::~PeriodicLaplaceInverse() = default;

std::vector<double> PeriodicLaplaceInverse::solve(const std::vector<double>& r, double alpha, double beta) const {
  std::copy(r.begin(), r.end(), impl_->real);
  fftw_execute(impl_->forward);
  const double norm = 1.0 / static_cast<double>(impl_->real_size);
  for (std::size_t m = 0; m < impl_->spec_size; ++m) {
    const double d = alpha * symbol_[m] - beta;
    const double scale = d != 0.0 ? norm / d : 0.0;
    impl_->spec[m][0] *= scale;
    impl_->spec[m][1] *= scale;
  }
  fftw_execute(impl_->backward);
  return std::vector<double>(impl_->real, impl_->real + impl_->real_size);
}

// ---------------------------------------------------------------- csv

namespace {
void write_rows(const std::string& path, const Grid& g, const std::vector<std::string>& names,
                const std::vector<const ScalarField*>& cols) {
  std::FILE* fp = std::fopen(path.c_str(), "w");
  if (!fp) throw std::runtime_error("cannot open '" + path + "' for writing");
  for (int a = 0; a < g.dim; ++a) std::fprintf(fp, "axis%d,", a);
  for (std::size_t k = 0; k < names.size(); ++k) std::fprintf(fp, "%s%s", names[k].c_str(), k + 1 < names.size() ? "," : "\n");
  for (std::size_t i = 0; i < g.nodes; ++i) {
    for (int a = 0; a < g.dim; ++a) std::fprintf(fp, "%.17g,", g.coordinate(i, a));
    for (std::size_t k = 0; k < cols.size(); ++k)
      std::fprintf(fp, "%.17g%s", (*cols[k])[i], k + 1 < cols.size() ? "," : "\n");
  }
  std::fclose(fp);
}
}  // namespace

void write_csv(const std::string& path, const ScalarField& f) { write_rows(path, *f.grid(), {"value"}, {&f}); }

void write_csv(const std::string& path, const VectorField& v) {
  std::vector<std::string> names;
  std::vector<const ScalarField*> cols;
  for (std::size_t a = 0; a < v.c.size(); ++a) {
    names.push_back("c" + std::to_string(a));
    cols.push_back(&v.c[a]);
  }
  write_rows(path, *v.grid, names, cols);
}

void write_csv(const std::string& path, const MatrixField& m) {
  std::vector<std::string> names;
  std::vector<const ScalarField*> cols;
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j) {
      names.push_back("g" + std::to_string(i) + std::to_string(j));
      cols.push_back(&m(i, j));
    }
  write_rows(path, *m.grid, names, cols);
}

}  // namespace curvforge
