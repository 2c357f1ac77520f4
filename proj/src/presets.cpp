#include "curvforge/presets.hpp"

#include <cmath>
#include <numbers>

namespace curvforge {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct TrigTerm {
  std::vector<int> k;
  double c = 0.0, phase = 0.0;
};

std::vector<TrigTerm> draw_terms(SeededUniform& rng, int dim, int count) {
  std::vector<TrigTerm> terms;
  for (int t = 0; t < count; ++t) {
    TrigTerm term;
    bool nonzero = false;
    while (!nonzero) {
      term.k.assign(static_cast<std::size_t>(dim), 0);
      for (int a = 0; a < dim; ++a) {
        term.k[a] = rng.integer(-1, 1);
        nonzero = nonzero || term.k[a] != 0;
      }
    }
    term.c = rng.range(-1.0, 1.0);
    term.phase = rng.range(0.0, kTwoPi);
    terms.push_back(term);
  }
  return terms;
}

// Sum of the terms, normalised so that its magnitude never exceeds 1.
ScalarField trig_sum(const GridPtr& grid, const std::vector<TrigTerm>& terms) {
  double norm = 0.0;
  for (const TrigTerm& t : terms) norm += std::abs(t.c);
  if (norm == 0.0) norm = 1.0;
  return sample(grid, [&](std::span<const double> x) {
    double s = 0.0;
    for (const TrigTerm& t : terms) {
      double arg = t.phase;
      for (int a = 0; a < grid->dim; ++a) arg += kTwoPi * t.k[a] * x[a] / grid->lengths[a];
      s += t.c * std::cos(arg);
    }
    return s / norm;
  });
}
}  // namespace

SeededUniform::SeededUniform(std::uint64_t seed) : state_(seed) {}

double SeededUniform::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  z ^= z >> 31;
  return static_cast<double>(z >> 11) * 0x1.0p-53;
}

int SeededUniform::integer(int lo, int hi) {
  const int span = hi - lo + 1;
  return lo + std::min(span - 1, static_cast<int>(next() * span));
}

MetricField perturbed_flat_metric(const GridPtr& grid, double amplitude, std::uint64_t seed) {
  if (!(amplitude >= 0.0 && amplitude < 1.0)) throw GeometryError("perturbation amplitude must lie in [0, 1)");
  const int n = grid->dim;
  SeededUniform rng(seed);
  MatrixField m(grid);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      ScalarField p = (amplitude / n) * trig_sum(grid, draw_terms(rng, n, 3));
      if (i == j) p += 1.0;
      m(i, j) = p;
      m(j, i) = p;
    }
  return make_metric(std::move(m));
}

ScalarField random_trig_field(const GridPtr& grid, double mid, double half_width, std::uint64_t seed) {
  SeededUniform rng(seed);
  return mid + half_width * trig_sum(grid, draw_terms(rng, grid->dim, 3));
}

PresetKind parse_preset(const std::string& name) {
  if (name == "coordinate") return PresetKind::coordinate;
  if (name == "contact3") return PresetKind::contact3;
  if (name == "spiral2") return PresetKind::spiral2;
  if (name == "rot_hyperplane") return PresetKind::rot_hyperplane;
  throw std::invalid_argument("unknown distribution preset '" + name + "'");
}

std::string to_string(PresetKind k) {
  switch (k) {
    case PresetKind::coordinate: return "coordinate";
    case PresetKind::contact3: return "contact3";
    case PresetKind::spiral2: return "spiral2";
    case PresetKind::rot_hyperplane: return "rot_hyperplane";
  }
  return "";
}

Distribution preset_distribution(PresetKind kind, const GridPtr& grid, int q) {
  const int n = grid->dim;
  if (!grid->fully_periodic()) throw GeometryError("distribution presets need a fully periodic grid");
  auto rotating = [&](int axis, int first, bool sin_first) {
    VectorField v(grid);
    const double L = grid->lengths[axis];
    auto s = sample(grid, [&](std::span<const double> x) { return std::sin(kTwoPi * x[axis] / L); });
    auto c = sample(grid, [&](std::span<const double> x) { return std::cos(kTwoPi * x[axis] / L); });
    v.c[first] = sin_first ? s : c;
    v.c[first + 1] = sin_first ? c : s;
    return v;
  };
  std::vector<VectorField> spans;
  switch (kind) {
    case PresetKind::coordinate:
      return coordinate_distribution(grid, q);
    case PresetKind::contact3:
      if (n != 3) throw GeometryError("contact3 needs a 3-dimensional grid");
      spans = {coordinate_vector(grid, 2), rotating(2, 0, true)};
      break;
    case PresetKind::spiral2:
      if (n < 3) throw GeometryError("spiral2 needs dimension at least 3");
      spans = {coordinate_vector(grid, 0), rotating(0, 1, false)};
      break;
    case PresetKind::rot_hyperplane:
      if (n < 3) throw GeometryError("rot_hyperplane needs dimension at least 3");
      spans = {rotating(n - 1, 0, true)};
      for (int a = 2; a < n; ++a) spans.push_back(coordinate_vector(grid, a));
      break;
  }
  Distribution d = make_distribution(grid, std::move(spans));
  const FrameGeometry geo(flat_metric(grid), d, Scheme::spectral);
  if (!(min_value(geo.twist_direct(Part::V)) > 0.0))
    throw GeometryError("preset " + to_string(kind) + " failed its twistedness check");
  return d;
}

SplitDistribution preset_split(PresetKind kind, const MetricField& g, bool normal, int q) {
  Distribution d = preset_distribution(kind, g.grid(), q);
  Distribution c = orthogonal_complement(g, d);
  if (normal) return {c, d};
  return {d, c};
}

}  // namespace curvforge
