#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "curvforge/geometry.hpp"

namespace curvforge {

// Deterministic uniform doubles in [0, 1) from a 64-bit seed.
class SeededUniform {
 public:
  explicit SeededUniform(std::uint64_t seed);
  double next();
  double range(double lo, double hi) { return lo + (hi - lo) * next(); }
  int integer(int lo, int hi);

 private:
  std::uint64_t state_;
};

// Identity plus a symmetric trigonometric perturbation whose entries stay below
// amplitude / n in magnitude, so the metric is Riemannian for amplitude < 1.
MetricField perturbed_flat_metric(const GridPtr& grid, double amplitude, std::uint64_t seed);

// Smooth positive field: mid + half_width * (bounded trig sum in [-1, 1]).
ScalarField random_trig_field(const GridPtr& grid, double mid, double half_width, std::uint64_t seed);

enum class PresetKind { coordinate, contact3, spiral2, rot_hyperplane };

PresetKind parse_preset(const std::string& name);
std::string to_string(PresetKind k);

// The named distribution. Non-coordinate presets are checked to be twisted
// (min node-wise twist^2 > 0 under the flat metric).
Distribution preset_distribution(PresetKind kind, const GridPtr& grid, int q = 1);

// A distribution together with a complement used to seed the adapted frame.
struct SplitDistribution {
  Distribution V;
  Distribution W;
};

// role "plane": V = preset, W = orthogonal complement of the preset.
// role "normal": V = orthogonal complement of the preset, W = preset.
SplitDistribution preset_split(PresetKind kind, const MetricField& g, bool normal, int q = 1);

}  // namespace curvforge
