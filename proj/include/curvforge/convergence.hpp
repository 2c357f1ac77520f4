#pragma once

#include <cmath>
#include <vector>

namespace curvforge {

// Observed order from a refinement study: slope of log(err) against log(h)
// between the two finest grids. The least-squares slope over the whole ladder
// is kept as `fit_order`. An identity passes when the observed order reaches
// the threshold or the finest error is already at roundoff level relative to
// `scale`.
struct OrderResult {
  std::vector<int> sizes;
  std::vector<double> errors;
  double order = 0.0;
  double fit_order = 0.0;
  double floor = 0.0;
  bool pass = false;
};

inline double roundoff_floor(double scale) { return 1e-9 * (1.0 + std::abs(scale)); }

inline OrderResult judge_order(const std::vector<int>& sizes, const std::vector<double>& errors, double threshold,
                               double scale) {
  OrderResult r{sizes, errors, 0.0, 0.0, roundoff_floor(scale), false};
  const std::size_t m = sizes.size();
  if (m >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < m; ++i) {
      const double x = std::log(1.0 / sizes[i]);
      const double y = std::log(std::max(errors[i], 1e-300));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    r.fit_order = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    const double e0 = std::max(errors[m - 2], 1e-300), e1 = std::max(errors[m - 1], 1e-300);
    r.order = std::log(e0 / e1) / std::log(static_cast<double>(sizes[m - 1]) / sizes[m - 2]);
  }
  const double finest = errors.empty() ? INFINITY : errors.back();
  r.pass = std::isfinite(finest) && (r.order >= threshold || finest <= r.floor);
  return r;
}

}  // namespace curvforge
