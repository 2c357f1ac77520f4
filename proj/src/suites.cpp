#include "curvforge/suites.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

#include "curvforge/convergence.hpp"
#include "curvforge/deform.hpp"
#include "curvforge/geometry.hpp"
#include "curvforge/solve.hpp"
#include "curvforge/upsilon.hpp"

namespace curvforge {

namespace {

constexpr double kPi = std::numbers::pi;

GridPtr t2(int n) { return make_torus(2, {n, n}, {1, 1}); }
GridPtr t3(int n) { return make_torus(3, {n, n, n}, {1, 1, 1}); }
GridPtr t4(int n) { return make_torus(4, {n, n, n, n}, {1, 1, 1, 1}); }

double max_diff(const ScalarField& a, const ScalarField& b) { return max_abs(a - b); }

struct Scenario {
  MetricField g;
  SplitDistribution split;
  ScalarField f, kappa, u;
};

// Perturbed-flat T^3 with a rank-2 distribution and positive factors in [0.5, 2.5].
Scenario scenario(int n, PresetKind kind, const SuiteOptions& opt, std::uint64_t salt) {
  auto grid = t3(n);
  Scenario s;
  const std::uint64_t seed = opt.seed * 1000 + salt;
  s.g = perturbed_flat_metric(grid, opt.amplitude, seed);
  s.split = preset_split(kind, s.g, false, 2);
  s.f = random_trig_field(grid, 1.5, 1.0, seed + 1);
  s.kappa = random_trig_field(grid, 1.5, 1.0, seed + 2);
  s.u = random_trig_field(grid, 0.0, 1.0, seed + 3);
  return s;
}

// Collects one error per named line and resolution, then judges each line.
class LineStudy {
 public:
  void add(const std::string& name, double error, double scale) {
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) {
      names_.push_back(name);
      errors_.emplace_back();
      scales_.push_back(0.0);
      it = names_.end() - 1;
    }
    const auto k = static_cast<std::size_t>(it - names_.begin());
    errors_[k].push_back(error);
    scales_[k] = std::max(scales_[k], scale);
  }
  void judge(std::vector<CheckRecord>& out, const std::vector<int>& sizes, double threshold) const {
    for (std::size_t k = 0; k < names_.size(); ++k)
      out.push_back(order_check(names_[k], sizes, errors_[k], threshold, scales_[k]));
  }

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<double>> errors_;
  std::vector<double> scales_;
};

void compare_lines(LineStudy& study, const std::string& prefix, const PredictedQuantities& pred,
                   const PredictedQuantities& meas) {
  for (const auto& line : pred) {
    const ScalarField& m = lookup(meas, line.name);
    study.add(prefix + line.name, max_diff(line.field, m), max_abs(m));
  }
}

Distribution full_tangent(const GridPtr& grid) { return coordinate_distribution(grid, grid->dim); }

}  // namespace

CheckRecord order_check(std::string name, const std::vector<int>& sizes, const std::vector<double>& errors,
                        double threshold, double scale) {
  const OrderResult r = judge_order(sizes, errors, threshold, scale);
  CheckRecord c;
  c.name = std::move(name);
  c.kind = "order";
  c.sizes = sizes;
  c.errors = errors;
  c.threshold = threshold;
  c.order = r.order;
  c.fit_order = r.fit_order;
  c.scale = scale;
  c.pass = r.pass;
  return c;
}

CheckRecord absolute_check(std::string name, int size, double error, double tolerance) {
  CheckRecord c;
  c.name = std::move(name);
  c.kind = "absolute";
  c.sizes = {size};
  c.errors = {error};
  c.threshold = tolerance;
  c.pass = std::isfinite(error) && error <= tolerance;
  return c;
}

CheckRecord lower_check(std::string name, int size, double value, double bound) {
  CheckRecord c;
  c.name = std::move(name);
  c.kind = "lower";
  c.sizes = {size};
  c.errors = {value};
  c.threshold = bound;
  c.pass = std::isfinite(value) && value >= bound;
  return c;
}

bool all_pass(const std::vector<CheckRecord>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const CheckRecord& c) { return c.pass; });
}

// ---------------------------------------------------------------- surgery formula suites

std::vector<CheckRecord> switch_suite(const SuiteOptions& opt) {
  std::vector<CheckRecord> out;
  for (PresetKind kind : opt.presets) {
    LineStudy study;
    for (int n : opt.sizes) {
      auto s = scenario(n, kind, opt, 31);
      FrameGeometry geo(s.g, s.split.V, s.split.W, Scheme::fd4);
      FrameGeometry geo_h(switch_metric(s.g, s.split.V), s.split.V, geo.h_distribution(), Scheme::fd4);
      compare_lines(study, "switch." + to_string(kind) + ".", predict_switch(geo, s.u),
                    measured_switch_quantities(geo_h, s.u));
    }
    study.judge(out, opt.sizes, opt.order_threshold);
  }
  return out;
}

std::vector<CheckRecord> stretch_suite(const SuiteOptions& opt) {
  std::vector<CheckRecord> out;
  for (PresetKind kind : opt.presets) {
    LineStudy study;
    for (int n : opt.sizes) {
      auto s = scenario(n, kind, opt, 41);
      FrameGeometry geo(s.g, s.split.V, s.split.W, Scheme::fd4);
      FrameGeometry geo_s(stretch(s.g, s.f, s.split.V), s.split.V, geo.h_distribution(), Scheme::fd4);
      compare_lines(study, "stretch." + to_string(kind) + ".", predict_stretch(geo, s.f, s.u),
                    measured_stretch_quantities(geo_s, s.u));
    }
    study.judge(out, opt.sizes, opt.order_threshold);
  }
  return out;
}

std::vector<CheckRecord> conform_suite(const SuiteOptions& opt) {
  std::vector<CheckRecord> out;
  LineStudy study;
  for (int n : opt.sizes) {
    auto s = scenario(n, PresetKind::coordinate, opt, 51);
    FrameGeometry geo(s.g, s.split.V, s.split.W, Scheme::fd4);
    const ScalarField direct = scal_oracle(conform(s.g, s.kappa), Scheme::fd4);
    study.add("conform.scal", max_diff(predict_conform_scal(geo, s.kappa), direct), max_abs(direct));
  }
  study.judge(out, opt.sizes, opt.order_threshold);
  return out;
}

std::vector<CheckRecord> change_suite(const SuiteOptions& opt) {
  std::vector<CheckRecord> out;
  for (PresetKind kind : opt.presets) {
    LineStudy study;
    for (int n : opt.sizes) {
      auto s = scenario(n, kind, opt, 61);
      FrameGeometry geo(s.g, s.split.V, s.split.W, Scheme::fd4);
      const ScalarField direct = scal_oracle(change(s.g, s.f, s.kappa, s.split.V), Scheme::fd4);
      study.add("change." + to_string(kind) + ".scal", max_diff(predict_change_scal(geo, s.f, s.kappa), direct),
                max_abs(direct));
    }
    study.judge(out, opt.sizes, opt.order_threshold);
  }
  return out;
}

std::vector<CheckRecord> chi_suite(const SuiteOptions& opt) {
  std::vector<CheckRecord> out;
  for (PresetKind kind : opt.presets) {
    LineStudy study;
    for (int n : opt.sizes) {
      auto s = scenario(n, kind, opt, 71);
      FrameGeometry geo(s.g, s.split.V, s.split.W, Scheme::fd4);
      for (ChiMode mode : {ChiMode::stretch_v, ChiMode::stretch_h, ChiMode::conform}) {
        FrameGeometry geo_t(chi_target_metric(geo, s.f, mode), s.split.V, geo.h_distribution(), Scheme::fd4);
        const ScalarField direct = distribution_scalars(geo_t).chi;
        study.add("chi." + to_string(kind) + "." + to_string(mode), max_diff(predict_chi(geo, s.f, mode), direct),
                  max_abs(direct));
      }
    }
    study.judge(out, opt.sizes, opt.order_threshold);
  }
  return out;
}

// ---------------------------------------------------------------- exact identities

std::vector<CheckRecord> algebra_suite(const SuiteOptions& opt) {
  std::vector<CheckRecord> out;
  {
    auto grid = t3(16);
    auto g = perturbed_flat_metric(grid, opt.amplitude, opt.seed * 1000 + 9);
    auto s = scal_oracle(g, Scheme::spectral);
    auto flipped = scal_oracle(switch_metric(g, full_tangent(grid)), Scheme::spectral);
    out.push_back(absolute_check("algebra.full_switch_negates_scal", 16, max_diff(flipped, -1.0 * s) / (1 + max_abs(s)),
                                 1e-10));
  }
  auto grid = t3(10);
  auto g = perturbed_flat_metric(grid, opt.amplitude, opt.seed * 1000 + 5);
  auto V = preset_split(PresetKind::contact3, g, false).V;
  auto H = orthogonal_complement(g, V);
  auto f0 = random_trig_field(grid, 1.5, 1.0, opt.seed * 1000 + 6);
  auto f1 = random_trig_field(grid, 1.5, 1.0, opt.seed * 1000 + 7);
  auto k = random_trig_field(grid, 1.5, 1.0, opt.seed * 1000 + 8);
  const auto entry = [&](const std::string& name, const MetricField& a, const MetricField& b) {
    out.push_back(absolute_check(name, 10, max_entry_difference(a.m, b.m), 1e-12));
  };
  entry("algebra.switch_is_involution", switch_metric(switch_metric(g, V), V), g);
  entry("algebra.stretch_factors_multiply", stretch(stretch(g, f0, V), f1, V), stretch(g, f0 * f1, V));
  entry("algebra.conform_is_full_stretch", conform(g, k), stretch(g, k, full_tangent(grid)));
  entry("algebra.conform_is_stretch_of_both_parts", conform(g, k), stretch(stretch(g, k, H), k, V));
  entry("algebra.conform_commutes_with_stretch", conform(stretch(g, f0, V), k), stretch(conform(g, k), f0, V));
  entry("algebra.unit_change_is_switch", change(g, ScalarField(grid, 1.0), ScalarField(grid, 1.0), V),
        switch_metric(g, V));
  int failures = 0;
  for (int n = 2; n <= 12; ++n)
    for (int q = 0; q <= n; ++q) failures += exponent_bounds_check(n, q) ? 0 : 1;
  out.push_back(absolute_check("algebra.linearization_exponent_bounds", 12, failures, 0.0));
  return out;
}

std::vector<CheckRecord> coefficient_suite(const SuiteOptions&) {
  double e_b = 0, e_c = 0, e_f = 0, e_d = 0, e_e = 0, e_k = 0;
  for (int n = 2; n <= 8; ++n)
    for (int q = 0; q <= n; ++q) {
      const CoefficientTable t(n, q);
      for (int i = 0; i < 100; ++i) {
        const double x = std::pow(10.0, -2.0 + 4.0 * i / 99.0);
        const double E = t.E(x), F = t.F(x), x2 = x * x, N = n - 1.0;
        e_b = std::max(e_b, std::abs(N * (1 + x2) * E + ((q - 1.0) * x2 + q) / x) / (1 + 1 / x));
        e_c = std::max(e_c, std::abs(N * E + q / x - x / (1 + x2)) / (1 + 1 / x));
        const double fc = ((q - 1.0) * (n + q - 2.0) * x2 * x2 + (N * (2 * q + 1) + 2.0 * q * (q - 1)) * x2 +
                           q * (N + q)) /
                          (N * N * x2 * (1 + x2) * (1 + x2));
        e_f = std::max(e_f, std::abs(F - fc) / (1 + std::abs(fc)));
        const double d[] = {2 * N * F, n * N * E * E, q * (q + 3.0) / x2, 2 * N * q * E / x};
        const double d_scale = 1 + std::max({std::abs(d[0]), std::abs(d[1]), std::abs(d[2]), std::abs(d[3])});
        e_d = std::max(e_d, std::abs(d[0] - d[1] - d[2] - d[3] - t.a(x) * x / (1 + x2)) / d_scale);
        const double e[] = {N * (1 + x2) * (-2 * F + n * E * E), (q / x2) * ((q - 1.0) * x2 + (q + 3.0)),
                            (2 * N * E / x) * ((q - 2.0) * x2 + q)};
        const double e_scale = 1 + std::max({std::abs(e[0]), std::abs(e[1]), std::abs(e[2])});
        e_e = std::max(e_e, std::abs(e[0] + e[1] + e[2] - t.b(x) * x / (1 + x2)) / e_scale);
        e_k = std::max(e_k, std::abs(t.dK(x) - t.K(x) * E) / t.K(x));
      }
    }
  return {absolute_check("coefficients.log_derivative_form", 100, e_b, 1e-12),
          absolute_check("coefficients.log_derivative_relation", 100, e_c, 1e-12),
          absolute_check("coefficients.second_log_derivative_closed_form", 100, e_f, 1e-11),
          absolute_check("coefficients.gradient_coefficient_identity", 100, e_d, 1e-11),
          absolute_check("coefficients.vertical_gradient_coefficient_identity", 100, e_e, 1e-11),
          absolute_check("coefficients.factor_derivative", 100, e_k, 1e-14)};
}

// ---------------------------------------------------------------- consistency web

std::vector<CheckRecord> consistency_suite(const SuiteOptions& opt) {
  std::vector<CheckRecord> out;
  LineStudy study;
  double positivity = 0.0;
  for (int n : opt.sizes) {
    auto grid = t3(n);
    auto g = perturbed_flat_metric(grid, opt.amplitude, opt.seed * 1000 + 21);
    for (bool normal : {true, false}) {
      auto split = preset_split(PresetKind::contact3, g, normal);
      FrameGeometry geo(g, split.V, split.W, Scheme::fd4);
      auto d = distribution_scalars(geo);
      const std::string tag = normal ? "line." : "plane.";
      const ScalarField scal = scal_oracle(g, Scheme::fd4);
      study.add("consistency." + tag + "scal_decomposition", max_diff(scal, d.scal), max_abs(scal));
      study.add("consistency." + tag + "mixed_scal_is_minus_qual_sum", max_diff(d.scal_VH, -1.0 * (d.qual_V + d.qual_H)),
                max_abs(d.scal_VH));
      study.add("consistency." + tag + "twist_is_twice_sigma_minus_tau",
                std::max(max_diff(d.twist2_H, d.twist2_H_from_gamma), max_diff(d.twist2_V, d.twist2_V_from_gamma)),
                max_abs(d.twist2_H) + max_abs(d.twist2_V));
      positivity = std::max(positivity, -min_value(d.sigma_H - map(d.tau_H, [](double v) { return std::abs(v); })));
      positivity = std::max(positivity, -min_value(d.sigma_V - map(d.tau_V, [](double v) { return std::abs(v); })));
      if (normal) {
        auto l = line_distribution_scalars(geo);
        const double eps = l.eps;
        study.add("consistency.line.sigma_equals_tau", max_diff(d.sigma_V, d.tau_V), max_abs(d.sigma_V));
        study.add("consistency.line.sigma_equals_div_pairing", max_diff(d.sigma_V, d.divV_divV_H), max_abs(d.sigma_V));
        study.add("consistency.line.sigma_equals_acceleration", max_diff(d.sigma_V, l.accel_sq), max_abs(d.sigma_V));
        study.add("consistency.line.vertical_scal_vanishes", max_abs(d.scal_VV), 1.0);
        study.add("consistency.line.qual_form", max_diff(d.qual_V, eps * l.d_div + d.sigma_V), max_abs(d.qual_V));
        study.add("consistency.line.xi_form",
                  max_diff(d.xi, 2.0 * eps * l.d_div + eps * l.div_sq + 0.5 * (d.sigma_H + d.tau_H)), max_abs(d.xi));
      } else {
        auto f0 = random_trig_field(grid, 0.0, 1.0, opt.seed * 1000 + 31);
        auto f1 = random_trig_field(grid, 0.0, 1.0, opt.seed * 1000 + 32);
        auto full = geo.laplacian(f0, Part::full, Part::full);
        study.add("consistency.laplacian_split",
                  max_diff(full, geo.laplacian(f0, Part::V, Part::full) + geo.laplacian(f0, Part::H, Part::full)),
                  max_abs(full));
        study.add("consistency.laplacian_first_order_part",
                  max_diff(geo.laplacian(f0, Part::V, Part::H), geo.pair_div(Part::V, f0, Part::H)), max_abs(full));
        double chain = 0, product = 0;
        for (Part U : {Part::V, Part::H, Part::full})
          for (Part W : {Part::V, Part::H, Part::full}) {
            const Part both = U == Part::full ? W : (W == Part::full ? U : (U == W ? U : Part::none));
            auto rule = 3.0 * f0 * f0 * geo.laplacian(f0, U, W) + 6.0 * f0 * geo.pair_d(f0, f0, both);
            chain = std::max(chain, max_diff(geo.laplacian(f0 * f0 * f0, U, W), rule));
            auto prod = f0 * geo.laplacian(f1, U, W) + f1 * geo.laplacian(f0, U, W) + 2.0 * geo.pair_d(f0, f1, both);
            product = std::max(product, max_diff(geo.laplacian(f0 * f1, U, W), prod));
          }
        study.add("consistency.laplacian_chain_rule", chain, max_abs(full));
        study.add("consistency.laplacian_product_rule", product, max_abs(full));
      }
    }
  }
  study.judge(out, opt.sizes, opt.order_threshold);
  out.push_back(absolute_check("consistency.riemannian_sigma_dominates_tau", opt.sizes.back(), positivity, 1e-10));

  {
    auto grid = t3(48);
    auto g = perturbed_flat_metric(grid, opt.amplitude, opt.seed * 1000 + 2);
    auto split = preset_split(PresetKind::contact3, g, true);
    FrameGeometry geo(g, split.V, split.W, Scheme::spectral);
    auto r = integration_identity_residuals(geo, random_trig_field(grid, 0, 1, opt.seed * 1000 + 41),
                                            random_trig_field(grid, 0, 1, opt.seed * 1000 + 42),
                                            random_trig_field(grid, 0, 1, opt.seed * 1000 + 43));
    out.push_back(absolute_check("consistency.integration_identity_first", 48, r[0], 1e-6));
    out.push_back(absolute_check("consistency.integration_identity_second", 48, r[1], 1e-6));
  }
  {
    // Leaves of dt^2 + k^{-2}(dx^2 + dy^2) carry the curvature of the conformal plane metric.
    auto grid = make_torus(3, {8, 32, 32}, {1, 1, 1});
    const auto kfun = [](double x, double y) { return std::exp(0.3 * std::sin(2 * kPi * x) * std::cos(2 * kPi * y)); };
    auto kap = sample(grid, [&](std::span<const double> x) { return kfun(x[1], x[2]); });
    MatrixField m(grid);
    m(0, 0) = ScalarField(grid, 1.0);
    m(1, 1) = 1.0 / (kap * kap);
    m(2, 2) = 1.0 / (kap * kap);
    Distribution H{grid, {coordinate_vector(grid, 1), coordinate_vector(grid, 2)}};
    auto leaf = foliation_scal(make_metric(m), H, Scheme::spectral);
    auto g2 = t2(32);
    auto k2 = sample(g2, [&](std::span<const double> x) { return kfun(x[0], x[1]); });
    MatrixField m2(g2);
    m2(0, 0) = 1.0 / (k2 * k2);
    m2(1, 1) = 1.0 / (k2 * k2);
    auto ref = scal_oracle(make_metric(m2), Scheme::spectral);
    double e = 0.0;
    for (std::size_t p = 0; p < grid->nodes; ++p) e = std::max(e, std::abs(leaf[p] - ref[p % g2->nodes]));
    out.push_back(absolute_check("consistency.integrable_leaf_curvature", 32, e, 1e-8));
  }
  return out;
}

// ---------------------------------------------------------------- prescribed curvature operator

std::vector<CheckRecord> operator_suite(const SuiteOptions& opt) {
  std::vector<CheckRecord> out;
  struct Case {
    std::string name;
    std::function<UpsilonContext()> make;
    double f_mid, f_half, s_mid, s_half;
  };
  const std::vector<Case> cases{
      {"lorentz_t4",
       [] {
         auto g = flat_metric(t4(8));
         auto split = preset_split(PresetKind::rot_hyperplane, g, true, 3);
         return UpsilonContext(g, split.V, split.W, Scheme::fd4);
       },
       0.8, 0.4, 2.0 * 128, 128},
      {"index2_t3",
       [] {
         auto g = flat_metric(t3(16));
         auto split = preset_split(PresetKind::contact3, g, false, 2);
         return UpsilonContext(g, split.V, split.W, Scheme::fd4);
       },
       1.5, 0.4, -3.0 * 64, 64}};
  for (const Case& c : cases) {
    const UpsilonContext ctx = c.make();
    double worst = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
      const std::uint64_t seed = opt.seed * 1000 + 100 + 10 * static_cast<std::uint64_t>(trial);
      auto f = random_trig_field(ctx.grid(), c.f_mid, c.f_half, seed);
      auto v = random_trig_field(ctx.grid(), 0.0, 1.0, seed + 1);
      auto s = random_trig_field(ctx.grid(), c.s_mid, c.s_half, seed + 2);
      auto lin = linearize_apply(ctx, s, f, v);
      double best = HUGE_VAL;
      for (double eps : {1e-4, 1e-5, 1e-6}) {
        auto fd = (upsilon(ctx, s, f + eps * v) - upsilon(ctx, s, f - eps * v)) / (2 * eps);
        best = std::min(best, max_diff(fd, lin) / max_abs(lin));
      }
      worst = std::max(worst, best);
    }
    out.push_back(absolute_check("operator." + c.name + ".linearization_vs_central_differences",
                                 ctx.grid()->sizes[0], worst, 1e-6));
    double closed = 0.0;
    for (double k : {0.4, 1.0, 2.2}) {
      const ScalarField fc(ctx.grid(), k);
      auto z = linearize_apply(ctx, s_map(ctx, fc), fc, ScalarField(ctx.grid(), 1.0));
      auto expect = constant_point_coefficient(ctx, k);
      closed = std::max(closed, max_diff(z, expect) / (1 + max_abs(expect)));
    }
    out.push_back(absolute_check("operator." + c.name + ".constant_point_coefficient", ctx.grid()->sizes[0], closed,
                                 1e-9));
  }
  LineStudy study;
  for (int n : opt.sizes) {
    auto g = perturbed_flat_metric(t3(n), opt.amplitude, opt.seed * 1000 + 6);
    auto split = preset_split(PresetKind::contact3, g, false);
    UpsilonContext ctx(g, split.V, split.W, Scheme::fd4);
    auto f = random_trig_field(ctx.grid(), 1.5, 0.6, opt.seed * 1000 + 7);
    auto h = change(g, f, ctx.table().K(f), split.V);
    auto direct = scal_oracle(h, Scheme::fd4);
    study.add("operator.root_map_matches_changed_metric", max_diff(s_map(ctx, f), direct), max_abs(direct));
  }
  study.judge(out, opt.sizes, opt.order_threshold);
  return out;
}

// ---------------------------------------------------------------- naturality

std::vector<CheckRecord> pullback_suite(const SuiteOptions& opt) {
  std::vector<CheckRecord> out;
  LineStudy study;
  for (int n : opt.sizes) {
    auto grid = t2(n);
    auto g = perturbed_flat_metric(grid, opt.amplitude, opt.seed * 1000 + 7);
    TorusDiffeo phi(2);
    phi.translate({0.1, 0.05}).shear(1, 0, {0.04}, {0.02}).warp(0, 0.05, 0.3);
    auto lhs = scal_oracle(pullback(g, phi), Scheme::fd4);
    auto rhs = pullback(scal_oracle(g, Scheme::fd4), phi);
    study.add("pullback.scal_is_natural", max_diff(lhs, rhs), max_abs(rhs));
  }
  study.judge(out, opt.sizes, opt.order_threshold);
  {
    auto grid = t2(32);
    auto g = perturbed_flat_metric(grid, opt.amplitude, opt.seed * 1000 + 8);
    TorusDiffeo phi(2);
    phi.translate({0.137, 0.291});
    auto lhs = scal_oracle(pullback(g, phi), Scheme::spectral);
    auto rhs = pullback(scal_oracle(g, Scheme::spectral), phi);
    out.push_back(absolute_check("pullback.translation_equivariance", 32, max_diff(lhs, rhs) / (1 + max_abs(rhs)), 1e-6));
  }
  return out;
}

// ---------------------------------------------------------------- catalog

const std::vector<SuiteInfo>& suite_catalog() {
  static const std::vector<SuiteInfo> catalog{
      {"switch", "signature switch formulas against the switched metric"},
      {"stretch", "stretch formulas against the stretched metric"},
      {"conform", "conformal scalar curvature law"},
      {"change", "scalar curvature of the composite change"},
      {"chi", "chi under stretch along V, stretch along H and conformal change"},
      {"algebra", "sign flip, composition identities and exponent bounds"},
      {"coefficients", "identities of K, its log-derivatives and the quasilinear coefficients"},
      {"consistency", "decomposition, pairing, twist, line, Laplacian and integration identities"},
      {"operator", "root map, linearization and constant-point coefficient"},
      {"pullback", "naturality of scalar curvature under torus diffeomorphisms"},
  };
  return catalog;
}

std::vector<CheckRecord> run_suite(const std::string& name, const SuiteOptions& opt) {
  if (name == "switch") return switch_suite(opt);
  if (name == "stretch") return stretch_suite(opt);
  if (name == "conform") return conform_suite(opt);
  if (name == "change") return change_suite(opt);
  if (name == "chi") return chi_suite(opt);
  if (name == "algebra") return algebra_suite(opt);
  if (name == "coefficients") return coefficient_suite(opt);
  if (name == "consistency") return consistency_suite(opt);
  if (name == "operator") return operator_suite(opt);
  if (name == "pullback") return pullback_suite(opt);
  throw std::invalid_argument("unknown suite '" + name + "'");
}

}  // namespace curvforge
