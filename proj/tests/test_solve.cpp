#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "curvforge/convergence.hpp"
#include "curvforge/deform.hpp"
#include "curvforge/linear.hpp"
#include "curvforge/presets.hpp"
#include "curvforge/surface.hpp"

using namespace curvforge;
constexpr double kPi = std::numbers::pi;

namespace {

GridPtr t2(int n) { return make_torus(2, {n, n}, {1, 1}); }
GridPtr t3(int n) { return make_torus(3, {n, n, n}, {1, 1, 1}); }

UpsilonContext contact_plane(int n, Scheme scheme) {
  auto g = flat_metric(t3(n));
  auto split = preset_split(PresetKind::contact3, g, false, 2);
  return UpsilonContext(g, split.V, split.W, scheme);
}

UpsilonContext rot_normal(int n, Scheme scheme) {
  auto grid = make_torus(4, {n, n, n, n}, {1, 1, 1, 1});
  auto g = flat_metric(grid);
  auto split = preset_split(PresetKind::rot_hyperplane, g, true, 3);
  return UpsilonContext(g, split.V, split.W, scheme);
}

double sup_diff(const ScalarField& a, const ScalarField& b) { return max_abs(a - b); }

}  // namespace

// ---------------------------------------------------------------- linear algebra

TEST(Linear, GmresSolvesShiftedLaplacianWithAndWithoutPreconditioner) {
  auto grid = t2(16);
  PeriodicLaplaceInverse pre(grid, Scheme::fd4);
  auto rhs = random_trig_field(grid, 0.0, 1.0, 5);
  const LinearMap A = [&](const Vec& x) {
    ScalarField v(grid, x), out(grid, 0.0);
    for (int a = 0; a < 2; ++a) out += partial(partial(v, a, Scheme::fd4), a, Scheme::fd4);
    return (out - 3.0 * v).values();
  };
  const Vec exact = pre.solve(rhs.values(), 1.0, 3.0);
  auto plain = gmres(A, rhs.values(), {}, {}, 1e-12, 50, 2000);
  auto fast = gmres(A, rhs.values(), [&](const Vec& r) { return pre.solve(r, 1.0, 3.0); }, {}, 1e-12, 50, 50);
  ASSERT_TRUE(plain.converged);
  ASSERT_TRUE(fast.converged);
  EXPECT_LE(fast.iterations, 3);
  for (std::size_t i = 0; i < exact.size(); ++i) {
    EXPECT_NEAR(plain.x[i], exact[i], 1e-9);
    EXPECT_NEAR(fast.x[i], exact[i], 1e-9);
  }
}

TEST(Linear, SparseDerivativeMatchesStencilOnAnnulus) {
  auto grid = make_annulus({17, 12}, {2, 1});
  auto f = sample(grid, [](std::span<const double> x) { return std::exp(0.3 * x[0]) * std::sin(2 * kPi * x[1]); });
  Eigen::Map<const Eigen::VectorXd> v(f.values().data(), static_cast<Eigen::Index>(f.size()));
  Eigen::VectorXd lap = Eigen::VectorXd::Zero(v.size());
  for (int a = 0; a < 2; ++a) {
    Eigen::VectorXd d = derivative_matrix(grid, a) * v;
    auto expect = partial(f, a, Scheme::fd4);
    for (std::size_t p = 0; p < f.size(); ++p) EXPECT_NEAR(d[static_cast<Eigen::Index>(p)], expect[p], 1e-12);
    lap += derivative_matrix(grid, a) * d;
  }
  Eigen::VectorXd l = laplace_matrix(grid) * v;
  EXPECT_LE((l - lap).lpNorm<Eigen::Infinity>(), 1e-10);
}

// ---------------------------------------------------------------- brackets

TEST(Scan, TwistedPlaneGivesSupersolutionAndStrongNegativeSGivesUnitSubsolution) {
  auto ctx = contact_plane(10, Scheme::fd4);
  EXPECT_GT(min_value(ctx.twist_V()), 0.0);
  ScalarField s(ctx.grid(), -3.0);
  const double hi = find_constant_supersolution(ctx, s);
  EXPECT_LT(max_value(upsilon(ctx, s, ScalarField(ctx.grid(), hi))), 0.0);
  ScalarField strong(ctx.grid(), -300.0);
  EXPECT_DOUBLE_EQ(find_constant_subsolution(ctx, strong), 1.0);
  EXPECT_GT(min_value(upsilon(ctx, strong, ScalarField(ctx.grid(), 1.0))), 0.0);
}

TEST(Scan, LorentzCaseFindsUnitSupersolutionAfterRescaleAndSmallSubsolution) {
  auto ctx = rot_normal(8, Scheme::fd4);
  EXPECT_GT(min_value(ctx.twist_H()), 0.0);
  ScalarField s(ctx.grid(), 2.0 * 128.0);
  EXPECT_DOUBLE_EQ(find_constant_supersolution(ctx, s), 1.0);
  const double lo = find_constant_subsolution(ctx, s);
  EXPECT_LT(lo, 1.0);
  EXPECT_GT(min_value(upsilon(ctx, s, ScalarField(ctx.grid(), lo))), 0.0);
}

TEST(Scan, FlatIntegrableDataHasNoBracketOfTheWrongSign) {
  auto grid = t3(8);
  UpsilonContext ctx(flat_metric(grid), coordinate_distribution(grid, 1), Scheme::fd4);
  EXPECT_THROW(find_constant_supersolution(ctx, ScalarField(grid, -1.0)), SolverError);
  EXPECT_THROW(find_constant_subsolution(ctx, ScalarField(grid, 1.0)), SolverError);
  EXPECT_NO_THROW(find_constant_supersolution(ctx, ScalarField(grid, 1.0)));
}

// ---------------------------------------------------------------- monotone and Newton

TEST(Monotone, RejectsInvertedOrInvalidBracket) {
  auto ctx = contact_plane(8, Scheme::fd4);
  ScalarField s(ctx.grid(), -300.0);
  EXPECT_THROW(monotone_solve(ctx, s, 2.0, 1.0), SolverError);
  EXPECT_THROW(monotone_solve(ctx, s, 1.0, 1.0), SolverError);
  EXPECT_THROW(monotone_solve(ctx, ScalarField(ctx.grid(), 300.0), 1.0, 2.0), SolverError);
}

TEST(Monotone, ConvergesToConstantFixedPointInsideBracket) {
  auto ctx = contact_plane(8, Scheme::fd4);
  const double c0 = 1.5;
  auto s = s_map(ctx, ScalarField(ctx.grid(), c0));
  ASSERT_GT(min_value(upsilon(ctx, s, ScalarField(ctx.grid(), 1.0))), 0.0);
  ASSERT_LT(max_value(upsilon(ctx, s, ScalarField(ctx.grid(), 2.0))), 0.0);
  MonotoneOptions opt;
  opt.lambda_shift = 0.0;
  opt.tol = 1e-9;
  opt.max_iter = 4000;
  auto rep = monotone_solve(ctx, s, 1.0, 2.0, opt);
  EXPECT_TRUE(rep.converged);
  EXPECT_TRUE(rep.enclosure_held);
  EXPECT_NEAR(rep.f_min, c0, 1e-7);
  EXPECT_NEAR(rep.f_max, c0, 1e-7);
  for (std::size_t k = 1; k < rep.trace.size(); ++k) EXPECT_LE(rep.trace[k].residual, rep.trace[k - 1].residual);
}

TEST(Newton, ExactStartTakesNoIterations) {
  auto ctx = contact_plane(8, Scheme::fd4);
  auto f = random_trig_field(ctx.grid(), 1.4, 0.2, 9);
  auto s = s_map(ctx, f);
  NewtonOptions opt;
  opt.tol = 1e-8 * (1 + max_abs(s));
  auto rep = newton_solve(ctx, s, f, opt);
  EXPECT_TRUE(rep.converged);
  EXPECT_EQ(rep.iterations, 0);
}

TEST(Newton, RejectsNonpositiveStart) {
  auto ctx = contact_plane(8, Scheme::fd4);
  auto f = ScalarField(ctx.grid(), 1.0);
  f[3] = -0.1;
  EXPECT_THROW(newton_solve(ctx, ScalarField(ctx.grid(), -300.0), f), SolverError);
}

TEST(Newton, QuadraticTailFromMonotoneSeed) {
  auto ctx = contact_plane(12, Scheme::fd4);
  auto s = sample(ctx.grid(), [](std::span<const double> x) { return 64.0 * (-3.0 + std::sin(2 * kPi * x[2])); });
  MonotoneOptions mo;
  mo.max_iter = 25;
  mo.tol = 1e-3;
  auto seed = monotone_solve(ctx, s, find_constant_subsolution(ctx, s), find_constant_supersolution(ctx, s), mo);
  NewtonOptions no;
  no.tol = 1e-11;
  auto rep = newton_solve(ctx, s, seed.f, no);
  ASSERT_TRUE(rep.converged);
  ASSERT_GE(rep.trace.size(), 4u);
  const std::size_t m = rep.trace.size();
  for (std::size_t k = m - 3; k < m; ++k) {
    if (rep.trace[k].residual < 1e-10) continue;
    EXPECT_LE(rep.trace[k].residual / rep.trace[k - 1].residual, 0.1) << "step " << k;
  }
}

// ---------------------------------------------------------------- synthesis

TEST(Synthesis, StrategiesParse) {
  EXPECT_EQ(parse_strategy("hybrid"), Strategy::hybrid);
  EXPECT_EQ(to_string(parse_strategy("newton")), "newton");
  EXPECT_THROW(parse_strategy("bisection"), std::invalid_argument);
}

TEST(Synthesis, PlantedTargetIsReproducedWhicheverSolutionIsFound) {
  auto ctx = contact_plane(16, Scheme::fd4);
  auto f_true = random_trig_field(ctx.grid(), 1.5, 0.2, 4);
  auto s = s_map(ctx, f_true);
  auto h_true = change(ctx.geometry().metric(), f_true, ctx.table().K(f_true), ctx.geometry().v_distribution());
  const double fd_error = sup_diff(scal_oracle(h_true, Scheme::fd4), s);
  for (Strategy strategy : {Strategy::hybrid, Strategy::newton}) {
    SynthesisOptions opt;
    opt.strategy = strategy;
    auto rep = synthesize(ctx, s, opt);
    ASSERT_TRUE(rep.converged) << to_string(strategy) << ": " << rep.message;
    ASSERT_TRUE(rep.h.has_value());
    EXPECT_EQ(rep.h->index, 2);
    EXPECT_LE(rep.residual, 1e-8);
    EXPECT_LE(rep.scal_mismatch, 10.0 * fd_error + 1e-8) << to_string(strategy);
    EXPECT_GE(rep.f_min, rep.bracket_low * (1 - 1e-9));
    EXPECT_LE(rep.f_max, rep.bracket_high * (1 + 1e-9));
  }
}

TEST(Synthesis, RescaledLorentzRunGivesTimelikeLineAndConvergingScal) {
  std::vector<int> sizes{8, 12};
  std::vector<double> errs;
  for (int n : sizes) {
    auto ctx = rot_normal(n, Scheme::fd4);
    auto s = sample(ctx.grid(), [](std::span<const double> x) { return 2.0 + std::cos(2 * kPi * x[0]); });
    auto rep = synthesize(ctx, s);
    ASSERT_TRUE(rep.converged) << rep.message;
    EXPECT_GT(rep.scale, 1.0);
    EXPECT_EQ(rep.h->index, 1);
    EXPECT_LE(rep.residual, 1e-8);
    EXPECT_NEAR(rep.scal_mismatch, sup_diff(scal_oracle(*rep.h, Scheme::fd4), s), 1e-12);
    errs.push_back(rep.scal_mismatch);
  }
  auto r = judge_order(sizes, errs, 3.0, 3.0);
  EXPECT_TRUE(r.pass) << "order " << r.order;
}

TEST(Synthesis, MissingBracketIsReported) {
  auto grid = t3(8);
  UpsilonContext ctx(flat_metric(grid), coordinate_distribution(grid, 1), Scheme::fd4);
  auto s = sample(grid, [](std::span<const double> x) { return std::sin(2 * kPi * x[0]); });
  EXPECT_THROW(synthesize(ctx, s), SolverError);
}

// ---------------------------------------------------------------- diffeomorphisms

TEST(Diffeo, IdentityLeavesFieldsUnchanged) {
  auto grid = t2(12);
  auto g = perturbed_flat_metric(grid, 0.2, 1);
  TorusDiffeo id(2);
  EXPECT_EQ(max_entry_difference(pullback(g, id).m, g.m), 0.0);
  auto s = random_trig_field(grid, 0.0, 1.0, 2);
  EXPECT_EQ(sup_diff(pullback(s, id), s), 0.0);
}

TEST(Diffeo, InterpolationIsExactOnGridShiftsAndTrigPolynomials) {
  auto grid = t2(16);
  auto s = random_trig_field(grid, 0.0, 1.0, 3);
  TorusDiffeo shift(2);
  shift.translate({2.0 / 16, -3.0 / 16});
  auto moved = pullback(s, shift);
  for (std::size_t p = 0; p < s.size(); ++p) {
    const int i = grid->index_along(p, 0), j = grid->index_along(p, 1);
    const std::size_t q = static_cast<std::size_t>(((i + 2) % 16) * 16 + (j + 13) % 16);
    EXPECT_NEAR(moved[p], s[q], 1e-12);
  }
  TorusDiffeo odd(2);
  odd.translate({0.0123, 0.377});
  auto f = [](double x, double y) { return std::sin(2 * kPi * x) * std::cos(4 * kPi * y) + std::cos(6 * kPi * x); };
  auto pf = pullback(sample(grid, [&](std::span<const double> x) { return f(x[0], x[1]); }), odd);
  auto expect = sample(grid, [&](std::span<const double> x) { return f(x[0] + 0.0123, x[1] + 0.377); });
  EXPECT_LE(sup_diff(pf, expect), 1e-12);
}

TEST(Diffeo, JacobianMatchesFiniteDifferences) {
  TorusDiffeo phi(2);
  phi.translate({0.1, 0.2}).shear(1, 0, {0.05}, {0.03, 0.01}).warp(0, 0.08, 0.4);
  std::vector<double> x{0.31, 0.77}, jac;
  phi.evaluate(x, jac);
  for (int i = 0; i < 2; ++i) {
    const double h = 1e-6;
    std::vector<double> xp{0.31, 0.77}, xm{0.31, 0.77}, tmp;
    xp[i] += h;
    xm[i] -= h;
    phi.evaluate(xp, tmp);
    phi.evaluate(xm, tmp);
    for (int a = 0; a < 2; ++a) EXPECT_NEAR(jac[static_cast<std::size_t>(a * 2 + i)], (xp[a] - xm[a]) / (2 * h), 1e-8);
  }
}

TEST(Diffeo, InvalidPrimitivesAreRejected) {
  TorusDiffeo phi(2);
  EXPECT_THROW(phi.warp(0, 0.16, 0.0), std::invalid_argument);
  EXPECT_THROW(phi.shear(0, 0, {0.1}, {}), std::invalid_argument);
  EXPECT_THROW(phi.translate({0.1}), std::invalid_argument);
}

TEST(Diffeo, TranslationCommutesWithScal) {
  auto grid = t2(32);
  auto g = perturbed_flat_metric(grid, 0.2, 6);
  TorusDiffeo phi(2);
  phi.translate({0.137, 0.291});
  auto lhs = scal_oracle(pullback(g, phi), Scheme::spectral);
  auto rhs = pullback(scal_oracle(g, Scheme::spectral), phi);
  EXPECT_LE(sup_diff(lhs, rhs), 1e-6 * (1 + max_abs(rhs)));
}

TEST(Diffeo, ScalIsNaturalUnderWarpShearTranslation) {
  std::vector<int> sizes{32, 48, 64};
  std::vector<double> errs;
  double scale = 0;
  for (int n : sizes) {
    auto grid = t2(n);
    auto g = perturbed_flat_metric(grid, 0.2, 7);
    TorusDiffeo phi(2);
    phi.translate({0.1, 0.05}).shear(1, 0, {0.04}, {0.02}).warp(0, 0.05, 0.3);
    auto lhs = scal_oracle(pullback(g, phi), Scheme::fd4);
    auto rhs = pullback(scal_oracle(g, Scheme::fd4), phi);
    errs.push_back(sup_diff(lhs, rhs));
    scale = max_abs(rhs);
  }
  auto r = judge_order(sizes, errs, 3.5, scale);
  EXPECT_TRUE(r.pass) << "order " << r.order << " finest " << errs.back();
}

// ---------------------------------------------------------------- Lorentz surfaces

TEST(Surface, UnitAngleGivesHalfMinkowski) {
  auto grid = t2(8);
  auto h = lorentz_from_u(ScalarField(grid, kPi / 2));
  EXPECT_EQ(h.index, 1);
  EXPECT_NEAR(max_abs(h(0, 0) + 0.5), 0.0, 1e-14);
  EXPECT_NEAR(max_abs(h(1, 1) - 0.5), 0.0, 1e-14);
  EXPECT_NEAR(max_abs(h(0, 1)), 0.0, 1e-14);
}

TEST(Surface, ChangeRouteMatchesClosedFormAndScalFollowsTheSineLaw) {
  auto grid = t2(48);
  auto u = random_trig_field(grid, kPi / 2, 1.0, 11);
  auto h = lorentz_from_u(u);
  EXPECT_LE(max_entry_difference(h.m, lorentz_closed_form(u).m), 1e-12);
  ScalarField lap(grid, 0.0);
  for (int a = 0; a < 2; ++a) lap += partial(partial(u, a, Scheme::spectral), a, Scheme::spectral);
  auto expect = 2.0 * lap / map(u, [](double x) { return std::sin(x); });
  EXPECT_LE(sup_diff(scal_oracle(h, Scheme::spectral), expect), 1e-8 * (1 + max_abs(expect)));
}

TEST(Surface, AngleOutsideRangeIsRejected) {
  auto grid = t2(8);
  EXPECT_THROW(lorentz_from_u(ScalarField(grid, 0.0)), SolverError);
  EXPECT_THROW(lorentz_from_u(ScalarField(grid, 3.2)), SolverError);
}

TEST(Surface, GaussBonnetResidualBasics) {
  auto grid = t2(16);
  EXPECT_EQ(gauss_bonnet_residual(constant_metric(grid, {-1, 0, 0, 1}), Scheme::spectral), 0.0);
  EXPECT_THROW(gauss_bonnet_residual(flat_metric(grid), Scheme::spectral), std::invalid_argument);
  auto g = perturbed_flat_metric(grid, 0.2, 3);
  EXPECT_LE(std::abs(integrate(scal_oracle(g, Scheme::spectral), metric_density(g))), 1e-8);
}

TEST(ClosedSurface, ZeroTargetGivesConstantAngle) {
  auto rep = solve_sine_closed(ScalarField(t2(16), 0.0));
  EXPECT_TRUE(rep.converged);
  EXPECT_EQ(rep.f_min, kPi / 2);
  EXPECT_EQ(rep.f_max, kPi / 2);
  EXPECT_LE(rep.scal_mismatch, 1e-12);
}

TEST(ClosedSurface, OneSignedTargetIsRejected) {
  auto grid = t2(16);
  try {
    solve_sine_closed(ScalarField(grid, 1.0));
    FAIL() << "accepted one-signed s";
  } catch (const SolverError& e) {
    EXPECT_NE(std::string(e.what()).find("total scalar curvature zero"), std::string::npos);
  }
  auto negative = random_trig_field(grid, -2.0, 0.5, 1);
  EXPECT_THROW(solve_sine_closed(negative), SolverError);
}

TEST(ClosedSurface, SeedTargetConvergesInOneStep) {
  auto grid = t2(64);
  auto u0 = sample(grid, [](std::span<const double> x) { return kPi / 2 + std::sin(2 * kPi * x[0]); });
  ScalarField lap(grid, 0.0);
  for (int a = 0; a < 2; ++a) lap += partial(partial(u0, a, Scheme::spectral), a, Scheme::spectral);
  auto s0 = 2.0 * lap / map(u0, [](double x) { return std::sin(x); });
  auto rep = solve_sine_closed(s0);
  ASSERT_TRUE(rep.converged);
  EXPECT_EQ(rep.trace.size(), 1u);
  EXPECT_LE(rep.residual, 1e-10);
  EXPECT_NEAR(rep.scale, 1.0, 1e-12);
  EXPECT_LE(sup_diff(rep.f, u0), 1e-10);
}

TEST(ClosedSurface, SeedSatisfiesInvertibilitySign) {
  auto grid = t2(64);
  auto u0 = sample(grid, [](std::span<const double> x) { return kPi / 2 + std::sin(2 * kPi * x[0]); });
  ScalarField lap(grid, 0.0);
  for (int a = 0; a < 2; ++a) lap += partial(partial(u0, a, Scheme::spectral), a, Scheme::spectral);
  auto w = lap * map(u0, [](double x) { return std::cos(x) / std::sin(x); });
  EXPECT_GE(min_value(w), -1e-9);
  int zeros = 0;
  for (std::size_t p = 0; p < w.size(); ++p) zeros += std::abs(w[p]) < 1e-9;
  EXPECT_LE(zeros, 2 * 64);
}

TEST(ClosedSurface, SignChangingTargetConvergesWithZeroTotalCurvature) {
  auto grid = t2(64);
  auto s = sample(grid, [](std::span<const double> x) { return std::sin(2 * kPi * x[1]); });
  auto rep = solve_sine_closed(s);
  ASSERT_TRUE(rep.converged) << rep.message;
  EXPECT_LE(rep.residual, 1e-10);
  EXPECT_GT(rep.f_min, 0.0);
  EXPECT_LT(rep.f_max, kPi);
  EXPECT_LE(rep.gauss_bonnet, 1e-8);
  EXPECT_LE(rep.scal_mismatch, 1e-8);
  EXPECT_LE(sup_diff(scal_oracle(*rep.h, Scheme::spectral), s), 1e-8);
}

TEST(ClosedSurface, PulledBackTargetIsRealisedOnTheMovedTorus) {
  auto grid = t2(48);
  auto s = sample(grid, [](std::span<const double> x) { return std::sin(2 * kPi * x[1]) + 0.3 * std::cos(2 * kPi * x[0]); });
  TorusDiffeo phi(2);
  phi.translate({0.2, 0.1});
  auto rep = solve_sine_closed(s, phi);
  ASSERT_TRUE(rep.converged) << rep.message;
  EXPECT_LE(sup_diff(scal_oracle(*rep.h, Scheme::spectral), pullback(s, phi)), 1e-8);
}

TEST(BoundarySurface, ZeroTargetGivesConstantAngle) {
  auto grid = make_annulus({17, 16}, {2, 1});
  auto rep = solve_sine_boundary(ScalarField(grid, 0.0));
  ASSERT_TRUE(rep.converged);
  EXPECT_NEAR(rep.f_min, kPi / 2, 1e-14);
  EXPECT_NEAR(rep.f_max, kPi / 2, 1e-14);
  EXPECT_EQ(sine_energy(ScalarField(grid, 0.0), ScalarField(grid, 1.0)), 0.0);
}

TEST(BoundarySurface, OneSignedTargetIsRealisedWithDescendingEnergy) {
  auto grid = make_annulus({49, 48}, {2, 1});
  ScalarField s(grid, 1.0);
  auto rep = solve_sine_boundary(s);
  ASSERT_TRUE(rep.converged);
  EXPECT_LE(rep.scale, 1.0);
  EXPECT_LE(rep.residual, 1e-10);
  double last = HUGE_VAL;
  for (const auto& e : rep.trace)
    if (e.stage == "descent") {
      if (e.iteration > 0) EXPECT_LE(e.residual, last);
      last = e.residual;
    }
  auto scal = scal_oracle(*rep.h, Scheme::fd4);
  double worst = 0;
  for (std::size_t p = 0; p < scal.size(); ++p) {
    const int i = grid->index_along(p, 0);
    if (i >= 12 && i <= 36) worst = std::max(worst, std::abs(scal[p] - 1.0));
  }
  EXPECT_LE(worst, 1e-6);
  for (std::size_t p = 0; p < rep.f.size(); ++p) {
    const int i = grid->index_along(p, 0);
    if (i == 0 || i == 48) EXPECT_EQ(rep.f[p], kPi / 2);
  }
}

TEST(BoundarySurface, LargeTargetTriggersShrink) {
  auto grid = make_annulus({25, 24}, {2, 1});
  auto rep = solve_sine_boundary(ScalarField(grid, 400.0));
  ASSERT_TRUE(rep.converged);
  EXPECT_LT(rep.scale, 1.0);
  EXPECT_LT(rep.f_max - rep.f_min, kPi / 2);
  bool shrunk = false;
  for (const auto& e : rep.trace) shrunk = shrunk || e.stage == "shrink";
  EXPECT_TRUE(shrunk);
}

TEST(BoundarySurface, NeedsAnAnnulus) {
  EXPECT_THROW(solve_sine_boundary(ScalarField(t2(8), 1.0)), std::invalid_argument);
}
