#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "curvforge/convergence.hpp"
#include "curvforge/geometry.hpp"
#include "curvforge/presets.hpp"

using namespace curvforge;
constexpr double kPi = std::numbers::pi;

namespace {

GridPtr t3(int n) { return make_torus(3, {n, n, n}, {1, 1, 1}); }

MetricField conformal_flat(const ScalarField& kappa) {
  MatrixField m(kappa.grid());
  const ScalarField c = 1.0 / (kappa * kappa);
  for (int i = 0; i < m.n; ++i) m(i, i) = c;
  return make_metric(std::move(m));
}

double max_diff(const ScalarField& a, const ScalarField& b) { return max_abs(a - b); }

}  // namespace

TEST(MetricIndex, Examples) {
  EXPECT_EQ(metric_index(flat_metric(t3(8)).m), 0);
  auto g4 = make_torus(4, {8, 8, 8, 8}, {1, 1, 1, 1});
  std::vector<double> e(16, 0.0);
  e[0] = -1;
  e[5] = e[10] = e[15] = 1;
  EXPECT_EQ(constant_metric(g4, e).index, 1);
}

TEST(MetricIndex, RejectsDegenerateAndVaryingIndex) {
  auto g = make_torus(2, {8, 8}, {1, 1});
  EXPECT_THROW(constant_metric(g, {1, 0, 0, 0}), GeometryError);
  MatrixField m(g);
  m(0, 0) = sample(g, [](auto x) { return x[0] < 0.5 ? 1.0 : -1.0; });
  m(1, 1) = ScalarField(g, 1.0);
  EXPECT_THROW(make_metric(m), GeometryError);
}

TEST(OrthogonalComplement, Examples) {
  auto g = make_torus(2, {8, 8}, {1, 1});
  auto V = coordinate_distribution(g, 1);
  auto H = orthogonal_complement(flat_metric(g), V);
  ASSERT_EQ(H.rank(), 1);
  EXPECT_LE(max_abs(H.spans[0].c[0]), 1e-15);
  EXPECT_GT(min_value(map(H.spans[0].c[1], [](double v) { return std::abs(v); })), 0.5);
  auto lor = constant_metric(g, {-1, 0, 0, 1});
  auto H2 = orthogonal_complement(lor, V);
  EXPECT_LE(max_abs(H2.spans[0].c[0]), 1e-15);
}

TEST(OrthogonalComplement, ContactPlaneNormalMatchesNullSpace) {
  auto grid = t3(12);
  auto V = preset_distribution(PresetKind::contact3, grid);
  auto g = perturbed_flat_metric(grid, 0.2, 7);
  auto H = orthogonal_complement(g, V);
  ASSERT_EQ(H.rank(), 1);
  for (const auto& v : V.spans) EXPECT_LE(max_abs(inner(g, v, H.spans[0])), 1e-10);
  auto Hf = orthogonal_complement(flat_metric(grid), V);
  // flat normal is proportional to (cos, -sin, 0)
  auto expect = sample(grid, [](auto x) { return std::cos(2 * kPi * x[2]); });
  auto expect1 = sample(grid, [](auto x) { return -std::sin(2 * kPi * x[2]); });
  const double s = Hf.spans[0].c[0][0] / expect[0];
  EXPECT_LE(max_diff(Hf.spans[0].c[0], s * expect), 1e-12);
  EXPECT_LE(max_diff(Hf.spans[0].c[1], s * expect1), 1e-12);
}

TEST(Orthonormalize, FlatAndLorentzAndStretched) {
  auto grid = make_torus(2, {8, 8}, {1, 1});
  auto V = coordinate_distribution(grid, 1);
  Distribution W{grid, {coordinate_vector(grid, 1)}};
  auto f = orthonormalize(flat_metric(grid), V, W);
  EXPECT_EQ(f.eps, (std::vector<int>{1, 1}));
  auto lf = orthonormalize(constant_metric(grid, {-1, 0, 0, 1}), V, W);
  EXPECT_EQ(lf.eps, (std::vector<int>{-1, 1}));
  auto fx = sample(grid, [](auto x) { return 2 + std::sin(2 * kPi * x[1]); });
  MatrixField m(grid);
  m(0, 0) = 1.0 / (fx * fx);
  m(1, 1) = ScalarField(grid, 1.0);
  auto sf = orthonormalize(make_metric(m), V, W);
  EXPECT_LE(max_diff(sf.e[0].c[0], fx), 1e-14);
  EXPECT_LE(max_abs(sf.e[1].c[0]), 1e-15);
}

TEST(Orthonormalize, RejectsLightlike) {
  auto grid = make_torus(2, {8, 8}, {1, 1});
  VectorField null(grid);
  null.c[0] = ScalarField(grid, 1.0);
  null.c[1] = ScalarField(grid, 1.0);
  Distribution V{grid, {null}};
  Distribution W{grid, {coordinate_vector(grid, 1)}};
  EXPECT_THROW(orthonormalize(constant_metric(grid, {-1, 0, 0, 1}), V, W), GeometryError);
}

TEST(CoordChristoffel, ConstantMetricAndConformalFactor) {
  auto grid = make_torus(2, {8, 8}, {1, 1});
  auto cc = coord_christoffel(constant_metric(grid, {2, 0.3, 0.3, 1}), Scheme::fd4);
  for (const auto& f : cc.data) EXPECT_LE(max_abs(f), 1e-14);

  // g = kappa^{-2} delta with kappa = e^x, i.e. e^{2 phi} delta with phi = -x.
  auto ann = make_annulus({33, 16}, {1, 1});
  auto g = conformal_flat(sample(ann, [](auto x) { return std::exp(x[0]); }));
  auto c = coord_christoffel(g, Scheme::fd4);
  const double dphi[2] = {-1.0, 0.0};
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        const double expect = (i == k) * dphi[j] + (j == k) * dphi[i] - (i == j) * dphi[k];
        EXPECT_LE(max_abs(c(k, i, j) - expect), 2e-5);
      }
}

TEST(CoordChristoffel, WarpedProduct) {
  // dt^2 + w(t)^2 dy^2 on T^2: Gamma^t_yy = -w w', Gamma^y_ty = w'/w.
  auto grid = make_torus(2, {32, 32}, {1, 1});
  auto w = sample(grid, [](auto x) { return 1.5 + 0.5 * std::sin(2 * kPi * x[0]); });
  auto dw = sample(grid, [](auto x) { return kPi * std::cos(2 * kPi * x[0]); });
  MatrixField m(grid);
  m(0, 0) = ScalarField(grid, 1.0);
  m(1, 1) = w * w;
  auto c = coord_christoffel(make_metric(m), Scheme::spectral);
  EXPECT_LE(max_diff(c(0, 1, 1), -1.0 * w * dw), 1e-11);
  EXPECT_LE(max_diff(c(1, 0, 1), dw / w), 1e-11);
  EXPECT_LE(max_abs(c(0, 0, 0)), 1e-12);
}

TEST(ScalOracle, FlatIsZero) {
  EXPECT_LE(max_abs(scal_oracle(flat_metric(t3(8)), Scheme::fd4)), 1e-10);
}

TEST(ScalOracle, ConformalLawConvergesAtFourthOrder) {
  std::vector<int> sizes{32, 48, 64};
  std::vector<double> err;
  for (int n : sizes) {
    auto grid = make_torus(2, {n, n}, {1, 1});
    auto kappa = sample(grid, [](auto x) { return std::exp(std::sin(2 * kPi * x[0])); });
    auto dk = sample(grid, [](auto x) { return 2 * kPi * std::cos(2 * kPi * x[0]) * std::exp(std::sin(2 * kPi * x[0])); });
    auto lap = sample(grid, [](auto x) {
      const double s = std::sin(2 * kPi * x[0]), c = std::cos(2 * kPi * x[0]);
      return 4 * kPi * kPi * (c * c - s) * std::exp(s);
    });
    auto predicted = 2.0 * kappa * lap - 2.0 * dk * dk;
    err.push_back(max_diff(scal_oracle(conformal_flat(kappa), Scheme::fd4), predicted));
  }
  auto r = judge_order(sizes, err, 3.5, 100.0);
  EXPECT_TRUE(r.pass) << "order " << r.order;
}

TEST(ScalOracle, SphereLikeWarpedProductCurvature) {
  // dt^2 + w^2 dy^2 has scal = -2 w''/w.
  auto grid = make_torus(2, {48, 48}, {1, 1});
  auto w = sample(grid, [](auto x) { return 1.5 + 0.5 * std::sin(2 * kPi * x[0]); });
  auto ddw = sample(grid, [](auto x) { return -2 * kPi * kPi * std::sin(2 * kPi * x[0]); });
  MatrixField m(grid);
  m(0, 0) = ScalarField(grid, 1.0);
  m(1, 1) = w * w;
  EXPECT_LE(max_diff(scal_oracle(make_metric(m), Scheme::spectral), -2.0 * ddw / w), 1e-9);
}

TEST(OnChristoffel, FlatIdentityFrameIsZero) {
  auto grid = t3(8);
  auto g = flat_metric(grid);
  auto f = orthonormalize(g, coordinate_distribution(grid, 1),
                          Distribution{grid, {coordinate_vector(grid, 1), coordinate_vector(grid, 2)}});
  for (auto m : {ChristoffelMethod::covariant, ChristoffelMethod::koszul})
    for (const auto& G : on_christoffel(g, f, m, Scheme::fd4).G) EXPECT_LE(max_abs(G), 1e-14);
}

TEST(OnChristoffel, RotatingFrame) {
  auto grid = make_torus(2, {32, 32}, {1, 1});
  auto th = coordinate_field(grid, 0) * (2 * kPi);
  auto c = map(th, [](double t) { return std::cos(t); });
  auto s = map(th, [](double t) { return std::sin(t); });
  Distribution V{grid, {VectorField(grid, {c, s})}};
  Distribution W{grid, {VectorField(grid, {-1.0 * s, c})}};
  auto g = flat_metric(grid);
  auto f = orthonormalize(g, V, W);
  auto cov = on_christoffel(g, f, ChristoffelMethod::covariant, Scheme::spectral);
  auto kos = on_christoffel(g, f, ChristoffelMethod::koszul, Scheme::spectral);
  EXPECT_LE(max_diff(cov(0, 0, 1), 2 * kPi * c), 1e-11);
  EXPECT_LE(max_diff(cov(1, 0, 1), -2 * kPi * s), 1e-11);
  for (std::size_t k = 0; k < cov.G.size(); ++k) EXPECT_LE(max_diff(cov.G[k], kos.G[k]), 1e-11);
  EXPECT_LE(antisymmetry_defect(cov), 1e-12);
}

TEST(OnChristoffel, CovariantAndKoszulAgreeAtFourthOrder) {
  std::vector<int> sizes{16, 24, 32};
  std::vector<double> err;
  for (int n : sizes) {
    auto grid = t3(n);
    auto g = perturbed_flat_metric(grid, 0.2, 3);
    FrameGeometry geo(g, preset_distribution(PresetKind::contact3, grid), Scheme::fd4);
    auto k = geo.koszul();
    double e = 0.0;
    for (std::size_t i = 0; i < k.G.size(); ++i) e = std::max(e, max_diff(k.G[i], geo.gamma().G[i]));
    err.push_back(e);
  }
  auto r = judge_order(sizes, err, 3.5, 10.0);
  EXPECT_TRUE(r.pass) << "order " << r.order << " finest " << err.back();
}

TEST(SubDivergence, Examples) {
  auto grid = make_torus(2, {32, 32}, {1, 1});
  auto g = flat_metric(grid);
  FrameGeometry geo(g, coordinate_distribution(grid, 1), Scheme::spectral);
  VectorField X(grid);
  X.c[0] = sample(grid, [](auto x) { return std::sin(2 * kPi * x[0]); });
  auto expect = sample(grid, [](auto x) { return 2 * kPi * std::cos(2 * kPi * x[0]); });
  EXPECT_LE(max_diff(sub_divergence(geo, Part::full, X), expect), 1e-11);
  EXPECT_LE(max_abs(sub_divergence(geo, Part::V, coordinate_vector(grid, 1))), 1e-14);
}

TEST(SubDivergence, FrameLegAndProductRule) {
  auto grid = t3(40);
  auto g = perturbed_flat_metric(grid, 0.2, 11);
  FrameGeometry geo(g, preset_distribution(PresetKind::contact3, grid), Scheme::spectral);
  for (Part U : {Part::V, Part::H})
    for (int j = 0; j < 3; ++j)
      EXPECT_LE(max_diff(geo.divergence(U, geo.frame().e[j]), geo.div_leg(U, j)), 1e-8);
  auto h = random_trig_field(grid, 0.0, 1.0, 5);
  VectorField X(grid);
  for (int a = 0; a < 3; ++a) X.c[a] = random_trig_field(grid, 0.0, 1.0, 20 + a);
  VectorField hX(grid);
  for (int a = 0; a < 3; ++a) hX.c[a] = h * X.c[a];
  for (Part U : {Part::V, Part::H}) {
    // dh(pr^U X) = sum_{i:U} eps_i g(X, e_i) e_i(h)
    ScalarField dh_pr(grid);
    for (int i = 0; i < 3; ++i)
      if (geo.in(U, i)) dh_pr += static_cast<double>(geo.eps(i)) * inner(g, X, geo.frame().e[i]) * geo.along(i, h);
    EXPECT_LE(max_diff(geo.divergence(U, hX), h * geo.divergence(U, X) + dh_pr), 1e-8);
  }
}

TEST(SubLaplacian, FlatCoordinateSplit) {
  auto grid = make_torus(2, {32, 32}, {1, 1});
  FrameGeometry geo(flat_metric(grid), coordinate_distribution(grid, 1), Scheme::spectral);
  auto f = sample(grid, [](auto x) { return std::sin(2 * kPi * x[0]) * std::cos(4 * kPi * x[1]); });
  EXPECT_LE(max_diff(sub_laplacian(geo, f, Part::V, Part::V), -4 * kPi * kPi * f), 1e-9);
}

TEST(SubLaplacian, SplitAndFirstOrderRule) {
  auto grid = t3(40);
  auto g = perturbed_flat_metric(grid, 0.2, 4);
  FrameGeometry geo(g, preset_distribution(PresetKind::contact3, grid), Scheme::spectral);
  auto f = random_trig_field(grid, 0.0, 1.0, 9);
  auto full = geo.laplacian(f, Part::full, Part::full);
  EXPECT_LE(max_diff(full, geo.laplacian(f, Part::V, Part::full) + geo.laplacian(f, Part::H, Part::full)), 1e-9);
  EXPECT_LE(max_diff(geo.laplacian(f, Part::V, Part::H), geo.pair_div(Part::V, f, Part::H)), 1e-9);
  // full/full equals the coordinate Laplace-Beltrami operator
  const MatrixField gi = inverse(g.m);
  const ScalarField rho = metric_density(g);
  ScalarField lb(grid);
  for (int a = 0; a < 3; ++a) {
    ScalarField flux(grid);
    for (int b = 0; b < 3; ++b) flux += rho * gi(a, b) * partial(f, b, Scheme::spectral);
    lb += partial(flux, a, Scheme::spectral);
  }
  EXPECT_LE(max_diff(full, lb / rho), 1e-8);
}

TEST(SubLaplacian, ChainAndProductRules) {
  auto grid = t3(40);
  auto g = perturbed_flat_metric(grid, 0.2, 8);
  FrameGeometry geo(g, preset_distribution(PresetKind::contact3, grid), Scheme::spectral);
  auto f0 = random_trig_field(grid, 0.0, 1.0, 31), f1 = random_trig_field(grid, 0.0, 1.0, 32);
  for (Part U : {Part::V, Part::H, Part::full})
    for (Part W : {Part::V, Part::H, Part::full}) {
      Part both = U == Part::full ? W : (W == Part::full ? U : (U == W ? U : Part::none));
      auto cube = f0 * f0 * f0;
      auto chain = 3.0 * f0 * f0 * geo.laplacian(f0, U, W) + 6.0 * f0 * geo.pair_d(f0, f0, both);
      EXPECT_LE(max_diff(geo.laplacian(cube, U, W), chain), 1e-8);
      auto prod = f0 * geo.laplacian(f1, U, W) + f1 * geo.laplacian(f0, U, W) + 2.0 * geo.pair_d(f0, f1, both);
      EXPECT_LE(max_diff(geo.laplacian(f0 * f1, U, W), prod), 1e-8);
    }
}

TEST(DistributionScalars, FlatCoordinateIsZero) {
  auto grid = t3(8);
  auto d = distribution_scalars(flat_metric(grid), coordinate_distribution(grid, 2), Scheme::fd4);
  for (const ScalarField* f : {&d.sigma_V, &d.tau_V, &d.sigma_H, &d.tau_H, &d.qual_V, &d.qual_H, &d.scal_VV,
                               &d.scal_HH, &d.scal_VH, &d.xi, &d.chi, &d.twist2_V, &d.twist2_H})
    EXPECT_LE(max_abs(*f), 1e-14);
}

TEST(DistributionScalars, ContactPlaneIsTwisted) {
  auto grid = t3(16);
  auto split = preset_split(PresetKind::contact3, flat_metric(grid), true);
  FrameGeometry geo(flat_metric(grid), split.V, split.W, Scheme::spectral);
  auto d = distribution_scalars(geo);
  EXPECT_GT(min_value(d.twist2_H), 0.0);
  EXPECT_LE(max_abs(d.twist2_V), 1e-14);
  EXPECT_LE(max_diff(d.twist2_H, d.twist2_H_from_gamma), 1e-10);
}

namespace {
struct WebErrors {
  double decomposition = 0, qual_pair = 0, twist = 0, positivity = 0, line = 0;
};

WebErrors consistency_web(int n, Scheme scheme, bool normal) {
  auto grid = t3(n);
  auto g = perturbed_flat_metric(grid, 0.2, 21);
  auto split = preset_split(PresetKind::contact3, g, normal);
  FrameGeometry geo(g, split.V, split.W, scheme);
  auto d = distribution_scalars(geo);
  WebErrors e;
  e.decomposition = max_diff(scal_oracle(g, scheme), d.scal);
  e.qual_pair = max_diff(d.scal_VH, -1.0 * (d.qual_V + d.qual_H));
  e.twist = std::max(max_diff(d.twist2_H, d.twist2_H_from_gamma), max_diff(d.twist2_V, d.twist2_V_from_gamma));
  e.positivity = std::max(0.0, -min_value(d.sigma_H - map(d.tau_H, [](double v) { return std::abs(v); })));
  if (normal) {
    auto l = line_distribution_scalars(geo);
    e.line = std::max({max_diff(d.sigma_V, d.tau_V), max_diff(d.sigma_V, d.divV_divV_H), max_diff(d.sigma_V, l.accel_sq),
                       max_abs(d.scal_VV), max_diff(d.qual_V, static_cast<double>(l.eps) * l.d_div + d.sigma_V),
                       max_diff(d.xi, 2.0 * l.eps * l.d_div + static_cast<double>(l.eps) * l.div_sq +
                                          0.5 * (d.sigma_H + d.tau_H))});
  }
  return e;
}
}  // namespace

TEST(ConsistencyWeb, SpectralNodeWise) {
  for (bool normal : {true, false}) {
    auto e = consistency_web(40, Scheme::spectral, normal);
    EXPECT_LE(e.decomposition, 1e-7);
    EXPECT_LE(e.qual_pair, 1e-7);
    EXPECT_LE(e.twist, 1e-8);
    EXPECT_LE(e.positivity, 1e-10);
    EXPECT_LE(e.line, 1e-8);
  }
}

TEST(ConsistencyWeb, Fd4DecompositionOrder) {
  std::vector<int> sizes{16, 24, 32};
  std::vector<double> dec, qp;
  for (int n : sizes) {
    auto e = consistency_web(n, Scheme::fd4, true);
    dec.push_back(e.decomposition);
    qp.push_back(e.qual_pair);
  }
  EXPECT_TRUE(judge_order(sizes, dec, 3.5, 100).pass) << judge_order(sizes, dec, 3.5, 100).order;
  EXPECT_TRUE(judge_order(sizes, qp, 3.5, 100).pass) << judge_order(sizes, qp, 3.5, 100).order;
}

TEST(LineScalars, Examples) {
  auto grid = make_torus(2, {32, 32}, {1, 1});
  auto l = line_distribution_scalars(flat_metric(grid), coordinate_distribution(grid, 1), Scheme::spectral);
  EXPECT_EQ(l.eps, 1);
  EXPECT_LE(max_abs(l.d_div) + max_abs(l.div_sq) + max_abs(l.accel_sq), 1e-13);
  auto lor = constant_metric(grid, {-1, 0, 0, 1});
  EXPECT_EQ(line_distribution_scalars(lor, coordinate_distribution(grid, 1), Scheme::spectral).eps, -1);
}

TEST(LineScalars, TiltedLineMatchesHandDerivation) {
  // V spanned by X = d_x + s(y) d_y, unit field e = X / r with r = sqrt(1 + s^2).
  // div e = d_y(s / r) and nabla_e e = (1/r) d_x e + (s/r) d_y e.
  auto grid = make_torus(2, {48, 48}, {1, 1});
  auto s = sample(grid, [](auto x) { return 0.5 * std::sin(2 * kPi * x[1]); });
  VectorField X(grid);
  X.c[0] = ScalarField(grid, 1.0);
  X.c[1] = s;
  auto l = line_distribution_scalars(flat_metric(grid), Distribution{grid, {X}}, Scheme::spectral);
  auto div = sample(grid, [](auto x) {
    const double sv = 0.5 * std::sin(2 * kPi * x[1]), ds = kPi * std::cos(2 * kPi * x[1]);
    return ds / std::pow(1 + sv * sv, 1.5);
  });
  auto ax = sample(grid, [](auto x) {
    const double sv = 0.5 * std::sin(2 * kPi * x[1]), ds = kPi * std::cos(2 * kPi * x[1]);
    return -sv * sv * ds / ((1 + sv * sv) * (1 + sv * sv));
  });
  auto ay = sample(grid, [](auto x) {
    const double sv = 0.5 * std::sin(2 * kPi * x[1]), ds = kPi * std::cos(2 * kPi * x[1]);
    return sv * ds / ((1 + sv * sv) * (1 + sv * sv));
  });
  EXPECT_LE(max_diff(l.div_sq, div * div), 1e-9);
  EXPECT_LE(max_diff(l.accel.c[0], ax), 1e-9);
  EXPECT_LE(max_diff(l.accel.c[1], ay), 1e-9);
  auto r = sample(grid, [](auto x) { return std::sqrt(1 + std::pow(0.5 * std::sin(2 * kPi * x[1]), 2)); });
  auto d_div = (s / r) * partial(div, 1, Scheme::spectral);
  EXPECT_LE(max_diff(l.d_div, d_div), 1e-8);
}

TEST(Foliation, FlatAndCurveLeaves) {
  auto grid = make_torus(2, {16, 16}, {1, 1});
  Distribution H{grid, {coordinate_vector(grid, 1)}};
  EXPECT_LE(max_abs(foliation_scal(flat_metric(grid), H, Scheme::spectral)), 1e-12);
  auto f = sample(grid, [](auto x) { return 2 + std::sin(2 * kPi * (x[0] + x[1])); });
  MatrixField m(grid);
  m(0, 0) = 1.0 / (f * f);
  m(1, 1) = ScalarField(grid, 1.0);
  EXPECT_LE(max_abs(foliation_scal(make_metric(m), H, Scheme::spectral)), 1e-12);
}

TEST(Foliation, ProductLeavesCarryFactorCurvature) {
  // g = dt^2 + k(x,y)^{-2}(dx^2 + dy^2) on T^3, leaves are the (x, y) planes.
  auto grid = make_torus(3, {8, 32, 32}, {1, 1, 1});
  auto kap = sample(grid, [](auto x) { return std::exp(0.3 * std::sin(2 * kPi * x[1]) * std::cos(2 * kPi * x[2])); });
  MatrixField m(grid);
  m(0, 0) = ScalarField(grid, 1.0);
  m(1, 1) = 1.0 / (kap * kap);
  m(2, 2) = 1.0 / (kap * kap);
  Distribution H{grid, {coordinate_vector(grid, 1), coordinate_vector(grid, 2)}};
  auto leaf = foliation_scal(make_metric(m), H, Scheme::spectral);
  auto g2 = make_torus(2, {32, 32}, {1, 1});
  auto k2 = sample(g2, [](auto x) { return std::exp(0.3 * std::sin(2 * kPi * x[0]) * std::cos(2 * kPi * x[1])); });
  auto ref = scal_oracle(conformal_flat(k2), Scheme::spectral);
  double e = 0.0;
  for (std::size_t p = 0; p < grid->nodes; ++p) e = std::max(e, std::abs(leaf[p] - ref[p % g2->nodes]));
  EXPECT_LE(e, 1e-8);
}

TEST(Foliation, RejectsTwisted) {
  auto grid = t3(12);
  EXPECT_THROW(foliation_scal(flat_metric(grid), preset_distribution(PresetKind::contact3, grid), Scheme::spectral),
               GeometryError);
}

TEST(IntegrationIdentities, SpectralResiduals) {
  auto grid = t3(48);
  auto g = perturbed_flat_metric(grid, 0.2, 2);
  auto split = preset_split(PresetKind::contact3, g, true);
  auto f = random_trig_field(grid, 0, 1, 41), h = random_trig_field(grid, 0, 1, 42),
       u = random_trig_field(grid, 0, 1, 43);
  FrameGeometry geo(g, split.V, split.W, Scheme::spectral);
  auto r = integration_identity_residuals(geo, f, h, u);
  EXPECT_LE(r[0], 1e-6);
  EXPECT_LE(r[1], 1e-6);
  auto z = integration_identity_residuals(geo, f, ScalarField(grid), ScalarField(grid));
  EXPECT_EQ(z[0], 0.0);
  EXPECT_EQ(z[1], 0.0);
}
