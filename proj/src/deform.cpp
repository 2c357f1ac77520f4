#include "curvforge/deform.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace curvforge {

namespace {

using NodeMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 8, 8>;

void require_positive(const ScalarField& f, const char* what) {
  if (!(min_value(f) > kPositivityTol)) throw GeometryError(std::string(what) + " must be positive at every node");
}

// Returns g + (factor - 1) * g(.V, .V), factor given per node.
MatrixField rescale_along(const MetricField& g, const Distribution& V, const std::vector<double>& factor) {
  const int n = g.dim(), q = V.rank();
  MatrixField out = g.m;
  if (q == 0) return out;
  for (std::size_t p = 0; p < g.grid()->nodes; ++p) {
    NodeMatrix G(n, n), B(n, q);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) G(i, j) = g(i, j)[p];
    for (int j = 0; j < q; ++j)
      for (int a = 0; a < n; ++a) B(a, j) = V.spans[j].c[a][p];
    const NodeMatrix GB = G * B;
    const NodeMatrix gram = B.transpose() * GB;
    Eigen::FullPivLU<NodeMatrix> lu(gram);
    if (!lu.isInvertible()) throw GeometryError("V not g-good: metric restricted to V is degenerate");
    const NodeMatrix Q = GB * lu.solve(GB.transpose());
    const double c = factor[p] - 1.0;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        const double v = G(i, j) + c * 0.5 * (Q(i, j) + Q(j, i));
        out(i, j)[p] = v;
        out(j, i)[p] = v;
      }
  }
  return out;
}

struct Base {
  int n, q;
  DistributionScalars d;
};

Base base_of(const FrameGeometry& geo) { return {geo.dim(), geo.q(), distribution_scalars(geo)}; }

}  // namespace

MetricField switch_metric(const MetricField& g, const Distribution& V) {
  return make_metric(rescale_along(g, V, std::vector<double>(g.grid()->nodes, -1.0)));
}

MetricField stretch(const MetricField& g, const ScalarField& f, const Distribution& V) {
  require_positive(f, "stretch factor");
  std::vector<double> factor(f.size());
  for (std::size_t p = 0; p < f.size(); ++p) factor[p] = 1.0 / (f[p] * f[p]);
  MetricField out;
  out.m = rescale_along(g, V, factor);
  out.index = g.index;
  return out;
}

MetricField conform(const MetricField& g, const ScalarField& kappa) {
  require_positive(kappa, "conformal factor");
  MetricField out = g;
  const ScalarField c = 1.0 / (kappa * kappa);
  for (ScalarField& e : out.m.m) e *= c;
  return out;
}

MetricField change(const MetricField& g, const ScalarField& f, const ScalarField& kappa, const Distribution& V) {
  if (g.index != 0) throw GeometryError("change needs a Riemannian base metric");
  return conform(stretch(switch_metric(g, V), f, V), kappa);
}

const ScalarField& lookup(const PredictedQuantities& p, const std::string& name) {
  for (const NamedField& f : p)
    if (f.name == name) return f.field;
  throw std::out_of_range("no quantity named '" + name + "'");
}

const std::vector<std::string>& switch_line_names() {
  static const std::vector<std::string> names{
      "divV_divV_H", "divH_divH_V", "sigma_H",  "sigma_V",       "tau_H",         "tau_V",
      "qual_V",      "qual_H",      "scal_VH",  "scal_VV",       "scal_HH",       "scal",
      "laplace_V_V", "laplace_H_H", "laplace",  "divV_du_H",     "divH_du_V"};
  return names;
}

const std::vector<std::string>& stretch_line_names() { return switch_line_names(); }

PredictedQuantities measured_switch_quantities(const FrameGeometry& geo, const ScalarField& u) {
  const DistributionScalars d = distribution_scalars(geo);
  return {{"divV_divV_H", d.divV_divV_H},
          {"divH_divH_V", d.divH_divH_V},
          {"sigma_H", d.sigma_H},
          {"sigma_V", d.sigma_V},
          {"tau_H", d.tau_H},
          {"tau_V", d.tau_V},
          {"qual_V", d.qual_V},
          {"qual_H", d.qual_H},
          {"scal_VH", d.scal_VH},
          {"scal_VV", d.scal_VV},
          {"scal_HH", d.scal_HH},
          {"scal", d.scal},
          {"laplace_V_V", geo.laplacian(u, Part::V, Part::V)},
          {"laplace_H_H", geo.laplacian(u, Part::H, Part::H)},
          {"laplace", geo.laplacian(u, Part::full, Part::full)},
          {"divV_du_H", geo.pair_div(Part::V, u, Part::H)},
          {"divH_du_V", geo.pair_div(Part::H, u, Part::V)}};
}

PredictedQuantities measured_stretch_quantities(const FrameGeometry& geo, const ScalarField& u) {
  return measured_switch_quantities(geo, u);
}

PredictedQuantities predict_switch(const FrameGeometry& geo, const ScalarField& u) {
  if (geo.metric().index != 0) throw GeometryError("switch formulas need a Riemannian base metric");
  const DistributionScalars d = distribution_scalars(geo);
  const ScalarField lapV = geo.laplacian(u, Part::V, Part::V);
  const ScalarField divH_du = geo.pair_div(Part::H, u, Part::V);
  return {
      {"divV_divV_H", d.divV_divV_H},
      {"divH_divH_V", -d.divH_divH_V},
      {"sigma_H", -d.sigma_H},
      {"sigma_V", d.sigma_V},
      {"tau_H", -d.tau_H},
      {"tau_V", d.tau_V},
      {"qual_V", -d.qual_V + 2.0 * d.tau_V},
      {"qual_H", d.qual_H - 2.0 * d.tau_H},
      {"scal_VH", d.scal_VH + 2.0 * d.qual_V - 2.0 * d.tau_V + 2.0 * d.tau_H},
      {"scal_VV", -d.scal_VV - 2.0 * d.divV_divV_H + 4.0 * d.tau_V - 2.0 * d.sigma_V},
      {"scal_HH", d.scal_HH + 2.0 * d.divH_divH_V + 2.0 * d.sigma_H - 4.0 * d.tau_H},
      {"scal", d.scal - 2.0 * d.scal_VV + 4.0 * d.qual_V - 2.0 * d.divV_divV_H + 2.0 * d.divH_divH_V -
                   2.0 * d.sigma_V + 2.0 * d.sigma_H},
      {"laplace_V_V", -lapV},
      {"laplace_H_H", geo.laplacian(u, Part::H, Part::H)},
      {"laplace", geo.laplacian(u, Part::full, Part::full) - 2.0 * lapV - 2.0 * divH_du},
      {"divV_du_H", geo.pair_div(Part::V, u, Part::H)},
      {"divH_du_V", -divH_du}};
}

PredictedQuantities predict_stretch(const FrameGeometry& geo, const ScalarField& f, const ScalarField& u) {
  require_positive(f, "stretch factor");
  const Base b = base_of(geo);
  const DistributionScalars& d = b.d;
  const double q = b.q;
  const ScalarField f2 = f * f;
  const ScalarField f4 = f2 * f2;
  const ScalarField one_m = 1.0 - f2;  // 1 - f^2
  const ScalarField one_p = 1.0 + f2;  // 1 + f^2
  const ScalarField dfdf_H = geo.pair_d(f, f, Part::H);
  const ScalarField dfdf_V = geo.pair_d(f, f, Part::V);
  const ScalarField divV_df = geo.pair_div(Part::V, f, Part::H);
  const ScalarField divH_df = geo.pair_div(Part::H, f, Part::V);
  const ScalarField lapVV_f = geo.laplacian(f, Part::V, Part::V);
  const ScalarField lapHH_f = geo.laplacian(f, Part::H, Part::H);
  const ScalarField lapVV_u = geo.laplacian(u, Part::V, Part::V);
  const ScalarField lapHH_u = geo.laplacian(u, Part::H, Part::H);
  const ScalarField dfdu_V = geo.pair_d(f, u, Part::V);
  const ScalarField dfdu_H = geo.pair_d(f, u, Part::H);
  const ScalarField divH_du = geo.pair_div(Part::H, u, Part::V);
  const ScalarField divV_du = geo.pair_div(Part::V, u, Part::H);

  const ScalarField shift_V = (q / f2) * dfdf_H - (2.0 / f) * divV_df;
  const ScalarField lapV = f2 * lapVV_u - (q - 2.0) * f * dfdu_V;
  const ScalarField pairH = f2 * divH_du;
  const ScalarField pairV = divV_du - (q / f) * dfdu_H;

  const ScalarField qualV = f2 * d.qual_V - (q - 2.0) * f * divH_df + 0.5 * one_m * one_m * d.tau_V +
                            0.5 * one_p * one_m * d.sigma_V + shift_V;
  const ScalarField qualH = d.qual_H - (q / f) * lapHH_f + (q / f2) * dfdf_H +
                            one_m * one_m / (2.0 * f2) * d.tau_H - one_p * one_m / (2.0 * f2) * d.sigma_H;
  const ScalarField scalVH = -1.0 * f2 * d.qual_V + (q - 2.0) * f * divH_df - 0.5 * one_m * one_m * d.tau_V -
                             0.5 * one_p * one_m * d.sigma_V - (2.0 * q / f2) * dfdf_H + (2.0 / f) * divV_df -
                             d.qual_H + (q / f) * lapHH_f - one_m * one_m / (2.0 * f2) * d.tau_H +
                             one_m * one_p / (2.0 * f2) * d.sigma_H;
  const ScalarField scalVV = f2 * d.scal_VV + 2.0 * (q - 1.0) * f * lapVV_f - q * (q - 1.0) * dfdf_V -
                             (q * (q - 1.0)) / f2 * dfdf_H + (2.0 * (q - 1.0)) / f * divV_df -
                             one_m * d.divV_divV_H + 0.5 * one_m * (1.0 + 3.0 * f2) * d.sigma_V +
                             0.5 * one_m * (1.0 - 3.0 * f2) * d.tau_V;
  const ScalarField scalHH = d.scal_HH + one_m * d.divH_divH_V - one_m * (3.0 + f2) / (2.0 * f2) * d.sigma_H +
                             one_m * (3.0 - f2) / (2.0 * f2) * d.tau_H;
  const ScalarField scal =
      2.0 * (q - 1.0) * f * lapVV_f + (2.0 * q / f) * lapHH_f - q * (q - 1.0) * dfdf_V -
      (q * (q + 3.0)) / f2 * dfdf_H + 2.0 * (q - 2.0) * f * divH_df + (2.0 * (q + 1.0)) / f * divV_df +
      f2 * (d.scal_VV - 2.0 * d.qual_V) + (d.scal_HH - 2.0 * d.qual_H) +
      one_m * (d.divH_divH_V - d.divV_divV_H) - one_m * one_m / (2.0 * f2) * d.sigma_H +
      one_m * one_p / (2.0 * f2) * d.tau_H - 0.5 * one_m * one_m * d.sigma_V - 0.5 * one_m * one_p * d.tau_V;

  return {{"divV_divV_H", d.divV_divV_H + (q * q) / f2 * dfdf_H - (2.0 * q / f) * divV_df},
          {"divH_divH_V", f2 * d.divH_divH_V},
          {"sigma_H", 0.5 * (f2 + 1.0 / f2) * d.sigma_H + 0.5 * (f2 - 1.0 / f2) * d.tau_H},
          {"sigma_V", 0.5 * (1.0 + f4) * d.sigma_V + 0.5 * (1.0 - f4) * d.tau_V + shift_V},
          {"tau_H", 0.5 * (f2 + 1.0 / f2) * d.tau_H + 0.5 * (f2 - 1.0 / f2) * d.sigma_H},
          {"tau_V", 0.5 * (1.0 + f4) * d.tau_V + 0.5 * (1.0 - f4) * d.sigma_V + shift_V},
          {"qual_V", qualV},
          {"qual_H", qualH},
          {"scal_VH", scalVH},
          {"scal_VV", scalVV},
          {"scal_HH", scalHH},
          {"scal", scal},
          {"laplace_V_V", lapV},
          {"laplace_H_H", lapHH_u},
          {"laplace", lapV + lapHH_u + pairH + pairV},
          {"divV_du_H", pairV},
          {"divH_du_V", pairH}};
}

ScalarField predict_conform_scal(const FrameGeometry& geo, const ScalarField& kappa) {
  require_positive(kappa, "conformal factor");
  const double n = geo.dim();
  const ScalarField scal = geo.scal_block(Part::full, Part::full);
  return 2.0 * (n - 1.0) * kappa * geo.laplacian(kappa, Part::full, Part::full) -
         n * (n - 1.0) * geo.pair_d(kappa, kappa, Part::full) + kappa * kappa * scal;
}

ScalarField predict_change_scal(const FrameGeometry& geo, const ScalarField& f, const ScalarField& kappa) {
  require_positive(f, "stretch factor");
  require_positive(kappa, "conformal factor");
  if (geo.metric().index != 0) throw GeometryError("change formula needs a Riemannian base metric");
  const Base b = base_of(geo);
  const DistributionScalars& d = b.d;
  const double n = b.n, q = b.q;
  const ScalarField& k = kappa;
  const ScalarField k2 = k * k, f2 = f * f;
  ScalarField s = 2.0 * (n - 1.0) * k * geo.laplacian(k, Part::H, Part::H);
  s += (2.0 * q) * k2 / f * geo.laplacian(f, Part::H, Part::H);
  s -= 2.0 * (n - 1.0) * k * f2 * geo.laplacian(k, Part::V, Part::V);
  s -= 2.0 * (q - 1.0) * k2 * f * geo.laplacian(f, Part::V, Part::V);
  s -= n * (n - 1.0) * geo.pair_d(k, k, Part::H);
  s -= q * (q + 3.0) * k2 / f2 * geo.pair_d(f, f, Part::H);
  s -= 2.0 * (n - 1.0) * q * k / f * geo.pair_d(f, k, Part::H);
  s += n * (n - 1.0) * f2 * geo.pair_d(k, k, Part::V);
  s += q * (q - 1.0) * k2 * geo.pair_d(f, f, Part::V);
  s += 2.0 * (n - 1.0) * (q - 2.0) * k * f * geo.pair_d(f, k, Part::V);
  s += 2.0 * (n - 1.0) * k * geo.pair_div(Part::V, k, Part::H);
  s += 2.0 * (q + 1.0) * k2 / f * geo.pair_div(Part::V, f, Part::H);
  s -= 2.0 * (n - 1.0) * k * f2 * geo.pair_div(Part::H, k, Part::V);
  s -= 2.0 * (q - 2.0) * k2 * f * geo.pair_div(Part::H, f, Part::V);
  const ScalarField one_p = 1.0 + f2;
  s += k2 * (one_p * d.xi + one_p / (2.0 * f2) * d.twist_norm_H() - 0.5 * f2 * one_p * d.twist_norm_V() + d.scal);
  return s;
}

std::string to_string(ChiMode m) {
  switch (m) {
    case ChiMode::stretch_v: return "stretch_V";
    case ChiMode::stretch_h: return "stretch_H";
    case ChiMode::conform: return "conform";
  }
  return "";
}

ScalarField predict_chi(const FrameGeometry& geo, const ScalarField& f, ChiMode mode) {
  require_positive(f, "stretch factor");
  const DistributionScalars d = distribution_scalars(geo);
  const double n = geo.dim(), q = geo.q();
  const ScalarField lap = geo.laplacian(f, Part::H, Part::H);
  const ScalarField dfdf = geo.pair_d(f, f, Part::H);
  const ScalarField divdf = geo.pair_div(Part::V, f, Part::H);
  switch (mode) {
    case ChiMode::stretch_v:
      return d.chi + (2.0 * q) / f * lap - (q * (q + 3.0)) / (f * f) * dfdf + (2.0 * (q + 1.0)) / f * divdf;
    case ChiMode::stretch_h:
      return f * f * d.chi + 2.0 * (n - q - 1.0) * f * lap - (n - q) * (n - q - 1.0) * dfdf +
             2.0 * (n - q - 2.0) * f * divdf;
    case ChiMode::conform:
      return f * f * d.chi + 2.0 * (n - 1.0) * f * lap - n * (n - 1.0) * dfdf + 2.0 * (n - 1.0) * f * divdf;
  }
  return d.chi;
}

MetricField chi_target_metric(const FrameGeometry& geo, const ScalarField& f, ChiMode mode) {
  switch (mode) {
    case ChiMode::stretch_v: return stretch(geo.metric(), f, geo.v_distribution());
    case ChiMode::stretch_h: return stretch(geo.metric(), f, geo.h_distribution());
    case ChiMode::conform: return conform(geo.metric(), f);
  }
  return geo.metric();
}

// ---------------------------------------------------------------- coefficients

CoefficientTable::CoefficientTable(int n, int q) : n_(n), q_(q) {
  if (n < 2 || q < 0 || q > n) throw std::invalid_argument("coefficient table needs n >= 2 and 0 <= q <= n");
}

CoefficientTable coefficient_table(int n, int q) { return CoefficientTable(n, q); }

double CoefficientTable::K(double x) const {
  return std::pow((1.0 + x * x) / std::pow(x, 2.0 * q_), 1.0 / (2.0 * (n_ - 1)));
}

double CoefficientTable::E(double x) const {
  return -((q_ - 1.0) * x * x + q_) / ((n_ - 1.0) * x * (1.0 + x * x));
}

double CoefficientTable::dK(double x) const { return K(x) * E(x); }

double CoefficientTable::F(double x) const {
  // K''/K = E' + E^2 with E = (x/(1+x^2) - q/x)/(n-1).
  const double x2 = x * x;
  const double dE = ((1.0 - x2) / ((1.0 + x2) * (1.0 + x2)) + q_ / x2) / (n_ - 1.0);
  const double e = E(x);
  return dE + e * e;
}

namespace {
struct Poly {
  double c4, c2, c0;
  double at(double x) const { return (c4 * x * x + c2) * x * x + c0; }
  double d(double x) const { return (4.0 * c4 * x * x + 2.0 * c2) * x; }
};
Poly poly_a(int n, int q) {
  return {(q - 1.0) * (q - 1.0) - (n - 1.0) * (q + 3.0), -2.0 * (q - 1.0) * (n - 1.0 - q), -q * (n - 1.0 - q)};
}
Poly poly_b(int n, int q) {
  return {(q - 1.0) * (n - q), 2.0 * (q - 1.0) * (n - 1.0 - q), q * (n - 1.0 - q)};
}
}  // namespace

double CoefficientTable::a(double x) const {
  return poly_a(n_, q_).at(x) / ((n_ - 1.0) * x * x * x * (1.0 + x * x));
}

double CoefficientTable::b(double x) const { return poly_b(n_, q_).at(x) / ((n_ - 1.0) * x * x * x); }

double CoefficientTable::da(double x) const {
  const Poly p = poly_a(n_, q_);
  const double x2 = x * x;
  return (p.d(x) / (x2 * x * (1.0 + x2)) - p.at(x) * (3.0 + 5.0 * x2) / (x2 * x2 * (1.0 + x2) * (1.0 + x2))) /
         (n_ - 1.0);
}

double CoefficientTable::db(double x) const {
  const Poly p = poly_b(n_, q_);
  return (p.d(x) * x - 3.0 * p.at(x)) / ((n_ - 1.0) * x * x * x * x);
}

double CoefficientTable::mu() const { return 2.0 * q_ / (n_ - 1.0) - 1.0; }
double CoefficientTable::nu() const { return (n_ - 2.0) / (n_ - 1.0); }

ScalarField CoefficientTable::K(const ScalarField& f) const {
  return map(f, [this](double x) { return K(x); });
}

}  // namespace curvforge
