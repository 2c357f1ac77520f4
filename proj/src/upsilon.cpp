#include "curvforge/upsilon.hpp"

#include <algorithm>
#include <cmath>

namespace curvforge {

namespace {

void require_floor(const ScalarField& f) {
  if (!(min_value(f) > kUpsilonFloor)) throw GeometryError("the operator needs f > 0 at every node");
}

ScalarField zero(const GridPtr& g) { return ScalarField(g, 0.0); }

std::vector<ScalarField> partials(const ScalarField& f, Scheme scheme) {
  std::vector<ScalarField> d;
  for (int a = 0; a < f.grid()->dim; ++a) d.push_back(partial(f, a, scheme));
  return d;
}

ScalarField contract(const MatrixField& m, const std::vector<ScalarField>& x, const std::vector<ScalarField>& y) {
  ScalarField out = zero(m.grid);
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j) out += m(i, j) * x[i] * y[j];
  return out;
}

ScalarField dot(const std::vector<ScalarField>& a, const std::vector<ScalarField>& b) {
  ScalarField out = a[0] * b[0];
  for (std::size_t i = 1; i < a.size(); ++i) out += a[i] * b[i];
  return out;
}

double max_diff(const ScalarField& a, const ScalarField& b) { return max_abs(a - b); }

}  // namespace

UpsilonContext::UpsilonContext(const MetricField& g, const Distribution& V, const Distribution& W, Scheme scheme)
    : geo_(std::make_shared<FrameGeometry>(g, V, W, scheme)), table_(g.dim(), V.rank()) {
  prepare();
}

UpsilonContext::UpsilonContext(const MetricField& g, const Distribution& V, Scheme scheme)
    : geo_(std::make_shared<FrameGeometry>(g, V, scheme)), table_(g.dim(), V.rank()) {
  prepare();
}

void UpsilonContext::prepare() {
  const FrameGeometry& geo = *geo_;
  if (geo.metric().index != 0) throw GeometryError("the operator needs a Riemannian metric");
  d_ = distribution_scalars(geo);
  twist_H_ = d_.twist_norm_H();
  twist_V_ = d_.twist_norm_V();
  const int n = geo.dim();
  const GridPtr& grid = geo.grid();
  ginv_ = inverse(geo.metric().m);
  proj_V_ = MatrixField(grid);
  drift_.assign(static_cast<std::size_t>(n), zero(grid));
  divV_on_H_.assign(static_cast<std::size_t>(n), zero(grid));
  divH_on_V_.assign(static_cast<std::size_t>(n), zero(grid));
  const CoordChristoffel& G = geo.coord();
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) drift_[k] -= ginv_(i, j) * G(k, i, j);
  const AdaptedFrame& fr = geo.frame();
  for (int i = 0; i < n; ++i) {
    const double e = geo.eps(i);
    if (geo.in(Part::V, i)) {
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) proj_V_(a, b) += e * fr.e[i].c[a] * fr.e[i].c[b];
      const ScalarField w = e * geo.div_leg(Part::H, i);
      for (int a = 0; a < n; ++a) divH_on_V_[a] += w * fr.e[i].c[a];
    } else {
      const ScalarField w = e * geo.div_leg(Part::V, i);
      for (int a = 0; a < n; ++a) divV_on_H_[a] += w * fr.e[i].c[a];
    }
  }
}

double UpsilonContext::consistency_defect() const {
  const DistributionScalars fresh = distribution_scalars(*geo_);
  return std::max({max_diff(fresh.xi, d_.xi), max_diff(fresh.scal, d_.scal),
                   max_diff(fresh.twist_norm_H(), twist_H_), max_diff(fresh.twist_norm_V(), twist_V_)});
}

ScalarField UpsilonContext::laplace(const ScalarField& f) const {
  const Scheme sc = scheme();
  const int n = this->n();
  const std::vector<ScalarField> d = partials(f, sc);
  ScalarField out = dot(drift_, d);
  for (int i = 0; i < n; ++i) {
    out += ginv_(i, i) * partial(d[i], i, sc);
    for (int j = i + 1; j < n; ++j) out += 2.0 * ginv_(i, j) * partial(d[i], j, sc);
  }
  return out;
}

ScalarField UpsilonContext::pair(const std::vector<ScalarField>& df, const std::vector<ScalarField>& dv) const {
  return contract(ginv_, df, dv);
}

ScalarField UpsilonContext::pair_V(const std::vector<ScalarField>& df, const std::vector<ScalarField>& dv) const {
  return contract(proj_V_, df, dv);
}

ScalarField UpsilonContext::div_pair_V_H(const std::vector<ScalarField>& dv) const { return dot(divV_on_H_, dv); }
ScalarField UpsilonContext::div_pair_H_V(const std::vector<ScalarField>& dv) const { return dot(divH_on_V_, dv); }

UpsilonContext::Jet UpsilonContext::jet(const ScalarField& f) const {
  Jet j;
  j.d = partials(f, scheme());
  j.laplace = laplace(f);
  j.grad2 = pair(j.d, j.d);
  j.grad2_V = pair_V(j.d, j.d);
  j.divV_H = div_pair_V_H(j.d);
  j.divH_V = div_pair_H_V(j.d);
  return j;
}

namespace {

// Everything in the operator except the principal part and the s term.
ScalarField lower_order(const UpsilonContext& ctx, const ScalarField& f, const UpsilonContext::Jet& j) {
  const CoefficientTable& t = ctx.table();
  const DistributionScalars& d = ctx.scalars();
  ScalarField out = zero(f.grid());
  for (std::size_t p = 0; p < f.size(); ++p) {
    const double x = f[p], x2 = x * x, o = 1.0 + x2;
    out[p] = t.a(x) * j.grad2[p] + t.b(x) * j.grad2_V[p] + 2.0 * o / x2 * j.divV_H[p] + 2.0 * o * j.divH_V[p] +
             o * o / (2.0 * x2 * x) * ctx.twist_H()[p] - x * o * o / 2.0 * ctx.twist_V()[p] + o * o / x * d.xi[p] +
             o / x * d.scal[p];
  }
  return out;
}

ScalarField weight(const UpsilonContext& ctx, const ScalarField& f) {
  const double mu = ctx.mu(), nu = ctx.nu();
  return map(f, [&](double x) { return std::pow(x, mu) * std::pow(1.0 + x * x, nu); });
}

}  // namespace

ScalarField upsilon(const UpsilonContext& ctx, const ScalarField& s, const ScalarField& f) {
  require_floor(f);
  const UpsilonContext::Jet j = ctx.jet(f);
  return 2.0 * j.laplace + lower_order(ctx, f, j) - weight(ctx, f) * s;
}

ScalarField s_map(const UpsilonContext& ctx, const ScalarField& f) {
  require_floor(f);
  const UpsilonContext::Jet j = ctx.jet(f);
  return (2.0 * j.laplace + lower_order(ctx, f, j)) / weight(ctx, f);
}

ScalarField zeroth_order_coefficient(const UpsilonContext& ctx, const ScalarField& s, const ScalarField& f) {
  require_floor(f);
  const UpsilonContext::Jet j = ctx.jet(f);
  const CoefficientTable& t = ctx.table();
  const DistributionScalars& d = ctx.scalars();
  const double mu = ctx.mu(), nu = ctx.nu();
  ScalarField out = zero(f.grid());
  for (std::size_t p = 0; p < f.size(); ++p) {
    const double x = f[p], x2 = x * x, o = 1.0 + x2;
    out[p] = t.da(x) * j.grad2[p] + t.db(x) * j.grad2_V[p] - 4.0 / (x2 * x) * j.divV_H[p] + 4.0 * x * j.divH_V[p] +
             o * (x2 - 3.0) / (2.0 * x2 * x2) * ctx.twist_H()[p] - o * (1.0 + 5.0 * x2) / 2.0 * ctx.twist_V()[p] +
             o * (3.0 * x2 - 1.0) / x2 * d.xi[p] - (1.0 - x2) / x2 * d.scal[p] -
             std::pow(x, mu) * std::pow(o, nu) * (mu + (mu + 2.0 * nu) * x2) / (x * o) * s[p];
  }
  return out;
}

LinearizedOperator::LinearizedOperator(const UpsilonContext& ctx, const ScalarField& s, const ScalarField& f)
    : ctx_(&ctx) {
  require_floor(f);
  const std::vector<ScalarField> df = partials(f, ctx.scheme());
  const int n = ctx.n();
  const CoefficientTable& t = ctx.table();
  const ScalarField a2 = 2.0 * map(f, [&](double x) { return t.a(x); });
  const ScalarField b2 = 2.0 * map(f, [&](double x) { return t.b(x); });
  const ScalarField cV = map(f, [](double x) { return 2.0 * (1.0 + x * x) / (x * x); });
  const ScalarField cH = map(f, [](double x) { return 2.0 * (1.0 + x * x); });
  // beta^k is the coefficient of d_k v; build it by pairing with unit covectors.
  for (int k = 0; k < n; ++k) {
    std::vector<ScalarField> ek(static_cast<std::size_t>(n), zero(f.grid()));
    ek[k] = ScalarField(f.grid(), 1.0);
    beta_.push_back(a2 * ctx.pair(df, ek) + b2 * ctx.pair_V(df, ek) + cV * ctx.div_pair_V_H(ek) +
                    cH * ctx.div_pair_H_V(ek));
  }
  c0_ = zeroth_order_coefficient(ctx, s, f);
}

ScalarField LinearizedOperator::apply(const ScalarField& v) const {
  const std::vector<ScalarField> dv = partials(v, ctx_->scheme());
  return 2.0 * ctx_->laplace(v) + dot(beta_, dv) + c0_ * v;
}

ScalarField linearize_apply(const UpsilonContext& ctx, const ScalarField& s, const ScalarField& f,
                            const ScalarField& v) {
  return LinearizedOperator(ctx, s, f).apply(v);
}

ScalarField constant_point_coefficient(const UpsilonContext& ctx, double c) {
  if (!(c > kUpsilonFloor)) throw GeometryError("the constant point must be positive");
  const double mu = ctx.mu(), nu = ctx.nu(), c2 = c * c, o = 1.0 + c2;
  const double m = mu + (mu + 2.0 * nu) * c2;
  const DistributionScalars& d = ctx.scalars();
  return o / (2.0 * c2 * c2) * (c2 - 3.0 - m) * ctx.twist_H() - o / 2.0 * (1.0 + 5.0 * c2 - m) * ctx.twist_V() +
         o / c2 * (3.0 * c2 - 1.0 - m) * d.xi + 1.0 / c2 * (-1.0 + c2 - m) * d.scal;
}

bool exponent_bounds_check(int n, int q) {
  const CoefficientTable t(n, q);
  return -3.0 - t.mu() < 0.0 && -5.0 + t.mu() + 2.0 * t.nu() < 0.0;
}

}  // namespace curvforge
