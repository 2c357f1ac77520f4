#pragma once

#include <memory>
#include <vector>

#include "curvforge/deform.hpp"

namespace curvforge {

inline constexpr double kUpsilonFloor = 1e-10;

// Fixed data of the prescribed-curvature operator for a Riemannian g and a
// distribution V: distribution scalars, coefficient table, exponents and the
// coordinate coefficients of the first- and second-order terms.
class UpsilonContext {
 public:
  UpsilonContext(const MetricField& g, const Distribution& V, const Distribution& W, Scheme scheme);
  UpsilonContext(const MetricField& g, const Distribution& V, Scheme scheme);

  const FrameGeometry& geometry() const { return *geo_; }
  const DistributionScalars& scalars() const { return d_; }
  const CoefficientTable& table() const { return table_; }
  const GridPtr& grid() const { return geo_->grid(); }
  Scheme scheme() const { return geo_->scheme(); }
  int n() const { return table_.n(); }
  int q() const { return table_.q(); }
  double mu() const { return table_.mu(); }
  double nu() const { return table_.nu(); }

  const ScalarField& twist_H() const { return twist_H_; }  // |Twist_H|^2
  const ScalarField& twist_V() const { return twist_V_; }  // |Twist_V|^2

  // Largest difference between the cached scalars and a fresh recomputation.
  double consistency_defect() const;

  // First-order data of a function in the coordinate form used by the operator.
  struct Jet {
    ScalarField laplace;   // Delta_g
    ScalarField grad2;     // |df|^2_g
    ScalarField grad2_V;   // |df|^2_{g,V}
    ScalarField divV_H;    // <div^V, df>_{g,H}
    ScalarField divH_V;    // <div^H, df>_{g,V}
    std::vector<ScalarField> d;  // coordinate partials
  };
  Jet jet(const ScalarField& f) const;
  ScalarField laplace(const ScalarField& f) const;
  // g^{-1}(df, dv) and its V part.
  ScalarField pair(const std::vector<ScalarField>& df, const std::vector<ScalarField>& dv) const;
  ScalarField pair_V(const std::vector<ScalarField>& df, const std::vector<ScalarField>& dv) const;
  ScalarField div_pair_V_H(const std::vector<ScalarField>& dv) const;
  ScalarField div_pair_H_V(const std::vector<ScalarField>& dv) const;

 private:
  void prepare();
  std::shared_ptr<FrameGeometry> geo_;
  DistributionScalars d_;
  CoefficientTable table_;
  ScalarField twist_H_, twist_V_;
  MatrixField ginv_, proj_V_;
  std::vector<ScalarField> drift_;        // -g^{ij} Gamma^k_ij
  std::vector<ScalarField> divV_on_H_;    // sum_{i:H} eps_i div^V(e_i) e_i
  std::vector<ScalarField> divH_on_V_;    // sum_{i:V} eps_i div^H(e_i) e_i
};

// The operator applied to f for prescribed curvature s.
ScalarField upsilon(const UpsilonContext& ctx, const ScalarField& s, const ScalarField& f);
// The unique s with upsilon(ctx, s, f) = 0.
ScalarField s_map(const UpsilonContext& ctx, const ScalarField& f);
// Derivative of upsilon(ctx, s, .) at f applied to v.
ScalarField linearize_apply(const UpsilonContext& ctx, const ScalarField& s, const ScalarField& f,
                            const ScalarField& v);
// The derivative at f frozen as 2 Delta_g v + beta^k d_k v + c0 v.
class LinearizedOperator {
 public:
  LinearizedOperator(const UpsilonContext& ctx, const ScalarField& s, const ScalarField& f);
  ScalarField apply(const ScalarField& v) const;
  const std::vector<ScalarField>& drift() const { return beta_; }
  const ScalarField& zeroth() const { return c0_; }

 private:
  const UpsilonContext* ctx_;
  std::vector<ScalarField> beta_;
  ScalarField c0_;
};

// Zeroth-order coefficient of the derivative at the constant c for s = S(c),
// from the closed form in terms of the twist norms, xi and scal.
ScalarField constant_point_coefficient(const UpsilonContext& ctx, double c);
// Zeroth-order coefficient of the derivative at f (multiplier of v).
ScalarField zeroth_order_coefficient(const UpsilonContext& ctx, const ScalarField& s, const ScalarField& f);
// -3 - mu < 0 and -5 + mu + 2 nu < 0.
bool exponent_bounds_check(int n, int q);

}  // namespace curvforge
