#pragma once

#include <string>
#include <vector>

#include "curvforge/geometry.hpp"

namespace curvforge {

inline constexpr double kPositivityTol = 1e-10;

// g(w, z) - 2 g(w_V, z_V): V becomes timelike, its complement is untouched.
MetricField switch_metric(const MetricField& g, const Distribution& V);
// f^{-2} g on V, g on the g-orthogonal complement.
MetricField stretch(const MetricField& g, const ScalarField& f, const Distribution& V);
// kappa^{-2} g.
MetricField conform(const MetricField& g, const ScalarField& kappa);
// conform(stretch(switch(g, V), f, V), kappa).
MetricField change(const MetricField& g, const ScalarField& f, const ScalarField& kappa, const Distribution& V);

struct NamedField {
  std::string name;
  ScalarField field;
};

// One field per formula line, in a fixed order.
using PredictedQuantities = std::vector<NamedField>;

const ScalarField& lookup(const PredictedQuantities& p, const std::string& name);

// Line names shared by the predicted and directly measured quantity lists.
const std::vector<std::string>& switch_line_names();
const std::vector<std::string>& stretch_line_names();

// Left-hand sides of the switch/stretch formula lists evaluated directly on a
// frame geometry (typically of the surged metric) with test function u.
PredictedQuantities measured_switch_quantities(const FrameGeometry& geo, const ScalarField& u);
PredictedQuantities measured_stretch_quantities(const FrameGeometry& geo, const ScalarField& u);

// Right-hand sides from base-metric data. geo carries (g, V, complement).
PredictedQuantities predict_switch(const FrameGeometry& geo, const ScalarField& u);
PredictedQuantities predict_stretch(const FrameGeometry& geo, const ScalarField& f, const ScalarField& u);

ScalarField predict_conform_scal(const FrameGeometry& geo, const ScalarField& kappa);
ScalarField predict_change_scal(const FrameGeometry& geo, const ScalarField& f, const ScalarField& kappa);

enum class ChiMode { stretch_v, stretch_h, conform };
std::string to_string(ChiMode m);
ScalarField predict_chi(const FrameGeometry& geo, const ScalarField& f, ChiMode mode);
// The metric whose chi the prediction describes.
MetricField chi_target_metric(const FrameGeometry& geo, const ScalarField& f, ChiMode mode);

// K, its log-derivatives and the quasilinear coefficients for dimension n and rank q.
class CoefficientTable {
 public:
  CoefficientTable(int n, int q);
  int n() const { return n_; }
  int q() const { return q_; }
  double K(double x) const;
  double dK(double x) const;
  double E(double x) const;  // K'/K
  double F(double x) const;  // K''/K
  double a(double x) const;
  double b(double x) const;
  double da(double x) const;
  double db(double x) const;
  double mu() const;
  double nu() const;
  ScalarField K(const ScalarField& f) const;

 private:
  int n_, q_;
};

CoefficientTable coefficient_table(int n, int q);

}  // namespace curvforge
