#pragma once

#include <array>
#include <vector>

#include "curvforge/lattice.hpp"

namespace curvforge {

inline constexpr double kIndexTol = 1e-9;
inline constexpr double kRankTol = 1e-8;
inline constexpr double kLightlikeTol = 1e-8;
inline constexpr double kIntegrableTol = 1e-8;

struct MetricField {
  MatrixField m;
  int index = 0;
  const GridPtr& grid() const { return m.grid; }
  int dim() const { return m.n; }
  const ScalarField& operator()(int i, int j) const { return m(i, j); }
};

// Validates symmetry and nondegeneracy and caches the (constant) index.
MetricField make_metric(MatrixField m, double index_tol = kIndexTol);
MetricField flat_metric(const GridPtr& grid);
MetricField constant_metric(const GridPtr& grid, const std::vector<double>& entries);
int metric_index(const MatrixField& g, double index_tol = kIndexTol);
MatrixField inverse(const MatrixField& g);
ScalarField metric_density(const MetricField& g);
MetricField scaled(const MetricField& g, double c);
double max_entry_difference(const MatrixField& a, const MatrixField& b);

// g(v, w) node-wise.
ScalarField inner(const MetricField& g, const VectorField& v, const VectorField& w);

struct Distribution {
  GridPtr grid;
  std::vector<VectorField> spans;
  int rank() const { return static_cast<int>(spans.size()); }
};

Distribution make_distribution(const GridPtr& grid, std::vector<VectorField> spans, double rank_tol = kRankTol);
Distribution coordinate_distribution(const GridPtr& grid, int q);
double min_singular_value(const Distribution& d);

Distribution orthogonal_complement(const MetricField& g, const Distribution& V, double rank_tol = kRankTol);

enum class Part { V, H, full, none };
Part complement(Part p);

struct AdaptedFrame {
  GridPtr grid;
  std::vector<VectorField> e;
  std::vector<int> eps;
  int v_count = 0;
  int dim() const { return static_cast<int>(e.size()); }
  bool in(Part p, int i) const;
};

AdaptedFrame orthonormalize(const MetricField& g, const Distribution& V, const Distribution& W,
                            double lightlike_tol = kLightlikeTol);
double frame_orthonormality_error(const MetricField& g, const AdaptedFrame& f);

// Coordinate Christoffel symbols Gamma^k_ij, symmetric in (i, j).
struct CoordChristoffel {
  int n = 0;
  std::vector<ScalarField> data;
  static int pair(int n, int i, int j);
  const ScalarField& operator()(int k, int i, int j) const {
    return data[static_cast<std::size_t>(k * (n * (n + 1) / 2) + pair(n, i, j))];
  }
};

CoordChristoffel coord_christoffel(const MetricField& g, Scheme scheme);
ScalarField scal_oracle(const MetricField& g, Scheme scheme);

enum class ChristoffelMethod { covariant, koszul };

// Orthonormal Christoffel symbols Gamma_ij^k = g(nabla_{e_i} e_j, e_k).
struct OnChristoffel {
  int n = 0;
  std::vector<ScalarField> G;
  const ScalarField& operator()(int i, int j, int k) const {
    return G[static_cast<std::size_t>((i * n + j) * n + k)];
  }
  ScalarField& operator()(int i, int j, int k) { return G[static_cast<std::size_t>((i * n + j) * n + k)]; }
};

double antisymmetry_defect(const OnChristoffel& G);

class FrameGeometry {
 public:
  FrameGeometry(const MetricField& g, const Distribution& V, Scheme scheme);
  FrameGeometry(const MetricField& g, const Distribution& V, const Distribution& W, Scheme scheme);

  const MetricField& metric() const { return g_; }
  const AdaptedFrame& frame() const { return frame_; }
  const Distribution& v_distribution() const { return V_; }
  const Distribution& h_distribution() const { return H_; }
  Scheme scheme() const { return scheme_; }
  const GridPtr& grid() const { return g_.grid(); }
  int dim() const { return g_.dim(); }
  int q() const { return frame_.v_count; }
  int eps(int i) const { return frame_.eps[static_cast<std::size_t>(i)]; }
  bool in(Part p, int i) const { return frame_.in(p, i); }

  const CoordChristoffel& coord() const { return coord_; }
  const OnChristoffel& gamma() const { return gamma_; }
  OnChristoffel koszul() const;

  ScalarField along(int i, const ScalarField& f) const;
  std::vector<ScalarField> frame_components(const ScalarField& f) const;
  VectorField bracket(int i, int j) const;
  ScalarField bracket_component(int i, int j, int k) const;

  ScalarField div_leg(Part U, int j) const;
  ScalarField divergence(Part U, const VectorField& X) const;
  ScalarField laplacian(const ScalarField& f, Part upper, Part lower) const;
  ScalarField pair_div(Part U, const ScalarField& f, Part W) const;
  ScalarField pair_div_div(Part U, Part W) const;
  ScalarField pair_d(const ScalarField& f, const ScalarField& h, Part W) const;
  ScalarField sigma(Part U) const;
  ScalarField tau(Part U) const;
  ScalarField qual(Part U) const;
  ScalarField scal_block(Part U, Part W) const;
  ScalarField sectional(int i, int k) const;  // R(e_i, e_k, e_k, e_i)
  ScalarField twist_direct(Part U) const;
  ScalarField density() const;

 private:
  void build(Scheme scheme);
  MetricField g_;
  Distribution V_, H_;
  Scheme scheme_;
  AdaptedFrame frame_;
  std::vector<std::vector<ScalarField>> omega_;        // omega_[k][b] = (g e_k)_b
  std::vector<std::vector<ScalarField>> frame_grad_;  // [j][a*n+b] = d_a e_j^b
  CoordChristoffel coord_;
  OnChristoffel gamma_;
};

OnChristoffel on_christoffel(const MetricField& g, const AdaptedFrame& frame, ChristoffelMethod method, Scheme scheme);

ScalarField sub_divergence(const FrameGeometry& geo, Part U, const VectorField& X);
ScalarField sub_laplacian(const FrameGeometry& geo, const ScalarField& f, Part upper, Part lower);

struct DistributionScalars {
  ScalarField sigma_V, tau_V, sigma_H, tau_H;
  ScalarField divV_divV_H, divH_divH_V;
  ScalarField qual_V, qual_H;
  ScalarField scal_VV, scal_HH, scal_VH;
  ScalarField scal;
  ScalarField xi, chi;
  ScalarField twist2_V, twist2_H;                  // direct bracket route
  ScalarField twist2_V_from_gamma, twist2_H_from_gamma;  // 2 (sigma - tau)
  ScalarField twist_norm_V() const;  // |Twist_V|^2 = sigma_V - tau_V
  ScalarField twist_norm_H() const;
};

DistributionScalars distribution_scalars(const FrameGeometry& geo);
DistributionScalars distribution_scalars(const MetricField& g, const Distribution& V, Scheme scheme);

struct LineScalars {
  ScalarField d_div;    // d_V div_g(V)
  ScalarField div_sq;   // div_g(V)^2
  VectorField accel;    // nabla_V V
  ScalarField accel_sq; // g(nabla_V V, nabla_V V)
  int eps = 1;
};

LineScalars line_distribution_scalars(const FrameGeometry& geo);
LineScalars line_distribution_scalars(const MetricField& g, const Distribution& V, Scheme scheme);

ScalarField foliation_scal(const MetricField& g, const Distribution& H, Scheme scheme,
                           double integrable_tol = kIntegrableTol);

std::array<double, 2> integration_identity_residuals(const FrameGeometry& geo, const ScalarField& f,
                                                     const ScalarField& h, const ScalarField& u);

}  // namespace curvforge
