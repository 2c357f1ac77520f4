#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace curvforge {

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Scheme { fd4, spectral };

Scheme parse_scheme(const std::string& name);
std::string to_string(Scheme s);

// Uniform lattice, row-major (last axis fastest). Periodic axes cover [0, L),
// a bounded axis covers [0, L] including both end nodes.
struct Grid {
  int dim = 0;
  std::vector<int> sizes;
  std::vector<double> lengths;
  std::vector<bool> periodic;
  std::vector<double> spacing;
  std::vector<std::size_t> strides;
  std::size_t nodes = 0;

  bool fully_periodic() const;
  int bounded_axis() const;  // -1 when fully periodic
  int index_along(std::size_t node, int axis) const;
  double coordinate(std::size_t node, int axis) const;
  void coordinates(std::size_t node, std::span<double> x) const;
  double cell_volume() const;
  bool same_shape(const Grid& other) const;
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr make_torus(int n, const std::vector<int>& sizes, const std::vector<double>& lengths);
GridPtr make_annulus(const std::vector<int>& sizes, const std::vector<double>& lengths);
GridPtr make_grid(const std::vector<int>& sizes, const std::vector<double>& lengths,
                  const std::vector<bool>& periodic);

class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(GridPtr grid, double fill = 0.0);
  ScalarField(GridPtr grid, std::vector<double> values);

  const GridPtr& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(const ScalarField& o);
  ScalarField& operator/=(const ScalarField& o);
  ScalarField& operator+=(double c);
  ScalarField& operator-=(double c);
  ScalarField& operator*=(double c);
  ScalarField& operator/=(double c);

 private:
  GridPtr grid_;
  std::vector<double> values_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(ScalarField a, const ScalarField& b);
ScalarField operator/(ScalarField a, const ScalarField& b);
ScalarField operator+(ScalarField a, double c);
ScalarField operator-(ScalarField a, double c);
ScalarField operator*(ScalarField a, double c);
ScalarField operator/(ScalarField a, double c);
ScalarField operator+(double c, ScalarField a);
ScalarField operator-(double c, ScalarField a);
ScalarField operator*(double c, ScalarField a);
ScalarField operator/(double c, ScalarField a);
ScalarField operator-(ScalarField a);

ScalarField map(const ScalarField& f, const std::function<double(double)>& fn);
ScalarField pow(const ScalarField& f, double p);
ScalarField sample(const GridPtr& grid, const std::function<double(std::span<const double>)>& fn);
ScalarField coordinate_field(const GridPtr& grid, int axis);

double max_abs(const ScalarField& f);
double min_value(const ScalarField& f);
double max_value(const ScalarField& f);
bool all_finite(const ScalarField& f);
void require_same_grid(const Grid& a, const Grid& b);

// Contravariant (VectorField) and covariant (CovectorField) components.
struct VectorField {
  GridPtr grid;
  std::vector<ScalarField> c;
  VectorField() = default;
  explicit VectorField(GridPtr g);
  VectorField(GridPtr g, std::vector<ScalarField> comps);
};

struct CovectorField {
  GridPtr grid;
  std::vector<ScalarField> c;
  CovectorField() = default;
  explicit CovectorField(GridPtr g);
};

struct MatrixField {
  GridPtr grid;
  int n = 0;
  std::vector<ScalarField> m;  // row-major n*n
  MatrixField() = default;
  explicit MatrixField(GridPtr g);
  ScalarField& operator()(int i, int j) { return m[static_cast<std::size_t>(i * n + j)]; }
  const ScalarField& operator()(int i, int j) const { return m[static_cast<std::size_t>(i * n + j)]; }
};

VectorField coordinate_vector(const GridPtr& grid, int axis);
bool all_finite(const VectorField& v);
bool all_finite(const MatrixField& m);

ScalarField partial(const ScalarField& f, int axis, Scheme scheme);
CovectorField differential(const ScalarField& f, Scheme scheme);
ScalarField directional(const VectorField& v, const ScalarField& f, Scheme scheme);
VectorField lie_bracket(const VectorField& v, const VectorField& w, Scheme scheme);

double integrate(const ScalarField& f, const ScalarField& density);
std::vector<double> quadrature_weights(const Grid& grid);

// Solves (alpha * L - beta) u = r on a fully periodic grid, where L is the
// constant-coefficient Laplacian as the chosen scheme discretises it.
class PeriodicLaplaceInverse {
 public:
  PeriodicLaplaceInverse(GridPtr grid, Scheme scheme);
  ~PeriodicLaplaceInverse();
  PeriodicLaplaceInverse(const PeriodicLaplaceInverse&) = delete;
  PeriodicLaplaceInverse& operator=(const PeriodicLaplaceInverse&) = delete;
  std::vector<double> solve(const std::vector<double>& r, double alpha, double beta) const;
  const std::vector<double>& symbol() const { return symbol_; }

 private:
  struct Impl;
  GridPtr grid_;
  std::vector<double> symbol_;
  std::unique_ptr<Impl> impl_;
};

void write_csv(const std::string& path, const ScalarField& f);
void write_csv(const std::string& path, const VectorField& v);
void write_csv(const std::string& path, const MatrixField& m);

}  // namespace curvforge
