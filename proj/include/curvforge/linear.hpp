#pragma once

#include <Eigen/Sparse>

#include <functional>
#include <vector>

#include "curvforge/lattice.hpp"

namespace curvforge {

using Vec = std::vector<double>;
using LinearMap = std::function<Vec(const Vec&)>;

struct GmresReport {
  Vec x;
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

// Restarted GMRES with right preconditioning M: solves A x = b to
// ||b - A x|| <= tol * ||b||. An empty M means no preconditioner.
GmresReport gmres(const LinearMap& A, const Vec& b, const LinearMap& M, const Vec& x0, double tol, int restart,
                  int max_iterations);

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor>;

// The fd4 first-derivative operator along `axis` as a sparse matrix acting on
// row-major node vectors; identical to partial(., axis, fd4).
SparseMatrix derivative_matrix(const GridPtr& grid, int axis);
// Sum over axes of the composed second derivatives, identical to
// sum_a partial(partial(., a, fd4), a, fd4).
SparseMatrix laplace_matrix(const GridPtr& grid);

}  // namespace curvforge
