#pragma once

#include "curvforge/solve.hpp"

namespace curvforge {

inline constexpr double kRangeGuard = 1e-3;

// -cos^2(u/2) dx^2 + sin^2(u/2) dy^2, built as change(flat, tan(u/2), K(tan(u/2)), dx)
// and checked entrywise against the closed form.
MetricField lorentz_from_u(const ScalarField& u);
MetricField lorentz_closed_form(const ScalarField& u);

struct ClosedSurfaceOptions {
  double tol = 1e-10;
  int max_newton = 30;
  double dt0 = 0.1, dt_min = 1e-4;
  double range_guard = kRangeGuard;
  Scheme scheme = Scheme::spectral;
};

// Solves Delta u = (s/2) sin u on a 2-torus by continuation from the seed
// u0 = pi/2 + sin(2 pi x). Rejects one-signed nonzero s.
SolveReport solve_sine_closed(const ScalarField& s, const TorusDiffeo& phi, const ClosedSurfaceOptions& opt = {});
SolveReport solve_sine_closed(const ScalarField& s, const ClosedSurfaceOptions& opt = {});

struct BoundarySurfaceOptions {
  double tol = 1e-10;
  int max_descent = 4000;
  double descent_tol = 1e-6;
  int max_newton = 30;
  double c_floor = 1e-8;
  double c_start = 1.0;
};

// Solves Delta u = (c s / 2) sin u on an annulus with u = pi/2 on the boundary,
// halving c until the solution stays inside the range guard; reports c * h.
SolveReport solve_sine_boundary(const ScalarField& s, const BoundarySurfaceOptions& opt = {});

// max |scal(h) - s| over nodes whose bounded-axis index lies in [N/4, 3N/4].
double interior_scal_mismatch(const MetricField& h, const ScalarField& s, Scheme scheme = Scheme::fd4);

// |u - pi/2|_inf / |scale * s|_L2 for a boundary solution u reported at `scale`.
double a_priori_slope(const SolveReport& rep, const ScalarField& s);

// Discrete energy sum_w (|dv|^2 + s sin v) with fd4 derivatives.
double sine_energy(const ScalarField& v, const ScalarField& s);

// |integral of scal_h sqrt|det h||.
double gauss_bonnet_residual(const MetricField& h, Scheme scheme);

}  // namespace curvforge
