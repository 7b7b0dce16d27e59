#pragma once

#include <functional>
#include <vector>

#include "kpp/field.hpp"
#include "kpp/waves_1d.hpp"

namespace kpp {

struct Domain {
  double x_lo = -10.0;
  double x_hi = 25.0;
  double y_hi = 40.0;
  double hx = 0.05;
  double hy = 0.05;
};

struct MarchOptions {
  double tol = 1e-8;                ///< explicit phase stops when max|update| < tol dt
  long max_explicit_steps = 2000;
  bool newton_polish = true;        ///< pseudo-transient Newton after the explicit phase
  double newton_tol = 1e-16;        ///< relative to the scaled magnitudes over h^2
  int max_newton = 60;
  int history_every = 100;
};

struct MarchResult {
  Field2D field;
  bool converged = false;
  std::vector<double> residual_history;
  long explicit_steps = 0;
  int newton_iterations = 0;
};

/// Explicit time step bound 0.9 / (1/hx^2 + 1/hy^2 + c/hx + 1).
double stable_dt(double hx, double hy, double c);

struct DiscreteSpeed {
  double speed = 0.0;
  double rate = 0.0;
};

/// Minimal speed of the centered-difference linearization in x, and its double root rate.
DiscreteSpeed discrete_minimal_speed(double hx);

/// Frame speed at which e^{-lambda x} sinh(mu y) solves the discrete linearization exactly.
double discrete_frame_speed(double lambda, double mu, double hx, double hy);

/// Minimal speed template at the discrete critical frame speed. Top w(x - log(y_hi)/sqrt2 - top_shift);
/// left and initial data phi(y) w(x - log_+(y)/sqrt2 - top_shift).
Field2D minimal_wave_template(const Domain& d, const Profile1D& phi, const Profile1D& w, double top_shift = 0.0,
                              RightBoundary right = RightBoundary::tail_extrapolation);

/// Supercritical template: nominal speed (l^2+m^2+2)/(2l) with its discrete counterpart;
/// top rotated w_c, left and initial data phi(y) w_c(rotated).
/// top_shift NaN selects the tail-matched shift -log(2 C_w)/rho.
Field2D supercritical_template(const Domain& d, double lambda, double mu, const Profile1D& phi,
                               const Profile1D& w_c, double top_shift,
                               RightBoundary right = RightBoundary::tail_extrapolation);

/// Asymptotic constant C_w of w_c(x) ~ C_w e^{-rho x}.
double exponential_tail_constant(const Profile1D& w_c, double lo = 20.0, double hi = 30.0);

/// Marches u_t = u_xx/2 + u_yy/2 + c u_x + u - u^2 with the start's boundary data until steady.
MarchResult march_to_steady(const Field2D& start, const MarchOptions& options = {});

/// Recomputes the extrapolated right column (and the zero bottom row) from the interior.
void refresh_boundaries(Field2D& f);

struct ResidualNorms {
  double sup = 0.0;
  double l2 = 0.0;
};

/// u_xx/2 + u_yy/2 + c u_x + u - u^2 with centered stencils on interior nodes.
ResidualNorms residual(const Field2D& field);

/// Every stride-th node in each direction (grid must be divisible).
Field2D subsample(const Field2D& field, int stride);

/// (4 fine - coarse) / 3 on the coarse nodes; fine must have half the coarse spacing.
Field2D richardson(const Field2D& fine, const Field2D& coarse);

/// Bilinear transfer of a coarse field onto a finer grid with the same extent.
Field2D prolong(const Field2D& coarse, double hx, double hy);

/// sup |evolved - original| on the 5%-trimmed interior after evolving for time t at frame_speed.
double stationarity_check(const Field2D& field, double frame_speed, double t);

struct MonotonicityReport {
  std::size_t x_pairs = 0;
  std::size_t y_pairs = 0;
  std::size_t x_violations = 0;  ///< pairs with Psi(x + hx) >= Psi(x)
  std::size_t y_violations = 0;  ///< pairs with Psi(y + hy) <= Psi(y)
  double min_log_slope = 0.0;    ///< min discrete d/dx log Psi over nodes with Psi > 1e-10
};

/// Strict discrete monotonicity above the bottom row; pairs within 1e-13 of 1 are skipped.
/// Rows above (1 - top_trim) y_hi are left out.
MonotonicityReport monotonicity(const Field2D& field, double top_trim = 0.0);

/// x where the row at height y crosses level s (Psi decreasing in x); NaN if not attained.
double level_crossing(const Field2D& field, double y, double s);

/// Relabels x so that the s-level at height y_star sits at x = 0.
Field2D pin_field(const Field2D& field, double y_star = 5.0, double s = 0.5);

struct MinimalWaveSolve {
  MarchResult result;
  double top_shift = 0.0;
  std::vector<double> shift_history;
};

/// Minimal speed wave; extra shift_iterations re-impose the top data with the shift fitted at mid height.
MinimalWaveSolve solve_minimal_wave(const Domain& d, const Profile1D& phi, const Profile1D& w, double top_shift0,
                                    const MarchOptions& options = {}, int shift_iterations = 1,
                                    const Field2D* warm = nullptr);

struct SubsolutionReport {
  double epsilon = 0.0;
  double alpha = 0.0;
  double c_eps = 0.0;
  double lambda_eps = 0.0;
  double radius = 0.0;
  double t_end = 0.0;
  std::vector<double> times;
  std::vector<double> max_violation;     ///< max of the operator over the grid at each time
  std::vector<double> max_outside;       ///< max |operator| on nodes whose stencil lies outside the ball
  std::vector<double> max_interior;      ///< max of the operator strictly inside the support
};

/// First zero of J0.
double bessel_j0_first_zero();

/// b(t) = 1 / (1 + alpha / lambda (e^{lambda t} - 1)).
double subsolution_b(double t, double alpha, double lambda);

/// Explicit subsolution and its parabolic operator at one point.
double subsolution_value(double t, double x, double y, double epsilon, double alpha);

/// Evaluates dt w - lap w / 2 - sqrt2 dx w - w + w^2 on an h grid over the support ball.
SubsolutionReport subsolution_check(double epsilon, double alpha, double h, const std::vector<double>& times);

}  // namespace kpp
