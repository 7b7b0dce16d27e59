#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "kpp/stats.hpp"

namespace kpp {

/// Uniformly gridded 1D profile.
struct Profile1D {
  double x0 = 0.0;
  double h = 0.01;
  Eigen::ArrayXd values;
  std::optional<double> speed_c;
  std::string pin;

  Eigen::Index size() const { return values.size(); }
  double x(Eigen::Index i) const { return x0 + h * static_cast<double>(i); }
  double x_max() const { return x(size() - 1); }
  Eigen::ArrayXd grid() const { return Eigen::ArrayXd::LinSpaced(size(), x0, x_max()); }

  /// Cubic interpolation; constant to the left, exponential extrapolation to the right.
  double operator()(double at) const;

  /// Same profile with abscissae moved by +s (value at x becomes value at x - s).
  Profile1D shifted(double s) const;
};

struct SteadyPhi {
  Profile1D profile;
  double slope0 = 0.0;            ///< phi'(0)
  double residual_sup = 0.0;      ///< 4th order stencil, grid interior
  double first_integral_dev = 0.0;
  double y_cut = 0.0;             ///< start of the exponential tail patch
};

/// Bounded solution of phi''/2 + phi - phi^2 = 0, phi(0) = 0, by shooting on phi'(0).
SteadyPhi solve_steady_phi(double y_max = 30.0, double h = 0.005);

struct WaveOptions {
  int max_newton = 40;
  double tol = 1e-10;
  /// initial guess 1/(1 + exp(rate x)); rate <= 0 picks the tail rate
  double init_rate = 0.0;
};

struct Wave1D {
  Profile1D profile;
  double residual_sup = 0.0;  ///< at the requested speed c
  double speed_correction = 0.0;
  int newton_iterations = 0;
};

/// Decay rate of w_c at +infinity: smaller root of rho^2/2 - c rho + 1 = 0.
double tail_rate(double c);

/// Rate of 1 - w_c at -infinity: positive root of k^2/2 + c k - 1 = 0.
double front_rate(double c);

/// Monotone wave w''/2 + c w' + w - w^2 = 0 pinned at w(0) = 1/2.
Wave1D solve_wave_1d(double c, double x_lo = -40.0, double x_hi = 40.0, double h = 0.01,
                     const WaveOptions& options = {});

struct TailFit {
  double K_star = 0.0;
  double a = 0.0;
  double fit_residual = 0.0;
};

/// Least squares of w(x) e^{sqrt2 x} against K (x + a) on [lo, hi].
TailFit fit_tail_constant(const Profile1D& profile, double lo = 12.0, double hi = 22.0);

/// Per-replica 1D shaved derivative martingale D_T^alpha of whole-line BBM; replica i uses replica_seed(seed, i).
std::vector<double> sample_shaved_D(double T, double alpha, std::size_t replicas, std::uint64_t seed,
                                    double dt_max = 0.01);

/// 1 - mean exp(-exp(-rate x) v) over the samples.
EstimateCI laplace_estimate(const std::vector<double>& samples, double x, double rate, double T);

/// Laplace transform wave 1 - E exp(-e^{-sqrt2 x} D_T^alpha).
EstimateCI laplace_wave_1d_mc(double x, double T, std::size_t replicas, std::uint64_t seed, double alpha = 8.0,
                              double dt_max = 0.01);

/// One parameter least squares shift s so that w(x - s) best matches the values.
double fit_shift(const Profile1D& w, const std::vector<double>& xs, const std::vector<double>& values);

}  // namespace kpp
