#pragma once

#include <cstdint>
#include <vector>

#include "kpp/field.hpp"
#include "kpp/waves_1d.hpp"

namespace kpp {

struct LevelCurve {
  double s = 0.5;
  std::vector<double> ys;
  std::vector<double> sigma;
  std::vector<double> skipped;  ///< rows where the level is not attained
};

LevelCurve level_set(const Field2D& field, double s, double y_min = 0.0);

/// The 41 probe abscissae spanning [-6, 10].
std::vector<double> front_probes();

/// Shift s with Psi(x + log(y)/sqrt2, y) ~ w(x - s) on the probes (drop the log term with use_log = false).
double fit_log_shift(const Field2D& field, const Profile1D& w, double y, bool use_log = true);

/// sup over probes of |Psi(x + log(y)/sqrt2, y) - w(x - shift)|; refuses y > 0.8 y_hi.
double log_shift_error(const Field2D& field, const Profile1D& w, double y, double shift, bool use_log = true);

struct Tameness {
  double C = 0.0;
  double x = 0.0;
  double y = 0.0;
};

/// max over nodes with y > 0 of Psi e^{rho x} / ((1 + x_+) y); rho is the field's tail rate (sqrt2 up to O(h^2)).
Tameness tameness_constant(const Field2D& field, double top_margin = 0.0);

struct TailOptions {
  double x_margin = 2.0;   ///< distance kept from the right edge
  double y_margin = 5.0;   ///< distance kept from the top edge
  double y_min = 0.0;      ///< rows below are excluded (0 keeps everything above the boundary row)
  bool include_log = true;
  int subregions = 4;
};

struct TailStats {
  double sup_E = 0.0;
  double x_at = 0.0;
  double y_at = 0.0;
  std::vector<double> radii;        ///< nested subregions {|p| <= r}
  std::vector<double> sup_by_region;
  std::size_t nodes = 0;
};

/// E = Phi e^{rho x} / (K y) - x + log_+(|p|)/rho on {x > log_+(y)/rho} minus margins.
TailStats tail_expansion_check(const Field2D& field, double K_star, const TailOptions& options = {});

/// E along the ray y = y0 for x in [lo, hi].
double tail_ray_sup(const Field2D& field, double K_star, double y0, double lo, double hi);

struct RotatedReport {
  double lambda = 0.0;
  double mu = 0.0;
  double theta = 0.0;
  double speed = 0.0;
  double shift = 0.0;
  std::vector<double> ys;
  std::vector<double> errors;
  std::vector<int> trimmed;  ///< probes dropped for leaving the domain
};

/// c(lambda, mu) = (lambda^2 + mu^2 + 2) / (2 sqrt(lambda^2 + mu^2)).
double wave_speed(double lambda, double mu);

/// Phi along slices R(x, y) against w_c(x - s), s fitted once at the largest y.
RotatedReport rotated_supercritical_check(const Field2D& field, double lambda, double mu, const Profile1D& w_c,
                                          const std::vector<double>& ys);

struct CoupledZRow {
  double y = 0.0;
  double mean_Z = 0.0;
  double se_Z = 0.0;
  double l2 = 0.0;        ///< mean of (Z(y)/y - D)^2
  double l2_se = 0.0;
  double slope = 0.0;     ///< regression of Z(y) on D
  double slope_se = 0.0;
};

struct CoupledZReport {
  double T = 0.0;
  std::size_t replicas = 0;
  double mean_D2 = 0.0;
  std::vector<CoupledZRow> rows;
};

/// One whole-plane BBM per replica; Z_T(y) over particles whose path stayed above -y.
CoupledZReport coupled_Z_over_y(const std::vector<double>& ys, double T, std::size_t replicas, std::uint64_t seed,
                                double dt_max = 0.01);

struct CoupledWRow {
  double y = 0.0;
  double mean_gap = 0.0;
  double se_gap = 0.0;
  double target = 0.0;    ///< (1 + e^{-2 mu y}) / 2
  double min_gap = 0.0;
  std::size_t monotone_violations = 0;
};

struct CoupledWReport {
  double lambda = 0.0;
  double mu = 0.0;
  double T = 0.0;
  std::size_t replicas = 0;
  std::vector<CoupledWRow> rows;
};

/// Gap A_T - e^{-mu y} W_T(y) on the coupled family; ys must be increasing.
CoupledWReport coupled_W_supercritical(double lambda, double mu, const std::vector<double>& ys, double T,
                                       std::size_t replicas, std::uint64_t seed, double dt_max = 0.01);

}  // namespace kpp
