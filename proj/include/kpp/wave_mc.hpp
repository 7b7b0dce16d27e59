#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "kpp/field.hpp"
#include "kpp/stats.hpp"

namespace kpp {

/// x-speed (lambda^2 + mu^2 + 2) / (2 lambda) of the supercritical wave.
double supercritical_x_speed(double lambda, double mu);

/// True iff lambda, mu > 0 and lambda^2 + mu^2 < 2.
bool in_quarter_disk(double lambda, double mu);

/// Per-replica Z_T^alpha from (0, y) with killing; replica i uses replica_seed(seed, i).
std::vector<double> sample_shaved_Z(double y, double T, double alpha, std::size_t replicas, std::uint64_t seed,
                                    double dt_max = 0.25);

/// Per-replica W_T^{lambda,mu} from (0, y) with killing.
std::vector<double> sample_W_lm(double y, double lambda, double mu, double T, std::size_t replicas,
                                std::uint64_t seed, double dt_max = 0.25);

/// 1 - E exp(-e^{-sqrt2 x} Z_T^alpha(y)).
EstimateCI estimate_phi(double x, double y, double T, std::size_t replicas, std::uint64_t seed, double alpha = 8.0,
                        double dt_max = 0.25);

/// 1 - E exp(-e^{-lambda x} W_T^{lambda,mu}(y)).
EstimateCI estimate_phi_supercritical(double x, double y, double lambda, double mu, double T, std::size_t replicas,
                                      std::uint64_t seed, double dt_max = 0.25);

/// estimates[iy][ix] with the same replica seeds at every probe.
struct ProbeGrid {
  std::vector<double> xs;
  std::vector<double> ys;
  std::vector<std::vector<EstimateCI>> estimates;
};

ProbeGrid estimate_phi_grid(const std::vector<double>& xs, const std::vector<double>& ys, double T,
                            std::size_t replicas, std::uint64_t seed, double alpha = 8.0, double dt_max = 0.25);

/// x with 1 - mean exp(-e^{-sqrt2 x} Z) = s; samples must contain a positive value.
double laplace_level(const std::vector<double>& samples, double s);

struct ExtinctionEstimate {
  EstimateCI at_T;
  EstimateCI at_T_minus_2;  ///< sensitivity to the horizon
};

/// Fraction of replicas from (0, y) with no surviving particle at T (and at T - 2 when T > 2).
ExtinctionEstimate estimate_extinction(double y, double T, std::size_t replicas, std::uint64_t seed);

/// 1 - E prod(1 - u0(x + X_t(v), Y_t(v))) over surviving particles from (0, y); u0 read bilinearly, 0 off grid.
EstimateCI mckean_evolve(const Field2D& initial, double t, double x, double y, std::size_t replicas,
                         std::uint64_t seed, double dt_max = 0.25);

struct SmoothingReport {
  double t = 0.0;
  double y = 0.0;
  double T = 0.0;
  double alpha = 0.0;
  MeanSE direct;      ///< Z_{t+T}^alpha(y)
  MeanSE recursion;   ///< sum over N_t^{+,alpha} of e^{sqrt2 X - 2t} Z_T^{alpha_u}(Y_t(u))
  double mean_diff = 0.0;
  double joint_se = 0.0;
  KsResult ks;
};

/// Direct sample of Z_{t+T}^alpha against the one-generation recursion with independent descendants.
SmoothingReport smoothing_consistency(double t, double y, double T, std::size_t replicas, std::uint64_t seed,
                                      double alpha = 8.0, double dt_max = 0.25);

}  // namespace kpp
