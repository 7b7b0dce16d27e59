#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "kpp/bbm.hpp"

namespace kpp {

struct LambdaMu {
  double lambda = 1.0;
  double mu = 0.5;
  auto operator<=>(const LambdaMu&) const = default;
};

struct MartingaleReport {
  double t = 0.0;
  double A = 0.0;  ///< 1D critical additive
  double D = 0.0;  ///< 1D derivative
  std::map<double, double> D_alpha;
  double W = 0.0;  ///< half-plane critical additive
  double Z = 0.0;  ///< half-plane derivative
  std::map<double, double> Z_alpha;
  std::map<LambdaMu, double> W_lm;
  bool no_killing_variant = false;
};

/// exp(exponent), or exactly 0 below the double underflow threshold.
double exp_weight(double exponent);

/// Supercritical term exp(lambda x - (lambda^2/2 + mu^2/2 + 1) t) sinh(mu y), overflow safe.
double supercritical_term(double x, double y, double t, double lambda, double mu);

MartingaleReport evaluate_martingales(const PopulationSnapshot& snapshot, const std::vector<double>& alphas,
                                      const std::vector<LambdaMu>& lam_mu);

struct SeriesSummary {
  std::string name;
  double t = 0.0;
  double mean = 0.0;
  double se = 0.0;
  double q25 = 0.0;
  double median = 0.0;
  double q75 = 0.0;
};

struct TrajectoryResult {
  std::vector<double> times;
  /// reports[replica][checkpoint]
  std::vector<std::vector<MartingaleReport>> reports;
  std::vector<SeriesSummary> summary;
  std::size_t capped = 0;
};

/// Per-replica martingale reports at each checkpoint plus cross-replica quantiles.
/// Replica i uses seed replica_seed(config.seed, i). Capped replicas are excluded and counted.
TrajectoryResult martingale_trajectory(const SimConfig& config, const std::vector<double>& alphas,
                                       const std::vector<LambdaMu>& lam_mu, std::size_t replicas);

/// Summary rows for one named series extracted from per-replica reports.
std::vector<SeriesSummary> summarize(const TrajectoryResult& traj);

}  // namespace kpp
