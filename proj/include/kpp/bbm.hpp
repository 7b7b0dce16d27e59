#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace kpp {

struct ParticleRecord {
  std::uint64_t id = 0;
  std::optional<std::uint64_t> parent_id;
  double x = 0.0;
  double y = 0.0;
  double birth_time = 0.0;
  bool alive = true;
  bool killed = false;
  double max_drift_excess = 0.0;  ///< running max of X_s - sqrt(2) s along the ancestral path
  double min_y = 0.0;             ///< running min of Y_s along the ancestral path
};

/// Alive particles at one checkpoint, sorted by id.
struct PopulationSnapshot {
  double t = 0.0;
  std::vector<ParticleRecord> particles;
  std::uint64_t replica_seed = 0;
  bool killing_enabled = true;
  double origin_y = 0.0;
};

struct SimConfig {
  double origin_y = 1.0;
  double horizon_T = 1.0;
  std::vector<double> checkpoint_times;  ///< empty means {horizon_T}
  double dt_max = 0.01;
  bool killing_enabled = true;
  std::size_t population_cap = 5'000'000;
  std::uint64_t seed = 0;

  static constexpr double branch_rate = 1.0;

  void validate() const;
  std::vector<double> checkpoints() const;
};

enum class ReplicaStatus { ok, cap };

struct ReplicaResult {
  ReplicaStatus status = ReplicaStatus::ok;
  std::vector<PopulationSnapshot> snapshots;
  std::size_t particles_created = 0;
};

ReplicaResult simulate_replica(const SimConfig& config);

/// Brownian bridge from y0 to y1 over dt hits 0: true with probability exp(-2 y0 y1 / dt).
bool bridge_kill(double y0, double y1, double dt, double u);

/// Exact sample of the maximum of a Brownian bridge from a to b over dt, driven by u in (0,1).
double bridge_max(double a, double b, double dt, double u);

/// Exact sample of the minimum of a Brownian bridge; bridge_min <= 0 iff bridge_kill for positive ends.
double bridge_min(double a, double b, double dt, double u);

struct SpineKind {
  enum class Type { critical_additive, shaved_derivative, supercritical };
  Type type = Type::critical_additive;
  double alpha = 0.0;
  double lambda = 0.0;
  double mu = 0.0;

  static SpineKind critical_additive() { return {}; }
  static SpineKind shaved_derivative(double alpha) { return {Type::shaved_derivative, alpha, 0.0, 0.0}; }
  static SpineKind supercritical(double lambda, double mu) { return {Type::supercritical, 0.0, lambda, mu}; }
};

struct SpinePoint {
  double t, x, y;
};

struct SpineOptions {
  std::vector<double> checkpoint_times;  ///< empty means {horizon_T}
  double dt_max = 0.01;
  std::size_t population_cap = 5'000'000;
};

struct SpineResult {
  ReplicaStatus status = ReplicaStatus::ok;
  std::vector<SpinePoint> path;
  std::vector<std::uint64_t> spine_ids;  ///< spine particle id at each checkpoint
  std::vector<PopulationSnapshot> snapshots;
};

/// Size-biased BBM: a spine branching at rate 2 with tilted motion plus ordinary killed subtrees.
SpineResult simulate_spine(const SpineKind& kind, double origin_y, double horizon_T, std::uint64_t seed,
                           const SpineOptions& options = {});

/// Norm of a 3D Brownian motion from (start,0,0) at times k t / n_steps, k = 0..n_steps.
std::vector<double> sample_bessel3(double start, double t, int n_steps, std::uint64_t seed);

}  // namespace kpp
