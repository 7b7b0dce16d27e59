#include "kpp/bbm.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "kpp/rng.hpp"

namespace kpp {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr std::uint64_t kRootId = 1;
constexpr std::uint64_t kSpineStream = 0x5350494e45ULL;

// Depth-first growth of ordinary BBM subtrees into a shared snapshot series.
class Engine {
 public:
  Engine(std::uint64_t replica_seed, const std::vector<double>& checkpoints, double horizon, double dt_max,
         bool killing, std::size_t cap, std::vector<PopulationSnapshot>& snapshots)
      : seed_(replica_seed), cps_(checkpoints), horizon_(horizon), dt_max_(dt_max), killing_(killing), cap_(cap),
        snaps_(snapshots) {}

  // False when the population cap is exceeded.
  bool run(const ParticleRecord& root) {
    stack_.clear();
    stack_.push_back(root);
    if (++created_ > cap_) return false;
    while (!stack_.empty()) {
      ParticleRecord p = stack_.back();
      stack_.pop_back();
      if (!evolve(p)) continue;
      for (unsigned slot : {1u, 0u}) {
        ParticleRecord c = p;
        c.id = child_id(p.id, slot);
        c.parent_id = p.id;
        stack_.push_back(c);
      }
      created_ += 2;
      if (created_ > cap_) return false;
    }
    return true;
  }

  std::size_t created() const { return created_; }

 private:
  // Moves p over its lifetime; true if it branches before the horizon (p then holds the branch state).
  bool evolve(ParticleRecord& p) {
    SplitMix64 g(stream_seed(seed_, p.id));
    std::normal_distribution<double> normal;
    std::exponential_distribution<double> expo(SimConfig::branch_rate);
    const double death = p.birth_time + expo(g);
    const double end = std::min(death, horizon_);
    if (killing_ && p.y <= 0.0) {
      p.killed = true;
      p.alive = false;
      return false;
    }
    double t = p.birth_time;
    auto k = static_cast<std::size_t>(std::lower_bound(cps_.begin(), cps_.end(), t) - cps_.begin());
    for (;;) {
      while (k < cps_.size() && cps_[k] <= t) {
        if (t < death) record(k, p);
        ++k;
      }
      if (t >= end) break;
      const double stop = k < cps_.size() ? std::min(cps_[k], end) : end;
      while (t < stop) {
        double dt = stop - t;
        double next = stop;
        if (dt > dt_max_ * (1.0 + 1e-12)) {
          dt = dt_max_;
          next = t + dt;
        }
        const double sd = std::sqrt(dt);
        const double x1 = p.x + sd * normal(g);
        const double y1 = p.y + sd * normal(g);
        const double u_min = g.uniform();
        const double u_max = g.uniform();
        const double m = bridge_min(p.y, y1, dt, u_min);
        p.min_y = std::min(p.min_y, m);
        p.max_drift_excess = std::max(p.max_drift_excess, bridge_max(p.x - kSqrt2 * t, x1 - kSqrt2 * next, dt, u_max));
        p.x = x1;
        p.y = y1;
        t = next;
        if (killing_ && m <= 0.0) {
          p.killed = true;
          p.alive = false;
          return false;
        }
      }
    }
    if (death >= horizon_) return false;
    p.birth_time = death;
    return true;
  }

  void record(std::size_t k, const ParticleRecord& p) { snaps_[k].particles.push_back(p); }

  std::uint64_t seed_;
  const std::vector<double>& cps_;
  double horizon_;
  double dt_max_;
  bool killing_;
  std::size_t cap_;
  std::vector<PopulationSnapshot>& snaps_;
  std::vector<ParticleRecord> stack_;
  std::size_t created_ = 0;
};

std::vector<PopulationSnapshot> empty_series(const std::vector<double>& cps, std::uint64_t seed, bool killing,
                                             double origin_y) {
  std::vector<PopulationSnapshot> out(cps.size());
  for (std::size_t k = 0; k < cps.size(); ++k) {
    out[k].t = cps[k];
    out[k].replica_seed = seed;
    out[k].killing_enabled = killing;
    out[k].origin_y = origin_y;
  }
  return out;
}

void sort_by_id(std::vector<PopulationSnapshot>& snaps) {
  for (auto& s : snaps)
    std::sort(s.particles.begin(), s.particles.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
}

std::vector<double> normalized_checkpoints(const std::vector<double>& cps, double horizon) {
  if (cps.empty()) return {horizon};
  if (!std::is_sorted(cps.begin(), cps.end())) throw std::invalid_argument("checkpoint_times must be sorted");
  if (cps.front() < 0.0 || cps.back() > horizon) throw std::invalid_argument("checkpoint_times outside [0, horizon_T]");
  return cps;
}

}  // namespace

void SimConfig::validate() const {
  if (!(origin_y >= 0.0)) throw std::invalid_argument("origin_y must be >= 0");
  if (!(horizon_T >= 0.0)) throw std::invalid_argument("horizon_T must be >= 0");
  if (!(dt_max > 0.0)) throw std::invalid_argument("dt_max must be > 0");
  if (population_cap == 0) throw std::invalid_argument("population_cap must be > 0");
  normalized_checkpoints(checkpoint_times, horizon_T);
}

std::vector<double> SimConfig::checkpoints() const { return normalized_checkpoints(checkpoint_times, horizon_T); }

ReplicaResult simulate_replica(const SimConfig& config) {
  config.validate();
  const auto cps = config.checkpoints();
  ReplicaResult result;
  result.snapshots = empty_series(cps, config.seed, config.killing_enabled, config.origin_y);
  Engine engine(config.seed, cps, config.horizon_T, config.dt_max, config.killing_enabled, config.population_cap,
                result.snapshots);
  ParticleRecord root;
  root.id = kRootId;
  root.y = config.origin_y;
  root.min_y = config.origin_y;
  const bool ok = engine.run(root);
  result.particles_created = engine.created();
  if (!ok) {
    result.status = ReplicaStatus::cap;
    result.snapshots.clear();
    return result;
  }
  sort_by_id(result.snapshots);
  return result;
}

bool bridge_kill(double y0, double y1, double dt, double u) {
  if (!(dt > 0.0)) throw std::invalid_argument("bridge_kill: dt must be > 0");
  if (!(y0 > 0.0 && y1 > 0.0)) throw std::invalid_argument("bridge_kill: endpoints must be positive");
  return u <= std::exp(-2.0 * y0 * y1 / dt);
}

double bridge_max(double a, double b, double dt, double u) {
  return 0.5 * (a + b + std::sqrt((b - a) * (b - a) - 2.0 * dt * std::log(u)));
}

double bridge_min(double a, double b, double dt, double u) {
  return 0.5 * (a + b - std::sqrt((b - a) * (b - a) - 2.0 * dt * std::log(u)));
}

SpineResult simulate_spine(const SpineKind& kind, double origin_y, double horizon_T, std::uint64_t seed,
                           const SpineOptions& options) {
  using T = SpineKind::Type;
  if (!(origin_y > 0.0)) throw std::invalid_argument("simulate_spine: origin_y must be > 0");
  if (!(horizon_T >= 0.0)) throw std::invalid_argument("simulate_spine: horizon_T must be >= 0");
  if (!(options.dt_max > 0.0)) throw std::invalid_argument("simulate_spine: dt_max must be > 0");
  if (kind.type == T::shaved_derivative && !(kind.alpha > 0.0))
    throw std::invalid_argument("simulate_spine: alpha must be > 0");
  if (kind.type == T::supercritical && !(kind.lambda > 0.0 && kind.mu > 0.0))
    throw std::invalid_argument("simulate_spine: lambda, mu must be > 0");

  const auto cps = normalized_checkpoints(options.checkpoint_times, horizon_T);
  SpineResult res;
  res.snapshots = empty_series(cps, seed, true, origin_y);
  res.spine_ids.assign(cps.size(), 0);
  Engine engine(seed, cps, horizon_T, options.dt_max, true, options.population_cap, res.snapshots);

  SplitMix64 g(stream_seed(seed, kSpineStream));
  std::normal_distribution<double> normal;
  std::exponential_distribution<double> expo(2.0 * SimConfig::branch_rate);

  // 3D carriers for the radial parts; `a` drives X in the shaved frame, `b` drives Y.
  std::array<double, 3> a{kind.alpha, 0.0, 0.0};
  std::array<double, 3> b{origin_y, 0.0, 0.0};
  if (kind.type == T::supercritical) {
    // initial direction of the drifted 3D motion: cos(theta) has density proportional to exp(mu y u)
    const double s = kind.mu * origin_y;
    const double u = g.uniform();
    const double c = std::clamp(1.0 + std::log(u + (1.0 - u) * std::exp(-2.0 * s)) / s, -1.0, 1.0);
    const double phi = 2.0 * std::numbers::pi * g.uniform();
    const double r = origin_y * std::sqrt(1.0 - c * c);
    b = {origin_y * c, r * std::cos(phi), r * std::sin(phi)};
  }
  auto norm3 = [](const std::array<double, 3>& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); };

  ParticleRecord spine;
  spine.id = kRootId;
  spine.y = origin_y;
  spine.min_y = origin_y;
  double t = 0.0;
  double bm_x = 0.0;
  double next_branch = expo(g);
  res.path.push_back({0.0, 0.0, origin_y});

  std::size_t k = 0;
  for (;;) {
    while (k < cps.size() && cps[k] <= t) {
      res.snapshots[k].particles.push_back(spine);
      res.spine_ids[k] = spine.id;
      ++k;
    }
    if (t >= horizon_T) break;
    double stop = std::min(next_branch, horizon_T);
    if (k < cps.size()) stop = std::min(stop, cps[k]);
    while (t < stop) {
      double dt = stop - t;
      double next = stop;
      if (dt > options.dt_max * (1.0 + 1e-12)) {
        dt = options.dt_max;
        next = t + dt;
      }
      const double sd = std::sqrt(dt);
      double x = 0.0, y = 0.0;
      switch (kind.type) {
        case T::critical_additive:
          bm_x += sd * normal(g);
          for (double& c : b) c += sd * normal(g);
          x = bm_x + kSqrt2 * next;
          y = norm3(b);
          break;
        case T::shaved_derivative:
          for (double& c : a) c += sd * normal(g);
          for (double& c : b) c += sd * normal(g);
          x = kSqrt2 * next + kind.alpha - norm3(a);
          y = norm3(b);
          break;
        case T::supercritical:
          bm_x += kind.lambda * dt + sd * normal(g);
          b[0] += kind.mu * dt;
          for (double& c : b) c += sd * normal(g);
          x = bm_x;
          y = norm3(b);
          break;
      }
      t = next;
      spine.x = x;
      spine.y = y;
      spine.min_y = std::min(spine.min_y, y);
      spine.max_drift_excess = std::max(spine.max_drift_excess, x - kSqrt2 * t);
      res.path.push_back({t, x, y});
    }
    if (t == next_branch && t < horizon_T) {
      ParticleRecord side = spine;
      side.id = child_id(spine.id, 1);
      side.parent_id = spine.id;
      side.birth_time = t;
      if (!engine.run(side)) {
        res.status = ReplicaStatus::cap;
        res.snapshots.clear();
        return res;
      }
      spine.parent_id = spine.id;
      spine.id = child_id(spine.id, 0);
      spine.birth_time = t;
      next_branch = t + expo(g);
    }
  }
  sort_by_id(res.snapshots);
  return res;
}

std::vector<double> sample_bessel3(double start, double t, int n_steps, std::uint64_t seed) {
  if (!(start > 0.0)) throw std::invalid_argument("sample_bessel3: start must be > 0");
  if (!(t >= 0.0) || n_steps < 1) throw std::invalid_argument("sample_bessel3: need t >= 0 and n_steps >= 1");
  SplitMix64 g(mix64(seed));
  std::normal_distribution<double> normal;
  const double sd = std::sqrt(t / n_steps);
  std::array<double, 3> v{start, 0.0, 0.0};
  std::vector<double> path(static_cast<std::size_t>(n_steps) + 1);
  path[0] = start;
  for (int i = 1; i <= n_steps; ++i) {
    for (double& c : v) c += sd * normal(g);
    path[i] = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  }
  return path;
}

}  // namespace kpp
