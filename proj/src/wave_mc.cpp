#include "kpp/wave_mc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "kpp/bbm.hpp"
#include "kpp/martingales.hpp"
#include "kpp/rng.hpp"
#include "kpp/waves_1d.hpp"

namespace kpp {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

void require_replicas(std::size_t n, const char* who) {
  if (n < 100) throw std::invalid_argument(std::string(who) + ": need at least 100 replicas");
}

PopulationSnapshot killed_run(double y, double T, std::uint64_t seed, double dt_max, const char* who) {
  SimConfig c;
  c.origin_y = y;
  c.horizon_T = T;
  c.dt_max = dt_max;
  c.killing_enabled = true;
  c.seed = seed;
  auto r = simulate_replica(c);
  if (r.status != ReplicaStatus::ok) throw std::runtime_error(std::string(who) + ": population cap exceeded");
  return std::move(r.snapshots.back());
}

// Z_T^alpha with per-call shave level, from an already simulated snapshot
double shaved_Z(const PopulationSnapshot& s, double alpha) {
  KahanSum z;
  const double T = s.t;
  for (const auto& p : s.particles)
    if (p.max_drift_excess <= alpha) z += (kSqrt2 * T - p.x + alpha) * p.y * exp_weight(kSqrt2 * p.x - 2.0 * T);
  return z.value();
}

std::string meta(const char* what, double T, double extra_a, const char* name_a) {
  std::ostringstream os;
  os << what << ", T=" << T << ", " << name_a << "=" << extra_a;
  return os.str();
}

}  // namespace

double supercritical_x_speed(double lambda, double mu) {
  if (!(lambda > 0.0)) throw std::invalid_argument("supercritical_x_speed: lambda must be > 0");
  return (lambda * lambda + mu * mu + 2.0) / (2.0 * lambda);
}

bool in_quarter_disk(double lambda, double mu) { return lambda > 0.0 && mu > 0.0 && lambda * lambda + mu * mu < 2.0; }

std::vector<double> sample_shaved_Z(double y, double T, double alpha, std::size_t replicas, std::uint64_t seed,
                                    double dt_max) {
  if (!(alpha > 0.0)) throw std::invalid_argument("sample_shaved_Z: alpha must be > 0");
  if (!(y >= 0.0)) throw std::invalid_argument("sample_shaved_Z: y must be >= 0");
  std::vector<double> out(replicas);
  parallel_for(replicas, [&](std::size_t i) {
    out[i] = shaved_Z(killed_run(y, T, replica_seed(seed, i), dt_max, "sample_shaved_Z"), alpha);
  });
  return out;
}

std::vector<double> sample_W_lm(double y, double lambda, double mu, double T, std::size_t replicas,
                                std::uint64_t seed, double dt_max) {
  if (!in_quarter_disk(lambda, mu)) throw std::invalid_argument("sample_W_lm: (lambda, mu) outside the quarter disk");
  std::vector<double> out(replicas);
  parallel_for(replicas, [&](std::size_t i) {
    const auto s = killed_run(y, T, replica_seed(seed, i), dt_max, "sample_W_lm");
    KahanSum w;
    for (const auto& p : s.particles) w += supercritical_term(p.x, p.y, s.t, lambda, mu);
    out[i] = w.value();
  });
  return out;
}

EstimateCI estimate_phi(double x, double y, double T, std::size_t replicas, std::uint64_t seed, double alpha,
                        double dt_max) {
  require_replicas(replicas, "estimate_phi");
  auto e = laplace_estimate(sample_shaved_Z(y, T, alpha, replicas, seed, dt_max), x, kSqrt2, T);
  e.meta = meta("shaved Z_T^alpha", T, alpha, "alpha");
  return e;
}

EstimateCI estimate_phi_supercritical(double x, double y, double lambda, double mu, double T, std::size_t replicas,
                                      std::uint64_t seed, double dt_max) {
  require_replicas(replicas, "estimate_phi_supercritical");
  if (!in_quarter_disk(lambda, mu))
    throw std::invalid_argument("estimate_phi_supercritical: (lambda, mu) outside the quarter disk");
  auto e = laplace_estimate(sample_W_lm(y, lambda, mu, T, replicas, seed, dt_max), x, lambda, T);
  std::ostringstream os;
  os << "W_T^{lambda,mu}, T=" << T << ", lambda=" << lambda << ", mu=" << mu;
  e.meta = os.str();
  return e;
}

ProbeGrid estimate_phi_grid(const std::vector<double>& xs, const std::vector<double>& ys, double T,
                            std::size_t replicas, std::uint64_t seed, double alpha, double dt_max) {
  require_replicas(replicas, "estimate_phi_grid");
  ProbeGrid g{xs, ys, {}};
  for (double y : ys) {
    const auto z = sample_shaved_Z(y, T, alpha, replicas, seed, dt_max);
    auto& row = g.estimates.emplace_back();
    for (double x : xs) {
      row.push_back(laplace_estimate(z, x, kSqrt2, T));
      row.back().meta = meta("shaved Z_T^alpha", T, alpha, "alpha");
    }
  }
  return g;
}

double laplace_level(const std::vector<double>& samples, double s) {
  if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("laplace_level: s must lie in (0,1)");
  auto f = [&](double x) { return laplace_estimate(samples, x, kSqrt2, 0.0).value - s; };
  double lo = -1.0, hi = 1.0;
  for (int k = 0; k < 200 && f(lo) < 0.0; ++k) lo -= 2.0;
  for (int k = 0; k < 200 && f(hi) > 0.0; ++k) hi += 2.0;
  if (!(f(lo) >= 0.0 && f(hi) <= 0.0)) throw std::runtime_error("laplace_level: level not bracketed");
  for (int k = 0; k < 200 && hi - lo > 1e-12; ++k) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

ExtinctionEstimate estimate_extinction(double y, double T, std::size_t replicas, std::uint64_t seed) {
  require_replicas(replicas, "estimate_extinction");
  const double T2 = T > 2.0 ? T - 2.0 : 0.5 * T;
  std::vector<double> ext(replicas), ext2(replicas);
  parallel_for(replicas, [&](std::size_t i) {
    SimConfig c;
    c.origin_y = y;
    c.horizon_T = T;
    c.checkpoint_times = {T2, T};
    // bridge killing is exact, one sub-step per lifetime suffices
    c.dt_max = T;
    c.seed = replica_seed(seed, i);
    const auto r = simulate_replica(c);
    if (r.status != ReplicaStatus::ok) throw std::runtime_error("estimate_extinction: population cap exceeded");
    ext2[i] = r.snapshots[0].particles.empty() ? 1.0 : 0.0;
    ext[i] = r.snapshots[1].particles.empty() ? 1.0 : 0.0;
  });
  auto make = [&](const std::vector<double>& v, double t) {
    const auto m = mean_se(v);
    EstimateCI e;
    e.value = m.mean;
    e.std_error = m.se;
    e.replicas = v.size();
    e.horizon_T = t;
    e.meta = "extinction by T";
    return e;
  };
  return {make(ext, T), make(ext2, T2)};
}

EstimateCI mckean_evolve(const Field2D& initial, double t, double x, double y, std::size_t replicas,
                         std::uint64_t seed, double dt_max) {
  require_replicas(replicas, "mckean_evolve");
  if (!(t >= 0.0 && t <= 5.0)) throw std::invalid_argument("mckean_evolve: t must lie in [0, 5]");
  if (initial.values.size() == 0 || initial.values.minCoeff() < 0.0 || initial.values.maxCoeff() > 1.0)
    throw std::invalid_argument("mckean_evolve: initial values must lie in [0,1]");
  std::vector<double> v(replicas);
  parallel_for(replicas, [&](std::size_t i) {
    const auto s = killed_run(y, t, replica_seed(seed, i), dt_max, "mckean_evolve");
    double prod = 1.0;
    for (const auto& p : s.particles) prod *= 1.0 - initial.at(x + p.x, p.y);
    v[i] = 1.0 - prod;
  });
  const auto m = mean_se(v);
  EstimateCI e;
  e.value = m.mean;
  e.std_error = m.se;
  e.replicas = replicas;
  e.horizon_T = t;
  e.meta = "McKean product over N_t^+";
  return e;
}

SmoothingReport smoothing_consistency(double t, double y, double T, std::size_t replicas, std::uint64_t seed,
                                      double alpha, double dt_max) {
  require_replicas(replicas, "smoothing_consistency");
  if (!(t >= 0.0 && t <= 2.0)) throw std::invalid_argument("smoothing_consistency: t must lie in [0, 2]");
  if (t + T > 10.0) throw std::invalid_argument("smoothing_consistency: t + T must be <= 10");
  SmoothingReport rep;
  rep.t = t;
  rep.y = y;
  rep.T = T;
  rep.alpha = alpha;
  const std::uint64_t seed_direct = mix64(seed ^ 0x5151);
  const std::uint64_t seed_first = mix64(seed ^ 0xa2a2);
  std::vector<double> lhs(replicas), rhs(replicas);
  parallel_for(replicas, [&](std::size_t i) {
    lhs[i] = shaved_Z(killed_run(y, t + T, replica_seed(seed_direct, i), dt_max, "smoothing_consistency"), alpha);
    const std::uint64_t rs = replica_seed(seed_first, i);
    PopulationSnapshot first;
    if (t > 0.0) {
      first = killed_run(y, t, rs, dt_max, "smoothing_consistency");
    } else {
      first.particles.push_back(ParticleRecord{1, std::nullopt, 0.0, y, 0.0, true, false, 0.0, y});
    }
    KahanSum acc;
    for (const auto& p : first.particles) {
      if (p.max_drift_excess > alpha) continue;
      // remaining headroom below sqrt2 s + alpha for the subtree
      const double a_u = alpha - (p.x - kSqrt2 * t);
      const std::uint64_t sub_seed = t > 0.0 ? mix64(rs ^ p.id) : replica_seed(seed_direct, i);
      const auto sub = killed_run(p.y, T, sub_seed, dt_max, "smoothing_consistency");
      acc += exp_weight(kSqrt2 * p.x - 2.0 * t) * shaved_Z(sub, a_u);
    }
    rhs[i] = acc.value();
  });
  rep.direct = mean_se(lhs);
  rep.recursion = mean_se(rhs);
  rep.mean_diff = rep.direct.mean - rep.recursion.mean;
  rep.joint_se = std::hypot(rep.direct.se, rep.recursion.se);
  rep.ks = ks_two_sample(lhs, rhs);
  return rep;
}

}  // namespace kpp
