#include "kpp/martingales.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "kpp/rng.hpp"
#include "kpp/stats.hpp"

namespace kpp {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kMinExponent = -745.0;

std::string label(const char* base, double a) {
  std::ostringstream os;
  os << base << '(' << a << ')';
  return os.str();
}

std::string label(const LambdaMu& lm) {
  std::ostringstream os;
  os << "W_lm(" << lm.lambda << ',' << lm.mu << ')';
  return os.str();
}

}  // namespace

double exp_weight(double exponent) { return exponent < kMinExponent ? 0.0 : std::exp(exponent); }

double supercritical_term(double x, double y, double t, double lambda, double mu) {
  const double e = lambda * x - (0.5 * lambda * lambda + 0.5 * mu * mu + 1.0) * t;
  const double s = mu * y;
  if (std::abs(s) < 20.0) return exp_weight(e) * std::sinh(s);
  const double sign = s > 0 ? 1.0 : -1.0;
  return sign * 0.5 * exp_weight(e + std::abs(s)) * (1.0 - std::exp(-2.0 * std::abs(s)));
}

MartingaleReport evaluate_martingales(const PopulationSnapshot& snapshot, const std::vector<double>& alphas,
                                      const std::vector<LambdaMu>& lam_mu) {
  for (double a : alphas)
    if (!(a > 0.0)) throw std::invalid_argument("evaluate_martingales: alpha must be > 0");
  for (const auto& lm : lam_mu)
    if (!(lm.lambda > 0.0 && lm.mu > 0.0)) throw std::invalid_argument("evaluate_martingales: lambda, mu must be > 0");

  const double t = snapshot.t;
  KahanSum A, D, W, Z;
  std::vector<KahanSum> Da(alphas.size()), Za(alphas.size()), Wl(lam_mu.size());
  for (const auto& p : snapshot.particles) {
    const double e = exp_weight(kSqrt2 * p.x - 2.0 * t);
    const double gap = kSqrt2 * t - p.x;
    A += e;
    D += gap * e;
    W += p.y * e;
    Z += gap * p.y * e;
    for (std::size_t i = 0; i < alphas.size(); ++i) {
      if (p.max_drift_excess <= alphas[i]) {
        Da[i] += (gap + alphas[i]) * e;
        Za[i] += (gap + alphas[i]) * p.y * e;
      }
    }
    for (std::size_t i = 0; i < lam_mu.size(); ++i)
      Wl[i] += supercritical_term(p.x, p.y, t, lam_mu[i].lambda, lam_mu[i].mu);
  }
  MartingaleReport r;
  r.t = t;
  r.A = A.value();
  r.D = D.value();
  r.W = W.value();
  r.Z = Z.value();
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    r.D_alpha[alphas[i]] = Da[i].value();
    r.Z_alpha[alphas[i]] = Za[i].value();
  }
  for (std::size_t i = 0; i < lam_mu.size(); ++i) r.W_lm[lam_mu[i]] = Wl[i].value();
  r.no_killing_variant = !snapshot.killing_enabled;
  return r;
}

TrajectoryResult martingale_trajectory(const SimConfig& config, const std::vector<double>& alphas,
                                       const std::vector<LambdaMu>& lam_mu, std::size_t replicas) {
  config.validate();
  TrajectoryResult out;
  out.times = config.checkpoints();
  std::vector<std::vector<MartingaleReport>> per(replicas);
  std::vector<char> capped(replicas, 0);
  parallel_for(replicas, [&](std::size_t i) {
    SimConfig c = config;
    c.seed = replica_seed(config.seed, i);
    const auto res = simulate_replica(c);
    if (res.status == ReplicaStatus::cap) {
      capped[i] = 1;
      return;
    }
    for (const auto& s : res.snapshots) per[i].push_back(evaluate_martingales(s, alphas, lam_mu));
  });
  for (std::size_t i = 0; i < replicas; ++i) {
    if (capped[i]) {
      ++out.capped;
      continue;
    }
    out.reports.push_back(std::move(per[i]));
  }
  out.summary = summarize(out);
  return out;
}

std::vector<SeriesSummary> summarize(const TrajectoryResult& traj) {
  std::vector<SeriesSummary> rows;
  if (traj.reports.empty()) return rows;
  const auto& first = traj.reports.front();
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    auto add = [&](const std::string& name, auto getter) {
      std::vector<double> v;
      v.reserve(traj.reports.size());
      for (const auto& rep : traj.reports) v.push_back(getter(rep[k]));
      const auto ms = mean_se(v);
      rows.push_back({name, traj.times[k], ms.mean, ms.se, quantile(v, 0.25), quantile(v, 0.5), quantile(v, 0.75)});
    };
    add("A", [](const MartingaleReport& r) { return r.A; });
    add("D", [](const MartingaleReport& r) { return r.D; });
    add("W", [](const MartingaleReport& r) { return r.W; });
    add("Z", [](const MartingaleReport& r) { return r.Z; });
    for (const auto& [a, _] : first[k].D_alpha) {
      add(label("D_alpha", a), [a](const MartingaleReport& r) { return r.D_alpha.at(a); });
      add(label("Z_alpha", a), [a](const MartingaleReport& r) { return r.Z_alpha.at(a); });
    }
    for (const auto& [lm, _] : first[k].W_lm)
      add(label(lm), [lm](const MartingaleReport& r) { return r.W_lm.at(lm); });
  }
  return rows;
}

}  // namespace kpp
