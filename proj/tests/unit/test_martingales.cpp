#include <cmath>

#include "doctest.h"
#include "kpp/bbm.hpp"
#include "kpp/martingales.hpp"
#include "kpp/rng.hpp"
#include "kpp/stats.hpp"

using namespace kpp;

namespace {

PopulationSnapshot root(double y) {
  PopulationSnapshot s;
  ParticleRecord p;
  p.id = 1;
  p.y = y;
  p.min_y = y;
  s.particles.push_back(p);
  s.origin_y = y;
  return s;
}

PopulationSnapshot run(double y, double T, bool kill, std::uint64_t seed) {
  SimConfig c;
  c.origin_y = y;
  c.horizon_T = T;
  c.killing_enabled = kill;
  c.seed = seed;
  c.dt_max = 0.05;
  return simulate_replica(c).snapshots.back();
}

}  // namespace

TEST_CASE("single particle at t = 0") {
  const auto r = evaluate_martingales(root(1.0), {2.0, 5.0}, {{1.0, 0.5}});
  CHECK(r.W == doctest::Approx(1.0));
  CHECK(r.Z == doctest::Approx(0.0));
  CHECK(r.A == doctest::Approx(1.0));
  CHECK(r.D == doctest::Approx(0.0));
  CHECK(r.Z_alpha.at(2.0) == doctest::Approx(2.0));
  CHECK(r.Z_alpha.at(5.0) == doctest::Approx(5.0));
  CHECK(r.W_lm.at({1.0, 0.5}) == doctest::Approx(0.521095).epsilon(1e-6));
}

TEST_CASE("invalid parameters are rejected") {
  CHECK_THROWS(evaluate_martingales(root(1.0), {0.0}, {}));
  CHECK_THROWS(evaluate_martingales(root(1.0), {}, {{-1.0, 0.5}}));
}

TEST_CASE("exp_weight underflow is an exact zero") {
  CHECK(exp_weight(-746.0) == 0.0);
  CHECK(exp_weight(0.0) == 1.0);
}

TEST_CASE("large mu y stays finite") {
  const double a = supercritical_term(0.0, 100.0, 0.0, 1.0, 0.5);
  CHECK(std::isfinite(a));
  CHECK(a == doctest::Approx(std::sinh(50.0)));
}

TEST_CASE("snapshot properties") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto s = run(1.0, 3.0, true, seed);
    const auto r = evaluate_martingales(s, {0.5, 1.0, 2.0, 8.0}, {{1.0, 0.5}});
    CHECK(r.A >= 0.0);
    CHECK(r.W >= 0.0);
    CHECK(r.W_lm.at({1.0, 0.5}) >= 0.0);
    double prev = -1e300;
    for (const auto& [a, z] : r.Z_alpha) {
      CHECK(z >= 0.0);
      CHECK(z >= prev);
      prev = z;
      double worst = 0.0;
      for (const auto& p : s.particles) worst = std::max(worst, p.max_drift_excess);
      if (worst <= a) CHECK(std::abs(z - (r.Z + a * r.W)) <= 1e-12 * std::max(1.0, std::abs(z)));
    }
    for (const auto& [a, d] : r.D_alpha) CHECK(d >= 0.0);
  }
}

TEST_CASE("1D sums match a scalar implementation") {
  const auto s = run(1.0, 3.0, false, 17);
  const auto r = evaluate_martingales(s, {}, {});
  double A = 0.0, D = 0.0;
  for (const auto& p : s.particles) {
    const double e = std::exp(std::sqrt(2.0) * p.x - 2.0 * s.t);
    A += e;
    D += (std::sqrt(2.0) * s.t - p.x) * e;
  }
  CHECK(r.A == doctest::Approx(A).epsilon(1e-12));
  CHECK(r.D == doctest::Approx(D).epsilon(1e-12));
  CHECK(r.no_killing_variant);
}

TEST_CASE("mean identities with killing") {
  SimConfig c;
  c.origin_y = 1.0;
  c.horizon_T = 1.0;
  c.checkpoint_times = {0.5, 1.0};
  c.dt_max = 0.05;
  c.seed = 2024;
  const auto tr = martingale_trajectory(c, {2.0}, {{1.0, 0.5}}, 20000);
  CHECK(tr.capped == 0);
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    std::vector<double> W, Z, Za, Wl;
    for (const auto& rep : tr.reports) {
      W.push_back(rep[k].W);
      Z.push_back(rep[k].Z);
      Za.push_back(rep[k].Z_alpha.at(2.0));
      Wl.push_back(rep[k].W_lm.at({1.0, 0.5}));
    }
    auto near = [](const std::vector<double>& v, double target) {
      const auto ms = mean_se(v);
      return std::abs(ms.mean - target) <= 4.0 * ms.se;
    };
    CHECK(near(W, 1.0));
    CHECK(near(Z, 0.0));
    CHECK(near(Za, 2.0));
    CHECK(near(Wl, std::sinh(0.5)));
  }
}

TEST_CASE("summary rows cover every series and checkpoint") {
  SimConfig c;
  c.horizon_T = 1.0;
  c.checkpoint_times = {0.5, 1.0};
  c.dt_max = 0.1;
  const auto tr = martingale_trajectory(c, {2.0}, {{1.0, 0.5}}, 50);
  CHECK(!tr.summary.empty());
  for (const auto& s : tr.summary) {
    CHECK(s.q25 <= s.median);
    CHECK(s.median <= s.q75);
  }
}
