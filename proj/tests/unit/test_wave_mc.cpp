#include <cmath>
#include <numbers>

#include "doctest.h"
#include "kpp/bbm.hpp"
#include "kpp/pde_2d.hpp"
#include "kpp/rng.hpp"
#include "kpp/stats.hpp"
#include "kpp/wave_mc.hpp"
#include "kpp/waves_1d.hpp"

using namespace kpp;

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

Field2D wave(double h) {
  static const Profile1D phi = solve_steady_phi(60.0, 0.005).profile;
  static const Profile1D w = solve_wave_1d(kSqrt2).profile;
  Domain d;
  d.hx = d.hy = h;
  d.x_hi = 20.0;
  d.y_hi = 30.0;
  MarchOptions o;
  o.max_explicit_steps = 300;
  return pin_field(solve_minimal_wave(d, phi, w, 0.0, o).result.field);
}

}  // namespace

TEST_CASE("supercritical speed and parameter set") {
  CHECK(supercritical_x_speed(1.0, 0.5) == doctest::Approx(1.625));
  CHECK(in_quarter_disk(1.0, 0.5));
  CHECK(!in_quarter_disk(1.5, 1.0));
  CHECK(!in_quarter_disk(0.0, 0.5));
  CHECK_THROWS(estimate_phi_supercritical(0.0, 1.0, 1.5, 1.0, 2.0, 200, 1));
}

TEST_CASE("replica floor") {
  CHECK_THROWS(estimate_phi(0.0, 1.0, 2.0, 50, 1));
}

TEST_CASE("critical Laplace wave limits and monotonicity") {
  const auto far = estimate_phi(40.0, 2.0, 6.0, 500, 3);
  CHECK(far.value <= far.std_error + 1e-12);
  const auto low = estimate_phi(0.0, 1e-3, 6.0, 500, 3);
  CHECK(low.value <= 2.0 * low.std_error + 1e-12);
  const auto g = estimate_phi_grid({-1.0, 0.0, 1.0}, {0.5, 2.0, 5.0}, 6.0, 1000, 4);
  for (std::size_t j = 0; j < g.ys.size(); ++j)
    for (std::size_t i = 0; i < g.xs.size(); ++i) {
      const auto& e = g.estimates[j][i];
      CHECK(e.value >= 0.0);
      CHECK(e.value <= 1.0);
      if (i > 0) CHECK(e.value < g.estimates[j][i - 1].value);
      if (j > 0) CHECK(e.value >= g.estimates[j - 1][i].value);
    }
}

TEST_CASE("supercritical Laplace wave limits and monotonicity") {
  const auto far = estimate_phi_supercritical(40.0, 1.0, 1.0, 0.5, 6.0, 500, 5);
  CHECK(far.value <= far.std_error + 1e-12);
  double prev = -1.0;
  for (double y : {0.5, 1.0, 2.0}) {
    const double v = estimate_phi_supercritical(0.0, y, 1.0, 0.5, 6.0, 1000, 6).value;
    CHECK(v > prev);
    prev = v;
  }
  for (double v : sample_W_lm(1.0, 1.0, 0.5, 3.0, 200, 7)) CHECK(v >= 0.0);
}

TEST_CASE("level of the Laplace transform") {
  const std::vector<double> s(10, 3.0);
  CHECK(laplace_level(s, 0.5) == doctest::Approx(std::log(3.0 / std::log(2.0)) / kSqrt2).epsilon(1e-9));
  CHECK_THROWS(laplace_level(s, 1.0));
}

TEST_CASE("extinction probabilities") {
  static const Profile1D phi = solve_steady_phi(60.0, 0.005).profile;
  const auto a = estimate_extinction(1e-3, 6.0, 500, 9).at_T;
  CHECK(std::abs(a.value - 1.0) <= std::max(2.0 * a.std_error, 5e-3));
  const auto b = estimate_extinction(10.0, 6.0, 500, 9).at_T;
  CHECK(std::abs(b.value - (1.0 - phi(10.0))) <= std::max(3.0 * b.std_error, 0.01));
  const auto c = estimate_extinction(1.0, 8.0, 4000, 9);
  CHECK(std::abs(c.at_T.value - (1.0 - phi(1.0))) <= std::max(3.0 * c.at_T.std_error, 0.01));
  CHECK(c.at_T_minus_2.value <= c.at_T.value);
}

TEST_CASE("McKean representation with constant data") {
  auto f = Field2D::make(-30.0, 30.0, 30.0, 0.5, 0.5);
  CHECK(mckean_evolve(f, 1.0, 0.0, 1.0, 500, 11).value == 0.0);
  f.values.setConstant(1.0);
  const auto e = mckean_evolve(f, 1.0, 0.0, 1.0, 4000, 11);
  // survival by direct simulation on independent seeds
  std::vector<double> alive(4000);
  parallel_for(alive.size(), [&](std::size_t i) {
    SimConfig c;
    c.origin_y = 1.0;
    c.horizon_T = 1.0;
    c.dt_max = 1.0;
    c.seed = replica_seed(12, i);
    alive[i] = simulate_replica(c).snapshots.back().particles.empty() ? 0.0 : 1.0;
  });
  const auto s = mean_se(alive);
  CHECK(std::abs(e.value - s.mean) <= 4.0 * std::hypot(e.std_error, s.se));
  f.values(3, 3) = 1.5;
  CHECK_THROWS(mckean_evolve(f, 1.0, 0.0, 1.0, 500, 11));
}

TEST_CASE("McKean evolution transports the traveling wave") {
  const auto coarse = wave(0.2), fine = wave(0.1);
  const double t = 1.0;
  for (auto [x, y] : {std::pair{0.0, 5.0}, {1.0, 2.0}, {-1.0, 8.0}}) {
    const auto e = mckean_evolve(fine, t, x + fine.frame_speed_c * t, y, 4000, 13, 0.05);
    const double grid_err = std::abs(fine.at(x, y) - coarse.at(x, y));
    CHECK(std::abs(e.value - fine.at(x, y)) <= std::max(3.0 * e.std_error, 2.0 * grid_err));
  }
}

TEST_CASE("smoothing transform") {
  const auto z = smoothing_consistency(0.0, 1.0, 4.0, 500, 14);
  CHECK(z.mean_diff == 0.0);
  CHECK(z.ks.statistic == 0.0);
  const auto r = smoothing_consistency(1.0, 1.0, 6.0, 2000, 15);
  CHECK(r.ks.p_value > 0.01);
  CHECK(std::abs(r.mean_diff) <= 4.0 * r.joint_se);
  CHECK_THROWS(smoothing_consistency(3.0, 1.0, 6.0, 500, 1));
  CHECK_THROWS(smoothing_consistency(1.0, 1.0, 9.5, 500, 1));
}
