#include <cmath>
#include <numbers>

#include "doctest.h"
#include "kpp/asymptotics.hpp"
#include "kpp/pde_2d.hpp"
#include "kpp/waves_1d.hpp"

using namespace kpp;

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

const Profile1D& wmin() {
  static const Profile1D w = solve_wave_1d(kSqrt2).profile;
  return w;
}

Field2D minimal(double h, double x_hi, double y_hi) {
  static const Profile1D phi = solve_steady_phi(60.0, 0.005).profile;
  Domain d;
  d.hx = d.hy = h;
  d.x_hi = x_hi;
  d.y_hi = y_hi;
  MarchOptions o;
  o.max_explicit_steps = 300;
  return solve_minimal_wave(d, phi, wmin(), 0.0, o).result.field;
}

const Field2D& field() {
  static const Field2D f = minimal(0.1, 25.0, 40.0);
  return f;
}

}  // namespace

TEST_CASE("speed formula") {
  CHECK(wave_speed(1.0, 0.5) == doctest::Approx(3.25 / (2.0 * std::sqrt(1.25))).epsilon(1e-12));
  CHECK(wave_speed(1.0, 0.5) == doctest::Approx(1.45344).epsilon(1e-5));
  CHECK(wave_speed(1.0, 1e-3) == doctest::Approx(1.5).epsilon(1e-5));
}

TEST_CASE("level curve geometry") {
  const auto lc = level_set(field(), 0.5, 2.0);
  REQUIRE(lc.ys.size() > 10);
  // rows inside the top boundary layer are excluded, as in the monotonicity check
  for (std::size_t k = 1; k < lc.sigma.size(); ++k)
    if (lc.ys[k] <= 0.95 * field().y_hi()) CHECK(lc.sigma[k] > lc.sigma[k - 1]);
  auto slope = [&](double y) {
    std::size_t k = 0;
    while (k + 1 < lc.ys.size() && lc.ys[k] < y) ++k;
    return (lc.sigma[k] - lc.sigma[k - 1]) / (lc.ys[k] - lc.ys[k - 1]);
  };
  CHECK(slope(10.0) > slope(20.0));
  CHECK(slope(20.0) > slope(35.0));
  for (std::size_t k = 0; k < lc.ys.size(); ++k)
    if (lc.ys[k] >= 10.0 && lc.ys[k] <= 35.0) CHECK(lc.sigma[k] <= 1.6 * std::log(lc.ys[k]) + 5.0);
}

TEST_CASE("log shift is essential") {
  const auto& f = field();
  const double s = fit_log_shift(f, wmin(), 32.0);
  const double e8 = log_shift_error(f, wmin(), 8.0, s), e16 = log_shift_error(f, wmin(), 16.0, s),
               e32 = log_shift_error(f, wmin(), 32.0, s);
  CHECK(e8 > e16);
  CHECK(e16 > e32);
  CHECK(e32 < 0.05);
  const double c8 = log_shift_error(f, wmin(), 8.0, s, false), c32 = log_shift_error(f, wmin(), 32.0, s, false);
  CHECK(c32 > c8);
}

TEST_CASE("tameness") {
  const auto& f = field();
  const auto t = tameness_constant(f, 0.05 * f.y_hi());
  CHECK(std::isfinite(t.C));
  CHECK(t.C > 0.0);
  // the ratio is flat in y near the right edge, so the top margin barely matters
  CHECK(tameness_constant(f, 0.3 * f.y_hi()).C == doctest::Approx(t.C).epsilon(1e-3));
  const auto coarse = tameness_constant(minimal(0.2, 25.0, 40.0), 0.05 * f.y_hi());
  CHECK(coarse.C == doctest::Approx(t.C).epsilon(0.1));
  auto doubled = f;
  doubled.values = (2.0 * f.values).min(1.0);
  CHECK(tameness_constant(doubled, 0.05 * f.y_hi()).C > t.C);
}

TEST_CASE("tail expansion") {
  const auto& f = field();
  const double K = fit_tail_constant(wmin()).K_star * std::exp(kSqrt2 * fit_log_shift(f, wmin(), 32.0));
  TailOptions o;
  o.y_margin = 0.2 * f.y_hi();
  const auto t = tail_expansion_check(f, K, o);
  CHECK(std::isfinite(t.sup_E));
  CHECK(t.nodes > 0);
  CHECK(t.sup_by_region.back() == doctest::Approx(t.sup_E));
  CHECK(std::isfinite(tail_ray_sup(f, K, 5.0, 10.0, 22.0)));
}

TEST_CASE("coupled derivative martingale") {
  const auto r = coupled_Z_over_y({1e-3, 2.0, 8.0, 32.0}, 4.0, 3000, 7, 4.0);
  REQUIRE(r.rows.size() == 4);
  // N_T^y nearly empties, but Z/y keeps conditional mean D, so its spread grows like 1/y
  CHECK(std::abs(r.rows[0].mean_Z) < 1e-2);
  CHECK(r.rows[0].l2 > r.rows[1].l2);
  for (std::size_t k = 1; k < r.rows.size(); ++k) {
    CHECK(std::abs(r.rows[k].mean_Z) <= 4.0 * r.rows[k].se_Z);
    CHECK(r.rows[k].l2 < r.rows[k - 1].l2);
  }
  for (std::size_t k = 1; k < 3; ++k) CHECK(std::abs(r.rows[k].slope - r.rows[k].y) <= 4.0 * r.rows[k].slope_se);
}

TEST_CASE("coupled supercritical additive martingale") {
  const auto r = coupled_W_supercritical(1.0, 0.5, {0.5, 2.0, 8.0}, 4.0, 3000, 8, 4.0);
  for (const auto& row : r.rows) {
    CHECK(row.min_gap >= -1e-12);
    CHECK(row.monotone_violations == 0);
    CHECK(row.target == doctest::Approx((1.0 + std::exp(-row.y)) / 2.0));
    CHECK(std::abs(row.mean_gap - row.target) <= 4.0 * row.se_gap);
  }
  CHECK_THROWS(coupled_W_supercritical(1.5, 1.0, {1.0}, 2.0, 10, 1));
}
