#include <cmath>
#include <numbers>

#include "doctest.h"
#include "kpp/rng.hpp"
#include "kpp/waves_1d.hpp"

using namespace kpp;

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

const SteadyPhi& phi() {
  static const SteadyPhi p = solve_steady_phi();
  return p;
}

const Profile1D& wmin() {
  static const Profile1D w = solve_wave_1d(kSqrt2).profile;
  return w;
}

}  // namespace

TEST_CASE("steady state phi") {
  const auto& p = phi();
  CHECK(p.profile(0.0) == 0.0);
  CHECK(std::abs(p.slope0 - std::sqrt(2.0 / 3.0)) < 1e-4);
  CHECK(p.profile.values[p.profile.size() - 1] >= 1.0 - 1e-3);
  CHECK(p.profile.values[p.profile.size() - 1] <= 1.0);
  CHECK(p.first_integral_dev < 1e-6);
  // first integral by centered differences on the grid
  const auto& v = p.profile.values;
  const double h = p.profile.h;
  double dev = 0.0;
  for (Eigen::Index i = 1; i + 1 < v.size(); i += 37) {
    const double d = (v[i + 1] - v[i - 1]) / (2 * h);
    dev = std::max(dev, std::abs(0.5 * d * d + v[i] * v[i] - 2.0 / 3.0 * v[i] * v[i] * v[i] - 1.0 / 3.0));
  }
  CHECK(dev < 1e-4);
  for (Eigen::Index i = 1; i < v.size(); ++i) CHECK(v[i] >= v[i - 1]);
}

TEST_CASE("steady state argument checks") {
  CHECK_THROWS(solve_steady_phi(10.0));
  CHECK_THROWS(solve_steady_phi(30.0, 0.1));
}

TEST_CASE("steady state under refinement") {
  const auto coarse = solve_steady_phi(30.0, 0.01).profile;
  const auto fine = solve_steady_phi(30.0, 0.005).profile;
  double d = 0.0;
  for (double y = 0.0; y <= 29.0; y += 0.37) d = std::max(d, std::abs(coarse(y) - fine(y)));
  CHECK(d < 1e-4);
}

TEST_CASE("minimal wave") {
  const auto& w = wmin();
  CHECK(w(0.0) == doctest::Approx(0.5).epsilon(1e-12));
  for (Eigen::Index i = 1; i < w.size(); ++i) CHECK(w.values[i] < w.values[i - 1]);
  CHECK(w.values[0] <= 1.0);
  CHECK(w.values[w.size() - 1] >= 0.0);
}

TEST_CASE("speed guard") {
  CHECK_THROWS(solve_wave_1d(1.0));
  CHECK_NOTHROW(solve_wave_1d(1.4142135));
}

TEST_CASE("characteristic rates") {
  CHECK(tail_rate(2.0) == doctest::Approx(2.0 - kSqrt2));
  CHECK(tail_rate(kSqrt2) == doctest::Approx(kSqrt2));
  CHECK_THROWS(tail_rate(1.0));
  const double r = tail_rate(1.7);
  CHECK(0.5 * r * r - 1.7 * r + 1.0 == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("supercritical tail decay rate") {
  const auto w = solve_wave_1d(2.0).profile;
  std::vector<double> xs, ls;
  for (double x = 15.0; x <= 25.0; x += 0.5) {
    xs.push_back(x);
    ls.push_back(std::log(w(x)));
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i] / xs.size();
    my += ls[i] / xs.size();
  }
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ls[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  const double rate = -sxy / sxx;
  CHECK(std::abs(rate - (2.0 - kSqrt2)) < 0.02 * (2.0 - kSqrt2));
}

TEST_CASE("wave under refinement") {
  const auto coarse = solve_wave_1d(kSqrt2, -40, 40, 0.02).profile;
  double d = 0.0;
  for (double x = -30.0; x <= 30.0; x += 0.13) d = std::max(d, std::abs(coarse(x) - wmin()(x)));
  CHECK(d < 1e-4);
}

TEST_CASE("wave is unique up to shift") {
  WaveOptions o;
  o.init_rate = 0.6;
  const auto other = solve_wave_1d(kSqrt2, -40, 40, 0.01, o).profile;
  std::vector<double> xs, vs;
  for (double x = -6.0; x <= 6.0; x += 0.5) {
    xs.push_back(x);
    vs.push_back(other(x));
  }
  const double s = fit_shift(wmin(), xs, vs);
  double d = 0.0;
  for (double x = -20.0; x <= 20.0; x += 0.1) d = std::max(d, std::abs(other(x) - wmin()(x - s)));
  CHECK(d < 1e-6);
}

TEST_CASE("tail constant") {
  const auto a = fit_tail_constant(wmin());
  CHECK(a.K_star > 0.0);
  CHECK(a.fit_residual / a.K_star < 1e-2);
  for (auto [lo, hi] : {std::pair{10.0, 20.0}, {11.0, 21.0}, {14.0, 22.0}})
    CHECK(std::abs(fit_tail_constant(wmin(), lo, hi).K_star / a.K_star - 1.0) < 0.01);
  CHECK_THROWS(fit_tail_constant(solve_wave_1d(2.0).profile));
}

TEST_CASE("shift fit recovers a known translate") {
  std::vector<double> xs, vs;
  for (double x = -4.0; x <= 4.0; x += 1.0) {
    xs.push_back(x);
    vs.push_back(wmin()(x - 0.731));
  }
  CHECK(fit_shift(wmin(), xs, vs) == doctest::Approx(0.731).epsilon(1e-6));
}

TEST_CASE("Laplace-transform 1D wave") {
  const double T = 8.0;
  const auto s = sample_shaved_D(T, 8.0, 2000, 123, T);
  for (double d : s) CHECK(d >= 0.0);
  CHECK(laplace_estimate(s, 40.0, kSqrt2, T).value <= laplace_estimate(s, 40.0, kSqrt2, T).std_error + 1e-300);
  std::vector<double> xs, vs;
  double prev = 2.0, se = 0.0;
  for (double x = -4.0; x <= 4.0; x += 1.0) {
    const auto e = laplace_estimate(s, x, kSqrt2, T);
    CHECK(e.value < prev);
    CHECK(e.value >= 0.0);
    CHECK(e.value <= 1.0);
    prev = e.value;
    se = std::max(se, e.std_error);
    xs.push_back(x);
    vs.push_back(e.value);
  }
  // finite-horizon proxies are steeper than the limit wave; the gap is about 0.023 at T = 8
  const double shift = fit_shift(wmin(), xs, vs);
  double gap = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) gap = std::max(gap, std::abs(vs[i] - wmin()(xs[i] - shift)));
  CHECK(gap <= std::max(3.0 * se, 0.04));
  CHECK_THROWS(laplace_wave_1d_mc(0.0, 2.0, 50, 1));
}
