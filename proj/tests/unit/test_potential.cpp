#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "doctest.h"
#include "kpp/potential.hpp"

using namespace kpp;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;

double images(QuarterPoint z, QuarterPoint x) {
  const cplx Z(z.x, z.y), X(x.x, x.y);
  return std::log(std::abs(X - std::conj(Z)) * std::abs(X + std::conj(Z)) / (std::abs(X - Z) * std::abs(X + Z))) / kPi;
}

// 2 * int_0^inf min(u, x) (u + 1)^2 e^{-sqrt2 u} du by composite Simpson
double anharmonic_exact_ratio(double x) {
  const int n = 200000;
  const double top = 60.0, h = top / n;
  auto f = [x](double u) { return 2.0 * std::min(u, x) * (u + 1.0) * (u + 1.0) * std::exp(-kSqrt2 * u); };
  double s = f(0.0) + f(top);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(i * h);
  return s * h / 3.0;
}

}  // namespace

TEST_CASE("quarter-plane Green function") {
  CHECK(green_quarter({1, 1}, {1, 2}) == doctest::Approx(std::log(3.0 * std::sqrt(5.0) / std::sqrt(13.0)) / kPi));
  CHECK(green_quarter({1, 1}, {1, 2}) == doctest::Approx(0.197625).epsilon(1e-5));
  CHECK(green_quarter({1, 1}, {0, 2}) == 0.0);
  CHECK(green_quarter({1, 1}, {3, 0}) == 0.0);
  CHECK_THROWS_AS(green_quarter({1, 1}, {1, 1}), std::domain_error);
  std::mt19937_64 g(1);
  std::uniform_real_distribution<double> U(0.01, 10.0);
  for (int k = 0; k < 100; ++k) {
    const QuarterPoint z{U(g), U(g)}, x{U(g), U(g)};
    const double a = green_quarter(z, x);
    CHECK(a > 0.0);
    CHECK(std::abs(a - green_quarter(x, z)) <= 1e-12);
    CHECK(a == doctest::Approx(images(z, x)).epsilon(1e-9));
  }
}

TEST_CASE("Green asymptotic regimes") {
  const auto r = green_asymptotics_check(2000, 5);
  CHECK(r.near.min_ratio >= 0.2);
  CHECK(r.near.max_ratio <= 1.5);
  CHECK(r.far.min_ratio >= 0.05);
  CHECK(r.far.max_ratio <= 20.0);
  CHECK(r.mid.min_ratio >= 0.005);
  CHECK(r.mid.max_ratio <= 20.0);
  CHECK(r.symmetry_max <= 1e-12);
  CHECK(r.boundary_max <= 1e-12);
  // mid-regime infimum sits at the inner ball edge: (2 / pi) log(401) / 400 at u = v
  const QuarterPoint z{1.0, 1.0}, x{1.0 + 0.1 / std::sqrt(2.0), 1.0 + 0.1 / std::sqrt(2.0)};
  CHECK(green_quarter(z, x) / green_comparator(GreenRegime::mid, z, x) < 0.05);
}

TEST_CASE("conformal map") {
  const auto v = eta_inverse({1.0, 1.0});
  CHECK(v.real() == doctest::Approx(0.430978).epsilon(1e-6));
  CHECK(v.imag() == doctest::Approx(0.672151).epsilon(1e-6));
  const cplx hand = cplx(1, 1) - cplx(std::log(std::sqrt(5.0)), std::atan(0.5)) / kSqrt2;
  CHECK(std::abs(v - hand) < 1e-14);
  CHECK(std::abs(eta_inverse(0.0)) == 0.0);
  for (cplx z : {cplx(0.3, 2.0), cplx(10.0, 0.1), cplx(500.0, 700.0)}) {
    CHECK(std::abs(eta_inverse(eta(z)) - z) < 1e-10);
    CHECK(std::abs(eta(z) - varpi(z)) <= 2.0);
  }
  const auto rep = eta_check(1000, 1000.0, 2);
  CHECK(rep.round_trip_max < 1e-10);
  CHECK(rep.eta_minus_varpi_max <= 2.0);
  CHECK(rep.deriv_min >= 1.0 - 1.0 / kSqrt2 - 1e-12);
  CHECK(rep.deriv_max <= 1.0 + 1.0 / kSqrt2 + 1e-12);
  CHECK(rep.edge_residual_max <= 1e-8);
  CHECK(rep.real_axis_imag_max <= 1e-12);
}

TEST_CASE("edge of the image domain") {
  for (double x : {0.1, 0.5, 1.0, 2.0}) {
    const double y = lambda_upper_edge(x);
    CHECK(std::abs(eta_inverse({x, y}).real()) < 1e-12);
  }
  CHECK(lambda_upper_edge(0.0) == 0.0);
}

TEST_CASE("anharmonic integral is linear in y") {
  CHECK(anharmonic_weight(0.0, 2.0) == 2.0);
  for (double x : {0.5, 1.0, 2.0, 5.0}) {
    const double want = anharmonic_exact_ratio(x);
    for (double y : {0.5, 5.0, 20.0}) {
      const auto p = anharmonic_integral({x, y}, 200);
      CHECK(p.stable);
      CHECK(p.min_integrand >= 0.0);
      CHECK(p.ratio == doctest::Approx(want).epsilon(1e-3));
    }
  }
  CHECK(anharmonic_exact_ratio(1e3) == doctest::Approx(4.0 + 2.0 * kSqrt2).epsilon(1e-9));
  CHECK_THROWS(anharmonic_integral({1.0, 1.0}, 100));
  const auto pts = anharmonic_bound_check({{40.0, 10.0}, {40.0, 20.0}});
  CHECK(pts[0].ratio <= 50.0);
  CHECK(pts[1].ratio / pts[0].ratio == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("discrete harmonicity") {
  const auto xy = harmonicity_check([](double x, double y) { return x * y; }, 0.0, 5.0, 0.0, 5.0, 0.1);
  CHECK(xy.sup_laplacian < 1e-10);
  auto cubic = [](double x, double y) { return x * x * x - 3.0 * x * y * y; };
  CHECK(harmonicity_check(cubic, 0.0, 3.0, 0.0, 3.0, 0.1).sup_laplacian < 1e-9);
  auto G = [](double x, double y) { return green_quarter({2.0, 3.0}, {x, y}); };
  const auto a = harmonicity_check(G, 0.5, 6.0, 0.5, 7.0, 0.1, {{2.0, 3.0}}, 1.0);
  const auto b = harmonicity_check(G, 0.5, 6.0, 0.5, 7.0, 0.05, {{2.0, 3.0}}, 1.0);
  CHECK(a.sup_laplacian / b.sup_laplacian >= 3.5);
  CHECK_THROWS(harmonicity_check(G, 0.5, 6.0, 0.5, 7.0, 0.2, {{2.0, 3.0}}, 1.0));
}
