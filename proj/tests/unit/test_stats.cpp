#include <cmath>
#include <random>

#include "doctest.h"
#include "kpp/rng.hpp"
#include "kpp/stats.hpp"

using namespace kpp;

TEST_CASE("Kahan sum recovers small terms") {
  KahanSum s;
  s += 1.0;
  for (int i = 0; i < 1000000; ++i) s += 1e-16;
  CHECK(s.value() == doctest::Approx(1.0 + 1e-10).epsilon(1e-14));
}

TEST_CASE("mean and standard error") {
  const std::vector<double> v{1, 2, 3, 4};
  const auto ms = mean_se(std::span<const double>(v));
  CHECK(ms.mean == 2.5);
  CHECK(ms.sd == doctest::Approx(std::sqrt(5.0 / 3.0)));
  CHECK(ms.se == doctest::Approx(std::sqrt(5.0 / 3.0) / 2.0));
}

TEST_CASE("quantiles") {
  CHECK(quantile({3, 1, 2}, 0.5) == 2.0);
  CHECK(quantile({1, 2, 3, 4, 5}, 0.25) == doctest::Approx(2.0));
}

TEST_CASE("Kolmogorov distribution") {
  CHECK(kolmogorov_q(1.3581) == doctest::Approx(0.05).epsilon(1e-3));
  std::mt19937_64 g(1);
  std::normal_distribution<double> N(0, 1);
  std::vector<double> a(2000), b(2000), c(2000);
  for (auto& v : a) v = N(g);
  for (auto& v : b) v = N(g);
  for (auto& v : c) v = N(g) + 0.5;
  CHECK(ks_two_sample(a, b).p_value > 0.001);
  CHECK(ks_two_sample(a, c).p_value < 1e-6);
  CHECK(ks_two_sample(a, a).statistic == 0.0);
}

TEST_CASE("least squares on an exact line") {
  const std::vector<double> x{0, 1, 2, 3}, y{1, 3, 5, 7};
  const auto r = ols(x, y);
  CHECK(r.slope == doctest::Approx(2.0));
  CHECK(r.intercept == doctest::Approx(1.0));
  CHECK(r.slope_se == doctest::Approx(0.0));
  CHECK_THROWS(ols(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3}));
}

TEST_CASE("robust slope errors are calibrated on heavy-tailed regressors") {
  // slope spread over independent batches against the average reported error
  std::mt19937_64 g(3);
  std::student_t_distribution<double> T(2.5);
  std::normal_distribution<double> N(0, 1);
  std::vector<double> slopes, se;
  for (int b = 0; b < 200; ++b) {
    std::vector<double> x(500), y(500);
    for (int i = 0; i < 500; ++i) {
      x[i] = T(g);
      y[i] = 2.0 * x[i] + std::abs(x[i]) * N(g);
    }
    const auto r = ols(x, y);
    slopes.push_back(r.slope);
    se.push_back(r.slope_se_hc3);
  }
  const auto ms = mean_se(std::span<const double>(slopes));
  const auto avg = mean_se(std::span<const double>(se)).mean;
  CHECK(ms.mean == doctest::Approx(2.0).epsilon(0.02));
  CHECK(avg >= 0.7 * ms.sd);
}

TEST_CASE("seed derivation") {
  CHECK(replica_seed(1, 0) != replica_seed(1, 1));
  CHECK(replica_seed(1, 5) == replica_seed(1, 5));
  SplitMix64 a(4), b(4);
  for (int i = 0; i < 10; ++i) CHECK(a() == b());
  SplitMix64 u(9);
  for (int i = 0; i < 1000; ++i) {
    const double v = u.uniform();
    CHECK(v > 0.0);
    CHECK(v < 1.0);
  }
}

TEST_CASE("parallel_for visits every index once") {
  std::vector<int> hit(1000, 0);
  parallel_for(hit.size(), [&](std::size_t i) { hit[i] += 1; });
  for (int h : hit) CHECK(h == 1);
}
