#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace kpp {

/// Compensated summation.
class KahanSum {
 public:
  void add(double v) noexcept {
    const double y = v - c_;
    const double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  KahanSum& operator+=(double v) noexcept {
    add(v);
    return *this;
  }
  double value() const noexcept { return s_; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

/// Monte Carlo point estimate with standard error.
struct EstimateCI {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t replicas = 0;
  double horizon_T = 0.0;
  std::string meta;
};

struct MeanSE {
  double mean = 0.0;
  double sd = 0.0;
  double se = 0.0;
  std::size_t n = 0;
};

MeanSE mean_se(std::span<const double> v);

/// Type-7 sample quantile (linear interpolation), q in [0,1].
double quantile(std::vector<double> v, double q);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

/// Kolmogorov survival function Q(lambda) = 2 sum (-1)^{k-1} exp(-2 k^2 lambda^2).
double kolmogorov_q(double lambda);

struct RegressionResult {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
  double slope_se_robust = 0.0;  ///< heteroscedasticity consistent (HC1)
  double slope_se_hc3 = 0.0;     ///< leverage corrected (HC3, jackknife-like)
};

/// Ordinary least squares y ~ a + b x.
RegressionResult ols(std::span<const double> x, std::span<const double> y);

/// Worker count: KPP_THREADS if set, else hardware concurrency.
unsigned thread_count();

/// Calls f(i) for i in [0, n) on a pool of threads. Each index runs once.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f);

}  // namespace kpp
