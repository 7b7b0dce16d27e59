#include "kpp/potential.hpp"

#include <algorithm>
#include <boost/math/special_functions/legendre.hpp>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "kpp/stats.hpp"

namespace kpp {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kPi = std::numbers::pi;

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

const GaussRule& gauss_rule(int q) {
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(q);
  if (it != cache.end()) return it->second;
  GaussRule g;
  for (double z : boost::math::legendre_p_zeros<double>(q)) {
    const double dp = boost::math::legendre_p_prime(q, z);
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    g.nodes.push_back(z);
    g.weights.push_back(w);
    if (z != 0.0) {
      g.nodes.push_back(-z);
      g.weights.push_back(w);
    }
  }
  return cache.emplace(q, std::move(g)).first->second;
}

// breakpoints in [lo, hi] refined geometrically away from c
std::vector<double> graded_breaks(double lo, double hi, double c, double hmin, double ratio, double hmax) {
  std::vector<double> b{lo, hi};
  if (c > lo && c < hi) b.push_back(c);
  for (int side : {-1, 1}) {
    double p = c, h = hmin;
    while (true) {
      p += side * h;
      if (p <= lo || p >= hi) break;
      b.push_back(p);
      h = std::min(h * ratio, hmax);
    }
  }
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end(), [](double a, double d) { return std::abs(a - d) < 1e-12; }), b.end());
  return b;
}

struct Node {
  double t;
  double w;
};

std::vector<Node> panel_nodes(const std::vector<double>& breaks, int n_total) {
  const int panels = static_cast<int>(breaks.size()) - 1;
  const int q = std::max(6, (n_total + panels - 1) / panels);
  const auto& g = gauss_rule(q);
  std::vector<Node> out;
  for (int p = 0; p < panels; ++p) {
    const double a = breaks[p], b = breaks[p + 1];
    for (std::size_t k = 0; k < g.nodes.size(); ++k)
      out.push_back({0.5 * (a + b) + 0.5 * (b - a) * g.nodes[k], 0.5 * (b - a) * g.weights[k]});
  }
  return out;
}

// C-infinity step: 1 on [0, 1/2], 0 beyond 1
double cutoff(double s) {
  if (s <= 0.5) return 1.0;
  if (s >= 1.0) return 0.0;
  const double t = 2.0 * s - 1.0;
  const double a = std::exp(-1.0 / t), b = std::exp(-1.0 / (1.0 - t));
  return b / (a + b);
}

double anharmonic_at(QuarterPoint x, int n, double& min_integrand) {
  const double m = std::min(x.x, x.y);
  const double r0 = std::min(0.5 * m, 1.0);
  auto integrand = [&](double u, double v) {
    if (u <= 0.0 || v <= 0.0) return 0.0;
    const double g = green_quarter({u, v}, x) * anharmonic_weight(u, v);
    min_integrand = std::min(min_integrand, g);
    return g;
  };

  // disk of radius r0 around x, polar coordinates
  KahanSum disk;
  std::vector<double> rb{0.0};
  for (int k = 24; k >= 0; --k) rb.push_back(r0 * std::ldexp(1.0, -k));
  const auto rn = panel_nodes(rb, n);
  const int nth = std::max(32, n);
  for (const auto& r : rn) {
    const double chi = cutoff(r.t / r0);
    KahanSum ring;
    for (int k = 0; k < nth; ++k) {
      const double th = 2.0 * kPi * k / nth;
      ring += integrand(x.x + r.t * std::cos(th), x.y + r.t * std::sin(th));
    }
    disk += r.w * r.t * chi * ring.value() * (2.0 * kPi / nth);
  }

  // remainder on product panels, v tail mapped by v = v_max / t
  const double u_max = 45.0;
  const double v_max = 8.0 * std::max(std::hypot(x.x, x.y), 5.0) + 10.0;
  const auto un = panel_nodes(graded_breaks(0.0, u_max, x.x, 0.25 * r0, 1.5, 1.0), n);
  const auto vn = panel_nodes(graded_breaks(0.0, v_max, x.y, 0.25 * r0, 1.5, 1e300), n);
  const auto tn = panel_nodes(graded_breaks(0.0, 1.0, 0.0, 0.05, 1.5, 0.25), std::max(40, n / 4));
  auto outer = [&](double u, double v) {
    const double r = std::hypot(u - x.x, v - x.y);
    const double w = 1.0 - cutoff(r / r0);
    return w == 0.0 ? 0.0 : w * integrand(u, v);
  };
  KahanSum rest;
  for (const auto& u : un) {
    KahanSum col;
    for (const auto& v : vn) col += v.w * outer(u.t, v.t);
    for (const auto& t : tn) {
      const double v = v_max / t.t;
      col += t.w * (v_max / (t.t * t.t)) * outer(u.t, v);
    }
    rest += u.w * col.value();
  }
  return disk.value() + rest.value();
}

}  // namespace

double green_quarter(QuarterPoint z, QuarterPoint x) {
  if (z.x < 0.0 || z.y < 0.0 || x.x < 0.0 || x.y < 0.0)
    throw std::invalid_argument("green_quarter: points must lie in the closed quarter plane");
  const double dm = (x.x - z.x) * (x.x - z.x) + (x.y - z.y) * (x.y - z.y);
  if (dm == 0.0) throw std::domain_error("green_quarter: logarithmic singularity at x = z");
  const double dp = (x.x + z.x) * (x.x + z.x) + (x.y + z.y) * (x.y + z.y);
  return std::log1p(16.0 * x.x * x.y * z.x * z.y / (dm * dp)) / (2.0 * kPi);
}

double green_comparator(GreenRegime regime, QuarterPoint z, QuarterPoint x) {
  const double d = std::hypot(x.x - z.x, x.y - z.y);
  switch (regime) {
    case GreenRegime::near:
      return std::log(std::min(z.x, z.y) / d);
    case GreenRegime::mid:
      return z.x * z.y / (z.x * z.x + z.y * z.y) * x.x * x.y / (d * d);
    case GreenRegime::far: {
      const double r2 = x.x * x.x + x.y * x.y;
      return z.x * z.y * x.x * x.y / (r2 * r2);
    }
  }
  return 0.0;
}

GreenAsymptotics green_asymptotics_check(std::size_t samples, std::uint64_t seed) {
  if (samples < 1000) throw std::invalid_argument("green_asymptotics_check: need at least 1000 samples");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  auto pos = [&] { return std::exp(std::log(0.1) + U(rng) * std::log(100.0)); };
  GreenAsymptotics rep;
  auto update = [](RatioBracket& b, double r) {
    if (b.samples == 0) b.min_ratio = b.max_ratio = r;
    b.min_ratio = std::min(b.min_ratio, r);
    b.max_ratio = std::max(b.max_ratio, r);
    ++b.samples;
  };
  for (std::size_t i = 0; i < samples; ++i) {
    const QuarterPoint z{pos(), pos()};
    const double m = std::min(z.x, z.y), rz = std::hypot(z.x, z.y);
    {
      const double rho = 0.1 * m * std::sqrt(U(rng)), phi = 2.0 * kPi * U(rng);
      const QuarterPoint x{z.x + rho * std::cos(phi), z.y + rho * std::sin(phi)};
      if (rho > 0.0) update(rep.near, green_quarter(z, x) / green_comparator(GreenRegime::near, z, x));
    }
    for (int tries = 0; tries < 1000; ++tries) {
      const QuarterPoint x{2.0 * rz * U(rng), 2.0 * rz * U(rng)};
      const double d = std::hypot(x.x - z.x, x.y - z.y);
      if (x.x <= 0.0 || x.y <= 0.0 || std::hypot(x.x, x.y) >= 2.0 * rz || d < 0.1 * m) continue;
      update(rep.mid, green_quarter(z, x) / green_comparator(GreenRegime::mid, z, x));
      break;
    }
    {
      const double r = 2.0 * rz * std::exp(U(rng) * std::log(50.0)) * (1.0 + 1e-9);
      const double phi = 0.5 * kPi * (1e-6 + (1.0 - 2e-6) * U(rng));
      const QuarterPoint x{r * std::cos(phi), r * std::sin(phi)};
      update(rep.far, green_quarter(z, x) / green_comparator(GreenRegime::far, z, x));
    }
    const QuarterPoint a{pos(), pos()}, b{pos(), pos()};
    rep.symmetry_max = std::max(rep.symmetry_max, std::abs(green_quarter(a, b) - green_quarter(b, a)));
    const double t = pos();
    rep.boundary_max = std::max({rep.boundary_max, std::abs(green_quarter(z, {0.0, t})),
                                 std::abs(green_quarter(z, {t, 0.0}))});
  }
  return rep;
}

cplx eta_inverse(cplx z) { return z - std::log(z + 1.0) / kSqrt2; }

cplx eta_inverse_derivative(cplx z) { return 1.0 - 1.0 / (kSqrt2 * (z + 1.0)); }

cplx varpi(cplx z) { return z + std::log(z + 1.0) / kSqrt2; }

cplx eta(cplx z) {
  cplx w = varpi(z);
  double res = 0.0;
  for (int it = 0; it < 50; ++it) {
    const cplx f = eta_inverse(w) - z;
    res = std::abs(f);
    if (res <= 1e-14 * (1.0 + std::abs(z))) return w;
    w -= f / eta_inverse_derivative(w);
  }
  std::ostringstream os;
  os << "eta: Newton did not converge for z = " << z << ", last residual " << res << ", iterate " << w;
  throw std::runtime_error(os.str());
}

double lambda_upper_edge(double x) {
  const double v = std::exp(2.0 * kSqrt2 * x) - (1.0 + x) * (1.0 + x);
  return v > 0.0 ? std::sqrt(v) : 0.0;
}

EtaReport eta_check(std::size_t samples, double r_max, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  EtaReport rep;
  rep.samples = samples;
  rep.deriv_min = 1e300;
  for (std::size_t i = 0; i < samples; ++i) {
    const double r = std::exp(std::log(1e-3) + U(rng) * std::log(r_max / 1e-3));
    const double phi = 0.5 * std::numbers::pi * U(rng);
    const cplx z = std::polar(r, phi);
    const cplx w = eta(z);
    rep.round_trip_max = std::max(rep.round_trip_max, std::abs(eta_inverse(w) - z));
    rep.eta_minus_varpi_max = std::max(rep.eta_minus_varpi_max, std::abs(w - varpi(z)));
    const double d = std::abs(eta_inverse_derivative(z));
    rep.deriv_min = std::min(rep.deriv_min, d);
    rep.deriv_max = std::max(rep.deriv_max, d);

    // image of the imaginary axis; skip the nearly vertical start of the edge
    const cplx e = eta(cplx(0.0, r));
    if (e.real() > 1e-3) {
      const double y = e.imag();
      rep.edge_residual_max = std::max(rep.edge_residual_max, std::abs(y - lambda_upper_edge(e.real())) / (1.0 + y));
      const double alt = std::sqrt(std::max(0.0, std::exp(2.0 * kSqrt2 * e.real()) - 1.0 - e.real() * e.real()));
      rep.edge_residual_alt_max = std::max(rep.edge_residual_alt_max, std::abs(y - alt) / (1.0 + y));
    }
    rep.real_axis_imag_max = std::max(rep.real_axis_imag_max, std::abs(eta(cplx(r, 0.0)).imag()));
  }
  return rep;
}

double anharmonic_weight(double u, double v) { return (u + 1.0) * (u + 1.0) * v * std::exp(-kSqrt2 * u); }

AnharmonicPoint anharmonic_integral(QuarterPoint x, int quadrature_n) {
  if (quadrature_n < 200) throw std::invalid_argument("anharmonic_integral: quadrature_n must be >= 200");
  if (!(x.x > 0.0 && x.y > 0.0)) throw std::invalid_argument("anharmonic_integral: point must be interior");
  AnharmonicPoint p;
  p.x = x.x;
  p.y = x.y;
  p.min_integrand = 1e300;
  p.integral = anharmonic_at(x, quadrature_n, p.min_integrand);
  p.integral_refined = anharmonic_at(x, 2 * quadrature_n, p.min_integrand);
  p.ratio = p.integral_refined / x.y;
  p.stable = std::abs(p.integral - p.integral_refined) <= 0.05 * std::abs(p.integral_refined);
  return p;
}

std::vector<AnharmonicPoint> anharmonic_bound_check(const std::vector<QuarterPoint>& points, int quadrature_n) {
  std::vector<AnharmonicPoint> out(points.size());
  parallel_for(points.size(), [&](std::size_t i) { out[i] = anharmonic_integral(points[i], quadrature_n); });
  return out;
}

HarmonicityReport harmonicity_check(const std::function<double(double, double)>& f, double x0, double x1, double y0,
                                    double y1, double h, const std::vector<QuarterPoint>& poles,
                                    double exclusion_radius) {
  if (!(h > 0.0) || x1 <= x0 || y1 <= y0) throw std::invalid_argument("harmonicity_check: bad grid");
  if (!poles.empty() && exclusion_radius < 10.0 * h)
    throw std::invalid_argument("harmonicity_check: exclusion radius must be at least 10 h");
  HarmonicityReport rep;
  rep.h = h;
  const int nx = static_cast<int>(std::floor((x1 - x0) / h + 1e-9));
  const int ny = static_cast<int>(std::floor((y1 - y0) / h + 1e-9));
  for (int i = 1; i < nx; ++i)
    for (int j = 1; j < ny; ++j) {
      const double x = x0 + i * h, y = y0 + j * h;
      bool skip = false;
      for (const auto& p : poles) skip = skip || std::hypot(x - p.x, y - p.y) < exclusion_radius;
      if (skip) continue;
      const double lap = (f(x + h, y) + f(x - h, y) + f(x, y + h) + f(x, y - h) - 4.0 * f(x, y)) / (h * h);
      rep.sup_laplacian = std::max(rep.sup_laplacian, std::abs(lap));
      ++rep.nodes;
    }
  return rep;
}

}  // namespace kpp
