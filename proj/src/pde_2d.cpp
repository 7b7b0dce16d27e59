#include "kpp/pde_2d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <boost/math/tools/minima.hpp>

namespace kpp {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

using Block = Eigen::Block<FieldArray>;

// Interior residual as a (ny-2) x (nx-2) array.
FieldArray interior_residual(const FieldArray& v, double hx, double hy, double c) {
  const Eigen::Index ny = v.rows(), nx = v.cols();
  const auto C = v.block(1, 1, ny - 2, nx - 2);
  const auto L = v.block(1, 0, ny - 2, nx - 2);
  const auto R = v.block(1, 2, ny - 2, nx - 2);
  const auto D = v.block(0, 1, ny - 2, nx - 2);
  const auto U = v.block(2, 1, ny - 2, nx - 2);
  return 0.5 * (R - 2.0 * C + L) / (hx * hx) + 0.5 * (U - 2.0 * C + D) / (hy * hy) + c * (R - L) / (2.0 * hx) + C -
         C.square();
}

// Coefficients (a1, a2) of u_N = a1 u_{N-1} + a2 u_{N-2}.
std::pair<double, double> right_coefficients(const Field2D& f) {
  if (f.bc.right == RightBoundary::dirichlet_zero) return {0.0, 0.0};
  const double e = std::exp(-f.bc.right_rate * f.hx);
  if (f.bc.right_linear_prefactor) return {2.0 * e, -e * e};
  return {e, 0.0};
}

void explicit_step(Field2D& f, double dt, double c, FieldArray& res) {
  res = interior_residual(f.values, f.hx, f.hy, c);
  f.values.block(1, 1, f.ny - 2, f.nx - 2) += dt * res;
  refresh_boundaries(f);
}

double tail_scale_rate(const Field2D& f) {
  if (f.bc.right_rate > 0.0) return f.bc.right_rate;
  return tail_rate(std::max(f.frame_speed_c, kSqrt2));
}

}  // namespace

Field2D Field2D::make(double x_lo, double x_hi, double y_hi, double hx, double hy) {
  if (!(hx > 0.0 && hy > 0.0) || !(x_hi > x_lo) || !(y_hi > 0.0)) throw std::invalid_argument("Field2D: bad grid");
  Field2D f;
  f.x_lo = x_lo;
  f.hx = hx;
  f.hy = hy;
  f.nx = static_cast<int>(std::lround((x_hi - x_lo) / hx)) + 1;
  f.ny = static_cast<int>(std::lround(y_hi / hy)) + 1;
  if (f.nx < 4 || f.ny < 3) throw std::invalid_argument("Field2D: grid too small");
  f.values = FieldArray::Zero(f.ny, f.nx);
  return f;
}

bool Field2D::contains(double px, double py) const {
  return px >= x_lo && px <= x_hi() && py >= 0.0 && py <= y_hi();
}

double Field2D::at(double px, double py) const {
  if (!contains(px, py)) return 0.0;
  const double sx = (px - x_lo) / hx, sy = py / hy;
  const int i = std::min(static_cast<int>(sx), nx - 2);
  const int j = std::min(static_cast<int>(sy), ny - 2);
  const double a = sx - i, b = sy - j;
  return (1 - a) * (1 - b) * values(j, i) + a * (1 - b) * values(j, i + 1) + (1 - a) * b * values(j + 1, i) +
         a * b * values(j + 1, i + 1);
}

double Field2D::at_cubic(double px, double py) const {
  if (!contains(px, py)) return 0.0;
  auto stencil = [](double s, int n, int& base, double w[4]) {
    base = std::clamp(static_cast<int>(std::floor(s)) - 1, 0, n - 4);
    const double t = s - base;
    w[0] = -(t - 1) * (t - 2) * (t - 3) / 6.0;
    w[1] = t * (t - 2) * (t - 3) / 2.0;
    w[2] = -t * (t - 1) * (t - 3) / 2.0;
    w[3] = t * (t - 1) * (t - 2) / 6.0;
  };
  int i0, j0;
  double wx[4], wy[4];
  stencil((px - x_lo) / hx, nx, i0, wx);
  stencil(py / hy, ny, j0, wy);
  double acc = 0.0;
  for (int b = 0; b < 4; ++b)
    for (int a = 0; a < 4; ++a) acc += wy[b] * wx[a] * values(j0 + b, i0 + a);
  return acc;
}

double stable_dt(double hx, double hy, double c) {
  return 0.9 / (1.0 / (hx * hx) + 1.0 / (hy * hy) + std::abs(c) / hx + 1.0);
}

void refresh_boundaries(Field2D& f) {
  const auto [a1, a2] = right_coefficients(f);
  const int N = f.nx - 1;
  f.values.col(N) = a1 * f.values.col(N - 1) + a2 * f.values.col(N - 2);
  f.values.row(0).setZero();
}

DiscreteSpeed discrete_minimal_speed(double hx) {
  if (!(hx > 0.0)) throw std::invalid_argument("discrete_minimal_speed: hx must be positive");
  auto speed = [hx](double l) { return ((std::cosh(l * hx) - 1.0) / (hx * hx) + 1.0) * hx / std::sinh(l * hx); };
  const auto r = boost::math::tools::brent_find_minima(speed, 0.5, 3.0, 52);
  return {r.second, r.first};
}

double discrete_frame_speed(double lambda, double mu, double hx, double hy) {
  const double lx = (std::cosh(lambda * hx) - 1.0) / (hx * hx);
  const double ly = (std::cosh(mu * hy) - 1.0) / (hy * hy);
  return (lx + ly + 1.0) * hx / std::sinh(lambda * hx);
}

Field2D minimal_wave_template(const Domain& d, const Profile1D& phi, const Profile1D& w, double top_shift,
                              RightBoundary right) {
  Field2D f = Field2D::make(d.x_lo, d.x_hi, d.y_hi, d.hx, d.hy);
  const DiscreteSpeed ds = discrete_minimal_speed(d.hx);
  f.frame_speed_c = ds.speed;
  f.nominal_speed = kSqrt2;
  f.bc.right = right;
  f.bc.right_rate = ds.rate;
  f.bc.right_linear_prefactor = true;
  f.bc.top_shift = top_shift;
  const double omega = std::log(f.y_hi()) / kSqrt2;
  std::ostringstream top;
  top << "w(x - " << omega + top_shift << ")";
  f.bc.top = top.str();
  f.bc.left = "phi(y) w(x_lo - log_+(y)/sqrt2 - top_shift)";
  for (int j = 1; j < f.ny; ++j) {
    const double y = f.y(j);
    const double py = phi(y);
    const double shift = std::max(0.0, std::log(y)) / kSqrt2 + top_shift;
    for (int i = 0; i < f.nx; ++i) f.values(j, i) = py * w(f.x(i) - shift);
  }
  for (int i = 0; i < f.nx; ++i) f.values(f.ny - 1, i) = w(f.x(i) - omega - top_shift);
  refresh_boundaries(f);
  return f;
}

double exponential_tail_constant(const Profile1D& w_c, double lo, double hi) {
  if (!w_c.speed_c) throw std::invalid_argument("exponential_tail_constant: profile has no speed");
  const double rho = tail_rate(*w_c.speed_c);
  double acc = 0.0;
  int n = 0;
  for (Eigen::Index i = 0; i < w_c.size(); ++i) {
    const double x = w_c.x(i);
    if (x < lo || x > hi) continue;
    acc += w_c.values[i] * std::exp(rho * x);
    ++n;
  }
  if (n == 0) throw std::invalid_argument("exponential_tail_constant: empty window");
  return acc / n;
}

Field2D supercritical_template(const Domain& d, double lambda, double mu, const Profile1D& phi,
                               const Profile1D& w_c, double top_shift, RightBoundary right) {
  if (!(lambda > 0.0 && mu > 0.0 && lambda * lambda + mu * mu < 2.0))
    throw std::invalid_argument("supercritical_template: (lambda, mu) outside the quarter disk");
  const double r2 = lambda * lambda + mu * mu;
  const double c = (r2 + 2.0) / (2.0 * std::sqrt(r2));
  if (!w_c.speed_c || std::abs(*w_c.speed_c - c) > 1e-9)
    throw std::invalid_argument("supercritical_template: profile speed differs from c(lambda, mu)");
  const double theta = std::atan2(mu, lambda);
  const double ct = std::cos(theta), st = std::sin(theta);
  if (std::isnan(top_shift)) top_shift = -std::log(2.0 * exponential_tail_constant(w_c)) / std::sqrt(r2);

  Field2D f = Field2D::make(d.x_lo, d.x_hi, d.y_hi, d.hx, d.hy);
  f.frame_speed_c = discrete_frame_speed(lambda, mu, d.hx, d.hy);
  f.nominal_speed = (r2 + 2.0) / (2.0 * lambda);
  f.bc.right = right;
  f.bc.right_rate = lambda;
  f.bc.right_linear_prefactor = false;
  f.bc.top_shift = top_shift;
  std::ostringstream top;
  top << "w_c(x cos(theta) - " << f.y_hi() * std::sin(theta) + top_shift << "), theta = " << theta;
  f.bc.top = top.str();
  f.bc.left = "phi(y) w_c(x_lo cos(theta) - y sin(theta) - top_shift)";
  for (int j = 1; j < f.ny; ++j) {
    const double py = phi(f.y(j));
    for (int i = 0; i < f.nx; ++i) f.values(j, i) = py * w_c(f.x(i) * ct - f.y(j) * st - top_shift);
  }
  for (int i = 0; i < f.nx; ++i) f.values(f.ny - 1, i) = w_c(f.x(i) * ct - f.y_hi() * st - top_shift);
  refresh_boundaries(f);
  return f;
}

ResidualNorms residual(const Field2D& field) {
  const FieldArray r = interior_residual(field.values, field.hx, field.hy, field.frame_speed_c);
  ResidualNorms n;
  n.sup = r.abs().maxCoeff();
  n.l2 = std::sqrt(r.square().sum() * field.hx * field.hy);
  return n;
}

MarchResult march_to_steady(const Field2D& start, const MarchOptions& options) {
  if (std::max(start.nominal_speed, start.frame_speed_c) < kSqrt2 - 1e-6)
    throw std::invalid_argument("march_to_steady: c < sqrt(2)");
  MarchResult out;
  out.field = start;
  Field2D& f = out.field;
  refresh_boundaries(f);
  const double c = f.frame_speed_c;
  const double dt = stable_dt(f.hx, f.hy, c);
  FieldArray res;
  bool explicit_done = false;
  for (long s = 0; s < options.max_explicit_steps; ++s) {
    explicit_step(f, dt, c, res);
    const double upd = dt * res.abs().maxCoeff();
    ++out.explicit_steps;
    if (options.history_every > 0 && s % options.history_every == 0) out.residual_history.push_back(upd / dt);
    if (upd < options.tol * dt) {
      explicit_done = true;
      break;
    }
  }

  bool newton_done = false;
  if (options.newton_polish) {
    const int m = f.nx - 2, rows = f.ny - 2;
    const Eigen::Index n = static_cast<Eigen::Index>(m) * rows;
    const double rate = tail_scale_rate(f);
    Eigen::ArrayXd sx(f.nx);
    for (int i = 0; i < f.nx; ++i) sx[i] = std::exp(rate * std::max(f.x(i), 0.0));
    const auto [a1, a2] = right_coefficients(f);
    const double cx2 = 0.5 / (f.hx * f.hx), cy2 = 0.5 / (f.hy * f.hy), cd = c / (2.0 * f.hx);

    auto scaled_residual = [&](const Field2D& g, Eigen::VectorXd& F) {
      const FieldArray r = interior_residual(g.values, g.hx, g.hy, c);
      F.resize(n);
      for (int j = 0; j < rows; ++j)
        for (int i = 0; i < m; ++i) F[static_cast<Eigen::Index>(j) * m + i] = r(j, i) * sx[i + 1];
    };

    Eigen::VectorXd F;
    scaled_residual(f, F);
    double fnorm = F.lpNorm<Eigen::Infinity>();
    // roundoff floor of the scaled residual grows with the scaled magnitudes
    double vmax = 1.0;
    for (int i = 0; i < f.nx; ++i) vmax = std::max(vmax, f.values.col(i).abs().maxCoeff() * sx[i]);
    const double target = options.newton_tol * vmax * std::max(1.0, 1.0 / (f.hx * f.hx));
    double dtau = 1.0;
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    bool analyzed = false;
    int rejects = 0;
    for (int it = 0; it < options.max_newton && fnorm > target; ++it) {
      std::vector<Eigen::Triplet<double>> trip;
      trip.reserve(static_cast<std::size_t>(5 * n));
      const double shift = dtau > 1e12 ? 0.0 : 1.0 / dtau;
      for (int j = 0; j < rows; ++j) {
        for (int i = 0; i < m; ++i) {
          const Eigen::Index k = static_cast<Eigen::Index>(j) * m + i;
          const int gi = i + 1, gj = j + 1;
          double diag = -2.0 * cx2 - 2.0 * cy2 + 1.0 - 2.0 * f.values(gj, gi) - shift;
          double to_left = cx2 - cd;
          const double to_right = cx2 + cd;
          if (i == m - 1) {
            // right neighbour is the extrapolated boundary column
            diag += to_right * a1;
            to_left += to_right * a2;
          }
          trip.emplace_back(k, k, diag);
          if (i > 0) trip.emplace_back(k, k - 1, to_left * sx[gi] / sx[gi - 1]);
          if (i < m - 1) trip.emplace_back(k, k + 1, to_right * sx[gi] / sx[gi + 1]);
          if (j > 0) trip.emplace_back(k, k - m, cy2);
          if (j < rows - 1) trip.emplace_back(k, k + m, cy2);
        }
      }
      Eigen::SparseMatrix<double> J(n, n);
      J.setFromTriplets(trip.begin(), trip.end());
      if (!analyzed) {
        lu.analyzePattern(J);
        analyzed = true;
      }
      lu.factorize(J);
      if (lu.info() != Eigen::Success) throw std::runtime_error("march_to_steady: sparse factorization failed");
      const Eigen::VectorXd dv = lu.solve(-F);
      Field2D trial = f;
      for (int j = 0; j < rows; ++j)
        for (int i = 0; i < m; ++i)
          trial.values(j + 1, i + 1) += dv[static_cast<Eigen::Index>(j) * m + i] / sx[i + 1];
      refresh_boundaries(trial);
      Eigen::VectorXd Ft;
      scaled_residual(trial, Ft);
      const double nt = Ft.lpNorm<Eigen::Infinity>();
      ++out.newton_iterations;
      if (!(nt < 2.0 * fnorm)) {
        dtau *= 0.25;
        if (++rejects > 20) break;
        continue;
      }
      const double ratio = fnorm / std::max(nt, 1e-300);
      dtau = std::min(1e15, dtau * std::clamp(ratio, 0.5, 10.0) * (ratio > 1.0 ? 2.0 : 1.0));
      const bool stalled = dtau > 1e6 && nt > 0.5 * fnorm;
      f = std::move(trial);
      F = Ft;
      fnorm = nt;
      out.residual_history.push_back(residual(f).sup);
      if (stalled) break;
    }
    newton_done = fnorm <= 1e3 * target;
  }
  f.values = f.values.cwiseMax(0.0).cwiseMin(1.0);
  const auto norms = residual(f);
  f.residual_sup = norms.sup;
  f.residual_l2 = norms.l2;
  out.residual_history.push_back(norms.sup);
  out.converged = options.newton_polish ? newton_done : explicit_done;
  return out;
}

Field2D subsample(const Field2D& field, int stride) {
  if (stride < 1 || (field.nx - 1) % stride != 0 || (field.ny - 1) % stride != 0)
    throw std::invalid_argument("subsample: grid not divisible by stride");
  Field2D f = field;
  f.hx = field.hx * stride;
  f.hy = field.hy * stride;
  f.nx = (field.nx - 1) / stride + 1;
  f.ny = (field.ny - 1) / stride + 1;
  f.values.resize(f.ny, f.nx);
  for (int j = 0; j < f.ny; ++j)
    for (int i = 0; i < f.nx; ++i) f.values(j, i) = field.values(j * stride, i * stride);
  const auto r = residual(f);
  f.residual_sup = r.sup;
  f.residual_l2 = r.l2;
  return f;
}

Field2D richardson(const Field2D& fine, const Field2D& coarse) {
  const Field2D f = subsample(fine, 2);
  if (f.nx != coarse.nx || f.ny != coarse.ny || std::abs(f.x_lo - coarse.x_lo) > 1e-12 ||
      std::abs(f.hx - coarse.hx) > 1e-12 || std::abs(f.hy - coarse.hy) > 1e-12)
    throw std::invalid_argument("richardson: grids do not nest");
  Field2D out = coarse;
  out.values = (4.0 * f.values - coarse.values) / 3.0;
  out.nominal_speed = fine.nominal_speed;
  return out;
}

Field2D prolong(const Field2D& coarse, double hx, double hy) {
  Field2D f = Field2D::make(coarse.x_lo, coarse.x_hi(), coarse.y_hi(), hx, hy);
  f.frame_speed_c = coarse.frame_speed_c;
  f.nominal_speed = coarse.nominal_speed;
  f.bc = coarse.bc;
  for (int j = 0; j < f.ny; ++j)
    for (int i = 0; i < f.nx; ++i) f.values(j, i) = coarse.at(std::min(f.x(i), coarse.x_hi()), std::min(f.y(j), coarse.y_hi()));
  return f;
}

double stationarity_check(const Field2D& field, double frame_speed, double t) {
  if (!(t >= 0.0 && t <= 2.0)) throw std::invalid_argument("stationarity_check: t must be in [0, 2]");
  Field2D f = field;
  const double dt0 = stable_dt(f.hx, f.hy, frame_speed);
  const long steps = static_cast<long>(std::ceil(t / dt0));
  FieldArray res;
  for (long s = 0; s < steps; ++s) explicit_step(f, t / static_cast<double>(steps), frame_speed, res);
  const int i0 = static_cast<int>(0.05 * field.nx), i1 = field.nx - i0;
  const int j0 = static_cast<int>(0.05 * field.ny), j1 = field.ny - j0;
  return (f.values.block(j0, i0, j1 - j0, i1 - i0) - field.values.block(j0, i0, j1 - j0, i1 - i0)).abs().maxCoeff();
}

MonotonicityReport monotonicity(const Field2D& field, double top_trim) {
  MonotonicityReport m;
  const int j_end = field.ny - static_cast<int>(top_trim * field.ny);
  m.min_log_slope = std::numeric_limits<double>::infinity();
  const auto& v = field.values;
  // 1 - Psi below 1e-13 is rounding noise
  auto saturated = [](double a, double b) { return a >= 1.0 - 1e-13 && b >= 1.0 - 1e-13; };
  for (int j = 1; j < j_end; ++j)
    for (int i = 0; i + 1 < field.nx; ++i) {
      const double a = v(j, i), b = v(j, i + 1);
      if (saturated(a, b)) continue;
      ++m.x_pairs;
      if (!(b < a)) ++m.x_violations;
      if (a > 1e-10 && b > 1e-10) m.min_log_slope = std::min(m.min_log_slope, std::log(b / a) / field.hx);
    }
  for (int j = 0; j + 1 < j_end; ++j)
    for (int i = 0; i < field.nx; ++i) {
      const double a = v(j, i), b = v(j + 1, i);
      if (saturated(a, b)) continue;
      ++m.y_pairs;
      if (!(b > a)) ++m.y_violations;
    }
  return m;
}

double level_crossing(const Field2D& field, double y, double s) {
  if (!(y >= 0.0 && y <= field.y_hi())) return std::numeric_limits<double>::quiet_NaN();
  const double sy = y / field.hy;
  const int j = std::min(static_cast<int>(sy), field.ny - 2);
  const double b = sy - j;
  auto row = [&](int i) { return (1 - b) * field.values(j, i) + b * field.values(j + 1, i); };
  for (int i = 0; i + 1 < field.nx; ++i) {
    const double a = row(i), c = row(i + 1);
    if (a >= s && c < s) return field.x(i) + field.hx * (a - s) / (a - c);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

Field2D pin_field(const Field2D& field, double y_star, double s) {
  const double x = level_crossing(field, y_star, s);
  if (std::isnan(x)) throw std::runtime_error("pin_field: level not attained at y_star");
  Field2D f = field;
  f.x_lo -= x;
  return f;
}

MinimalWaveSolve solve_minimal_wave(const Domain& d, const Profile1D& phi, const Profile1D& w, double top_shift0,
                                    const MarchOptions& options, int shift_iterations, const Field2D* warm) {
  MinimalWaveSolve out;
  double s = top_shift0;
  Field2D start = minimal_wave_template(d, phi, w, s);
  auto take_interior = [&](Field2D& dst, const Field2D& src) {
    const Field2D g = (src.nx == dst.nx && src.ny == dst.ny) ? src : prolong(src, dst.hx, dst.hy);
    dst.values.block(1, 1, dst.ny - 2, dst.nx - 2) = g.values.block(1, 1, dst.ny - 2, dst.nx - 2);
    refresh_boundaries(dst);
  };
  if (warm) take_interior(start, *warm);
  const double y_fit = 0.5 * d.y_hi;
  const double omega = std::log(y_fit) / kSqrt2;
  std::vector<double> xs;
  for (int k = 0; k <= 40; ++k) xs.push_back(-6.0 + 0.4 * k);
  for (int it = 0;; ++it) {
    out.result = march_to_steady(start, options);
    std::vector<double> vals;
    for (double x : xs) vals.push_back(out.result.field.at(x + omega, y_fit));
    const double s_new = fit_shift(w, xs, vals);
    out.shift_history.push_back(s_new);
    if (it + 1 >= shift_iterations || std::abs(s_new - s) < 1e-3) break;
    s = s_new;
    Field2D next = minimal_wave_template(d, phi, w, s);
    take_interior(next, out.result.field);
    start = std::move(next);
  }
  out.top_shift = s;
  return out;
}

double bessel_j0_first_zero() {
  double x = 2.4;
  for (int i = 0; i < 50; ++i) {
    const double dx = std::cyl_bessel_j(0.0, x) / std::cyl_bessel_j(1.0, x);  // J0' = -J1
    x += dx;
    if (std::abs(dx) < 1e-15) break;
  }
  return x;
}

double subsolution_b(double t, double alpha, double lambda) {
  return 1.0 / (1.0 + alpha / lambda * (std::exp(lambda * t) - 1.0));
}

namespace {

struct SubParams {
  double eps, alpha, c_eps, lambda, radius, j0;
};

SubParams sub_params(double epsilon, double alpha) {
  if (!(epsilon > 0.0 && epsilon <= 1.0 / kSqrt2 + 1e-15)) throw std::invalid_argument("subsolution: epsilon out of range");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("subsolution: alpha out of range");
  const double j0 = bessel_j0_first_zero();
  const double c_eps = kSqrt2 - epsilon;
  return {epsilon, alpha, c_eps, epsilon * c_eps, j0 / epsilon, j0};
}

double sub_w(const SubParams& p, double t, double x, double y) {
  const double xi = x + p.eps * t;
  const double r = std::hypot(xi, y) / p.radius;
  if (r >= 1.0) return 0.0;
  return p.alpha * subsolution_b(t, p.alpha, p.lambda) * std::exp(p.lambda * t - p.c_eps * (xi + p.radius)) *
         std::cyl_bessel_j(0.0, p.j0 * r);
}

}  // namespace

double subsolution_value(double t, double x, double y, double epsilon, double alpha) {
  return sub_w(sub_params(epsilon, alpha), t, x, y);
}

SubsolutionReport subsolution_check(double epsilon, double alpha, double h, const std::vector<double>& times) {
  const SubParams p = sub_params(epsilon, alpha);
  if (!(h > 0.0)) throw std::invalid_argument("subsolution_check: h must be > 0");
  SubsolutionReport rep;
  rep.epsilon = epsilon;
  rep.alpha = alpha;
  rep.c_eps = p.c_eps;
  rep.lambda_eps = p.lambda;
  rep.radius = p.radius;
  rep.t_end = std::log(1.0 / alpha) / p.lambda;
  constexpr double dtau = 1e-4;
  for (double t : times) {
    if (!(t >= 0.0 && t <= rep.t_end + 1e-12)) throw std::invalid_argument("subsolution_check: time out of range");
    const double cx = -p.eps * t;
    const int half = static_cast<int>(std::ceil(p.radius / h)) + 3;
    const int n = 2 * half + 1;
    FieldArray w(n, n), wp(n, n), wm(n, n);
    for (int j = 0; j < n; ++j) {
      const double y = (j - half) * h;
      for (int i = 0; i < n; ++i) {
        const double x = cx + (i - half) * h;
        w(j, i) = sub_w(p, t, x, y);
        wp(j, i) = sub_w(p, t + dtau, x, y);
        wm(j, i) = sub_w(p, t - dtau, x, y);
      }
    }
    double vmax = -std::numeric_limits<double>::infinity(), out_max = 0.0;
    double in_max = -std::numeric_limits<double>::infinity();
    for (int j = 1; j < n - 1; ++j) {
      for (int i = 1; i < n - 1; ++i) {
        const double u = w(j, i);
        const double lap = (w(j, i + 1) + w(j, i - 1) + w(j + 1, i) + w(j - 1, i) - 4.0 * u) / (h * h);
        const double dx = (w(j, i + 1) - w(j, i - 1)) / (2.0 * h);
        const double dt = (wp(j, i) - wm(j, i)) / (2.0 * dtau);
        const double op = dt - 0.5 * lap - kSqrt2 * dx - u + u * u;
        vmax = std::max(vmax, op);
        const double x = (i - half) * h, y = (j - half) * h;
        const double dist = std::hypot(x, y);
        if (dist > p.radius + 1.5 * h) out_max = std::max(out_max, std::abs(op));
        if (dist < p.radius - 1.5 * h) in_max = std::max(in_max, op);
      }
    }
    rep.times.push_back(t);
    rep.max_violation.push_back(vmax);
    rep.max_outside.push_back(out_max);
    rep.max_interior.push_back(in_max);
  }
  return rep;
}

}  // namespace kpp
