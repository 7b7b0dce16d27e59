#include "kpp/waves_1d.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <boost/math/tools/minima.hpp>

#include "kpp/bbm.hpp"
#include "kpp/martingales.hpp"
#include "kpp/rng.hpp"

namespace kpp {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

struct State {
  double f, df;
};

State rhs(const State& s) { return {s.df, 2.0 * (s.f * s.f - s.f)}; }

State rk4(const State& s, double h) {
  auto add = [](const State& a, const State& b, double c) { return State{a.f + c * b.f, a.df + c * b.df}; };
  const State k1 = rhs(s);
  const State k2 = rhs(add(s, k1, 0.5 * h));
  const State k3 = rhs(add(s, k2, 0.5 * h));
  const State k4 = rhs(add(s, k3, h));
  return {s.f + h / 6.0 * (k1.f + 2 * k2.f + 2 * k3.f + k4.f), s.df + h / 6.0 * (k1.df + 2 * k2.df + 2 * k3.df + k4.df)};
}

// +1 overshoot (phi > 1), -1 undershoot (phi' < 0 below 1), 0 undecided up to y_max.
int classify(double slope, double h, int n) {
  State s{0.0, slope};
  for (int i = 0; i < n; ++i) {
    s = rk4(s, h);
    if (s.f > 1.0) return 1;
    if (s.df < 0.0) return -1;
  }
  return 0;
}

std::vector<double> trajectory(double slope, double h, int n) {
  std::vector<double> out(static_cast<std::size_t>(n) + 1);
  State s{0.0, slope};
  out[0] = 0.0;
  for (int i = 1; i <= n; ++i) {
    s = rk4(s, h);
    out[i] = s.f;
  }
  return out;
}

}  // namespace

double Profile1D::operator()(double at) const {
  const Eigen::Index n = size();
  if (n == 0) throw std::logic_error("Profile1D: empty");
  if (at <= x0) return values[0];
  if (at >= x_max()) {
    if (n >= 2 && values[n - 1] > 0.0 && values[n - 2] > values[n - 1]) {
      const double r = std::log(values[n - 2] / values[n - 1]) / h;
      return values[n - 1] * std::exp(-r * (at - x_max()));
    }
    return values[n - 1];
  }
  const double s = (at - x0) / h;
  auto i = static_cast<Eigen::Index>(std::floor(s));
  i = std::clamp<Eigen::Index>(i, 1, n - 3);
  if (n < 4) {
    const auto j = std::min<Eigen::Index>(static_cast<Eigen::Index>(s), n - 2);
    const double w = s - static_cast<double>(j);
    return (1 - w) * values[j] + w * values[j + 1];
  }
  const double u = s - static_cast<double>(i);
  const double p0 = values[i - 1], p1 = values[i], p2 = values[i + 1], p3 = values[i + 2];
  // cubic Lagrange through nodes i-1..i+2
  return p0 * (-u * (u - 1) * (u - 2) / 6.0) + p1 * ((u + 1) * (u - 1) * (u - 2) / 2.0) +
         p2 * (-(u + 1) * u * (u - 2) / 2.0) + p3 * ((u + 1) * u * (u - 1) / 6.0);
}

Profile1D Profile1D::shifted(double s) const {
  Profile1D p = *this;
  p.x0 += s;
  std::ostringstream os;
  os << pin << " shifted by " << s;
  p.pin = os.str();
  return p;
}

SteadyPhi solve_steady_phi(double y_max, double h) {
  if (!(y_max >= 20.0)) throw std::invalid_argument("solve_steady_phi: y_max must be >= 20");
  if (!(h > 0.0 && h <= 0.01)) throw std::invalid_argument("solve_steady_phi: h must be in (0, 0.01]");
  const int n = static_cast<int>(std::lround(y_max / h));
  const int n_shoot = std::min(n, static_cast<int>(std::lround(20.0 / h)));

  double lo = 0.5, hi = 1.0;
  if (classify(lo, h, n_shoot) != -1 || classify(hi, h, n_shoot) != 1) {
    std::ostringstream os;
    os << "solve_steady_phi: bracket [" << lo << ", " << hi << "] does not separate under/overshoot";
    throw std::runtime_error(os.str());
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const int c = classify(mid, h, n_shoot);
    if (c > 0) {
      hi = mid;
    } else if (c < 0) {
      lo = mid;
    } else {
      lo = hi = mid;
      break;
    }
  }
  const auto a = trajectory(lo, h, n_shoot);
  const auto b = trajectory(hi, h, n_shoot);

  // Trust the bracketed trajectory while the two brackets agree, then patch the linearized tail.
  int cut = n_shoot;
  for (int i = 1; i <= n_shoot; ++i) {
    if (std::abs(a[i] - b[i]) > 1e-11 || a[i] > 1.0 || b[i] > 1.0) {
      cut = i;
      break;
    }
  }
  cut = std::max(1, cut - static_cast<int>(std::lround(1.0 / h)));

  SteadyPhi out;
  out.slope0 = 0.5 * (lo + hi);
  out.y_cut = cut * h;
  Eigen::ArrayXd v(n + 1);
  for (int i = 0; i <= cut; ++i) v[i] = 0.5 * (a[i] + b[i]);
  const double gap = 1.0 - v[cut];
  for (int i = cut + 1; i <= n; ++i) v[i] = 1.0 - gap * std::exp(-kSqrt2 * (i - cut) * h);

  double res = 0.0, dev = 0.0;
  for (int i = 2; i + 2 <= n; ++i) {
    const double d2 = (-v[i + 2] + 16 * v[i + 1] - 30 * v[i] + 16 * v[i - 1] - v[i - 2]) / (12 * h * h);
    const double d1 = (-v[i + 2] + 8 * v[i + 1] - 8 * v[i - 1] + v[i - 2]) / (12 * h);
    res = std::max(res, std::abs(0.5 * d2 + v[i] - v[i] * v[i]));
    dev = std::max(dev, std::abs(0.5 * d1 * d1 + v[i] * v[i] - 2.0 / 3.0 * v[i] * v[i] * v[i] - 1.0 / 3.0));
  }
  out.residual_sup = res;
  out.first_integral_dev = dev;
  out.profile.x0 = 0.0;
  out.profile.h = h;
  out.profile.values = std::move(v);
  out.profile.pin = "phi(0) = 0";
  return out;
}

double tail_rate(double c) {
  if (c * c < 2.0 - 1e-12) throw std::invalid_argument("tail_rate: c < sqrt(2)");
  return c - std::sqrt(std::max(0.0, c * c - 2.0));
}

double front_rate(double c) { return -c + std::sqrt(c * c + 2.0); }

namespace {

// Fourth order centered weights: d2 on offsets (2, 1, 0), d1 on offsets (2, 1).
struct Stencil {
  double d2[3];
  double d1[2];
};

Stencil stencil(double h) {
  return {{-1.0 / (12 * h * h), 16.0 / (12 * h * h), -30.0 / (12 * h * h)}, {-1.0 / (12 * h), 8.0 / (12 * h)}};
}

}  // namespace

Wave1D solve_wave_1d(double c, double x_lo, double x_hi, double h, const WaveOptions& options) {
  if (!(c >= kSqrt2 - 1e-6)) throw std::invalid_argument("solve_wave_1d: c < sqrt(2), no monotone wave");
  if (!(h > 0.0) || !(x_lo < 0.0 && x_hi > 0.0)) throw std::invalid_argument("solve_wave_1d: need x_lo < 0 < x_hi");
  const bool minimal = std::abs(c - kSqrt2) < 1e-6;
  c = minimal ? kSqrt2 : c;
  const int i0 = static_cast<int>(std::lround(-x_lo / h));
  const int N = i0 + static_cast<int>(std::lround(x_hi / h));
  const double x0 = -i0 * h;
  const double rho = tail_rate(c);
  const int n = N + 1;  // grid unknowns; index n holds the tail offset (c = sqrt2) or the speed correction

  Eigen::ArrayXd xs = Eigen::ArrayXd::LinSpaced(n, x0, x0 + N * h);
  Eigen::ArrayXd scale = (rho * xs.max(0.0)).exp();
  const double init_rate = options.init_rate > 0.0 ? options.init_rate : rho;
  const Eigen::ArrayXd prefactor = minimal ? Eigen::ArrayXd(1.0 + xs.max(0.0)) : Eigen::ArrayXd::Ones(n);
  Eigen::ArrayXd w = 1.0 / (1.0 + (init_rate * xs).exp() / prefactor);
  double z = 0.0;

  // left: 1 - w follows the decaying-to-the-left discrete mode; right: slowest decaying mode
  const double lam_left = std::exp(front_rate(c) * h);
  const double lam_right = std::exp(-rho * h);
  const double ehh = std::exp(-kSqrt2 * h);
  const double xN = xs[N], xM = xs[N - 1];
  const auto st = stencil(h);
  const double xG = xN + h;
  // ghost values one node beyond each end, from the boundary relations
  auto at = [&](const Eigen::ArrayXd& u, double zz, int j) {
    if (j < 0) return 1.0 - (1.0 - u[0]) / lam_left;
    if (j > N) return minimal ? ehh * u[N] * (xG + zz) / (xN + zz) : lam_right * u[N];
    return u[j];
  };
  auto interior = [&](const Eigen::ArrayXd& u, double zz, int i, double speed) {
    const double um2 = at(u, zz, i - 2), um1 = u[i - 1], up1 = u[i + 1], up2 = at(u, zz, i + 2);
    const double d2 = st.d2[0] * (um2 + up2) + st.d2[1] * (um1 + up1) + st.d2[2] * u[i];
    const double d1 = st.d1[0] * (up2 - um2) + st.d1[1] * (up1 - um1);
    return 0.5 * d2 + speed * d1 + u[i] - u[i] * u[i];
  };
  auto residual = [&](const Eigen::ArrayXd& u, double zz, Eigen::VectorXd& F) {
    F.resize(n + 1);
    const double speed = minimal ? c : c + zz;
    F[0] = lam_left * (1.0 - u[0]) - (1.0 - u[1]);
    for (int i = 1; i < N; ++i) F[i] = interior(u, zz, i, speed);
    // c = sqrt2: w e^{sqrt2 x} linear with root at -a
    F[N] = minimal ? u[N] * (xM + zz) - ehh * u[N - 1] * (xN + zz) : u[N] - lam_right * u[N - 1];
    F[n] = u[i0] - 0.5;
    for (int i = 0; i < n; ++i) F[i] *= scale[i];
  };
  if (minimal) z = 1.0;  // tail offset guess

  Wave1D out;
  Eigen::VectorXd F;
  residual(w, z, F);
  double fnorm = F.lpNorm<Eigen::Infinity>();
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  int it = 0;
  for (; it < options.max_newton && fnorm > options.tol; ++it) {
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(5 * static_cast<std::size_t>(n));
    // scaled Jacobian S J S^{-1} in the scaled unknowns v = S w
    auto put = [&](int r, int col, double val) {
      trip.emplace_back(r, col, col < n ? scale[r] * val / scale[col] : scale[r] * val);
    };
    const double speed = minimal ? c : c + z;
    put(0, 0, -lam_left);
    put(0, 1, 1.0);
    // coefficient on node j, routing ghosts through the boundary relations
    auto put_node = [&](int r, int j, double val) {
      if (j < 0) {
        put(r, 0, val / lam_left);
      } else if (j > N) {
        if (minimal) {
          put(r, N, val * ehh * (xG + z) / (xN + z));
          put(r, n, val * ehh * w[N] * (xN - xG) / ((xN + z) * (xN + z)));
        } else {
          put(r, N, val * lam_right);
        }
      } else {
        put(r, j, val);
      }
    };
    for (int i = 1; i < N; ++i) {
      put_node(i, i - 2, 0.5 * st.d2[0] - speed * st.d1[0]);
      put(i, i - 1, 0.5 * st.d2[1] - speed * st.d1[1]);
      put(i, i, 0.5 * st.d2[2] + 1.0 - 2.0 * w[i]);
      put(i, i + 1, 0.5 * st.d2[1] + speed * st.d1[1]);
      put_node(i, i + 2, 0.5 * st.d2[0] + speed * st.d1[0]);
      if (!minimal) put(i, n, st.d1[0] * (at(w, z, i + 2) - at(w, z, i - 2)) + st.d1[1] * (w[i + 1] - w[i - 1]));
    }
    if (minimal) {
      put(N, N, xM + z);
      put(N, N - 1, -ehh * (xN + z));
      put(N, n, w[N] - ehh * w[N - 1]);
    } else {
      put(N, N, 1.0);
      put(N, N - 1, -lam_right);
    }
    trip.emplace_back(n, i0, 1.0 / scale[i0]);
    Eigen::SparseMatrix<double> J(n + 1, n + 1);
    J.setFromTriplets(trip.begin(), trip.end());
    lu.compute(J);
    if (lu.info() != Eigen::Success) throw std::runtime_error("solve_wave_1d: singular Jacobian");
    const Eigen::VectorXd dv = lu.solve(-F);
    const Eigen::ArrayXd dw = dv.head(n).array() / scale;
    const double dz = dv[n];
    const bool settled = dv.head(n).lpNorm<Eigen::Infinity>() < 1e-14 * (1.0 + (w * scale).abs().maxCoeff());
    double step = 1.0;
    bool improved = false;
    for (int k = 0; k < 30 && !improved; ++k, step *= 0.5) {
      Eigen::VectorXd Ft;
      residual(w + step * dw, z + step * dz, Ft);
      const double nt = Ft.lpNorm<Eigen::Infinity>();
      if (nt < fnorm) {
        w += step * dw;
        z += step * dz;
        F = Ft;
        fnorm = nt;
        improved = true;
      }
    }
    if (!improved) break;
    if (settled) break;
  }
  if (fnorm > 1e-6) {
    std::ostringstream os;
    os << "solve_wave_1d: Newton did not converge, scaled residual " << fnorm;
    throw std::runtime_error(os.str());
  }
  double res = 0.0;
  for (int i = 1; i < N; ++i) res = std::max(res, std::abs(interior(w, z, i, c)));
  out.residual_sup = res;
  out.speed_correction = minimal ? 0.0 : z;
  out.newton_iterations = it;
  out.profile.x0 = x0;
  out.profile.h = h;
  out.profile.values = w;
  out.profile.speed_c = c;
  out.profile.pin = "w(0) = 1/2";
  return out;
}

TailFit fit_tail_constant(const Profile1D& profile, double lo, double hi) {
  if (!profile.speed_c || std::abs(*profile.speed_c - kSqrt2) > 1e-6)
    throw std::invalid_argument("fit_tail_constant: profile is not a minimal speed wave");
  std::vector<double> xs, vs;
  for (Eigen::Index i = 0; i < profile.size(); ++i) {
    const double x = profile.x(i);
    if (x < lo - 1e-12 || x > hi + 1e-12) continue;
    if (!(profile.values[i] > 1e-13)) throw std::invalid_argument("fit_tail_constant: profile unresolved on window");
    xs.push_back(x);
    vs.push_back(profile.values[i] * std::exp(kSqrt2 * x));
  }
  if (xs.size() < 20) throw std::invalid_argument("fit_tail_constant: window has fewer than 20 grid points");
  const auto reg = ols(xs, vs);
  TailFit f;
  f.K_star = reg.slope;
  f.a = reg.intercept / reg.slope;
  for (std::size_t i = 0; i < xs.size(); ++i)
    f.fit_residual = std::max(f.fit_residual, std::abs(vs[i] - f.K_star * (xs[i] + f.a)));
  return f;
}

std::vector<double> sample_shaved_D(double T, double alpha, std::size_t replicas, std::uint64_t seed, double dt_max) {
  if (!(alpha > 0.0)) throw std::invalid_argument("sample_shaved_D: alpha must be > 0");
  std::vector<double> out(replicas);
  parallel_for(replicas, [&](std::size_t i) {
    SimConfig cfg;
    cfg.origin_y = 1.0;
    cfg.horizon_T = T;
    cfg.dt_max = dt_max;
    cfg.killing_enabled = false;
    cfg.seed = replica_seed(seed, i);
    const auto res = simulate_replica(cfg);
    if (res.status != ReplicaStatus::ok) throw std::runtime_error("sample_shaved_D: population cap exceeded");
    out[i] = evaluate_martingales(res.snapshots.back(), {alpha}, {}).D_alpha.at(alpha);
  });
  return out;
}

EstimateCI laplace_estimate(const std::vector<double>& samples, double x, double rate, double T) {
  std::vector<double> v(samples.size());
  const double f = std::exp(-rate * x);
  for (std::size_t i = 0; i < samples.size(); ++i) v[i] = 1.0 - std::exp(-f * samples[i]);
  const auto ms = mean_se(v);
  EstimateCI e;
  e.value = std::clamp(ms.mean, 0.0, 1.0);
  e.std_error = ms.se;
  e.replicas = samples.size();
  e.horizon_T = T;
  return e;
}

EstimateCI laplace_wave_1d_mc(double x, double T, std::size_t replicas, std::uint64_t seed, double alpha,
                              double dt_max) {
  if (replicas < 100) throw std::invalid_argument("laplace_wave_1d_mc: need at least 100 replicas");
  auto e = laplace_estimate(sample_shaved_D(T, alpha, replicas, seed, dt_max), x, kSqrt2, T);
  std::ostringstream os;
  os << "1D shaved D_T^alpha, alpha=" << alpha << ", T=" << T;
  e.meta = os.str();
  return e;
}

double fit_shift(const Profile1D& w, const std::vector<double>& xs, const std::vector<double>& values) {
  if (xs.size() != values.size() || xs.empty()) throw std::invalid_argument("fit_shift: size mismatch");
  auto loss = [&](double s) {
    double acc = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double e = values[i] - w(xs[i] - s);
      acc += e * e;
    }
    return acc;
  };
  // coarse scan then Brent refinement
  double best = 0.0, best_loss = loss(0.0);
  for (double s = -30.0; s <= 30.0; s += 0.25) {
    const double l = loss(s);
    if (l < best_loss) {
      best_loss = l;
      best = s;
    }
  }
  const auto r = boost::math::tools::brent_find_minima(loss, best - 0.5, best + 0.5, 50);
  return r.first;
}

}  // namespace kpp
