#include "kpp/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "kpp/martingales.hpp"
#include "kpp/rng.hpp"
#include "kpp/stats.hpp"

namespace kpp {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

double log_plus(double v) { return v > 1.0 ? std::log(v) : 0.0; }

// decay rate of the discrete minimal-speed tail, sqrt2 in the continuum limit
double field_rate(const Field2D& f) { return f.bc.right_linear_prefactor && f.bc.right_rate > 0.0 ? f.bc.right_rate : kSqrt2; }

}  // namespace

LevelCurve level_set(const Field2D& field, double s, double y_min) {
  if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("level_set: s must lie in (0,1)");
  LevelCurve out;
  out.s = s;
  for (int j = 1; j < field.ny; ++j) {
    const double y = field.y(j);
    if (y < y_min) continue;
    auto v = [&](int i) { return field.values(j, i); };
    if (!(v(0) >= s && v(field.nx - 1) < s)) {
      out.skipped.push_back(y);
      continue;
    }
    // bisection on the decreasing row: v(lo) >= s > v(hi)
    int lo = 0, hi = field.nx - 1;
    while (hi - lo > 1) {
      const int mid = (lo + hi) / 2;
      (v(mid) >= s ? lo : hi) = mid;
    }
    out.ys.push_back(y);
    out.sigma.push_back(field.x(lo) + field.hx * (v(lo) - s) / (v(lo) - v(hi)));
  }
  return out;
}

std::vector<double> front_probes() {
  std::vector<double> xs;
  for (int k = 0; k <= 40; ++k) xs.push_back(-6.0 + 0.4 * k);
  return xs;
}

double fit_log_shift(const Field2D& field, const Profile1D& w, double y, bool use_log) {
  const double omega = use_log ? std::log(y) / kSqrt2 : 0.0;
  const auto xs = front_probes();
  std::vector<double> vals;
  for (double x : xs) vals.push_back(field.at_cubic(x + omega, y));
  return fit_shift(w, xs, vals);
}

double log_shift_error(const Field2D& field, const Profile1D& w, double y, double shift, bool use_log) {
  if (y > 0.8 * field.y_hi()) throw std::invalid_argument("log_shift_error: y too close to the top boundary");
  if (!(y > 0.0)) throw std::invalid_argument("log_shift_error: y must be positive");
  const double omega = use_log ? std::log(y) / kSqrt2 : 0.0;
  double err = 0.0;
  for (double x : front_probes()) err = std::max(err, std::abs(field.at_cubic(x + omega, y) - w(x - shift)));
  return err;
}

Tameness tameness_constant(const Field2D& field, double top_margin) {
  // continuum weight; the discrete rate would amplify its O(h^2) offset across the domain
  const double rho = kSqrt2;
  Tameness t;
  for (int j = 1; j < field.ny; ++j) {
    const double y = field.y(j);
    if (y > field.y_hi() - top_margin) break;
    for (int i = 0; i < field.nx; ++i) {
      const double x = field.x(i);
      const double r = field.values(j, i) * std::exp(rho * x) / ((1.0 + std::max(x, 0.0)) * y);
      if (r > t.C) t = {r, x, y};
    }
  }
  return t;
}

TailStats tail_expansion_check(const Field2D& field, double K_star, const TailOptions& o) {
  if (!(K_star > 0.0)) throw std::invalid_argument("tail_expansion_check: K_star must be positive");
  const double rho = field_rate(field);
  TailStats st;
  const double x_cap = field.x_hi() - o.x_margin;
  const double y_cap = field.y_hi() - o.y_margin;
  struct Node {
    double r, e, x, y;
  };
  std::vector<Node> nodes;
  for (int j = 1; j < field.ny; ++j) {
    const double y = field.y(j);
    if (y > y_cap) break;
    if (y < o.y_min) continue;
    for (int i = 0; i < field.nx; ++i) {
      const double x = field.x(i);
      if (x > x_cap || !(x > log_plus(y) / rho)) continue;
      const double r = std::hypot(x, y);
      double e = field.values(j, i) * std::exp(rho * x) / (K_star * y) - x;
      if (o.include_log) e += log_plus(r) / rho;
      nodes.push_back({r, e, x, y});
    }
  }
  if (nodes.empty()) throw std::invalid_argument("tail_expansion_check: region is empty");
  st.nodes = nodes.size();
  double r_max = 0.0;
  for (const auto& n : nodes) {
    r_max = std::max(r_max, n.r);
    if (std::abs(n.e) > st.sup_E) {
      st.sup_E = std::abs(n.e);
      st.x_at = n.x;
      st.y_at = n.y;
    }
  }
  const int m = std::max(o.subregions, 1);
  for (int k = 1; k <= m; ++k) {
    const double rk = r_max * k / m;
    double sup = 0.0;
    for (const auto& n : nodes)
      if (n.r <= rk) sup = std::max(sup, std::abs(n.e));
    st.radii.push_back(rk);
    st.sup_by_region.push_back(sup);
  }
  return st;
}

double tail_ray_sup(const Field2D& field, double K_star, double y0, double lo, double hi) {
  const double rho = field_rate(field);
  double sup = 0.0;
  const int j = static_cast<int>(std::lround(y0 / field.hy));
  for (int i = 0; i < field.nx; ++i) {
    const double x = field.x(i);
    if (x < lo - 1e-12 || x > hi + 1e-12) continue;
    const double e = field.values(j, i) * std::exp(rho * x) / (K_star * field.y(j)) - (x - std::log(x) / rho);
    sup = std::max(sup, std::abs(e));
  }
  return sup;
}

double wave_speed(double lambda, double mu) {
  const double r2 = lambda * lambda + mu * mu;
  if (!(r2 > 0.0)) throw std::invalid_argument("wave_speed: (lambda, mu) = 0");
  return (r2 + 2.0) / (2.0 * std::sqrt(r2));
}

RotatedReport rotated_supercritical_check(const Field2D& field, double lambda, double mu, const Profile1D& w_c,
                                          const std::vector<double>& ys) {
  if (!(lambda > 0.0 && mu > 0.0 && lambda * lambda + mu * mu < 2.0))
    throw std::invalid_argument("rotated_supercritical_check: (lambda, mu) outside the quarter disk");
  if (ys.empty()) throw std::invalid_argument("rotated_supercritical_check: no heights");
  RotatedReport rep;
  rep.lambda = lambda;
  rep.mu = mu;
  rep.theta = std::atan2(mu, lambda);
  rep.speed = wave_speed(lambda, mu);
  const double ct = std::cos(rep.theta), st = std::sin(rep.theta);
  const auto xs = front_probes();
  // clockwise rotation; points below y = 0 read as 0
  auto sample = [&](double xr, double yr, bool& inside) {
    const double px = xr * ct + yr * st, py = -xr * st + yr * ct;
    if (py < 0.0) return 0.0;
    inside = field.contains(px, py);
    return field.at_cubic(px, py);
  };
  const double y_fit = *std::max_element(ys.begin(), ys.end());
  std::vector<double> fx, fv;
  for (double x : xs) {
    bool in = true;
    const double v = sample(x, y_fit, in);
    if (in) {
      fx.push_back(x);
      fv.push_back(v);
    }
  }
  if (fx.size() < 5) throw std::invalid_argument("rotated_supercritical_check: fit height leaves the domain");
  rep.shift = fit_shift(w_c, fx, fv);
  for (double y : ys) {
    double err = 0.0;
    int trimmed = 0;
    for (double x : xs) {
      bool in = true;
      const double v = sample(x, y, in);
      if (!in) {
        ++trimmed;
        continue;
      }
      err = std::max(err, std::abs(v - w_c(x - rep.shift)));
    }
    rep.ys.push_back(y);
    rep.errors.push_back(err);
    rep.trimmed.push_back(trimmed);
  }
  return rep;
}

namespace {

PopulationSnapshot whole_plane(double T, std::uint64_t seed, double dt_max, bool& capped) {
  SimConfig c;
  c.origin_y = 0.0;
  c.horizon_T = T;
  c.killing_enabled = false;
  c.dt_max = dt_max;
  c.seed = seed;
  auto r = simulate_replica(c);
  capped = r.status == ReplicaStatus::cap;
  return capped ? PopulationSnapshot{} : std::move(r.snapshots.back());
}

}  // namespace

CoupledZReport coupled_Z_over_y(const std::vector<double>& ys, double T, std::size_t replicas, std::uint64_t seed,
                                double dt_max) {
  for (double y : ys)
    if (!(y > 0.0)) throw std::invalid_argument("coupled_Z_over_y: heights must be positive");
  const std::size_t ny = ys.size();
  std::vector<double> D(replicas);
  std::vector<std::vector<double>> Z(ny, std::vector<double>(replicas));
  std::vector<char> capped(replicas, 0);
  parallel_for(replicas, [&](std::size_t r) {
    bool cap = false;
    const auto snap = whole_plane(T, replica_seed(seed, r), dt_max, cap);
    capped[r] = cap;
    if (cap) return;
    KahanSum d;
    std::vector<KahanSum> z(ny);
    for (const auto& p : snap.particles) {
      const double e = exp_weight(kSqrt2 * p.x - 2.0 * T);
      const double gap = kSqrt2 * T - p.x;
      d += gap * e;
      for (std::size_t k = 0; k < ny; ++k)
        if (p.min_y > -ys[k]) z[k] += gap * (p.y + ys[k]) * e;
    }
    D[r] = d.value();
    for (std::size_t k = 0; k < ny; ++k) Z[k][r] = z[k].value();
  });
  std::vector<std::size_t> keep;
  for (std::size_t r = 0; r < replicas; ++r)
    if (!capped[r]) keep.push_back(r);
  if (keep.size() < 3) throw std::runtime_error("coupled_Z_over_y: too few uncapped replicas");

  CoupledZReport rep;
  rep.T = T;
  rep.replicas = keep.size();
  std::vector<double> Dk;
  for (auto r : keep) Dk.push_back(D[r]);
  std::vector<double> D2;
  for (double v : Dk) D2.push_back(v * v);
  rep.mean_D2 = mean_se(D2).mean;
  for (std::size_t k = 0; k < ny; ++k) {
    std::vector<double> zk, dist;
    for (std::size_t i = 0; i < keep.size(); ++i) {
      const double z = Z[k][keep[i]];
      zk.push_back(z);
      const double d = z / ys[k] - Dk[i];
      dist.push_back(d * d);
    }
    CoupledZRow row;
    row.y = ys[k];
    const auto mz = mean_se(zk);
    row.mean_Z = mz.mean;
    row.se_Z = mz.se;
    const auto md = mean_se(dist);
    row.l2 = md.mean;
    row.l2_se = md.se;
    const auto reg = ols(Dk, zk);
    row.slope = reg.slope;
    row.slope_se = reg.slope_se_hc3;
    rep.rows.push_back(row);
  }
  return rep;
}

CoupledWReport coupled_W_supercritical(double lambda, double mu, const std::vector<double>& ys, double T,
                                       std::size_t replicas, std::uint64_t seed, double dt_max) {
  if (!(lambda > 0.0 && mu > 0.0 && lambda * lambda + mu * mu < 2.0))
    throw std::invalid_argument("coupled_W_supercritical: (lambda, mu) outside the quarter disk");
  if (!std::is_sorted(ys.begin(), ys.end())) throw std::invalid_argument("coupled_W_supercritical: ys must increase");
  const std::size_t ny = ys.size();
  const double rate = 0.5 * lambda * lambda + 0.5 * mu * mu + 1.0;
  std::vector<std::vector<double>> gap(ny, std::vector<double>(replicas));
  std::vector<char> capped(replicas, 0);
  parallel_for(replicas, [&](std::size_t r) {
    bool cap = false;
    const auto snap = whole_plane(T, replica_seed(seed, r), dt_max, cap);
    capped[r] = cap;
    if (cap) return;
    KahanSum a;
    std::vector<KahanSum> w(ny);
    for (const auto& p : snap.particles) {
      const double base = lambda * p.x - rate * T;
      a += exp_weight(base + mu * p.y);
      for (std::size_t k = 0; k < ny; ++k) {
        if (!(p.min_y > -ys[k])) continue;
        // e^{-mu y} sinh(mu (Y + y)) = (e^{mu Y} - e^{-mu Y - 2 mu y}) / 2
        w[k] += 0.5 * (exp_weight(base + mu * p.y) - exp_weight(base - mu * p.y - 2.0 * mu * ys[k]));
      }
    }
    for (std::size_t k = 0; k < ny; ++k) gap[k][r] = a.value() - w[k].value();
  });
  CoupledWReport rep;
  rep.lambda = lambda;
  rep.mu = mu;
  rep.T = T;
  std::vector<std::size_t> keep;
  for (std::size_t r = 0; r < replicas; ++r)
    if (!capped[r]) keep.push_back(r);
  rep.replicas = keep.size();
  for (std::size_t k = 0; k < ny; ++k) {
    std::vector<double> g;
    CoupledWRow row;
    row.y = ys[k];
    row.min_gap = std::numeric_limits<double>::infinity();
    for (auto r : keep) {
      g.push_back(gap[k][r]);
      row.min_gap = std::min(row.min_gap, gap[k][r]);
      if (k > 0 && gap[k][r] > gap[k - 1][r] + 1e-12 * (1.0 + std::abs(gap[k - 1][r]))) ++row.monotone_violations;
    }
    const auto m = mean_se(g);
    row.mean_gap = m.mean;
    row.se_gap = m.se;
    row.target = 0.5 * (1.0 + std::exp(-2.0 * mu * ys[k]));
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace kpp
