#include "kpp/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <optional>
#include <sstream>

#include "kpp/asymptotics.hpp"
#include "kpp/martingales.hpp"
#include "kpp/pde_2d.hpp"
#include "kpp/potential.hpp"
#include "kpp/rng.hpp"
#include "kpp/wave_mc.hpp"
#include "kpp/waves_1d.hpp"

namespace kpp {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

std::string g(double v, int digits = 4) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1])) return false;
  return true;
}

class Suite {
 public:
  explicit Suite(const AcceptanceOptions& o) : opt_(o) {
    h_fine_ = o.quick ? 0.1 : 0.05;
    h_coarse_ = o.quick ? 0.2 : 0.1;
  }

  std::uint64_t seed(int id) const { return mix64(opt_.seed + 0x9e37ULL * static_cast<std::uint64_t>(id)); }
  std::size_t n(std::size_t full, std::size_t quick) const { return opt_.quick ? quick : full; }

  void log(const std::string& s) const {
    if (opt_.log) *opt_.log << "  .. " << s << std::endl;
  }

  const Profile1D& phi() {
    if (!phi_) phi_ = solve_steady_phi(60.0, 0.005).profile;
    return *phi_;
  }
  const Profile1D& w() {
    if (!w_) w_ = solve_wave_1d(kSqrt2).profile;
    return *w_;
  }

  Field2D solve_minimal(double h, double x_hi, double y_hi, const Field2D* warm) {
    Domain d;
    d.hx = d.hy = h;
    d.x_hi = x_hi;
    d.y_hi = y_hi;
    MarchOptions o;
    o.max_explicit_steps = warm ? 0 : 500;
    auto s = solve_minimal_wave(d, phi(), w(), 0.0, o, 1, warm);
    log("minimal wave h=" + g(h) + " on [-10," + g(x_hi) + "]x[0," + g(y_hi) + "]: residual " +
        g(s.result.field.residual_sup, 3));
    return s.result.field;
  }

  const Field2D& coarse() {
    if (!coarse_) coarse_ = solve_minimal(h_coarse_, 25.0, 40.0, nullptr);
    return *coarse_;
  }
  const Field2D& fine() {
    if (!fine_) fine_ = solve_minimal(h_fine_, 25.0, 40.0, &coarse());
    return *fine_;
  }
  /// Enlarged domain [-10,35]x[0,60] at h_fine in quick mode, h_coarse otherwise.
  const Field2D& enlarged() {
    if (!enlarged_) enlarged_ = solve_minimal(h_enlarged(), 35.0, 60.0, nullptr);
    return *enlarged_;
  }
  /// Default domain at the enlarged run's spacing.
  const Field2D& enlarged_reference() { return opt_.quick ? fine() : coarse(); }
  double h_enlarged() const { return opt_.quick ? h_fine_ : h_coarse_; }

  double h_fine() const { return h_fine_; }
  double h_coarse() const { return h_coarse_; }
  bool quick() const { return opt_.quick; }

 private:
  AcceptanceOptions opt_;
  double h_fine_, h_coarse_;
  std::optional<Profile1D> phi_, w_;
  std::optional<Field2D> coarse_, fine_, enlarged_;
};

using Runner = std::function<void(Suite&, CriterionResult&)>;

void add_row(CriterionResult& r, const std::string& check, const std::string& param, double y, double value,
             double tol, bool pass) {
  r.rows.push_back({check, param, y, value, tol, pass});
}

void c1_martingale_means(Suite& s, CriterionResult& r) {
  SimConfig c;
  c.origin_y = 1.0;
  c.horizon_T = 2.0;
  c.checkpoint_times = {1.0, 2.0};
  c.dt_max = 0.5;
  c.seed = s.seed(1);
  const LambdaMu lm{1.0, 0.5};
  const auto traj = martingale_trajectory(c, {2.0}, {lm}, s.n(100000, 10000));
  bool ok = traj.capped == 0;
  std::ostringstream d;
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    std::vector<double> W, Z, Za, Wlm;
    for (const auto& rep : traj.reports) {
      W.push_back(rep[k].W);
      Z.push_back(rep[k].Z);
      Za.push_back(rep[k].Z_alpha.at(2.0));
      Wlm.push_back(rep[k].W_lm.at(lm));
    }
    auto check = [&](const char* name, const std::vector<double>& v, double target) {
      const auto m = mean_se(v);
      const double z = std::abs(m.mean - target) / m.se;
      const bool p = z <= 4.0;
      ok = ok && p;
      add_row(r, "martingale_mean", std::string(name) + "@T=" + g(traj.times[k]), 1.0, m.mean, 4.0 * m.se, p);
      d << name << "(T=" << g(traj.times[k]) << ")=" << g(m.mean) << " [" << g(z, 2) << " SE] ";
    };
    check("W", W, 1.0);
    check("Z", Z, 0.0);
    check("Z^2", Za, 2.0);
    check("W^{1,.5}", Wlm, std::sinh(0.5));
  }
  r.pass = ok;
  r.detail = d.str();
}

void c2_vanishing(Suite& s, CriterionResult& r) {
  SimConfig c;
  c.origin_y = 1.0;
  c.horizon_T = 8.0;
  c.checkpoint_times = {2.0, 4.0, 6.0, 8.0};
  c.dt_max = 1.0;
  c.seed = s.seed(2);
  const LambdaMu lm{1.5, 0.5};
  const auto traj = martingale_trajectory(c, {}, {lm}, s.n(4000, 1000));
  std::vector<double> medW, medL;
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    std::vector<double> W, L;
    for (const auto& rep : traj.reports) {
      W.push_back(rep[k].W);
      L.push_back(rep[k].W_lm.at(lm));
    }
    medW.push_back(quantile(W, 0.5));
    medL.push_back(quantile(L, 0.5));
    add_row(r, "median_W", "T=" + g(traj.times[k]), 1.0, medW.back(), 0.0, true);
    add_row(r, "median_W_lm", "T=" + g(traj.times[k]) + ",l=1.5,m=0.5", 1.0, medL.back(), 0.0, true);
  }
  r.pass = traj.capped == 0 && strictly_decreasing(medW) && strictly_decreasing(medL) && medW.back() > 0.0;
  std::ostringstream d;
  d << "median W:";
  for (double v : medW) d << ' ' << g(v);
  d << "; median W^{1.5,.5}:";
  for (double v : medL) d << ' ' << g(v);
  r.detail = d.str();
}

void c3_extinction(Suite& s, CriterionResult& r) {
  const auto ex = estimate_extinction(1.0, 8.0, s.n(20000, 2000), s.seed(3));
  const double target = 1.0 - s.phi()(1.0);
  const double tol = std::max(3.0 * ex.at_T.std_error, 0.01);
  const double err = std::abs(ex.at_T.value - target);
  r.pass = err <= tol;
  add_row(r, "extinction", "T=8", 1.0, ex.at_T.value, tol, r.pass);
  add_row(r, "extinction", "T=6", 1.0, ex.at_T_minus_2.value, tol, true);
  r.detail = "P(ext by 8)=" + g(ex.at_T.value) + " +- " + g(ex.at_T.std_error, 2) + " (T=6: " +
             g(ex.at_T_minus_2.value) + ") vs 1-phi(1)=" + g(target) + ", |diff|=" + g(err, 2) + " <= " + g(tol, 2);
}

void c4_solvers_1d(Suite& s, CriterionResult& r) {
  const auto sp = solve_steady_phi(60.0, 0.005);
  const double slope_err = std::abs(sp.slope0 - std::sqrt(2.0 / 3.0));
  const bool p1 = slope_err <= 1e-4;
  add_row(r, "phi_slope0", "", 0.0, sp.slope0, 1e-4, p1);

  const auto w2 = solve_wave_1d(2.0).profile;
  std::vector<double> xs, ls;
  for (Eigen::Index i = 0; i < w2.size(); ++i)
    if (w2.x(i) >= 10.0 && w2.x(i) <= 25.0) {
      xs.push_back(w2.x(i));
      ls.push_back(std::log(w2.values(i)));
    }
  const double rate = -ols(xs, ls).slope;
  const double rate_target = 2.0 - kSqrt2;
  const bool p2 = std::abs(rate / rate_target - 1.0) <= 0.02;
  add_row(r, "tail_rate_c2", "", 0.0, rate, 0.02 * rate_target, p2);

  const double K0 = fit_tail_constant(s.w(), 12.0, 22.0).K_star;
  double dev = 0.0;
  for (auto [lo, hi] : {std::pair{10.0, 20.0}, std::pair{11.0, 21.0}, std::pair{14.0, 22.0}})
    dev = std::max(dev, std::abs(fit_tail_constant(s.w(), lo, hi).K_star / K0 - 1.0));
  const bool p3 = dev <= 0.01;
  add_row(r, "K_star_window", "", 0.0, K0, 0.01, p3);
  r.pass = p1 && p2 && p3;
  r.detail = "phi'(0)=" + g(sp.slope0, 10) + " (err " + g(slope_err, 2) + "), rate(c=2)=" + g(rate, 6) + " vs " +
             g(rate_target, 6) + ", K*=" + g(K0, 6) + " window dev " + g(dev, 2);
}

void c5_wave_2d(Suite& s, CriterionResult& r) {
  const auto& f = s.fine();
  const bool p_res = f.residual_sup < 1e-5;
  const auto mono = monotonicity(f, 0.05);
  const auto full = monotonicity(f, 0.0);
  const bool p_mono = mono.x_violations == 0 && mono.y_violations == 0;
  const double st = stationarity_check(f, kSqrt2, 1.0);
  const double st_bad = stationarity_check(f, 1.8, 1.0);
  const bool p_st = st < 5e-3 && st_bad >= 10.0 * st;
  add_row(r, "residual", "h=" + g(s.h_fine()), 0.0, f.residual_sup, 1e-5, p_res);
  add_row(r, "x_violations", "top_trim=0.05", 0.0, static_cast<double>(mono.x_violations), 0.0,
          mono.x_violations == 0);
  add_row(r, "y_violations", "top_trim=0.05", 0.0, static_cast<double>(mono.y_violations), 0.0,
          mono.y_violations == 0);
  add_row(r, "stationarity", "c=sqrt2", 0.0, st, 5e-3, st < 5e-3);
  add_row(r, "stationarity", "c=1.8", 0.0, st_bad, 10.0 * st, st_bad >= 10.0 * st);
  r.pass = p_res && p_mono && p_st;
  r.detail = "h=" + g(s.h_fine()) + " residual " + g(f.residual_sup, 2) + "; violations x " +
             std::to_string(mono.x_violations) + "/" + std::to_string(mono.x_pairs) + ", y " +
             std::to_string(mono.y_violations) + "/" + std::to_string(mono.y_pairs) + " below 0.95 y_hi (full grid: x " +
             std::to_string(full.x_violations) + ", y " + std::to_string(full.y_violations) + "); drift " + g(st, 3) +
             " at sqrt2 vs " + g(st_bad, 3) + " at 1.8";
}

void c6_mc_vs_pde(Suite& s, CriterionResult& r) {
  const double T = 8.0;
  const std::vector<double> xs{-2.0, -1.0, 0.0, 1.0, 2.0};
  const std::vector<double> ys{1.0, 2.0, 5.0, 10.0, 20.0};
  const auto pf = pin_field(s.fine(), 5.0, 0.5);
  const auto pc = pin_field(s.coarse(), 5.0, 0.5);
  const std::size_t R = s.n(20000, 2000);
  std::vector<std::vector<double>> samples;
  for (double y : ys) samples.push_back(sample_shaved_Z(y, T, 8.0, R, s.seed(6)));
  const double x_mc = laplace_level(samples[2], 0.5);
  bool ok = true;
  double worst = 0.0;
  for (std::size_t j = 0; j < ys.size(); ++j)
    for (double x : xs) {
      const auto e = laplace_estimate(samples[j], x + x_mc, kSqrt2, T);
      const double psi = pf.at_cubic(x, ys[j]);
      const double disc = std::abs(psi - pc.at_cubic(x, ys[j]));
      const double tol = std::max(3.0 * e.std_error, 2.0 * disc);
      const double err = std::abs(e.value - psi);
      const bool p = err <= tol;
      ok = ok && p;
      worst = std::max(worst, err / tol);
      add_row(r, "phi_mc_vs_pde", "x=" + g(x), ys[j], e.value - psi, tol, p);
      s.log("probe (" + g(x) + "," + g(ys[j]) + "): MC " + g(e.value) + " +- " + g(e.std_error, 2) + ", PDE " + g(psi) +
            ", disc " + g(disc, 2) + (p ? "" : "  <- outside"));
    }
  // same proxy in 1D against the ODE wave, isolates the finite-horizon bias
  const auto d1 = sample_shaved_D(T, 8.0, R, s.seed(60), T);
  const double x_d = laplace_level(d1, 0.5);
  double bias_1d = 0.0;
  for (double x : xs) bias_1d = std::max(bias_1d, std::abs(laplace_estimate(d1, x + x_d, kSqrt2, T).value - s.w()(x)));
  add_row(r, "phi_1d_proxy_vs_ode", "T=8", 0.0, bias_1d, 0.0, true);
  r.pass = ok;
  r.detail = "5x5 probes, " + std::to_string(R) + " replicas, T=8; MC pin x=" + g(x_mc) +
             "; worst |MC-PDE|/tol = " + g(worst, 3) + "; 1D proxy at T=8 vs ODE wave: max gap " + g(bias_1d, 3);
}

void c7_log_shift(Suite& s, CriterionResult& r) {
  const auto& f = s.fine();
  const std::vector<double> ys{8.0, 16.0, 32.0};
  const double shift = fit_log_shift(f, s.w(), 32.0);
  std::vector<double> e, ctl;
  for (double y : ys) {
    e.push_back(log_shift_error(f, s.w(), y, shift));
    ctl.push_back(log_shift_error(f, s.w(), y, shift, false));
    add_row(r, "log_shift_error", "with_log", y, e.back(), 0.05, true);
    add_row(r, "log_shift_error", "without_log", y, ctl.back(), 0.0, true);
  }
  const bool dec = strictly_decreasing(e) && e.back() < 0.05;
  const bool ctl_fails = !strictly_decreasing(ctl);
  r.pass = dec && ctl_fails;
  std::ostringstream d;
  d << "shift " << g(shift) << "; errors";
  for (double v : e) d << ' ' << g(v, 3);
  d << "; control";
  for (double v : ctl) d << ' ' << g(v, 3);
  r.detail = d.str();
}

void c8_tail(Suite& s, CriterionResult& r) {
  const double K_pin = fit_tail_constant(s.w()).K_star;
  struct Case {
    const char* name;
    const Field2D* f;
  };
  const Case cases[] = {{"coarse", &s.coarse()}, {"fine", &s.fine()}, {"enlarged", &s.enlarged()}};
  double E[3], C[3];
  for (int k = 0; k < 3; ++k) {
    const auto& f = *cases[k].f;
    const double K = K_pin * std::exp(kSqrt2 * fit_log_shift(f, s.w(), 32.0));
    TailOptions t;
    t.y_margin = 0.2 * f.y_hi();
    E[k] = tail_expansion_check(f, K, t).sup_E;
    t.include_log = false;
    C[k] = tail_expansion_check(f, K, t).sup_E;
    add_row(r, "sup_E", cases[k].name, 0.0, E[k], 0.15 * E[0], true);
    add_row(r, "sup_E_no_log", cases[k].name, 0.0, C[k], 0.0, true);
  }
  const int ref = s.quick() ? 1 : 0;
  const double d_ref = std::abs(E[1] / E[0] - 1.0), d_dom = std::abs(E[2] / E[ref] - 1.0);
  const bool finite = std::isfinite(E[0]) && std::isfinite(E[1]) && std::isfinite(E[2]);
  const bool grows = C[2] > C[ref];
  r.pass = finite && d_ref <= 0.15 && d_dom <= 0.15 && grows;
  r.detail = "sup|E| " + g(E[0]) + " (h=" + g(s.h_coarse()) + "), " + g(E[1]) + " (h=" + g(s.h_fine()) + ", " +
             g(100 * d_ref, 3) + "%), " + g(E[2]) + " (enlarged at h=" + g(s.h_enlarged()) + ", " + g(100 * d_dom, 3) + "%); without log " + g(C[ref]) +
             " -> " + g(C[2]) + " on the enlarged domain";
}

void c9_rotated(Suite& s, CriterionResult& r) {
  const double lambda = 1.0, mu = 0.5;
  const double c = wave_speed(lambda, mu);
  const auto wc = solve_wave_1d(c).profile;
  Field2D F[2];
  const double hs[2] = {0.2, 0.1};
  for (int k = 0; k < 2; ++k) {
    Domain d;
    d.hx = d.hy = hs[k];
    d.x_hi = 40.0;
    d.y_hi = 45.0;
    MarchOptions o;
    o.max_explicit_steps = 500;
    F[k] = march_to_steady(supercritical_template(d, lambda, mu, s.phi(), wc, std::nan("")), o).field;
    s.log("supercritical wave h=" + g(hs[k]) + ": residual " + g(F[k].residual_sup, 3));
  }
  const auto R = richardson(F[1], F[0]);
  const std::vector<double> ys{8.0, 16.0, 32.0};
  const auto rep = rotated_supercritical_check(R, lambda, mu, wc, ys);
  for (std::size_t k = 0; k < ys.size(); ++k) add_row(r, "rotated_error", "l=1,m=0.5", ys[k], rep.errors[k], 0.0, true);
  const bool speed_ok = std::abs(c - 1.45344) < 5e-6;
  r.pass = speed_ok && strictly_decreasing(rep.errors);
  std::ostringstream d;
  d << "c=" << g(c, 7) << ", theta=" << g(rep.theta) << ", shift " << g(rep.shift) << "; errors";
  for (double v : rep.errors) d << ' ' << g(v, 3);
  r.detail = d.str();
}

void c10_coupled(Suite& s, CriterionResult& r) {
  const std::size_t R = s.n(20000, 4000);
  const auto z = coupled_Z_over_y({2.0, 8.0, 32.0}, 6.0, R, s.seed(10), 6.0);
  bool ok = true;
  std::ostringstream d;
  std::vector<double> l2;
  for (const auto& row : z.rows) {
    l2.push_back(row.l2);
    if (row.y <= 8.0) {
      const bool p = std::abs(row.slope - row.y) <= 4.0 * row.slope_se;
      ok = ok && p;
      add_row(r, "coupled_Z_slope", "T=6", row.y, row.slope, 4.0 * row.slope_se, p);
      d << "slope(" << g(row.y) << ")=" << g(row.slope) << "+-" << g(row.slope_se, 2) << ' ';
    }
    add_row(r, "coupled_Z_l2", "T=6", row.y, row.l2, 0.0, true);
  }
  const bool dec = strictly_decreasing(l2);
  ok = ok && dec;
  d << "L2";
  for (double v : l2) d << ' ' << g(v, 3);
  const auto w = coupled_W_supercritical(1.0, 0.5, {0.5, 2.0, 8.0}, 6.0, R, s.seed(11), 6.0);
  for (const auto& row : w.rows) {
    const bool p = std::abs(row.mean_gap - row.target) <= 4.0 * row.se_gap && row.min_gap >= -1e-12 &&
                   row.monotone_violations == 0;
    ok = ok && p;
    add_row(r, "coupled_W_gap", "l=1,m=0.5,T=6", row.y, row.mean_gap, 4.0 * row.se_gap, p);
    d << "; gap(" << g(row.y) << ")=" << g(row.mean_gap) << "+-" << g(row.se_gap, 2) << " vs " << g(row.target);
  }
  r.pass = ok;
  r.detail = d.str();
}

void c11_potential(Suite& s, CriterionResult& r) {
  const auto ga = green_asymptotics_check(s.n(20000, 2000), s.seed(12));
  const bool p_sym = ga.symmetry_max <= 1e-12, p_bnd = ga.boundary_max <= 1e-12;
  const bool p_near = ga.near.min_ratio >= 0.2 && ga.near.max_ratio <= 1.5;
  const bool p_mid = ga.mid.min_ratio >= 0.005 && ga.mid.max_ratio <= 20.0;
  const bool p_far = ga.far.min_ratio >= 0.05 && ga.far.max_ratio <= 20.0;
  add_row(r, "green_symmetry", "", 0.0, ga.symmetry_max, 1e-12, p_sym);
  add_row(r, "green_boundary", "", 0.0, ga.boundary_max, 1e-12, p_bnd);
  add_row(r, "green_near_ratio_min", "", 0.0, ga.near.min_ratio, 0.2, p_near);
  add_row(r, "green_mid_ratio_min", "", 0.0, ga.mid.min_ratio, 0.005, p_mid);
  add_row(r, "green_far_ratio_min", "", 0.0, ga.far.min_ratio, 0.05, p_far);

  auto G = [](double x, double y) { return green_quarter({2.0, 3.0}, {x, y}); };
  const auto h1 = harmonicity_check(G, 0.5, 6.0, 0.5, 7.0, 0.1, {{2.0, 3.0}}, 1.0);
  const auto h2 = harmonicity_check(G, 0.5, 6.0, 0.5, 7.0, 0.05, {{2.0, 3.0}}, 1.0);
  const double h_ratio = h1.sup_laplacian / h2.sup_laplacian;
  const bool p_harm = h_ratio >= 3.5;
  add_row(r, "harmonicity_ratio", "z=(2,3)", 0.0, h_ratio, 3.5, p_harm);

  const auto et = eta_check(1000, 1000.0, s.seed(13));
  const bool p_rt = et.round_trip_max <= 1e-10, p_vp = et.eta_minus_varpi_max <= 2.0;
  const bool p_edge = et.edge_residual_max <= 1e-8;
  add_row(r, "eta_round_trip", "", 0.0, et.round_trip_max, 1e-10, p_rt);
  add_row(r, "eta_minus_varpi", "", 0.0, et.eta_minus_varpi_max, 2.0, p_vp);
  add_row(r, "lambda_edge", "", 0.0, et.edge_residual_max, 1e-8, p_edge);

  std::vector<QuarterPoint> pts;
  for (double x : {0.5, 2.0, 10.0, 40.0})
    for (double y : {0.5, 1.0, 5.0, 10.0, 20.0, 40.0}) pts.push_back({x, y});
  const auto an = anharmonic_bound_check(pts, 200);
  double rmax = 0.0, ydep = 1.0, imin = 1e300;
  bool stable = true;
  for (std::size_t k = 0; k < an.size(); ++k) {
    rmax = std::max(rmax, an[k].ratio);
    stable = stable && an[k].stable;
    imin = std::min(imin, an[k].min_integrand);
    if (k + 1 < an.size() && an[k + 1].x == an[k].x && an[k + 1].y == 2.0 * an[k].y)
      ydep = std::max(ydep, std::max(an[k + 1].ratio / an[k].ratio, an[k].ratio / an[k + 1].ratio));
    add_row(r, "anharmonic_ratio", "x=" + g(an[k].x), an[k].y, an[k].ratio, 50.0, an[k].ratio <= 50.0);
  }
  const bool p_an = rmax <= 50.0 && stable && imin >= 0.0 && ydep <= 2.0;
  r.pass = p_sym && p_bnd && p_near && p_mid && p_far && p_harm && p_rt && p_vp && p_edge && p_an;
  r.detail = "sym " + g(ga.symmetry_max, 2) + ", bnd " + g(ga.boundary_max, 2) + ", ratios near [" +
             g(ga.near.min_ratio, 3) + "," + g(ga.near.max_ratio, 3) + "] mid [" + g(ga.mid.min_ratio, 3) + "," +
             g(ga.mid.max_ratio, 3) + "] far [" + g(ga.far.min_ratio, 3) + "," + g(ga.far.max_ratio, 3) +
             "]; lap ratio " + g(h_ratio, 3) + "; eta rt " + g(et.round_trip_max, 2) + ", |eta-varpi| <= " +
             g(et.eta_minus_varpi_max, 3) + ", edge " + g(et.edge_residual_max, 2) + "; anharmonic max " + g(rmax, 4) +
             ", y-doubling factor " + g(ydep, 4);
}

void c12_subsolution(Suite&, CriterionResult& r) {
  const auto probe = subsolution_check(0.3, 0.5, 0.02, {0.0});
  const double te = probe.t_end;
  const auto rep = subsolution_check(0.3, 0.5, 0.02, {0.0, 0.5 * te, te});
  double worst = -1e300;
  for (std::size_t k = 0; k < rep.times.size(); ++k) {
    worst = std::max(worst, rep.max_violation[k]);
    add_row(r, "subsolution_violation", "eps=0.3,alpha=0.5", rep.times[k], rep.max_violation[k], 1e-3,
            rep.max_violation[k] <= 1e-3);
  }
  r.pass = worst <= 1e-3;
  r.detail = "R=" + g(rep.radius, 6) + ", t_end=" + g(te, 6) + ", max violation " + g(worst, 3);
}

}  // namespace

std::string format_result(const CriterionResult& r) {
  char head[96];
  std::snprintf(head, sizeof head, "%s  C%-2d %-30s (%6.1f s)  ", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(),
                r.seconds);
  return head + r.detail;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options) {
  const std::vector<std::pair<std::string, Runner>> all{
      {"martingale means", c1_martingale_means},
      {"vanishing limits", c2_vanishing},
      {"extinction vs steady state", c3_extinction},
      {"1D solvers", c4_solvers_1d},
      {"2D minimal wave", c5_wave_2d},
      {"MC vs PDE wave", c6_mc_vs_pde},
      {"logarithmic shift", c7_log_shift},
      {"tail expansion", c8_tail},
      {"rotated supercritical limit", c9_rotated},
      {"coupled limits", c10_coupled},
      {"potential toolkit", c11_potential},
      {"subsolution", c12_subsolution},
  };
  Suite suite(options);
  std::vector<CriterionResult> out;
  for (std::size_t i = 0; i < all.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!options.only.empty() && std::find(options.only.begin(), options.only.end(), id) == options.only.end())
      continue;
    CriterionResult r;
    r.id = id;
    r.name = all[i].first;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      all[i].second(suite, r);
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("error: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (options.log) *options.log << format_result(r) << std::endl;
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace kpp
