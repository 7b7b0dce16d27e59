#include "kpp/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#ifndef KPP_VERSION
#define KPP_VERSION "0.0.0"
#endif

namespace kpp {

std::string fmt_double(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

void write_snapshot_csv(std::ostream& os, const std::vector<std::vector<PopulationSnapshot>>& replicas, bool header) {
  if (header) os << "replica,t,id,parent_id,x,y,max_drift_excess\n";
  for (std::size_t r = 0; r < replicas.size(); ++r)
    for (const auto& s : replicas[r])
      for (const auto& p : s.particles) {
        os << r << ',' << fmt_double(s.t) << ',' << p.id << ',';
        if (p.parent_id) os << *p.parent_id;
        os << ',' << fmt_double(p.x) << ',' << fmt_double(p.y) << ',' << fmt_double(p.max_drift_excess) << '\n';
      }
}

void write_martingale_series_csv(std::ostream& os, const TrajectoryResult& traj, double alpha, LambdaMu lm) {
  os << "replica,t,A,D,W,Z,alpha,Z_alpha,lambda,mu,W_lm\n";
  auto get = [](const auto& m, const auto& k) {
    auto it = m.find(k);
    return it == m.end() ? std::numeric_limits<double>::quiet_NaN() : it->second;
  };
  for (std::size_t r = 0; r < traj.reports.size(); ++r)
    for (const auto& m : traj.reports[r])
      os << r << ',' << fmt_double(m.t) << ',' << fmt_double(m.A) << ',' << fmt_double(m.D) << ',' << fmt_double(m.W)
         << ',' << fmt_double(m.Z) << ',' << fmt_double(alpha) << ',' << fmt_double(get(m.Z_alpha, alpha)) << ','
         << fmt_double(lm.lambda) << ',' << fmt_double(lm.mu) << ',' << fmt_double(get(m.W_lm, lm)) << '\n';
}

void write_summary_csv(std::ostream& os, const std::vector<SeriesSummary>& rows) {
  os << "series,t,mean,se,q25,median,q75\n";
  for (const auto& s : rows)
    os << s.name << ',' << fmt_double(s.t) << ',' << fmt_double(s.mean) << ',' << fmt_double(s.se) << ','
       << fmt_double(s.q25) << ',' << fmt_double(s.median) << ',' << fmt_double(s.q75) << '\n';
}

void write_probe_grid_csv(std::ostream& os, const ProbeGrid& grid, double alpha) {
  os << "x,y,estimate,std_error,replicas,T,alpha\n";
  for (std::size_t j = 0; j < grid.ys.size(); ++j)
    for (std::size_t i = 0; i < grid.xs.size(); ++i) {
      const auto& e = grid.estimates[j][i];
      os << fmt_double(grid.xs[i]) << ',' << fmt_double(grid.ys[j]) << ',' << fmt_double(e.value) << ','
         << fmt_double(e.std_error) << ',' << e.replicas << ',' << fmt_double(e.horizon_T) << ',' << fmt_double(alpha)
         << '\n';
    }
}

void write_profile_csv(std::ostream& os, const Profile1D& p) {
  os << "x,value\n";
  for (Eigen::Index i = 0; i < p.size(); ++i) os << fmt_double(p.x(i)) << ',' << fmt_double(p.values(i)) << '\n';
}

void write_field_csv(std::ostream& os, const Field2D& f) {
  os << "x,y,value\n";
  for (int j = 0; j < f.ny; ++j)
    for (int i = 0; i < f.nx; ++i)
      os << fmt_double(f.x(i)) << ',' << fmt_double(f.y(j)) << ',' << fmt_double(f.values(j, i)) << '\n';
}

std::string field_sidecar_json(const Field2D& f) {
  nlohmann::ordered_json j;
  j["x_lo"] = f.x_lo;
  j["x_hi"] = f.x_hi();
  j["y_hi"] = f.y_hi();
  j["hx"] = f.hx;
  j["hy"] = f.hy;
  j["nx"] = f.nx;
  j["ny"] = f.ny;
  j["frame_speed_c"] = f.frame_speed_c;
  j["nominal_speed"] = f.nominal_speed;
  j["residual_sup"] = f.residual_sup;
  j["residual_l2"] = f.residual_l2;
  j["boundary"] = {{"right", f.bc.right == RightBoundary::tail_extrapolation ? "tail_extrapolation" : "dirichlet_zero"},
                   {"right_rate", f.bc.right_rate},
                   {"right_linear_prefactor", f.bc.right_linear_prefactor},
                   {"left", f.bc.left},
                   {"top", f.bc.top},
                   {"top_shift", f.bc.top_shift}};
  return j.dump(2) + "\n";
}

Field2D read_field(const std::filesystem::path& csv, const std::filesystem::path& sidecar) {
  std::ifstream js(sidecar);
  if (!js) throw std::runtime_error("read_field: cannot open " + sidecar.string());
  const auto j = nlohmann::json::parse(js);
  Field2D f;
  f.x_lo = j.at("x_lo");
  f.hx = j.at("hx");
  f.hy = j.at("hy");
  f.nx = j.at("nx");
  f.ny = j.at("ny");
  f.frame_speed_c = j.at("frame_speed_c");
  f.nominal_speed = j.value("nominal_speed", f.frame_speed_c);
  f.residual_sup = j.value("residual_sup", 0.0);
  f.residual_l2 = j.value("residual_l2", 0.0);
  if (j.contains("boundary")) {
    const auto& b = j["boundary"];
    f.bc.right = b.value("right", std::string("tail_extrapolation")) == "dirichlet_zero"
                     ? RightBoundary::dirichlet_zero
                     : RightBoundary::tail_extrapolation;
    f.bc.right_rate = b.value("right_rate", 0.0);
    f.bc.right_linear_prefactor = b.value("right_linear_prefactor", false);
    f.bc.left = b.value("left", std::string());
    f.bc.top = b.value("top", std::string());
    f.bc.top_shift = b.value("top_shift", 0.0);
  }
  f.values = FieldArray::Zero(f.ny, f.nx);
  std::ifstream in(csv);
  if (!in) throw std::runtime_error("read_field: cannot open " + csv.string());
  std::string line;
  std::getline(in, line);
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    double x, y, v;
    char c1, c2;
    std::istringstream ls(line);
    if (!(ls >> x >> c1 >> y >> c2 >> v)) throw std::runtime_error("read_field: malformed row: " + line);
    const int i = static_cast<int>(std::lround((x - f.x_lo) / f.hx));
    const int jj = static_cast<int>(std::lround(y / f.hy));
    if (i < 0 || i >= f.nx || jj < 0 || jj >= f.ny) throw std::runtime_error("read_field: point off grid: " + line);
    f.values(jj, i) = v;
    ++rows;
  }
  if (rows != static_cast<std::size_t>(f.nx) * f.ny) throw std::runtime_error("read_field: row count mismatch");
  return f;
}

void write_report_csv(std::ostream& os, const std::vector<ReportRow>& rows) {
  os << "check,param,y,value,tolerance,pass\n";
  for (const auto& r : rows)
    os << r.check << ',' << r.param << ',' << fmt_double(r.y) << ',' << fmt_double(r.value) << ','
       << fmt_double(r.tolerance) << ',' << (r.pass ? "true" : "false") << '\n';
}

std::filesystem::path make_run_dir(const std::filesystem::path& base, const std::string& stem) {
  std::filesystem::create_directories(base);
  for (int n = 1; n < 1'000'000; ++n) {
    auto p = base / (stem + "-" + std::to_string(n));
    if (std::filesystem::create_directory(p)) return p;
  }
  throw std::runtime_error("make_run_dir: no free directory name under " + base.string());
}

std::string manifest_json(const Manifest& m) {
  nlohmann::ordered_json j;
  j["command"] = m.command;
  j["version"] = KPP_VERSION;
  j["config"] = m.config;
  j["artifacts"] = m.artifacts;
  j["wall_seconds"] = m.wall_seconds;
  j["threads"] = m.threads;
  return j.dump(2) + "\n";
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

}  // namespace kpp
