#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "kpp/bbm.hpp"
#include "kpp/io.hpp"
#include "kpp/pde_2d.hpp"
#include "kpp/svg.hpp"

using namespace kpp;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

svg::LinePlot sample_plot() {
  svg::LinePlot p{"sample", "x", "y", {}, false, 320, 200};
  p.series.push_back({"a", {0, 1, 2, 3}, {0, 1, 4, 9}, ""});
  p.series.push_back({"b", {0, 1, 2, 3}, {9, 4, 1, 0}, "#000000"});
  return p;
}

Field2D sample_field() {
  auto f = Field2D::make(0.0, 2.0, 1.0, 0.5, 0.5);
  for (int j = 0; j < f.ny; ++j)
    for (int i = 0; i < f.nx; ++i) f.values(j, i) = 0.1 * i + 0.2 * j;
  f.frame_speed_c = 1.5;
  f.nominal_speed = 1.4;
  f.bc.right_rate = 0.7;
  f.bc.left = "phi";
  return f;
}

std::string snapshot_csv(std::uint64_t seed) {
  SimConfig c;
  c.horizon_T = 2.0;
  c.seed = seed;
  std::vector<std::vector<PopulationSnapshot>> reps{simulate_replica(c).snapshots};
  std::ostringstream os;
  write_snapshot_csv(os, reps);
  return os.str();
}

}  // namespace

TEST_CASE("shortest round-trip number formatting") {
  CHECK(fmt_double(0.1) == "0.1");
  CHECK(fmt_double(2.0) == "2");
  CHECK(fmt_double(1e-300) == "1e-300");
  CHECK(std::stod(fmt_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("snapshot CSV is deterministic") {
  const auto a = snapshot_csv(7), b = snapshot_csv(7);
  CHECK(a == b);
  CHECK(a.rfind("replica,t,id,parent_id,x,y,max_drift_excess\n", 0) == 0);
  CHECK(a != snapshot_csv(8));
}

TEST_CASE("field CSV and sidecar round trip") {
  const auto f = sample_field();
  const fs::path dir = fs::temp_directory_path() / "kpp_io_test";
  fs::create_directories(dir);
  {
    std::ofstream os(dir / "f.csv");
    write_field_csv(os, f);
  }
  write_text(dir / "f.json", field_sidecar_json(f));
  const auto j = nlohmann::json::parse(slurp(dir / "f.json"));
  CHECK(j.at("nx") == f.nx);
  CHECK(j.at("frame_speed_c") == 1.5);
  const auto g = read_field(dir / "f.csv", dir / "f.json");
  CHECK(g.nx == f.nx);
  CHECK(g.ny == f.ny);
  CHECK((g.values - f.values).abs().maxCoeff() == 0.0);
  CHECK(g.bc.right_rate == 0.7);
  CHECK(g.bc.left == "phi");
  fs::remove_all(dir);
}

TEST_CASE("report CSV") {
  std::ostringstream os;
  write_report_csv(os, {{"c", "p=1", 2.0, 0.5, 0.1, true}});
  CHECK(os.str() == "check,param,y,value,tolerance,pass\nc,p=1,2,0.5,0.1,true\n");
}

TEST_CASE("run directories are append-only") {
  const fs::path base = fs::temp_directory_path() / "kpp_run_test";
  fs::remove_all(base);
  const auto a = make_run_dir(base, "accept"), b = make_run_dir(base, "accept");
  CHECK(a.filename() == "accept-1");
  CHECK(b.filename() == "accept-2");
  fs::remove(a);
  CHECK(make_run_dir(base, "accept").filename() == "accept-1");
  fs::remove_all(base);
}

TEST_CASE("manifest") {
  Manifest m;
  m.command = "simulate";
  m.config["--T"] = "2";
  m.artifacts = {"snapshots.csv"};
  m.threads = 3;
  const auto j = nlohmann::json::parse(manifest_json(m));
  CHECK(j.at("command") == "simulate");
  CHECK(j.at("config").at("--T") == "2");
  CHECK(j.at("artifacts")[0] == "snapshots.csv");
  CHECK(j.at("threads") == 3);
  CHECK(j.contains("version"));
}

TEST_CASE("svg golden files") {
  const fs::path dir = KPP_GOLDEN_DIR;
  const auto line = svg::render(sample_plot());
  const auto heat = svg::render_heatmap(sample_field(), "field", 120, 320, 200);
  if (std::getenv("KPP_UPDATE_GOLDEN")) {
    write_text(dir / "line.svg", line);
    write_text(dir / "heatmap.svg", heat);
  }
  CHECK(line == slurp(dir / "line.svg"));
  CHECK(heat == slurp(dir / "heatmap.svg"));
  CHECK(line.rfind("<svg", 0) == 0);
}
