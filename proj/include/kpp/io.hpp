#pragma once

#include <filesystem>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "kpp/bbm.hpp"
#include "kpp/field.hpp"
#include "kpp/martingales.hpp"
#include "kpp/wave_mc.hpp"
#include "kpp/waves_1d.hpp"

namespace kpp {

/// Shortest decimal that round-trips the double.
std::string fmt_double(double v);

void write_snapshot_csv(std::ostream& os, const std::vector<std::vector<PopulationSnapshot>>& replicas,
                        bool header = true);

/// One row per (replica, checkpoint); the first alpha and (lambda, mu) pair of each report.
void write_martingale_series_csv(std::ostream& os, const TrajectoryResult& traj, double alpha, LambdaMu lm);

void write_summary_csv(std::ostream& os, const std::vector<SeriesSummary>& rows);

void write_probe_grid_csv(std::ostream& os, const ProbeGrid& grid, double alpha);

void write_profile_csv(std::ostream& os, const Profile1D& p);

void write_field_csv(std::ostream& os, const Field2D& f);
/// Grid metadata, speeds, boundary data and residuals.
std::string field_sidecar_json(const Field2D& f);
/// Reads a field written by write_field_csv plus its sidecar.
Field2D read_field(const std::filesystem::path& csv, const std::filesystem::path& sidecar);

struct ReportRow {
  std::string check;
  std::string param;
  double y = 0.0;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

void write_report_csv(std::ostream& os, const std::vector<ReportRow>& rows);

/// Creates base/<stem>-<n> for the smallest unused n; never reuses an existing directory.
std::filesystem::path make_run_dir(const std::filesystem::path& base, const std::string& stem);

struct Manifest {
  std::string command;
  std::map<std::string, std::string> config;
  std::vector<std::string> artifacts;
  double wall_seconds = 0.0;
  unsigned threads = 0;
};

std::string manifest_json(const Manifest& m);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace kpp
