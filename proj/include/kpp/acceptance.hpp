#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "kpp/io.hpp"

namespace kpp {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
  std::vector<ReportRow> rows;
};

struct AcceptanceOptions {
  bool quick = false;
  std::uint64_t seed = 20240601;
  std::vector<int> only;          ///< empty runs all twelve
  std::ostream* log = nullptr;    ///< progress and per-criterion lines
};

/// Runs the numbered acceptance criteria; each result carries its report rows.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options);

/// "PASS  C5 2D wave  (12.3 s)  detail"
std::string format_result(const CriterionResult& r);

}  // namespace kpp
