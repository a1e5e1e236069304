#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "uavnoma/config.hpp"

namespace uavnoma {

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);
void write_coverage_csv(std::ostream& out, const std::vector<std::pair<double, CoverageRow>>& rows);  // (L1, row)
void write_scan_csv(std::ostream& out, double altitude, const std::vector<ScanRow>& rows);
void write_histogram_csv(std::ostream& out, const std::vector<std::pair<double, OrderHistogram>>& rows);  // (h, hist)
void write_asymptotic_csv(std::ostream& out, const std::vector<AsymptoticRow>& rows);

struct RunResult {
  std::string csv_path;
  std::string manifest_path;
  std::size_t rows = 0;
  double wall_seconds = 0.0;
};

// Runs the configured experiment, writes <dir>/<name>.csv and
// <dir>/<name>.manifest.json. Progress lines go to `log`.
RunResult run(const RunConfig& cfg, std::ostream& log);

// Full dataset for a config, without touching the filesystem.
std::string render_dataset(const RunConfig& cfg, std::size_t* rows = nullptr);

nlohmann::json run_manifest(const RunConfig& cfg, const RunResult& result);

inline constexpr const char* kVersion = "1.0.0";

}  // namespace uavnoma
