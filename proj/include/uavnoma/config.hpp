#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "uavnoma/experiments.hpp"

namespace uavnoma {

enum class ExperimentKind { Coverage, AltitudeSweep, BeamScan, OrderHistogram, Asymptotic };

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::AltitudeSweep;
  std::string name = "custom";
  std::vector<Ordering> orderings{Ordering::Distance};  // Monte Carlo feedback schemes
  std::vector<int> weak_ranks;                          // extra i values; empty = users.weak_rank only
  std::vector<double> inner_radii;                      // coverage only; empty = geometry L1 only
  bool operator==(const ExperimentSpec&) const = default;
};

struct OutputSpec {
  std::string directory = "out";
  std::string format = "csv";
  bool operator==(const OutputSpec&) const = default;
};

struct RunConfig {
  Scenario scenario = default_scenario();
  SweepPlan sweep;
  SimSpec sim;
  ExperimentSpec experiment;
  OutputSpec output;

  void validate() const;
  static Scenario default_scenario();
  bool operator==(const RunConfig&) const = default;
};

// JSON schema (units in key names; angles in degrees, powers in dBm):
//   geometry   inner_radius_m, outer_radius_m, sector_width_deg,
//              vertical_beamwidth_deg, altitude_m, density_per_m2
//   channel    path_loss ("distance_power" | "close_in"), exponent,
//              carrier_ghz, antennas, beam_angle_deg
//   link       tx_power_dbm, noise_dbm
//   users      strong_rank, weak_rank, rate_strong_bpcu, rate_weak_bpcu,
//              power_strong, power_weak
//   sweep      altitudes_m, powers_dbm, scan_step_m, objective, methods,
//              rel_tol, abs_tol, max_subdivisions, nodes
//   sim        trials, seed, ordering, fullcsi_strong_rank, fullcsi_weak_rank
//   experiment kind, name, orderings, weak_ranks, inner_radii_m
//   output     directory, format
// Every section and key is optional; omitted values keep the defaults.
// Unknown keys raise ParseError naming the offending path.
RunConfig parse_config(const nlohmann::json& j);
RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::string& path);

// Emits every field; parse_config(to_json(c)) reproduces c exactly.
nlohmann::json to_json(const RunConfig& c);

std::vector<std::string> preset_names();
RunConfig preset(const std::string& name);

std::string_view to_string(ExperimentKind k);
std::string_view to_string(Ordering o);

}  // namespace uavnoma
