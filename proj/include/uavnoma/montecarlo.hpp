#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "uavnoma/outage.hpp"

namespace uavnoma {

enum class Ordering { Distance, FullCsi };

struct SimSpec {
  std::int64_t trials = 1'000'000;
  std::uint64_t seed = 20240501;
  Ordering ordering = Ordering::Distance;
  // Full-CSI selection, counted from the best gain downward: rank r means the
  // user K - (r - 1) in ascending-gain order, e.g. {20, 25} picks K-19, K-24.
  RankPair fullcsi_ranks{20, 25};

  void validate() const;
  bool operator==(const SimSpec&) const = default;
};

struct SimEstimate {
  double mean = 0.0;
  double half_width_3sigma = 0.0;
  std::int64_t trials_used = 0;
};

struct SimConditionals {
  std::optional<SimEstimate> strong_sk1_e3;
  std::optional<SimEstimate> weak_e2;
  std::optional<SimEstimate> strong_e3;
  std::optional<SimEstimate> weak_e4;
  std::optional<SimEstimate> strong_e4;
};

struct SimReport {
  OutageReport report;  // point estimates, method = MonteCarlo
  SimEstimate prob_only_strong;
  SimEstimate prob_both;
  std::array<SimEstimate, 4> sk1_events;  // index n - 1
  std::array<SimEstimate, 4> sk2_events;
  SimConditionals noma;
  SimConditionals oma;
  SimEstimate p_out_strong;
  SimEstimate p_out_weak;
  SimEstimate p_out_strong_oma;
  SimEstimate p_out_weak_oma;
  SimEstimate sum_rate_noma;
  SimEstimate sum_rate_oma;
};

struct UserLocation {
  double distance;  // horizontal, m
  double azimuth;   // rad
};

// One HPPP realisation: K ~ Poisson(mu), locations uniform in area over the
// sector centred on `centre`.
std::vector<UserLocation> sample_field(const HppConfig& cfg, std::mt19937_64& rng, double centre = 0.0);

// Instantaneous effective gain |alpha|^2 F / PL of a user.
double effective_gain(const ChannelModel& model, double altitude, const UserLocation& u, double fading);

// Hybrid NOMA/OMA transmission simulated trial by trial. Distance ordering
// selects the pair by rank of horizontal distance; full-CSI ordering ranks all
// users by instantaneous gain. Users outside the radiated region are never
// served. Results are deterministic for a given seed regardless of the worker
// count (UAVNOMA_WORKERS overrides the default).
SimReport simulate_report(const Scenario& sc, const RadiatedRegion& region, const SimSpec& sim);

struct OrderHistogram {
  std::vector<double> strong;  // [r - 1] = P{distance-rank j user has gain rank r}
  std::vector<double> weak;
  std::int64_t trials_used = 0;  // fields with K >= i
};

// Gain ranks (1 = strongest) of the users picked by distance feedback.
OrderHistogram actual_order_histogram(const Scenario& sc, const SimSpec& sim);

// Worker threads used by the simulator.
int worker_count();

}  // namespace uavnoma
