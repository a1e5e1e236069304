#pragma once

#include <optional>
#include <vector>

#include "uavnoma/montecarlo.hpp"
#include "uavnoma/outage.hpp"

namespace uavnoma {

enum class Objective { NomaSumRate };

struct SweepPlan {
  std::vector<double> altitudes = default_altitudes();
  std::vector<double> powers_dbm{20.0};
  double scan_step = 1.0;  // m
  Objective objective = Objective::NomaSumRate;
  std::vector<Method> methods{Method::Analytic};
  quad::QuadSpec quad;

  void validate() const;
  static std::vector<double> default_altitudes();  // 10, 12.5, ..., 150 m
  bool operator==(const SweepPlan&) const = default;
};

// Boresight candidates: D1, D1 + step, ... and D2 itself.
std::vector<double> scan_grid(const BoresightLimits& lim, double step);

struct ScanPoint {
  double boresight;
  double sum_rate_noma;
};

struct ScanResult {
  bool full_coverage = false;  // no scan needed: the whole region is lit
  RadiatedRegion region;       // footprint at D*
  double d_star = 0.0;
  double best_rate = 0.0;
  std::vector<ScanPoint> curve;
};

// Grid search of the boresight point maximising the analytic NOMA sum rate;
// ties go to the smaller D.
ScanResult beam_scan(const Scenario& sc, double step = 1.0, const quad::QuadSpec& spec = {});

struct SweepRow {
  double altitude = 0.0;
  double power_dbm = 0.0;
  RankPair pair;
  Method method = Method::Analytic;
  Ordering ordering = Ordering::Distance;
  bool full_coverage = false;
  double d_star = 0.0;
  OutageReport report;
  // 3-sigma half widths for Monte Carlo rows, quadrature error otherwise
  double err_sum_rate_noma = 0.0;
  double err_sum_rate_oma = 0.0;
  double err_p_out_strong = 0.0;
  double err_p_out_weak = 0.0;
};

// Per power and altitude: scan for D*, then evaluate every requested method
// there. Monte Carlo rows use `sim` (same seed for every row). Rows are
// ordered by power, altitude, method.
std::vector<SweepRow> altitude_sweep(const Scenario& base, const SweepPlan& plan, const SimSpec& sim = {});

struct CoverageRow {
  double altitude;
  double required_beamwidth;  // rad
  Coverage status;
  double coverage_at_d1;   // fraction of the region lit with the beam at D1
  double coverage_at_d2;
  double coverage_best;    // max over the scan grid
};

std::vector<CoverageRow> coverage_table(const RegionGeometry& geom, const std::vector<double>& altitudes,
                                        double step = 1.0);

// Scan curve with event probabilities at every candidate D.
struct ScanRow {
  double power_dbm;
  double boresight;
  double inner;
  double outer;
  OutageReport report;
};

std::vector<ScanRow> scan_table(const Scenario& base, const std::vector<double>& powers_dbm, double step = 1.0,
                                const quad::QuadSpec& spec = {});

// Exact versus high-SNR conditional outages at D* of each power.
struct AsymptoticRow {
  double altitude;
  double power_dbm;
  double d_star;
  const char* quantity;  // which conditional outage
  double exact;
  double approx;
};

std::vector<AsymptoticRow> asymptotic_table(const Scenario& base, const std::vector<double>& altitudes,
                                            const std::vector<double>& powers_dbm, double step = 1.0,
                                            const quad::QuadSpec& spec = {});

// Least-squares slope of log10(outage) against power in dB / 10.
double diversity_slope(const std::vector<double>& powers_dbm, const std::vector<double>& outages);

// Deterministic parallel map over [0, n): results are stored by index.
template <class T, class F>
std::vector<T> parallel_map(std::size_t n, F&& f);

}  // namespace uavnoma

#include "uavnoma/detail/parallel_map.hpp"
