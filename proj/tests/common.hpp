#pragma once

#include <cmath>
#include <numbers>

#include "uavnoma/config.hpp"

namespace testing_support {

inline double deg(double d) { return d * std::numbers::pi / 180.0; }

inline uavnoma::RegionGeometry reference_geometry(double altitude = 50.0) {
  auto g = uavnoma::RunConfig::default_scenario().users.geometry;
  g.altitude = altitude;
  return g;
}

inline uavnoma::Scenario scenario(double altitude, double power_dbm, int j = 20, int i = 30) {
  auto sc = uavnoma::RunConfig::default_scenario();
  sc.users.geometry.altitude = altitude;
  sc.noma.budget.tx_power_mw = uavnoma::dbm_to_mw(power_dbm);
  sc.noma.pair = {j, i};
  return sc;
}

inline uavnoma::RadiatedRegion region_at(const uavnoma::RegionGeometry& g, double d) {
  return uavnoma::coverage_status(g) == uavnoma::Coverage::Full ? uavnoma::full_region(g)
                                                                 : uavnoma::radiated_region(g, d);
}

}  // namespace testing_support
