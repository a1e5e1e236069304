#include "uavnoma/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "uavnoma/errors.hpp"

namespace uavnoma {
namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

// Ground distance hit by a ray leaving altitude h at `angle` from nadir.
// Rays at or beyond the horizon never reach the ground.
double ground_distance(double h, double angle) {
  if (angle >= kHalfPi) return std::numeric_limits<double>::infinity();
  return h * std::tan(angle);
}

double nadir_angle(double h, double d) { return std::atan(d / h); }

double scan_tolerance(const RegionGeometry& g) { return 1e-9 * std::max(1.0, g.outer_radius); }

}  // namespace

void RegionGeometry::validate() const {
  auto bad = [](const std::string& msg) { fail(ErrorCode::ValidationError, "geometry: " + msg); };
  if (!(inner_radius >= 0.0)) bad("inner radius must be >= 0");
  if (!(outer_radius > inner_radius)) bad("outer radius must exceed inner radius");
  if (!(half_angle > 0.0 && half_angle < std::numbers::pi)) bad("sector half-angle must lie in (0, pi)");
  if (!(altitude > 0.0)) bad("altitude must be > 0");
  if (!(vertical_beamwidth > 0.0 && vertical_beamwidth < std::numbers::pi))
    bad("vertical beamwidth must lie in (0, pi)");
}

double required_vertical_beamwidth(const RegionGeometry& geom) {
  return nadir_angle(geom.altitude, geom.outer_radius) - nadir_angle(geom.altitude, geom.inner_radius);
}

Coverage coverage_status(const RegionGeometry& geom) {
  return geom.vertical_beamwidth < required_vertical_beamwidth(geom) ? Coverage::Partial : Coverage::Full;
}

BoresightLimits boresight_limits(const RegionGeometry& geom) {
  const double h = geom.altitude;
  const double half = geom.vertical_beamwidth / 2.0;
  BoresightLimits lim{ground_distance(h, nadir_angle(h, geom.inner_radius) + half),
                      ground_distance(h, nadir_angle(h, geom.outer_radius) - half)};
  if (coverage_status(geom) == Coverage::Full || !(lim.inner < lim.outer)) {
    fail(ErrorCode::PartialCoverageRequired,
         "boresight scan range is only defined when the user region is partially covered");
  }
  return lim;
}

RadiatedRegion radiated_region(const RegionGeometry& geom, double boresight) {
  const double h = geom.altitude;
  const double half = geom.vertical_beamwidth / 2.0;
  const double tol = scan_tolerance(geom);

  if (coverage_status(geom) == Coverage::Partial) {
    const auto lim = boresight_limits(geom);
    if (boresight < lim.inner - tol || boresight > lim.outer + tol) {
      fail(ErrorCode::OutOfScanRange, "boresight " + std::to_string(boresight) + " m outside [" +
                                          std::to_string(lim.inner) + ", " + std::to_string(lim.outer) + "]");
    }
  }

  const double centre = nadir_angle(h, boresight);
  const double l1 = ground_distance(h, centre - half);
  const double l2 = ground_distance(h, centre + half);

  if (coverage_status(geom) == Coverage::Full &&
      (l1 > geom.inner_radius + tol || l2 < geom.outer_radius - tol)) {
    fail(ErrorCode::OutOfScanRange,
         "boresight " + std::to_string(boresight) + " m leaves part of a fully coverable region dark");
  }

  RadiatedRegion r;
  r.inner = std::max(geom.inner_radius, l1);
  r.outer = std::min(l2, geom.outer_radius);
  r.boresight = boresight;
  return r;
}

RadiatedRegion full_region(const RegionGeometry& geom) {
  const double h = geom.altitude;
  const double centre = 0.5 * (nadir_angle(h, geom.inner_radius) + nadir_angle(h, geom.outer_radius));
  return RadiatedRegion{geom.inner_radius, geom.outer_radius, ground_distance(h, centre)};
}

double coverage_fraction(const RegionGeometry& geom, const RadiatedRegion& region) {
  const double lo = std::clamp(region.inner, geom.inner_radius, geom.outer_radius);
  const double hi = std::clamp(region.outer, lo, geom.outer_radius);
  const double total = geom.outer_radius * geom.outer_radius - geom.inner_radius * geom.inner_radius;
  return (hi * hi - lo * lo) / total;
}

}  // namespace uavnoma
