#pragma once

// Deterministic geometry of the annular-sector user region and the ground
// footprint ("radiated region") of a UAV beam with limited vertical beamwidth.
// All lengths in metres, all angles in radians.

namespace uavnoma {

struct RegionGeometry {
  double inner_radius = 25.0;    // L1
  double outer_radius = 100.0;   // L2
  double half_angle = 0.0;       // sector spans [-half_angle, +half_angle]
  double altitude = 50.0;        // h
  double vertical_beamwidth = 0.0;

  // Throws ValidationError when an invariant does not hold.
  void validate() const;
  bool operator==(const RegionGeometry&) const = default;
};

enum class Coverage { Full, Partial };

struct RadiatedRegion {
  double inner = 0.0;      // l_min = max(L1, l1)
  double outer = 0.0;      // l_max = min(l2, L2)
  double boresight = 0.0;  // D
};

struct BoresightLimits {
  double inner;  // D1: footprint touches L1
  double outer;  // D2: footprint touches L2
};

// Vertical beamwidth needed to illuminate [L1, L2] from altitude h.
double required_vertical_beamwidth(const RegionGeometry& geom);

// Full when the available beamwidth is at least the required one (boundary
// counts as Full).
Coverage coverage_status(const RegionGeometry& geom);

// Scan range of the boresight ground point. Requires partial coverage.
BoresightLimits boresight_limits(const RegionGeometry& geom);

// Footprint of the beam whose boresight meets the ground at distance D,
// clipped to the user region. Under partial coverage D must lie in [D1, D2];
// under full coverage D must keep the whole user region illuminated.
RadiatedRegion radiated_region(const RegionGeometry& geom, double boresight);

// Footprint used when the user region is fully covered: exactly [L1, L2],
// boresight at the angular centre of the region.
RadiatedRegion full_region(const RegionGeometry& geom);

// Fraction of the user region area that is illuminated.
double coverage_fraction(const RegionGeometry& geom, const RadiatedRegion& region);

}  // namespace uavnoma
