#pragma once

#include <span>
#include <string>

namespace aam::geo {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kEarthRadiusMi = 3958.8;
inline constexpr double kMilesPerKm = 0.621371;

/// A point on the sphere, in degrees.
struct GeoPoint {
  double lat_deg = 0.0;
  double lon_deg = 0.0;

  bool operator==(const GeoPoint&) const = default;
};

/// Throws InputError unless both coordinates are finite and within
/// [-90, 90] / [-180, 180].
void validate(const GeoPoint& p);

struct EarthModel {
  double radius_mi = kEarthRadiusMi;
};

struct CensusTract {
  std::string tract_id;
  GeoPoint centroid;            // population centroid
  double median_hourly_wage_usd = 0.0;

  bool operator==(const CensusTract&) const = default;
};

struct HubAirport {
  std::string code;
  GeoPoint location;
  double depart_processing_h = 0.0;
  double arrive_processing_h = 0.0;

  bool operator==(const HubAirport&) const = default;
};

/// Great-circle distance in miles using the haversine formula.
double haversine_distance(const GeoPoint& a, const GeoPoint& b,
                          const EarthModel& earth = {});

/// Hub closest to the tract centroid by great-circle distance. Equidistant
/// hubs resolve to the lexicographically smallest code.
const HubAirport& nearest_hub(const CensusTract& tract,
                              std::span<const HubAirport> hubs,
                              const EarthModel& earth = {});

} // namespace aam::geo
