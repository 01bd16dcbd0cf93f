#include "aam/geo.hpp"

#include <cmath>

#include "aam/error.hpp"

namespace aam::geo {

namespace {

constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }

} // namespace

void validate(const GeoPoint& p) {
  if (!std::isfinite(p.lat_deg) || !std::isfinite(p.lon_deg)) {
    throw InputError("non-finite coordinate");
  }
  if (p.lat_deg < -90.0 || p.lat_deg > 90.0) {
    throw InputError("latitude out of range: " + std::to_string(p.lat_deg));
  }
  if (p.lon_deg < -180.0 || p.lon_deg > 180.0) {
    throw InputError("longitude out of range: " + std::to_string(p.lon_deg));
  }
}

double haversine_distance(const GeoPoint& a, const GeoPoint& b,
                          const EarthModel& earth) {
  validate(a);
  validate(b);
  if (!(earth.radius_mi > 0.0) || !std::isfinite(earth.radius_mi)) {
    throw ConfigError("earth radius must be positive");
  }
  const double phi1 = deg_to_rad(a.lat_deg);
  const double phi2 = deg_to_rad(b.lat_deg);
  const double dphi = phi2 - phi1;
  const double dlambda = deg_to_rad(b.lon_deg - a.lon_deg);

  const double s_phi = std::sin(dphi / 2.0);
  const double s_lambda = std::sin(dlambda / 2.0);
  double h = s_phi * s_phi + std::cos(phi1) * std::cos(phi2) * s_lambda * s_lambda;
  // rounding can push h a hair outside [0, 1] near antipodes
  if (h > 1.0) h = 1.0;
  if (h < 0.0) h = 0.0;
  return 2.0 * earth.radius_mi * std::asin(std::sqrt(h));
}

const HubAirport& nearest_hub(const CensusTract& tract,
                              std::span<const HubAirport> hubs,
                              const EarthModel& earth) {
  if (hubs.empty()) {
    throw ConfigError("no hub airports configured");
  }
  const HubAirport* best = nullptr;
  double best_d = 0.0;
  for (const auto& hub : hubs) {
    const double d = haversine_distance(tract.centroid, hub.location, earth);
    if (best == nullptr || d < best_d || (d == best_d && hub.code < best->code)) {
      best = &hub;
      best_d = d;
    }
  }
  return *best;
}

} // namespace aam::geo
