#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>

#include "aam/geo.hpp"

namespace aam::router {

inline constexpr double kMetersPerMile = 1609.344;

enum class LegSource { REMOTE, SYNTHETIC };

struct GroundLeg {
  double distance_mi = 0.0;
  double time_h = 0.0;
  LegSource source = LegSource::SYNTHETIC;

  bool operator==(const GroundLeg&) const = default;
};

struct SyntheticRoadModel {
  double circuity_factor = 1.2;
  double avg_speed_mph = 45.0;
};

enum class RouterMode { SYNTHETIC, REMOTE, REMOTE_WITH_FALLBACK };

std::string_view to_string(RouterMode m);
RouterMode parse_router_mode(std::string_view s);

struct RouterConfig {
  RouterMode mode = RouterMode::SYNTHETIC;
  std::string base_url = "http://localhost:5000";
  std::string profile = "driving";
  double timeout_s = 10.0;
  int retries = 2;
  int backoff_ms = 250;      // doubled after each failed attempt
  int max_in_flight = 4;
  std::string cache_path;    // empty: in-memory cache only
  SyntheticRoadModel synthetic;
  geo::EarthModel earth;
};

/// Road distance = circuity x great-circle distance, time = distance / speed.
GroundLeg synthetic_route(const geo::GeoPoint& a, const geo::GeoPoint& b,
                          const SyntheticRoadModel& model, const geo::EarthModel& earth = {});

/// Converts a routing-service answer in meters/seconds to a REMOTE leg.
GroundLeg leg_from_service(double distance_m, double duration_s);

/// Parses the body of a route-service response (`routes[0].distance`,
/// `routes[0].duration`). Throws RoutingError on anything unusable.
GroundLeg parse_route_response(std::string_view body);

/// Path and query for a single-pair route request, coordinates in lon,lat
/// order rounded to 5 decimals.
std::string route_request_path(const geo::GeoPoint& a, const geo::GeoPoint& b,
                               std::string_view profile);

/// Ground routing front end. Thread-safe: remote lookups are memoized in a
/// shared cache and concurrent requests are capped at max_in_flight.
class Router {
public:
  explicit Router(RouterConfig config);
  ~Router();
  Router(const Router&) = delete;
  Router& operator=(const Router&) = delete;

  GroundLeg ground_route(const geo::GeoPoint& a, const geo::GeoPoint& b) const;

  const RouterConfig& config() const { return config_; }
  std::size_t cache_size() const;
  std::size_t remote_requests() const;

  /// Writes the cache to config().cache_path (sorted rows). No-op without a path.
  void save_cache() const;

private:
  struct Impl;
  RouterConfig config_;
  std::unique_ptr<Impl> impl_;
};

} // namespace aam::router
