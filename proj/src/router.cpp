#include "aam/router.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <mutex>
#include <semaphore>
#include <shared_mutex>
#include <thread>
#include <unordered_map>

#include <httplib.h>
#include <json.hpp>

#include "aam/error.hpp"
#include "aam/text.hpp"

namespace aam::router {

namespace {

std::string coord5(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.5f", v);
  return buf;
}

std::string cache_key(const geo::GeoPoint& a, const geo::GeoPoint& b) {
  return coord5(a.lat_deg) + ',' + coord5(a.lon_deg) + ',' + coord5(b.lat_deg) + ',' +
         coord5(b.lon_deg);
}

// Splits "http://host:port/prefix" into the scheme+authority httplib wants and
// a path prefix.
std::pair<std::string, std::string> split_base_url(const std::string& url) {
  const auto scheme = url.find("://");
  const auto host_start = scheme == std::string::npos ? 0 : scheme + 3;
  const auto slash = url.find('/', host_start);
  if (slash == std::string::npos) return {url, ""};
  std::string prefix = url.substr(slash);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  return {url.substr(0, slash), prefix};
}

struct CachedLeg {
  double distance_mi;
  double time_h;
};

} // namespace

std::string_view to_string(RouterMode m) {
  switch (m) {
  case RouterMode::SYNTHETIC: return "synthetic";
  case RouterMode::REMOTE: return "remote";
  case RouterMode::REMOTE_WITH_FALLBACK: return "remote_with_fallback";
  }
  return "synthetic";
}

RouterMode parse_router_mode(std::string_view s) {
  if (s == "synthetic") return RouterMode::SYNTHETIC;
  if (s == "remote") return RouterMode::REMOTE;
  if (s == "remote_with_fallback") return RouterMode::REMOTE_WITH_FALLBACK;
  throw ConfigError("router.mode must be remote, synthetic or remote_with_fallback, got '" +
                    std::string(s) + "'");
}

GroundLeg synthetic_route(const geo::GeoPoint& a, const geo::GeoPoint& b,
                          const SyntheticRoadModel& model, const geo::EarthModel& earth) {
  if (!(model.circuity_factor >= 1.0) || !std::isfinite(model.circuity_factor)) {
    throw ConfigError("circuity factor must be >= 1");
  }
  if (!(model.avg_speed_mph > 0.0) || !std::isfinite(model.avg_speed_mph)) {
    throw ConfigError("average speed must be positive");
  }
  const double d = model.circuity_factor * geo::haversine_distance(a, b, earth);
  return {d, d / model.avg_speed_mph, LegSource::SYNTHETIC};
}

GroundLeg leg_from_service(double distance_m, double duration_s) {
  if (!std::isfinite(distance_m) || !std::isfinite(duration_s) || distance_m < 0.0 ||
      duration_s < 0.0) {
    throw RoutingError("routing service returned invalid distance/duration");
  }
  if (distance_m == 0.0) return {0.0, 0.0, LegSource::REMOTE};
  if (duration_s == 0.0) {
    throw RoutingError("routing service returned zero duration for a non-zero distance");
  }
  return {distance_m / kMetersPerMile, duration_s / 3600.0, LegSource::REMOTE};
}

GroundLeg parse_route_response(std::string_view body) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error& e) {
    throw RoutingError(std::string("malformed routing response: ") + e.what());
  }
  if (!j.is_object()) throw RoutingError("malformed routing response");
  if (j.contains("code") && j["code"] != "Ok") {
    throw RoutingError("routing service error code " + j["code"].dump());
  }
  if (!j.contains("routes") || !j["routes"].is_array() || j["routes"].empty()) {
    throw RoutingError("routing response has no routes");
  }
  const auto& r = j["routes"][0];
  if (!r.contains("distance") || !r.contains("duration") || !r["distance"].is_number() ||
      !r["duration"].is_number()) {
    throw RoutingError("routing response lacks distance/duration");
  }
  return leg_from_service(r["distance"].get<double>(), r["duration"].get<double>());
}

std::string route_request_path(const geo::GeoPoint& a, const geo::GeoPoint& b,
                               std::string_view profile) {
  return "/route/v1/" + std::string(profile) + "/" + coord5(a.lon_deg) + "," + coord5(a.lat_deg) +
         ";" + coord5(b.lon_deg) + "," + coord5(b.lat_deg) +
         "?overview=false&alternatives=false&steps=false";
}

struct Router::Impl {
  explicit Impl(int in_flight) : slots(in_flight) {}

  mutable std::shared_mutex mutex;
  std::unordered_map<std::string, CachedLeg> cache;
  std::counting_semaphore<1024> slots;
  std::atomic<std::size_t> requests{0};
  std::string host;
  std::string prefix;
};

Router::Router(RouterConfig config) : config_(std::move(config)) {
  if (config_.max_in_flight < 1 || config_.max_in_flight > 1024) {
    throw ConfigError("router.max_in_flight must be in [1, 1024]");
  }
  if (config_.retries < 0) throw ConfigError("router.retries must be >= 0");
  if (!(config_.timeout_s > 0.0)) throw ConfigError("router.timeout_s must be positive");
  impl_ = std::make_unique<Impl>(config_.max_in_flight);
  std::tie(impl_->host, impl_->prefix) = split_base_url(config_.base_url);

  if (!config_.cache_path.empty() && std::filesystem::exists(config_.cache_path)) {
    const auto body = text::read_file(config_.cache_path);
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < body.size()) {
      auto end = body.find('\n', pos);
      if (end == std::string::npos) end = body.size();
      const std::string_view line = text::trim(std::string_view(body).substr(pos, end - pos));
      pos = end + 1;
      ++line_no;
      if (line.empty() || line_no == 1) continue; // header
      const auto f = text::split(line);
      double vals[6];
      bool ok = f.size() == 6;
      for (std::size_t i = 0; ok && i < 6; ++i) ok = text::parse_double(f[i], vals[i]);
      if (!ok) {
        throw IoError(config_.cache_path + " line " + std::to_string(line_no) +
                      ": malformed cache row");
      }
      const auto leg = leg_from_service(vals[4], vals[5]);
      impl_->cache[cache_key({vals[0], vals[1]}, {vals[2], vals[3]})] = {leg.distance_mi,
                                                                        leg.time_h};
    }
  }
}

Router::~Router() = default;

std::size_t Router::cache_size() const {
  std::shared_lock lock(impl_->mutex);
  return impl_->cache.size();
}

std::size_t Router::remote_requests() const { return impl_->requests.load(); }

GroundLeg Router::ground_route(const geo::GeoPoint& a, const geo::GeoPoint& b) const {
  geo::validate(a);
  geo::validate(b);
  if (config_.mode == RouterMode::SYNTHETIC) {
    return synthetic_route(a, b, config_.synthetic, config_.earth);
  }
  if (a == b) return {0.0, 0.0, LegSource::REMOTE};

  const auto key = cache_key(a, b);
  {
    std::shared_lock lock(impl_->mutex);
    if (const auto it = impl_->cache.find(key); it != impl_->cache.end()) {
      return {it->second.distance_mi, it->second.time_h, LegSource::REMOTE};
    }
  }

  std::string last_error;
  const auto path = impl_->prefix + route_request_path(a, b, config_.profile);
  auto backoff = std::chrono::milliseconds(config_.backoff_ms);
  for (int attempt = 0; attempt <= config_.retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
    impl_->slots.acquire();
    httplib::Result res{nullptr, httplib::Error::Unknown};
    {
      httplib::Client client(impl_->host);
      const auto secs = static_cast<time_t>(config_.timeout_s);
      const auto usecs = static_cast<time_t>((config_.timeout_s - static_cast<double>(secs)) * 1e6);
      client.set_connection_timeout(secs, usecs);
      client.set_read_timeout(secs, usecs);
      ++impl_->requests;
      res = client.Get(path);
    }
    impl_->slots.release();

    if (!res) {
      last_error = "request to " + impl_->host + path + " failed: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status != 200) {
      last_error = "routing service returned HTTP " + std::to_string(res->status);
      continue;
    }
    try {
      const auto leg = parse_route_response(res->body);
      std::unique_lock lock(impl_->mutex);
      impl_->cache[key] = {leg.distance_mi, leg.time_h};
      return leg;
    } catch (const RoutingError& e) {
      last_error = e.what();
    }
  }

  if (config_.mode == RouterMode::REMOTE_WITH_FALLBACK) {
    return synthetic_route(a, b, config_.synthetic, config_.earth);
  }
  throw RoutingError(last_error);
}

void Router::save_cache() const {
  if (config_.cache_path.empty()) return;
  std::map<std::string, CachedLeg> sorted;
  {
    std::shared_lock lock(impl_->mutex);
    sorted.insert(impl_->cache.begin(), impl_->cache.end());
  }
  std::string out = "a_lat,a_lon,b_lat,b_lon,distance_m,duration_s\n";
  for (const auto& [key, leg] : sorted) {
    out += key + ',' + text::format_double(leg.distance_mi * kMetersPerMile) + ',' +
           text::format_double(leg.time_h * 3600.0) + '\n';
  }
  text::write_file(config_.cache_path, out);
}

} // namespace aam::router
