#include "aam/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "aam/choice.hpp"

namespace aam::synthetic {

namespace {

// Box-Muller on the reproducible uniform stream.
double normal(choice::RandomStream& rng) {
  const double u1 = rng.uniform();
  const double u2 = rng.uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * geo::kPi * u2);
}

std::size_t pick(choice::RandomStream& rng, std::size_t n) {
  return std::min(n - 1, static_cast<std::size_t>(rng.uniform() * static_cast<double>(n)));
}

} // namespace

ingest::EconomicParams reference_params() {
  return {0.655, 1.25e7, 1.2e-8, 1.0e-10};
}

std::vector<geo::HubAirport> tennessee_hubs(const ingest::DwellDefaults& dwell) {
  struct Row {
    const char* code;
    double lat;
    double lon;
  };
  static constexpr Row rows[] = {
      {"BNA", 36.1245, -86.6782}, {"MEM", 35.0424, -89.9767}, {"TYS", 35.8110, -83.9940},
      {"CHA", 35.0353, -85.2038}, {"TRI", 36.4752, -82.4074}, {"MKL", 35.5999, -88.9156},
      {"CSV", 35.9513, -85.0850}, {"MQY", 36.0090, -86.5201}, {"CKV", 36.6219, -87.4150},
      {"DYR", 36.0012, -89.4067}, {"UCY", 36.3813, -88.9854}, {"MRC", 35.5541, -87.1789},
  };
  std::vector<geo::HubAirport> hubs;
  for (const auto& r : rows) {
    hubs.push_back({r.code, {r.lat, r.lon}, dwell.depart_h, dwell.arrive_h});
  }
  return hubs;
}

std::vector<geo::CensusTract> generate_tracts(std::size_t count, std::uint64_t seed,
                                              std::span<const geo::HubAirport> anchors) {
  choice::RandomStream rng(seed);
  std::vector<geo::CensusTract> tracts;
  tracts.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto& anchor = anchors[pick(rng, anchors.size())];
    // scatter within roughly 25 miles of the anchor city
    const double dlat = 0.18 * normal(rng);
    const double dlon = 0.22 * normal(rng);
    char id[32];
    std::snprintf(id, sizeof(id), "47%09zu", i + 1);
    geo::CensusTract t;
    t.tract_id = id;
    t.centroid = {std::round((anchor.location.lat_deg + dlat) * 1e5) / 1e5,
                  std::round((anchor.location.lon_deg + dlon) * 1e5) / 1e5};
    t.median_hourly_wage_usd = std::round((15.0 + 30.0 * rng.uniform()) * 100.0) / 100.0;
    tracts.push_back(std::move(t));
  }
  return tracts;
}

std::vector<ingest::TripDemand> generate_trips(std::size_t count, std::uint64_t seed,
                                               const std::vector<geo::CensusTract>& tracts) {
  choice::RandomStream rng(seed);
  std::vector<ingest::TripDemand> trips;
  trips.reserve(count);
  // band weights loosely follow commuter demographics
  auto band = [&](std::initializer_list<double> weights) {
    double u = rng.uniform();
    std::size_t k = 0;
    for (double w : weights) {
      if (u < w) return k;
      u -= w;
      ++k;
    }
    return k - 1;
  };
  for (std::size_t i = 0; i < count; ++i) {
    ingest::TripDemand t;
    t.origin_tract_id = tracts[pick(rng, tracts.size())].tract_id;
    t.dest_tract_id = tracts[pick(rng, tracts.size())].tract_id;
    t.trip_count = 1 + static_cast<std::int64_t>(pick(rng, 20));
    t.age_band = static_cast<ingest::AgeBand>(band({0.22, 0.52, 0.24, 0.02}));
    t.earning_band = static_cast<ingest::EarningBand>(band({0.24, 0.33, 0.41, 0.02}));
    t.industry = static_cast<ingest::Industry>(band({0.18, 0.22, 0.58, 0.02}));
    trips.push_back(std::move(t));
  }
  return trips;
}

std::vector<ingest::FareSample> generate_fare_samples(std::size_t count, std::uint64_t seed,
                                                      const GeneratingCurves& c) {
  choice::RandomStream rng(seed);
  std::vector<ingest::FareSample> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double d = std::round(c.min_distance_mi + (c.max_distance_mi - c.min_distance_mi) * rng.uniform());
    const double per_mile = c.fare_per_mile_scale * std::pow(d, c.fare_per_mile_exponent) *
                            std::exp(c.fare_log_noise * normal(rng));
    out.push_back({d, std::round(per_mile * d * 100.0) / 100.0});
  }
  return out;
}

std::vector<ingest::BlockTimeSample> generate_blocktime_samples(std::size_t count,
                                                                std::uint64_t seed,
                                                                const GeneratingCurves& c) {
  choice::RandomStream rng(seed);
  std::vector<ingest::BlockTimeSample> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double d = std::round(c.min_distance_mi + (c.max_distance_mi - c.min_distance_mi) * rng.uniform());
    double t = c.block_c0 + c.block_c1 * d + c.block_c2 * d * d + c.block_noise_h * normal(rng);
    t = std::max(t, 0.1);
    out.push_back({d, std::round(t * 1000.0) / 1000.0});
  }
  return out;
}

} // namespace aam::synthetic
