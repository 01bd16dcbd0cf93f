#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "aam/error.hpp"
#include "aam/geo.hpp"

using namespace aam;
using geo::GeoPoint;

namespace {

// Spherical law of cosines; independent of the haversine code path.
double cosine_law_distance(GeoPoint a, GeoPoint b, double r = geo::kEarthRadiusMi) {
  const double k = geo::kPi / 180.0;
  const double c = std::sin(a.lat_deg * k) * std::sin(b.lat_deg * k) +
                   std::cos(a.lat_deg * k) * std::cos(b.lat_deg * k) *
                       std::cos((b.lon_deg - a.lon_deg) * k);
  return r * std::acos(std::clamp(c, -1.0, 1.0));
}

GeoPoint random_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> lat(-89.0, 89.0);
  std::uniform_real_distribution<double> lon(-180.0, 180.0);
  return {lat(rng), lon(rng)};
}

} // namespace

TEST_CASE("haversine: identical points are zero apart") {
  CHECK(geo::haversine_distance({36.0, -86.0}, {36.0, -86.0}) == 0.0);
}

TEST_CASE("haversine: antipodal points are half a circumference apart") {
  const double d = geo::haversine_distance({0.0, 0.0}, {0.0, 180.0});
  CHECK(d == doctest::Approx(geo::kPi * 3958.8).epsilon(1e-12));
  CHECK(d == doctest::Approx(12436.9).epsilon(1e-5));
}

TEST_CASE("haversine: Nashville to Memphis matches the cosine-law oracle") {
  const GeoPoint nashville{36.1627, -86.7816};
  const GeoPoint memphis{35.1495, -90.0490};
  const double oracle = cosine_law_distance(nashville, memphis);
  const double d = geo::haversine_distance(nashville, memphis);
  CHECK(std::abs(d - oracle) / oracle < 1e-6);
  CHECK(d == doctest::Approx(197.0).epsilon(0.01));
}

TEST_CASE("haversine: custom earth radius scales linearly") {
  const GeoPoint a{10.0, 20.0};
  const GeoPoint b{-5.0, 40.0};
  const double miles = geo::haversine_distance(a, b);
  const double km = geo::haversine_distance(a, b, {6371.0});
  CHECK(km / miles == doctest::Approx(6371.0 / 3958.8).epsilon(1e-12));
}

TEST_CASE("haversine: rejects non-finite and out-of-range input") {
  CHECK_THROWS_AS(geo::haversine_distance({NAN, 0.0}, {0.0, 0.0}), InputError);
  CHECK_THROWS_AS(geo::haversine_distance({0.0, INFINITY}, {0.0, 0.0}), InputError);
  CHECK_THROWS_AS(geo::haversine_distance({91.0, 0.0}, {0.0, 0.0}), InputError);
  CHECK_THROWS_AS(geo::haversine_distance({0.0, 0.0}, {0.0, -181.0}), InputError);
}

TEST_CASE("haversine: symmetry, identity and triangle inequality on random triples") {
  std::mt19937_64 rng(7);
  const double max_d = geo::kPi * geo::kEarthRadiusMi;
  for (int i = 0; i < 1000; ++i) {
    const auto a = random_point(rng);
    const auto b = random_point(rng);
    const auto c = random_point(rng);
    const double ab = geo::haversine_distance(a, b);
    CHECK(ab == geo::haversine_distance(b, a));
    CHECK(geo::haversine_distance(a, a) == 0.0);
    CHECK(ab >= 0.0);
    CHECK(ab <= max_d * (1 + 1e-15));
    const double ac = geo::haversine_distance(a, c);
    const double cb = geo::haversine_distance(c, b);
    CHECK(ab <= (ac + cb) * (1.0 + 1e-9));
  }
}

TEST_CASE("haversine: agrees with cosine-law oracle on random pairs") {
  std::mt19937_64 rng(11);
  int checked = 0;
  while (checked < 1000) {
    const auto a = random_point(rng);
    const auto b = random_point(rng);
    const double oracle = cosine_law_distance(a, b);
    // The cosine law loses precision near 0 and pi.
    if (oracle < 1.0 || oracle > geo::kPi * geo::kEarthRadiusMi - 50.0) continue;
    const double d = geo::haversine_distance(a, b);
    CHECK(std::abs(d - oracle) / oracle < 1e-6);
    ++checked;
  }
}

namespace {

geo::HubAirport hub_north_of(const GeoPoint& origin, double miles, std::string code) {
  const double dlat = miles / geo::kEarthRadiusMi * 180.0 / geo::kPi;
  return {std::move(code), {origin.lat_deg + dlat, origin.lon_deg}, 0.5, 0.25};
}

} // namespace

TEST_CASE("nearest_hub: singleton list") {
  const geo::CensusTract t{"T1", {36.0, -86.0}, 20.0};
  const std::vector<geo::HubAirport> hubs{{"BNA", {36.12, -86.67}, 0.5, 0.25}};
  CHECK(geo::nearest_hub(t, hubs).code == "BNA");
}

TEST_CASE("nearest_hub: picks the closest of 10/20/30 mile hubs, matching brute force") {
  const geo::CensusTract t{"T1", {36.0, -86.0}, 20.0};
  const std::vector<geo::HubAirport> hubs{hub_north_of(t.centroid, 30, "C30"),
                                          hub_north_of(t.centroid, 10, "A10"),
                                          hub_north_of(t.centroid, 20, "B20")};
  const auto brute = std::min_element(hubs.begin(), hubs.end(), [&](auto& x, auto& y) {
    return cosine_law_distance(t.centroid, x.location) < cosine_law_distance(t.centroid, y.location);
  });
  CHECK(geo::nearest_hub(t, hubs).code == "A10");
  CHECK(brute->code == "A10");
  CHECK(geo::haversine_distance(t.centroid, hubs[1].location) == doctest::Approx(10.0).epsilon(1e-9));
}

TEST_CASE("nearest_hub: equidistant hubs resolve to the smaller code") {
  const geo::CensusTract t{"T1", {0.0, 0.0}, 20.0};
  const std::vector<geo::HubAirport> hubs{{"BBB", {0.0, 1.0}, 0, 0}, {"AAA", {0.0, -1.0}, 0, 0}};
  CHECK(geo::nearest_hub(t, hubs).code == "AAA");
}

TEST_CASE("nearest_hub: empty hub list is a configuration error") {
  const geo::CensusTract t{"T1", {0.0, 0.0}, 20.0};
  CHECK_THROWS_AS(geo::nearest_hub(t, std::vector<geo::HubAirport>{}), ConfigError);
}

TEST_CASE("nearest_hub: invariant under permutation of the hub list") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> lat(34.5, 37.0);
  std::uniform_real_distribution<double> lon(-90.0, -81.5);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<geo::HubAirport> hubs;
    for (int k = 0; k < 8; ++k) hubs.push_back({"H" + std::to_string(k), {lat(rng), lon(rng)}, 0, 0});
    hubs.push_back({"DUP", hubs[2].location, 0, 0}); // exact tie with H2
    const geo::CensusTract t{"T", {lat(rng), lon(rng)}, 10.0};
    const auto expected = geo::nearest_hub(t, hubs).code;
    for (int p = 0; p < 10; ++p) {
      std::shuffle(hubs.begin(), hubs.end(), rng);
      CHECK(geo::nearest_hub(t, hubs).code == expected);
    }
  }
}
