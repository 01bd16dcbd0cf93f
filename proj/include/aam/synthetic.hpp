#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "aam/geo.hpp"
#include "aam/ingest.hpp"

// Deterministic synthetic datasets with Tennessee-like geography, used for the
// bundled fixtures and for scale testing.
namespace aam::synthetic {

/// Ground-truth curves the fare and block-time samples are drawn around.
struct GeneratingCurves {
  double fare_per_mile_scale = 105.0;   // fare_per_mile = scale * d^exponent
  double fare_per_mile_exponent = -0.8;
  double fare_log_noise = 0.08;
  double block_c0 = 0.45;
  double block_c1 = 0.0021;
  double block_c2 = 1.5e-7;
  double block_noise_h = 0.04;
  double min_distance_mi = 60.0;
  double max_distance_mi = 1200.0;
};

ingest::EconomicParams reference_params();

std::vector<geo::HubAirport> tennessee_hubs(const ingest::DwellDefaults& dwell = {});

std::vector<geo::CensusTract> generate_tracts(std::size_t count, std::uint64_t seed,
                                              std::span<const geo::HubAirport> anchors);

std::vector<ingest::TripDemand> generate_trips(std::size_t count, std::uint64_t seed,
                                               const std::vector<geo::CensusTract>& tracts);

std::vector<ingest::FareSample> generate_fare_samples(std::size_t count, std::uint64_t seed,
                                                      const GeneratingCurves& curves = {});

std::vector<ingest::BlockTimeSample> generate_blocktime_samples(
    std::size_t count, std::uint64_t seed, const GeneratingCurves& curves = {});

} // namespace aam::synthetic
