#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "aam/geo.hpp"

namespace aam::ingest {

enum class AgeBand { LE29, A30_54, GE55, UNKNOWN };
enum class EarningBand { LE1250, E1251_3333, GT3333, UNKNOWN };
enum class Industry { GOODS, TRADE_TRANSPORT_UTIL, OTHER_SERVICES, UNKNOWN };

std::string_view to_string(AgeBand b);
std::string_view to_string(EarningBand b);
std::string_view to_string(Industry b);
std::optional<AgeBand> parse_age_band(std::string_view s);
std::optional<EarningBand> parse_earning_band(std::string_view s);
std::optional<Industry> parse_industry(std::string_view s);

struct TripDemand {
  std::string origin_tract_id;
  std::string dest_tract_id;
  std::int64_t trip_count = 1;
  AgeBand age_band = AgeBand::UNKNOWN;
  EarningBand earning_band = EarningBand::UNKNOWN;
  Industry industry = Industry::UNKNOWN;

  bool operator==(const TripDemand&) const = default;
};

struct FareSample {
  double distance_mi = 0.0;
  double fare_usd = 0.0;

  bool operator==(const FareSample&) const = default;
};

struct BlockTimeSample {
  double distance_mi = 0.0;
  double block_h = 0.0;

  bool operator==(const BlockTimeSample&) const = default;
};

/// Fatality rates are per vehicle-mile (already divided down from the usual
/// per-100-million-mile reporting).
struct EconomicParams {
  double mileage_rate_usd_per_mi = 0.0;
  double vsl_usd = 0.0;
  double ground_fatalities_per_mi = 0.0;
  double air_fatalities_per_mi = 0.0;

  bool operator==(const EconomicParams&) const = default;
};

/// Parsed params document: the four economic keys plus any extra
/// `key=value` entries, kept in file order for the run configuration.
struct ParamsFile {
  EconomicParams economic;
  std::vector<std::pair<std::string, std::string>> overrides;
};

/// Tracts keyed by id, in file order.
class TractTable {
public:
  TractTable() = default;
  explicit TractTable(std::vector<geo::CensusTract> rows);

  const std::vector<geo::CensusTract>& rows() const { return rows_; }
  const geo::CensusTract* find(std::string_view id) const;
  std::size_t size() const { return rows_.size(); }

private:
  std::vector<geo::CensusTract> rows_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct DwellDefaults {
  double depart_h = 0.5;
  double arrive_h = 0.25;
};

// Parsers take the document text plus a name used in error messages; the
// load_* variants read the file first.
TractTable parse_tracts(std::string_view text, std::string_view source = "tracts");
std::vector<geo::HubAirport> parse_hubs(std::string_view text, const DwellDefaults& defaults = {},
                                        std::string_view source = "hubs");
std::vector<TripDemand> parse_trips(std::string_view text, const TractTable& tracts,
                                    std::string_view source = "trips");
std::vector<FareSample> parse_fare_samples(std::string_view text, std::string_view source = "fares");
std::vector<BlockTimeSample> parse_blocktime_samples(std::string_view text,
                                                     std::string_view source = "blocktimes");
ParamsFile parse_params(std::string_view text, std::string_view source = "params");

/// Generic `key=value` document (blank lines and `#` comments skipped,
/// duplicate keys rejected).
std::vector<std::pair<std::string, std::string>> parse_key_values(std::string_view text,
                                                                  std::string_view source);

TractTable load_tracts(const std::string& path);
std::vector<geo::HubAirport> load_hubs(const std::string& path, const DwellDefaults& defaults = {});
std::vector<TripDemand> load_trips(const std::string& path, const TractTable& tracts);
std::vector<FareSample> load_fare_samples(const std::string& path);
std::vector<BlockTimeSample> load_blocktime_samples(const std::string& path);
ParamsFile load_params(const std::string& path);

std::string write_tracts(const std::vector<geo::CensusTract>& rows);
std::string write_hubs(const std::vector<geo::HubAirport>& rows);
std::string write_trips(const std::vector<TripDemand>& rows);
std::string write_fare_samples(const std::vector<FareSample>& rows);
std::string write_blocktime_samples(const std::vector<BlockTimeSample>& rows);
std::string write_params(const EconomicParams& params);

} // namespace aam::ingest
