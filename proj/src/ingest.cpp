#include "aam/ingest.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <unordered_set>

#include "aam/error.hpp"
#include "aam/text.hpp"

namespace aam::ingest {

namespace {

constexpr std::array<std::string_view, 4> kAgeNames = {"LE29", "A30_54", "GE55", "UNKNOWN"};
constexpr std::array<std::string_view, 4> kEarningNames = {"LE1250", "E1251_3333", "GT3333",
                                                           "UNKNOWN"};
constexpr std::array<std::string_view, 4> kIndustryNames = {"GOODS", "TRADE_TRANSPORT_UTIL",
                                                            "OTHER_SERVICES", "UNKNOWN"};

template <typename Enum, std::size_t N>
std::optional<Enum> parse_enum(std::string_view s, const std::array<std::string_view, N>& names) {
  s = text::trim(s);
  if (s.empty()) return static_cast<Enum>(N - 1); // blank means UNKNOWN
  for (std::size_t i = 0; i < N; ++i) {
    if (names[i] == s) return static_cast<Enum>(i);
  }
  return std::nullopt;
}

std::string where(std::string_view source, std::size_t line) {
  return std::string(source) + " line " + std::to_string(line);
}

using Fields = std::vector<std::string_view>;
using RowFn = std::function<void(const Fields&, std::size_t line)>;

std::string join(const std::vector<std::string_view>& cols) {
  std::string out;
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i) out += ',';
    out += cols[i];
  }
  return out;
}

// Walks a CSV document. The header must equal one of `headers`; returns the
// index of the matched header. Blank lines are ignored.
std::size_t read_csv(std::string_view text, std::string_view source,
                     const std::vector<std::vector<std::string_view>>& headers, const RowFn& on_row) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  std::optional<std::size_t> matched;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const auto raw = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (text::trim(raw).empty()) {
      if (end == text.size()) break;
      continue;
    }
    auto fields = text::split(raw);
    if (!matched) {
      for (std::size_t h = 0; h < headers.size(); ++h) {
        if (fields == headers[h]) matched = h;
      }
      if (!matched) {
        throw InputError(where(source, line_no) + ": header must be '" + join(headers.front()) +
                         "'");
      }
    } else {
      if (fields.size() != headers[*matched].size()) {
        throw InputError(where(source, line_no) + ": expected " +
                         std::to_string(headers[*matched].size()) + " fields, got " +
                         std::to_string(fields.size()));
      }
      on_row(fields, line_no);
    }
    if (end == text.size()) break;
  }
  if (!matched) throw InputError(std::string(source) + ": missing header row");
  return *matched;
}

double number(std::string_view field, std::string_view name, std::string_view source,
              std::size_t line) {
  double v = 0.0;
  if (!text::parse_double(field, v)) {
    throw InputError(where(source, line) + ": invalid " + std::string(name) + " '" +
                     std::string(field) + "'");
  }
  return v;
}

double positive(std::string_view field, std::string_view name, std::string_view source,
                std::size_t line) {
  const double v = number(field, name, source, line);
  if (!(v > 0.0)) {
    throw InputError(where(source, line) + ": " + std::string(name) + " must be positive");
  }
  return v;
}

double non_negative(std::string_view field, std::string_view name, std::string_view source,
                    std::size_t line) {
  const double v = number(field, name, source, line);
  if (v < 0.0) {
    throw InputError(where(source, line) + ": " + std::string(name) + " must be non-negative");
  }
  return v;
}

geo::GeoPoint point(std::string_view lat, std::string_view lon, std::string_view source,
                    std::size_t line) {
  geo::GeoPoint p{number(lat, "lat", source, line), number(lon, "lon", source, line)};
  try {
    geo::validate(p);
  } catch (const InputError& e) {
    throw InputError(where(source, line) + ": " + e.what());
  }
  return p;
}

std::string key(std::string_view field, std::string_view name, std::string_view source,
                std::size_t line) {
  if (field.empty()) {
    throw InputError(where(source, line) + ": empty " + std::string(name));
  }
  return std::string(field);
}

} // namespace

std::string_view to_string(AgeBand b) { return kAgeNames[static_cast<std::size_t>(b)]; }
std::string_view to_string(EarningBand b) { return kEarningNames[static_cast<std::size_t>(b)]; }
std::string_view to_string(Industry b) { return kIndustryNames[static_cast<std::size_t>(b)]; }

std::optional<AgeBand> parse_age_band(std::string_view s) {
  return parse_enum<AgeBand>(s, kAgeNames);
}
std::optional<EarningBand> parse_earning_band(std::string_view s) {
  return parse_enum<EarningBand>(s, kEarningNames);
}
std::optional<Industry> parse_industry(std::string_view s) {
  return parse_enum<Industry>(s, kIndustryNames);
}

TractTable::TractTable(std::vector<geo::CensusTract> rows) : rows_(std::move(rows)) {
  index_.reserve(rows_.size());
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (rows_[i].tract_id.empty()) throw InputError("empty tract_id");
    if (!index_.emplace(rows_[i].tract_id, i).second) {
      throw InputError("duplicate tract_id '" + rows_[i].tract_id + "'");
    }
  }
}

const geo::CensusTract* TractTable::find(std::string_view id) const {
  const auto it = index_.find(std::string(id));
  return it == index_.end() ? nullptr : &rows_[it->second];
}

TractTable parse_tracts(std::string_view text, std::string_view source) {
  std::vector<geo::CensusTract> rows;
  std::unordered_set<std::string> seen;
  read_csv(text, source, {{"tract_id", "lat", "lon", "median_hourly_wage"}},
           [&](const Fields& f, std::size_t line) {
             geo::CensusTract t;
             t.tract_id = key(f[0], "tract_id", source, line);
             t.centroid = point(f[1], f[2], source, line);
             t.median_hourly_wage_usd = non_negative(f[3], "median_hourly_wage", source, line);
             if (!seen.insert(t.tract_id).second) {
               throw InputError(where(source, line) + ": duplicate tract_id '" + t.tract_id + "'");
             }
             rows.push_back(std::move(t));
           });
  return TractTable(std::move(rows));
}

std::vector<geo::HubAirport> parse_hubs(std::string_view text, const DwellDefaults& defaults,
                                        std::string_view source) {
  std::vector<geo::HubAirport> rows;
  std::unordered_set<std::string> seen;
  read_csv(text, source,
           {{"code", "lat", "lon", "depart_h", "arrive_h"}, {"code", "lat", "lon"}},
           [&](const Fields& f, std::size_t line) {
             geo::HubAirport h;
             h.code = key(f[0], "code", source, line);
             h.location = point(f[1], f[2], source, line);
             h.depart_processing_h = defaults.depart_h;
             h.arrive_processing_h = defaults.arrive_h;
             if (f.size() == 5) {
               if (!f[3].empty()) h.depart_processing_h = non_negative(f[3], "depart_h", source, line);
               if (!f[4].empty()) h.arrive_processing_h = non_negative(f[4], "arrive_h", source, line);
             }
             if (!seen.insert(h.code).second) {
               throw InputError(where(source, line) + ": duplicate hub code '" + h.code + "'");
             }
             rows.push_back(std::move(h));
           });
  return rows;
}

std::vector<TripDemand> parse_trips(std::string_view text, const TractTable& tracts,
                                    std::string_view source) {
  std::vector<TripDemand> rows;
  read_csv(text, source,
           {{"origin", "dest", "count", "age", "earning", "industry"}, {"origin", "dest", "count"}},
           [&](const Fields& f, std::size_t line) {
             TripDemand t;
             t.origin_tract_id = key(f[0], "origin", source, line);
             t.dest_tract_id = key(f[1], "dest", source, line);
             for (const auto* id : {&t.origin_tract_id, &t.dest_tract_id}) {
               if (tracts.find(*id) == nullptr) {
                 throw InputError(where(source, line) + ": unknown tract id '" + *id + "'");
               }
             }
             long long count = 0;
             if (!text::parse_int(f[2], count)) {
               throw InputError(where(source, line) + ": invalid count '" + std::string(f[2]) + "'");
             }
             if (count < 1) {
               throw InputError(where(source, line) + ": count must be >= 1");
             }
             t.trip_count = count;
             if (f.size() == 6) {
               const auto age = parse_age_band(f[3]);
               const auto earning = parse_earning_band(f[4]);
               const auto industry = parse_industry(f[5]);
               if (!age) throw InputError(where(source, line) + ": unknown age band '" + std::string(f[3]) + "'");
               if (!earning) throw InputError(where(source, line) + ": unknown earning band '" + std::string(f[4]) + "'");
               if (!industry) throw InputError(where(source, line) + ": unknown industry '" + std::string(f[5]) + "'");
               t.age_band = *age;
               t.earning_band = *earning;
               t.industry = *industry;
             }
             rows.push_back(std::move(t));
           });
  return rows;
}

std::vector<FareSample> parse_fare_samples(std::string_view text, std::string_view source) {
  std::vector<FareSample> rows;
  read_csv(text, source, {{"distance_mi", "fare_usd"}}, [&](const Fields& f, std::size_t line) {
    rows.push_back({positive(f[0], "distance_mi", source, line),
                    positive(f[1], "fare_usd", source, line)});
  });
  return rows;
}

std::vector<BlockTimeSample> parse_blocktime_samples(std::string_view text,
                                                     std::string_view source) {
  std::vector<BlockTimeSample> rows;
  read_csv(text, source, {{"distance_mi", "block_h"}}, [&](const Fields& f, std::size_t line) {
    rows.push_back({positive(f[0], "distance_mi", source, line),
                    positive(f[1], "block_h", source, line)});
  });
  return rows;
}

std::vector<std::pair<std::string, std::string>> parse_key_values(std::string_view text,
                                                                  std::string_view source) {
  std::vector<std::pair<std::string, std::string>> out;
  std::unordered_set<std::string> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text::trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.front() != '#') {
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) {
        throw InputError(where(source, line_no) + ": expected key=value");
      }
      std::string k(text::trim(line.substr(0, eq)));
      std::string v(text::trim(line.substr(eq + 1)));
      if (k.empty()) throw InputError(where(source, line_no) + ": empty key");
      if (!seen.insert(k).second) {
        throw InputError(where(source, line_no) + ": duplicate key '" + k + "'");
      }
      out.emplace_back(std::move(k), std::move(v));
    }
    if (end == text.size()) break;
  }
  return out;
}

ParamsFile parse_params(std::string_view text, std::string_view source) {
  ParamsFile out;
  std::array<std::optional<double>, 4> found;
  constexpr std::array<std::string_view, 4> names = {
      "mileage_rate_usd_per_mi", "vsl_usd", "ground_fatalities_per_mi", "air_fatalities_per_mi"};
  for (auto& [k, v] : parse_key_values(text, source)) {
    bool economic = false;
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (k != names[i]) continue;
      double d = 0.0;
      if (!text::parse_double(v, d)) {
        throw InputError(std::string(source) + ": invalid value for " + k + " '" + v + "'");
      }
      found[i] = d;
      economic = true;
    }
    if (!economic) out.overrides.emplace_back(k, v);
  }
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (!found[i]) {
      throw InputError(std::string(source) + ": missing key " + std::string(names[i]));
    }
  }
  out.economic = {*found[0], *found[1], *found[2], *found[3]};
  if (!(out.economic.mileage_rate_usd_per_mi > 0.0)) {
    throw InputError(std::string(source) + ": mileage_rate_usd_per_mi must be positive");
  }
  if (!(out.economic.vsl_usd > 0.0)) {
    throw InputError(std::string(source) + ": vsl_usd must be positive");
  }
  if (out.economic.ground_fatalities_per_mi < 0.0 || out.economic.air_fatalities_per_mi < 0.0) {
    throw InputError(std::string(source) + ": fatality rates must be non-negative");
  }
  return out;
}

TractTable load_tracts(const std::string& path) {
  return parse_tracts(text::read_file(path), path);
}

std::vector<geo::HubAirport> load_hubs(const std::string& path, const DwellDefaults& defaults) {
  return parse_hubs(text::read_file(path), defaults, path);
}

std::vector<TripDemand> load_trips(const std::string& path, const TractTable& tracts) {
  return parse_trips(text::read_file(path), tracts, path);
}

std::vector<FareSample> load_fare_samples(const std::string& path) {
  return parse_fare_samples(text::read_file(path), path);
}

std::vector<BlockTimeSample> load_blocktime_samples(const std::string& path) {
  return parse_blocktime_samples(text::read_file(path), path);
}

ParamsFile load_params(const std::string& path) {
  return parse_params(text::read_file(path), path);
}

std::string write_tracts(const std::vector<geo::CensusTract>& rows) {
  std::string out = "tract_id,lat,lon,median_hourly_wage\n";
  for (const auto& t : rows) {
    out += t.tract_id + ',' + text::format_double(t.centroid.lat_deg) + ',' +
           text::format_double(t.centroid.lon_deg) + ',' +
           text::format_double(t.median_hourly_wage_usd) + '\n';
  }
  return out;
}

std::string write_hubs(const std::vector<geo::HubAirport>& rows) {
  std::string out = "code,lat,lon,depart_h,arrive_h\n";
  for (const auto& h : rows) {
    out += h.code + ',' + text::format_double(h.location.lat_deg) + ',' +
           text::format_double(h.location.lon_deg) + ',' +
           text::format_double(h.depart_processing_h) + ',' +
           text::format_double(h.arrive_processing_h) + '\n';
  }
  return out;
}

std::string write_trips(const std::vector<TripDemand>& rows) {
  std::string out = "origin,dest,count,age,earning,industry\n";
  for (const auto& t : rows) {
    out += t.origin_tract_id + ',' + t.dest_tract_id + ',' + std::to_string(t.trip_count) + ',';
    out += to_string(t.age_band);
    out += ',';
    out += to_string(t.earning_band);
    out += ',';
    out += to_string(t.industry);
    out += '\n';
  }
  return out;
}

std::string write_fare_samples(const std::vector<FareSample>& rows) {
  std::string out = "distance_mi,fare_usd\n";
  for (const auto& s : rows) {
    out += text::format_double(s.distance_mi) + ',' + text::format_double(s.fare_usd) + '\n';
  }
  return out;
}

std::string write_blocktime_samples(const std::vector<BlockTimeSample>& rows) {
  std::string out = "distance_mi,block_h\n";
  for (const auto& s : rows) {
    out += text::format_double(s.distance_mi) + ',' + text::format_double(s.block_h) + '\n';
  }
  return out;
}

std::string write_params(const EconomicParams& p) {
  return "mileage_rate_usd_per_mi=" + text::format_double(p.mileage_rate_usd_per_mi) +
         "\nvsl_usd=" + text::format_double(p.vsl_usd) +
         "\nground_fatalities_per_mi=" + text::format_double(p.ground_fatalities_per_mi) +
         "\nair_fatalities_per_mi=" + text::format_double(p.air_fatalities_per_mi) + '\n';
}

} // namespace aam::ingest
