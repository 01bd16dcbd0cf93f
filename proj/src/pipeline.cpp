#include "aam/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <thread>

#include "aam/error.hpp"
#include "aam/text.hpp"

namespace aam::pipeline {

namespace {

template <typename Fn>
auto annotate(const ingest::TripDemand& trip, std::size_t index, Fn&& fn) {
  const auto prefix = "trip " + std::to_string(index) + " (" + trip.origin_tract_id + " -> " +
                      trip.dest_tract_id + "): ";
  try {
    return fn();
  } catch (const RoutingError& e) {
    throw RoutingError(prefix + e.what());
  } catch (const CalibrationError& e) {
    throw CalibrationError(prefix + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(prefix + e.what());
  } catch (const InputError& e) {
    throw InputError(prefix + e.what());
  } catch (const IoError& e) {
    throw IoError(prefix + e.what());
  }
}

} // namespace

EvalContext::EvalContext(const ingest::TractTable& tracts, std::span<const geo::HubAirport> hubs,
                         const calibrate::ModelBundle& models, const RunConfig& config,
                         const router::Router& router)
    : tracts_(tracts), hubs_(hubs.begin(), hubs.end()), models_(models), config_(config),
      router_(router) {
  if (hubs_.empty()) throw ConfigError("no hub airports configured");
  hub_of_tract_.reserve(tracts.size());
  for (const auto& t : tracts.rows()) {
    const auto& hub = geo::nearest_hub(t, hubs_, config.earth);
    hub_of_tract_.emplace(t.tract_id, static_cast<std::size_t>(&hub - hubs_.data()));
  }
}

const geo::CensusTract& EvalContext::tract(std::string_view id) const {
  const auto* t = tracts_.find(id);
  if (t == nullptr) throw InputError("unknown tract id '" + std::string(id) + "'");
  return *t;
}

const geo::HubAirport& EvalContext::hub_for(std::string_view tract_id) const {
  const auto it = hub_of_tract_.find(std::string(tract_id));
  if (it == hub_of_tract_.end()) {
    throw InputError("unknown tract id '" + std::string(tract_id) + "'");
  }
  return hubs_[it->second];
}

TripEvaluation evaluate_trip(const ingest::TripDemand& trip, std::size_t index,
                             const EvalContext& ctx) {
  return annotate(trip, index, [&] {
    const auto& cfg = ctx.config();
    const auto& params = cfg.economic;
    const auto& origin = ctx.tract(trip.origin_tract_id);
    const auto& dest = ctx.tract(trip.dest_tract_id);
    const auto& origin_hub = ctx.hub_for(origin.tract_id);
    const auto& dest_hub = ctx.hub_for(dest.tract_id);

    TripEvaluation e;
    e.trip = trip;
    e.index = index;
    e.od_great_circle_mi = geo::haversine_distance(origin.centroid, dest.centroid, cfg.earth);
    e.ground_leg = ctx.router().ground_route(origin.centroid, dest.centroid);

    auto& it = e.itinerary;
    it.origin_leg = ctx.router().ground_route(origin.centroid, origin_hub.location);
    it.dest_leg = ctx.router().ground_route(dest_hub.location, dest.centroid);
    it.origin_hub = origin_hub.code;
    it.dest_hub = dest_hub.code;
    it.depart_processing_h = origin_hub.depart_processing_h;
    it.arrive_processing_h = dest_hub.arrive_processing_h;
    it.air_distance_mi = origin_hub.code == dest_hub.code
                             ? 0.0
                             : geo::haversine_distance(origin_hub.location, dest_hub.location,
                                                       cfg.earth);

    const double wage = choice::trip_wage(origin, dest);
    e.ground_eval = models::evaluate_ground(e.ground_leg, params);
    e.gct_ground = choice::gct(e.ground_eval, wage);

    const double access_mi = it.origin_leg.distance_mi + it.dest_leg.distance_mi;
    e.gct_access_segment =
        choice::gct(models::ground_cost(it.origin_leg, params) + models::ground_cost(it.dest_leg, params),
                    wage, it.origin_leg.time_h + it.dest_leg.time_h,
                    models::trip_risk(models::Mode::GROUND, access_mi, params));

    e.choice.range_class = choice::classify_range(it.air_distance_mi);
    e.aam_eval.mode = models::Mode::AAM;
    if (e.choice.range_class == choice::RangeClass::AAM_INFEASIBLE) {
      e.gct_aam.wage_usd_per_h = wage;
      e.gct_air_segment.wage_usd_per_h = wage;
      e.choice.p_aam = 0.0;
      e.choice.chosen = models::Mode::GROUND;
      e.choice.air_share_of_gct = 0.0;
      return e;
    }

    e.aam_eval = models::evaluate_aam(it, ctx.models(), params);
    e.gct_aam = choice::gct(e.aam_eval, wage);
    const auto block = calibrate::predict_block(ctx.models().blocktime, it.air_distance_mi);
    const auto fare = calibrate::predict_fare(ctx.models().fare, it.air_distance_mi);
    e.block_h = block.value;
    e.gct_air_segment =
        choice::gct(fare.value, wage, it.depart_processing_h + block.value + it.arrive_processing_h,
                    models::trip_risk(models::Mode::AAM, it.air_distance_mi, params));

    e.choice.p_aam = choice::p_aam(e.gct_ground.gct_usd, e.gct_aam.gct_usd, cfg.logit_scale);
    e.choice.air_share_of_gct = choice::air_share(e.gct_air_segment, e.gct_aam);
    auto rule = cfg.decision;
    rule.seed = choice::derive_seed(cfg.decision.seed, index);
    e.choice.chosen = choice::decide(e.choice.p_aam, rule);
    if (cfg.range_filter && e.choice.range_class == choice::RangeClass::OUT_OF_RANGE) {
      e.choice.chosen = models::Mode::GROUND;
    }
    return e;
  });
}

std::vector<TripEvaluation> evaluate_all(std::span<const ingest::TripDemand> trips,
                                         const EvalContext& ctx, int workers) {
  if (workers < 1) throw ConfigError("workers must be >= 1");
  const std::size_t n = trips.size();
  std::vector<TripEvaluation> out(n);
  if (n == 0) return out;
  const std::size_t w = std::min<std::size_t>(static_cast<std::size_t>(workers), n);

  // Each worker owns a contiguous block and stops at its first failure; the
  // lowest failing index overall is rethrown so errors do not depend on timing.
  std::vector<std::size_t> failed_at(w, n);
  std::vector<std::exception_ptr> errors(w);
  auto run = [&](std::size_t worker) {
    const std::size_t begin = worker * n / w;
    const std::size_t end = (worker + 1) * n / w;
    for (std::size_t i = begin; i < end; ++i) {
      try {
        out[i] = evaluate_trip(trips[i], i, ctx);
      } catch (...) {
        failed_at[worker] = i;
        errors[worker] = std::current_exception();
        return;
      }
    }
  };
  if (w == 1) {
    run(0);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(w);
    for (std::size_t k = 0; k < w; ++k) threads.emplace_back(run, k);
    for (auto& t : threads) t.join();
  }
  const auto first = std::min_element(failed_at.begin(), failed_at.end());
  if (*first < n) std::rethrow_exception(errors[static_cast<std::size_t>(first - failed_at.begin())]);
  return out;
}

EvalRecord to_record(const TripEvaluation& e) {
  EvalRecord r;
  r.index = e.index;
  r.trip = e.trip;
  r.origin_hub = e.itinerary.origin_hub;
  r.dest_hub = e.itinerary.dest_hub;
  r.wage_usd_per_h = e.gct_ground.wage_usd_per_h;
  r.od_great_circle_mi = e.od_great_circle_mi;
  r.ground_distance_mi = e.ground_leg.distance_mi;
  r.ground_time_h = e.ground_leg.time_h;
  r.ground_cost_usd = e.ground_eval.monetary_usd;
  r.ground_risk_usd = e.ground_eval.risk_usd;
  r.gct_ground_usd = e.gct_ground.gct_usd;
  r.access_distance_mi = e.itinerary.origin_leg.distance_mi + e.itinerary.dest_leg.distance_mi;
  r.access_time_h = e.itinerary.origin_leg.time_h + e.itinerary.dest_leg.time_h;
  r.air_distance_mi = e.itinerary.air_distance_mi;
  r.block_h = e.block_h;
  r.dwell_h = e.itinerary.depart_processing_h + e.itinerary.arrive_processing_h;
  r.aam_cost_usd = e.aam_eval.monetary_usd;
  r.aam_time_h = e.aam_eval.time_h;
  r.aam_risk_usd = e.aam_eval.risk_usd;
  r.gct_aam_usd = e.gct_aam.gct_usd;
  r.gct_air_segment_usd = e.gct_air_segment.gct_usd;
  r.gct_access_segment_usd = e.gct_access_segment.gct_usd;
  r.p_aam = e.choice.p_aam;
  r.chosen = e.choice.chosen;
  r.range_class = e.choice.range_class;
  r.air_share = e.choice.air_share_of_gct;
  r.extrapolated = e.aam_eval.extrapolated;
  r.ground_source = e.ground_leg.source;
  return r;
}

std::vector<EvalRecord> to_records(std::span<const TripEvaluation> evals) {
  std::vector<EvalRecord> out;
  out.reserve(evals.size());
  for (const auto& e : evals) out.push_back(to_record(e));
  return out;
}

namespace {

constexpr std::string_view kEvalHeader =
    "index,origin,dest,count,age,earning,industry,origin_hub,dest_hub,wage_usd_per_h,"
    "od_great_circle_mi,ground_distance_mi,ground_time_h,ground_cost_usd,ground_risk_usd,"
    "gct_ground_usd,access_distance_mi,access_time_h,air_distance_mi,block_h,dwell_h,"
    "aam_cost_usd,aam_time_h,aam_risk_usd,gct_aam_usd,gct_air_segment_usd,"
    "gct_access_segment_usd,p_aam,chosen,range_class,air_share,extrapolated,ground_source";

constexpr std::size_t kEvalColumns = 33;

// Numeric columns after the identifying fields, in header order.
constexpr std::array<double EvalRecord::*, 19> kEvalNumbers = {
    &EvalRecord::wage_usd_per_h,       &EvalRecord::od_great_circle_mi,
    &EvalRecord::ground_distance_mi,   &EvalRecord::ground_time_h,
    &EvalRecord::ground_cost_usd,      &EvalRecord::ground_risk_usd,
    &EvalRecord::gct_ground_usd,       &EvalRecord::access_distance_mi,
    &EvalRecord::access_time_h,        &EvalRecord::air_distance_mi,
    &EvalRecord::block_h,              &EvalRecord::dwell_h,
    &EvalRecord::aam_cost_usd,         &EvalRecord::aam_time_h,
    &EvalRecord::aam_risk_usd,         &EvalRecord::gct_aam_usd,
    &EvalRecord::gct_air_segment_usd,  &EvalRecord::gct_access_segment_usd,
    &EvalRecord::p_aam};

} // namespace

std::string write_evaluations(std::span<const EvalRecord> records) {
  std::string out(kEvalHeader);
  out += '\n';
  out.reserve(records.size() * 400);
  for (const auto& r : records) {
    out += std::to_string(r.index);
    out += ',';
    out += r.trip.origin_tract_id;
    out += ',';
    out += r.trip.dest_tract_id;
    out += ',';
    out += std::to_string(r.trip.trip_count);
    out += ',';
    out += ingest::to_string(r.trip.age_band);
    out += ',';
    out += ingest::to_string(r.trip.earning_band);
    out += ',';
    out += ingest::to_string(r.trip.industry);
    out += ',';
    out += r.origin_hub;
    out += ',';
    out += r.dest_hub;
    for (auto field : kEvalNumbers) {
      out += ',';
      out += text::format_double(r.*field);
    }
    out += ',';
    out += models::to_string(r.chosen);
    out += ',';
    out += choice::to_string(r.range_class);
    out += ',';
    out += text::format_double(r.air_share);
    out += ',';
    out += r.extrapolated ? "1" : "0";
    out += ',';
    out += r.ground_source == router::LegSource::REMOTE ? "REMOTE" : "SYNTHETIC";
    out += '\n';
  }
  return out;
}

std::vector<EvalRecord> parse_evaluations(std::string_view text, std::string_view source) {
  std::vector<EvalRecord> out;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  bool header = false;
  auto fail = [&](const std::string& what) {
    throw InputError(std::string(source) + " line " + std::to_string(line_no) + ": " + what);
  };
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const auto line = text::trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty()) continue;
    if (!header) {
      if (line != kEvalHeader) fail("unexpected header");
      header = true;
      continue;
    }
    const auto f = text::split(line);
    if (f.size() != kEvalColumns) fail("expected " + std::to_string(kEvalColumns) + " fields");
    EvalRecord r;
    long long idx = 0;
    long long count = 0;
    if (!text::parse_int(f[0], idx) || idx < 0) fail("invalid index");
    if (!text::parse_int(f[3], count) || count < 1) fail("invalid count");
    r.index = static_cast<std::size_t>(idx);
    r.trip.origin_tract_id = std::string(f[1]);
    r.trip.dest_tract_id = std::string(f[2]);
    r.trip.trip_count = count;
    const auto age = ingest::parse_age_band(f[4]);
    const auto earning = ingest::parse_earning_band(f[5]);
    const auto industry = ingest::parse_industry(f[6]);
    if (!age || !earning || !industry) fail("invalid band");
    r.trip.age_band = *age;
    r.trip.earning_band = *earning;
    r.trip.industry = *industry;
    r.origin_hub = std::string(f[7]);
    r.dest_hub = std::string(f[8]);
    for (std::size_t k = 0; k < kEvalNumbers.size(); ++k) {
      if (!text::parse_double(f[9 + k], r.*kEvalNumbers[k])) {
        fail("invalid number '" + std::string(f[9 + k]) + "'");
      }
    }
    if (f[28] == "AAM") {
      r.chosen = models::Mode::AAM;
    } else if (f[28] == "GROUND") {
      r.chosen = models::Mode::GROUND;
    } else {
      fail("invalid chosen mode");
    }
    try {
      r.range_class = choice::parse_range_class(f[29]);
    } catch (const InputError& e) {
      fail(e.what());
    }
    if (!text::parse_double(f[30], r.air_share)) fail("invalid air_share");
    if (f[31] != "0" && f[31] != "1") fail("invalid extrapolated flag");
    r.extrapolated = f[31] == "1";
    if (f[32] == "REMOTE") {
      r.ground_source = router::LegSource::REMOTE;
    } else if (f[32] == "SYNTHETIC") {
      r.ground_source = router::LegSource::SYNTHETIC;
    } else {
      fail("invalid ground_source");
    }
    out.push_back(std::move(r));
  }
  if (!header) throw InputError(std::string(source) + ": missing header row");
  return out;
}

std::vector<EvalRecord> load_evaluations(const std::string& path) {
  return parse_evaluations(text::read_file(path), path);
}

const std::array<std::string_view, kMeanRows> kMeanRowLabels = {
    "GCT by Air Transportation (USD)",
    "GCT by Ground Transportation (USD)",
    "Time in Ground Transportation (hours)",
    "Distance by Ground Transportation (miles)",
    "Distance by Air Transportation (miles)",
    "Time in Air Transportation (hours)",
    "Distance between OD (miles)",
    "Ground Transportation time between OD (hours)",
};

namespace {

std::array<double, kMeanRows> mean_row_values(const EvalRecord& r) {
  return {-r.gct_air_segment_usd, -r.gct_access_segment_usd, r.access_time_h,
          r.access_distance_mi,   r.air_distance_mi,         r.block_h,
          r.ground_distance_mi,   r.ground_time_h};
}

} // namespace

MeanTable aggregate_means(std::span<const EvalRecord> records) {
  std::array<MeanColumn, 2> acc{};
  for (const auto& r : records) {
    auto& col = acc[r.chosen == models::Mode::AAM ? 1 : 0];
    const auto w = r.trip.trip_count;
    col.weight += w;
    const auto vals = mean_row_values(r);
    for (std::size_t k = 0; k < kMeanRows; ++k) {
      col.means[k] += static_cast<double>(w) * vals[k];
    }
  }
  MeanTable table;
  for (std::size_t m = 0; m < 2; ++m) {
    if (acc[m].weight == 0) continue;
    for (auto& v : acc[m].means) v /= static_cast<double>(acc[m].weight);
    (m == 0 ? table.non_aam : table.aam) = acc[m];
  }
  return table;
}

std::string write_mean_table(const MeanTable& table) {
  std::string out = "variable,non_aam,aam\n";
  auto cell = [](const std::optional<MeanColumn>& c, std::size_t k) {
    return c ? text::format_double(c->means[k]) : std::string();
  };
  for (std::size_t k = 0; k < kMeanRows; ++k) {
    out += std::string(kMeanRowLabels[k]) + ',' + cell(table.non_aam, k) + ',' +
           cell(table.aam, k) + '\n';
  }
  out += "Trips (weighted count)," +
         (table.non_aam ? std::to_string(table.non_aam->weight) : std::string("0")) + ',' +
         (table.aam ? std::to_string(table.aam->weight) : std::string("0")) + '\n';
  return out;
}

namespace {

template <typename Enum>
void add_feature(ShareTable& table, std::string_view feature, std::span<const EvalRecord> records,
                 Enum ingest::TripDemand::*field) {
  constexpr std::size_t bands = 4;
  std::array<double, bands> all{};
  std::array<double, bands> aam{};
  double all_total = 0.0;
  double aam_total = 0.0;
  for (const auto& r : records) {
    const auto b = static_cast<std::size_t>(r.trip.*field);
    const auto w = static_cast<double>(r.trip.trip_count);
    all[b] += w;
    all_total += w;
    if (r.chosen == models::Mode::AAM) {
      aam[b] += w;
      aam_total += w;
    }
  }
  for (std::size_t b = 0; b < bands; ++b) {
    ShareRow row;
    row.feature = std::string(feature);
    row.band = std::string(ingest::to_string(static_cast<Enum>(b)));
    row.all_pct = all_total > 0.0 ? 100.0 * all[b] / all_total : 0.0;
    if (aam_total > 0.0) row.aam_pct = 100.0 * aam[b] / aam_total;
    table.rows.push_back(std::move(row));
  }
}

} // namespace

ShareTable demographic_shares(std::span<const EvalRecord> records) {
  ShareTable table;
  add_feature(table, "age", records, &ingest::TripDemand::age_band);
  add_feature(table, "earning", records, &ingest::TripDemand::earning_band);
  add_feature(table, "industry", records, &ingest::TripDemand::industry);
  return table;
}

std::string write_share_table(const ShareTable& table) {
  std::string out = "feature,band,all_pct,aam_pct\n";
  for (const auto& r : table.rows) {
    out += r.feature + ',' + r.band + ',' + text::format_double(r.all_pct) + ',' +
           (r.aam_pct ? text::format_double(*r.aam_pct) : std::string()) + '\n';
  }
  return out;
}

std::vector<double> parse_grid(std::string_view spec) {
  spec = text::trim(spec);
  std::vector<double> grid;
  const auto parts = text::split(spec, spec.find(':') != std::string_view::npos ? ':' : ',');
  if (spec.find(':') != std::string_view::npos) {
    double start = 0.0;
    double stop = 0.0;
    double step = 0.0;
    if (parts.size() != 3 || !text::parse_double(parts[0], start) ||
        !text::parse_double(parts[1], stop) || !text::parse_double(parts[2], step)) {
      throw ConfigError("grid must be start:stop:step, got '" + std::string(spec) + "'");
    }
    if (!(step > 0.0) || stop < start) {
      throw ConfigError("grid needs step > 0 and stop >= start");
    }
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    if (count > 10'000'000) throw ConfigError("grid too large");
    for (std::size_t i = 0; i < count; ++i) grid.push_back(start + static_cast<double>(i) * step);
  } else {
    for (auto p : parts) {
      double v = 0.0;
      if (!text::parse_double(p, v)) {
        throw ConfigError("invalid grid value '" + std::string(p) + "'");
      }
      grid.push_back(v);
    }
  }
  for (double d : grid) {
    if (d < 0.0) throw ConfigError("grid distances must be non-negative");
  }
  return grid;
}

CurveBundle emit_curves(const calibrate::ModelBundle& models, const RunConfig& config,
                        std::span<const double> distance_grid) {
  validate(config);
  const auto& params = config.economic;
  const auto& road = config.router.synthetic;
  const double wage = config.curve_wage_usd_per_h;
  const router::GroundLeg access{config.curve_access_leg_mi,
                                 config.curve_access_leg_mi / road.avg_speed_mph,
                                 router::LegSource::SYNTHETIC};

  CurveBundle bundle;
  bool prev_above = false;
  for (std::size_t i = 0; i < distance_grid.size(); ++i) {
    const double d = distance_grid[i];
    if (!(d >= 0.0) || !std::isfinite(d)) throw ConfigError("grid distances must be non-negative");
    CurveRow row;
    row.distance_mi = d;
    const double road_mi = road.circuity_factor * d;
    const router::GroundLeg direct{road_mi, road_mi / road.avg_speed_mph,
                                   router::LegSource::SYNTHETIC};
    row.gct_ground_usd = choice::gct(models::evaluate_ground(direct, params), wage).gct_usd;
    row.range_class = choice::classify_range(d);
    if (row.range_class == choice::RangeClass::AAM_INFEASIBLE) {
      row.p_aam = 0.0;
      row.p_ground_minus_p_aam = 1.0;
      row.air_share = 0.0;
    } else {
      models::AamItinerary it;
      it.origin_leg = access;
      it.dest_leg = access;
      it.air_distance_mi = d;
      it.depart_processing_h = config.dwell.depart_h;
      it.arrive_processing_h = config.dwell.arrive_h;
      const auto total = choice::gct(models::evaluate_aam(it, models, params), wage);
      const auto block = calibrate::predict_block(models.blocktime, d).value;
      const auto fare = calibrate::predict_fare(models.fare, d).value;
      const auto air = choice::gct(fare, wage, it.depart_processing_h + block + it.arrive_processing_h,
                                   models::trip_risk(models::Mode::AAM, d, params));
      row.gct_aam_usd = total.gct_usd;
      row.p_aam = choice::p_aam(row.gct_ground_usd, total.gct_usd, config.logit_scale);
      row.p_ground_minus_p_aam =
          choice::p_ground(row.gct_ground_usd, total.gct_usd, config.logit_scale) - row.p_aam;
      row.air_share = choice::air_share(air, total);
    }
    const bool above = row.p_aam > 0.5;
    if (i > 0 && above && !prev_above) {
      ++bundle.upward_crossings;
      if (!bundle.crossing_distance_mi) bundle.crossing_distance_mi = d;
    }
    prev_above = above;
    bundle.rows.push_back(row);
  }
  return bundle;
}

std::string write_curves(const CurveBundle& bundle) {
  std::string out =
      "distance_mi,gct_ground_usd,gct_aam_usd,p_aam,p_ground_minus_p_aam,air_share,range_class,"
      "status\n";
  for (const auto& r : bundle.rows) {
    out += text::format_double(r.distance_mi) + ',' + text::format_double(r.gct_ground_usd) + ',' +
           (r.gct_aam_usd ? text::format_double(*r.gct_aam_usd) : std::string()) + ',' +
           text::format_double(r.p_aam) + ',' + text::format_double(r.p_ground_minus_p_aam) + ',' +
           text::format_double(r.air_share) + ',' + std::string(choice::to_string(r.range_class)) +
           ',' + (r.gct_aam_usd ? "ok" : "infeasible") + '\n';
  }
  return out;
}

std::string fingerprint(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

} // namespace aam::pipeline
