#include "aam/models.hpp"

#include <cmath>

#include "aam/error.hpp"

namespace aam::models {

namespace {

void require_flight(const AamItinerary& it) {
  if (!(it.air_distance_mi > 0.0)) {
    throw InfeasibleError("no flight between hubs " + it.origin_hub + " and " + it.dest_hub);
  }
}

} // namespace

std::string_view to_string(Mode m) { return m == Mode::AAM ? "AAM" : "GROUND"; }

double ground_cost(const router::GroundLeg& leg, const ingest::EconomicParams& params) {
  return params.mileage_rate_usd_per_mi * leg.distance_mi;
}

calibrate::Prediction aam_cost(const AamItinerary& it, const calibrate::FareModel& fare,
                               const ingest::EconomicParams& params) {
  require_flight(it);
  const auto f = calibrate::predict_fare(fare, it.air_distance_mi);
  return {ground_cost(it.origin_leg, params) + f.value + ground_cost(it.dest_leg, params),
          f.extrapolated};
}

calibrate::Prediction aam_time(const AamItinerary& it, const calibrate::BlockTimeModel& block) {
  require_flight(it);
  const auto b = calibrate::predict_block(block, it.air_distance_mi);
  return {it.origin_leg.time_h + it.depart_processing_h + b.value + it.arrive_processing_h +
              it.dest_leg.time_h,
          b.extrapolated};
}

double trip_risk(Mode mode, double total_distance_mi, const ingest::EconomicParams& params) {
  if (total_distance_mi < 0.0) throw InputError("negative distance in risk evaluation");
  const double rate =
      mode == Mode::AAM ? params.air_fatalities_per_mi : params.ground_fatalities_per_mi;
  return params.vsl_usd * rate * total_distance_mi;
}

double aam_risk(const AamItinerary& it, const ingest::EconomicParams& params) {
  return trip_risk(Mode::GROUND, it.origin_leg.distance_mi + it.dest_leg.distance_mi, params) +
         trip_risk(Mode::AAM, it.air_distance_mi, params);
}

ModeEvaluation evaluate_ground(const router::GroundLeg& leg, const ingest::EconomicParams& params) {
  return {Mode::GROUND, ground_cost(leg, params), ground_time(leg),
          trip_risk(Mode::GROUND, leg.distance_mi, params), false};
}

ModeEvaluation evaluate_aam(const AamItinerary& it, const calibrate::ModelBundle& models,
                            const ingest::EconomicParams& params) {
  const auto cost = aam_cost(it, models.fare, params);
  const auto time = aam_time(it, models.blocktime);
  return {Mode::AAM, cost.value, time.value, aam_risk(it, params),
          cost.extrapolated || time.extrapolated};
}

} // namespace aam::models
