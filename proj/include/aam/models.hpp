#pragma once

#include <string>

#include "aam/calibrate.hpp"
#include "aam/geo.hpp"
#include "aam/ingest.hpp"
#include "aam/router.hpp"

namespace aam::models {

enum class Mode { GROUND, AAM };

std::string_view to_string(Mode m);

/// Monetary cost, door-to-door time and monetized risk of one mode for one trip.
struct ModeEvaluation {
  Mode mode = Mode::GROUND;
  double monetary_usd = 0.0;
  double time_h = 0.0;
  double risk_usd = 0.0;
  bool extrapolated = false;
};

/// Centroid -> origin hub by road, hub -> hub by air, hub -> centroid by road.
struct AamItinerary {
  router::GroundLeg origin_leg;
  double air_distance_mi = 0.0;
  router::GroundLeg dest_leg;
  std::string origin_hub;
  std::string dest_hub;
  double depart_processing_h = 0.0;
  double arrive_processing_h = 0.0;
};

double ground_cost(const router::GroundLeg& leg, const ingest::EconomicParams& params);

/// Throws InfeasibleError when the itinerary has no flight (same hub).
calibrate::Prediction aam_cost(const AamItinerary& it, const calibrate::FareModel& fare,
                               const ingest::EconomicParams& params);

inline double ground_time(const router::GroundLeg& leg) { return leg.time_h; }

calibrate::Prediction aam_time(const AamItinerary& it, const calibrate::BlockTimeModel& block);

/// VSL x fatality rate x miles for a single-mode distance.
double trip_risk(Mode mode, double total_distance_mi, const ingest::EconomicParams& params);

/// Ground legs at the ground rate plus the flight at the air rate.
double aam_risk(const AamItinerary& it, const ingest::EconomicParams& params);

ModeEvaluation evaluate_ground(const router::GroundLeg& leg, const ingest::EconomicParams& params);

ModeEvaluation evaluate_aam(const AamItinerary& it, const calibrate::ModelBundle& models,
                            const ingest::EconomicParams& params);

} // namespace aam::models
