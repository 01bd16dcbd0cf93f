#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "aam/calibrate.hpp"
#include "aam/choice.hpp"
#include "aam/config.hpp"
#include "aam/ingest.hpp"
#include "aam/models.hpp"
#include "aam/router.hpp"

namespace aam::pipeline {

/// Immutable inputs shared by all evaluation workers. Nearest hubs are
/// resolved once per tract at construction.
class EvalContext {
public:
  EvalContext(const ingest::TractTable& tracts, std::span<const geo::HubAirport> hubs,
              const calibrate::ModelBundle& models, const RunConfig& config,
              const router::Router& router);

  const ingest::TractTable& tracts() const { return tracts_; }
  const calibrate::ModelBundle& models() const { return models_; }
  const RunConfig& config() const { return config_; }
  const router::Router& router() const { return router_; }

  const geo::CensusTract& tract(std::string_view id) const;
  const geo::HubAirport& hub_for(std::string_view tract_id) const;

private:
  const ingest::TractTable& tracts_;
  std::vector<geo::HubAirport> hubs_;
  const calibrate::ModelBundle& models_;
  const RunConfig& config_;
  const router::Router& router_;
  std::unordered_map<std::string, std::size_t> hub_of_tract_;
};

struct TripEvaluation {
  ingest::TripDemand trip;
  std::size_t index = 0;
  double od_great_circle_mi = 0.0;
  router::GroundLeg ground_leg;           // centroid -> centroid
  models::AamItinerary itinerary;
  double block_h = 0.0;                   // 0 when no flight exists
  models::ModeEvaluation ground_eval;
  models::ModeEvaluation aam_eval;        // zeros when AAM is infeasible
  choice::GctResult gct_ground;
  choice::GctResult gct_aam;
  choice::GctResult gct_air_segment;      // fare, wage x (dwell + block), air risk
  choice::GctResult gct_access_segment;   // both ground legs of the AAM itinerary
  choice::ChoiceResult choice;
};

TripEvaluation evaluate_trip(const ingest::TripDemand& trip, std::size_t index,
                             const EvalContext& ctx);

/// Output order matches input order for any worker count; SAMPLE decisions
/// use derive_seed(run seed, trip index).
std::vector<TripEvaluation> evaluate_all(std::span<const ingest::TripDemand> trips,
                                         const EvalContext& ctx, int workers = 1);

/// Flat per-trip row of the evaluations CSV.
struct EvalRecord {
  std::size_t index = 0;
  ingest::TripDemand trip;
  std::string origin_hub;
  std::string dest_hub;
  double wage_usd_per_h = 0.0;
  double od_great_circle_mi = 0.0;
  double ground_distance_mi = 0.0;
  double ground_time_h = 0.0;
  double ground_cost_usd = 0.0;
  double ground_risk_usd = 0.0;
  double gct_ground_usd = 0.0;
  double access_distance_mi = 0.0;
  double access_time_h = 0.0;
  double air_distance_mi = 0.0;
  double block_h = 0.0;
  double dwell_h = 0.0;
  double aam_cost_usd = 0.0;
  double aam_time_h = 0.0;
  double aam_risk_usd = 0.0;
  double gct_aam_usd = 0.0;
  double gct_air_segment_usd = 0.0;
  double gct_access_segment_usd = 0.0;
  double p_aam = 0.0;
  models::Mode chosen = models::Mode::GROUND;
  choice::RangeClass range_class = choice::RangeClass::AAM_INFEASIBLE;
  double air_share = 0.0;
  bool extrapolated = false;
  router::LegSource ground_source = router::LegSource::SYNTHETIC;

  bool operator==(const EvalRecord&) const = default;
};

EvalRecord to_record(const TripEvaluation& e);
std::vector<EvalRecord> to_records(std::span<const TripEvaluation> evals);

std::string write_evaluations(std::span<const EvalRecord> records);
std::vector<EvalRecord> parse_evaluations(std::string_view text, std::string_view source = "evals");
std::vector<EvalRecord> load_evaluations(const std::string& path);

inline constexpr std::size_t kMeanRows = 8;

/// Row labels of the per-mode means table, in output order.
extern const std::array<std::string_view, kMeanRows> kMeanRowLabels;

struct MeanColumn {
  std::int64_t weight = 0;                 // summed trip_count
  std::array<double, kMeanRows> means{};
};

/// Trip-count-weighted means partitioned by chosen mode. A partition with no
/// trips is std::nullopt.
struct MeanTable {
  std::optional<MeanColumn> non_aam;
  std::optional<MeanColumn> aam;
};

MeanTable aggregate_means(std::span<const EvalRecord> records);
std::string write_mean_table(const MeanTable& table);

struct ShareRow {
  std::string feature;
  std::string band;
  double all_pct = 0.0;
  std::optional<double> aam_pct;
};

/// Percent of trip_count per band for age, earning and industry, over all
/// trips and over AAM-chosen trips. UNKNOWN is its own band.
struct ShareTable {
  std::vector<ShareRow> rows;
};

ShareTable demographic_shares(std::span<const EvalRecord> records);
std::string write_share_table(const ShareTable& table);

struct CurveRow {
  double distance_mi = 0.0;
  double gct_ground_usd = 0.0;
  std::optional<double> gct_aam_usd;       // empty when no flight exists
  double p_aam = 0.0;
  double p_ground_minus_p_aam = 0.0;
  double air_share = 0.0;
  choice::RangeClass range_class = choice::RangeClass::AAM_INFEASIBLE;
};

struct CurveBundle {
  std::vector<CurveRow> rows;
  std::optional<double> crossing_distance_mi;  // first grid point with p_aam > 0.5
  int upward_crossings = 0;
};

/// Distance grid from "start:stop:step" (inclusive) or a comma list.
std::vector<double> parse_grid(std::string_view spec);

/// Evaluates a canonical trip per grid distance: the OD great-circle distance
/// equals the air distance, the direct drive uses the synthetic road model,
/// and each access leg is config.curve_access_leg_mi road miles.
CurveBundle emit_curves(const calibrate::ModelBundle& models, const RunConfig& config,
                        std::span<const double> distance_grid);

std::string write_curves(const CurveBundle& bundle);

/// 64-bit FNV-1a, hex encoded; fingerprints model files in run metadata.
std::string fingerprint(std::string_view bytes);

} // namespace aam::pipeline
