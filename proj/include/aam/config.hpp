#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "aam/calibrate.hpp"
#include "aam/choice.hpp"
#include "aam/geo.hpp"
#include "aam/ingest.hpp"
#include "aam/router.hpp"

namespace aam::pipeline {

/// Everything a run needs besides the data tables. Populated from defaults,
/// then the ROUTER_BASE_URL environment variable, then the extra keys of the
/// params file, then the config file.
struct RunConfig {
  geo::EarthModel earth;
  ingest::EconomicParams economic;
  ingest::DwellDefaults dwell;
  router::RouterConfig router;
  int blocktime_degree = calibrate::kDefaultBlockDegree;
  double min_block_h = calibrate::kDefaultMinBlockH;
  double logit_scale = 1.0;
  choice::DecisionRule decision;  // decision.seed is the run seed
  bool range_filter = true;
  int workers = 1;
  double curve_access_leg_mi = 10.0;
  double curve_wage_usd_per_h = 30.0;
};

/// Applies one `key=value` setting. Throws ConfigError on unknown keys or
/// unparsable values.
void apply_setting(RunConfig& config, std::string_view key, std::string_view value);

void apply_settings(RunConfig& config,
                    const std::vector<std::pair<std::string, std::string>>& settings);

/// Reads ROUTER_BASE_URL if set.
void apply_environment(RunConfig& config);

/// Checks cross-field invariants; throws ConfigError.
void validate(const RunConfig& config);

/// Every recognised key with its current value, sorted by key.
std::vector<std::pair<std::string, std::string>> describe(const RunConfig& config);

} // namespace aam::pipeline
