#include "aam/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <map>

#include "aam/error.hpp"
#include "aam/text.hpp"

namespace aam::pipeline {

namespace {

double as_double(std::string_view key, std::string_view v) {
  double d = 0.0;
  if (!text::parse_double(v, d)) {
    throw ConfigError(std::string(key) + ": expected a number, got '" + std::string(v) + "'");
  }
  return d;
}

long long as_int(std::string_view key, std::string_view v) {
  long long i = 0;
  if (!text::parse_int(v, i)) {
    throw ConfigError(std::string(key) + ": expected an integer, got '" + std::string(v) + "'");
  }
  return i;
}

bool as_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "on") return true;
  if (v == "false" || v == "0" || v == "off") return false;
  throw ConfigError(std::string(key) + ": expected true/false, got '" + std::string(v) + "'");
}

using Setter = std::function<void(RunConfig&, std::string_view key, std::string_view value)>;
using Getter = std::function<std::string(const RunConfig&)>;

struct Setting {
  Setter set;
  Getter get;
};

#define AAM_DOUBLE(field)                                                                       \
  Setting {                                                                                     \
    [](RunConfig& c, std::string_view k, std::string_view v) { c.field = as_double(k, v); },    \
        [](const RunConfig& c) { return text::format_double(c.field); }                         \
  }
#define AAM_INT(field)                                                                          \
  Setting {                                                                                     \
    [](RunConfig& c, std::string_view k, std::string_view v) {                                  \
      c.field = static_cast<decltype(c.field)>(as_int(k, v));                                   \
    },                                                                                          \
        [](const RunConfig& c) { return std::to_string(c.field); }                              \
  }
#define AAM_STRING(field)                                                                       \
  Setting {                                                                                     \
    [](RunConfig& c, std::string_view, std::string_view v) { c.field = std::string(v); },       \
        [](const RunConfig& c) { return c.field; }                                              \
  }

const std::map<std::string, Setting, std::less<>>& registry() {
  static const std::map<std::string, Setting, std::less<>> settings = {
      {"earth.radius_mi", AAM_DOUBLE(earth.radius_mi)},
      {"dwell.depart_h", AAM_DOUBLE(dwell.depart_h)},
      {"dwell.arrive_h", AAM_DOUBLE(dwell.arrive_h)},
      {"router.mode",
       {[](RunConfig& c, std::string_view, std::string_view v) {
          c.router.mode = router::parse_router_mode(v);
        },
        [](const RunConfig& c) { return std::string(router::to_string(c.router.mode)); }}},
      {"router.base_url", AAM_STRING(router.base_url)},
      {"router.profile", AAM_STRING(router.profile)},
      {"router.timeout_s", AAM_DOUBLE(router.timeout_s)},
      {"router.retries", AAM_INT(router.retries)},
      {"router.backoff_ms", AAM_INT(router.backoff_ms)},
      {"router.max_in_flight", AAM_INT(router.max_in_flight)},
      {"router.cache_path", AAM_STRING(router.cache_path)},
      {"router.circuity_factor", AAM_DOUBLE(router.synthetic.circuity_factor)},
      {"router.avg_speed_mph", AAM_DOUBLE(router.synthetic.avg_speed_mph)},
      {"calibrate.blocktime_degree", AAM_INT(blocktime_degree)},
      {"calibrate.min_block_h", AAM_DOUBLE(min_block_h)},
      {"logit.scale", AAM_DOUBLE(logit_scale)},
      {"decision.rule",
       {[](RunConfig& c, std::string_view k, std::string_view v) {
          if (v == "threshold") {
            c.decision.kind = choice::DecisionRule::Kind::THRESHOLD;
          } else if (v == "sample") {
            c.decision.kind = choice::DecisionRule::Kind::SAMPLE;
          } else {
            throw ConfigError(std::string(k) + ": expected threshold or sample");
          }
        },
        [](const RunConfig& c) {
          return std::string(c.decision.kind == choice::DecisionRule::Kind::SAMPLE ? "sample"
                                                                                    : "threshold");
        }}},
      {"decision.threshold", AAM_DOUBLE(decision.threshold)},
      {"seed",
       {[](RunConfig& c, std::string_view k, std::string_view v) {
          const auto s = as_int(k, v);
          if (s < 0) throw ConfigError("seed must be non-negative");
          c.decision.seed = static_cast<std::uint64_t>(s);
        },
        [](const RunConfig& c) { return std::to_string(c.decision.seed); }}},
      {"filter.range",
       {[](RunConfig& c, std::string_view k, std::string_view v) { c.range_filter = as_bool(k, v); },
        [](const RunConfig& c) { return std::string(c.range_filter ? "true" : "false"); }}},
      {"workers", AAM_INT(workers)},
      {"curve.access_leg_mi", AAM_DOUBLE(curve_access_leg_mi)},
      {"curve.wage_usd_per_h", AAM_DOUBLE(curve_wage_usd_per_h)},
  };
  return settings;
}

#undef AAM_DOUBLE
#undef AAM_INT
#undef AAM_STRING

} // namespace

void apply_setting(RunConfig& config, std::string_view key, std::string_view value) {
  const auto& reg = registry();
  const auto it = reg.find(key);
  if (it == reg.end()) throw ConfigError("unknown setting '" + std::string(key) + "'");
  it->second.set(config, key, text::trim(value));
}

void apply_settings(RunConfig& config,
                    const std::vector<std::pair<std::string, std::string>>& settings) {
  for (const auto& [k, v] : settings) apply_setting(config, k, v);
}

void apply_environment(RunConfig& config) {
  if (const char* url = std::getenv("ROUTER_BASE_URL"); url != nullptr && *url != '\0') {
    config.router.base_url = url;
  }
}

void validate(const RunConfig& c) {
  if (!(c.earth.radius_mi > 0.0)) throw ConfigError("earth.radius_mi must be positive");
  if (c.dwell.depart_h < 0.0 || c.dwell.arrive_h < 0.0) {
    throw ConfigError("dwell times must be non-negative");
  }
  if (c.blocktime_degree < 0) throw ConfigError("calibrate.blocktime_degree must be >= 0");
  if (c.min_block_h < 0.0) throw ConfigError("calibrate.min_block_h must be non-negative");
  if (!(c.logit_scale > 0.0)) throw ConfigError("logit.scale must be positive");
  if (!(c.decision.threshold >= 0.0 && c.decision.threshold <= 1.0)) {
    throw ConfigError("decision.threshold must be in [0, 1]");
  }
  if (c.workers < 1) throw ConfigError("workers must be >= 1");
  if (c.router.synthetic.circuity_factor < 1.0) {
    throw ConfigError("router.circuity_factor must be >= 1");
  }
  if (!(c.router.synthetic.avg_speed_mph > 0.0)) {
    throw ConfigError("router.avg_speed_mph must be positive");
  }
  if (c.curve_access_leg_mi < 0.0) throw ConfigError("curve.access_leg_mi must be non-negative");
  if (c.curve_wage_usd_per_h < 0.0) throw ConfigError("curve.wage_usd_per_h must be non-negative");
}

std::vector<std::pair<std::string, std::string>> describe(const RunConfig& config) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [k, s] : registry()) out.emplace_back(k, s.get(config));
  return out;
}

} // namespace aam::pipeline
