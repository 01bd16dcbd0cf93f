#include "aam/choice.hpp"

#include <algorithm>
#include <cmath>

#include "aam/error.hpp"

namespace aam::choice {

namespace {

constexpr double kUamMaxMi = kUamMaxKm * geo::kMilesPerKm;
constexpr double kRamMaxMi = kRamMaxKm * geo::kMilesPerKm;

} // namespace

std::string_view to_string(RangeClass r) {
  switch (r) {
  case RangeClass::UAM: return "UAM";
  case RangeClass::RAM: return "RAM";
  case RangeClass::OUT_OF_RANGE: return "OUT_OF_RANGE";
  case RangeClass::AAM_INFEASIBLE: return "AAM_INFEASIBLE";
  }
  return "AAM_INFEASIBLE";
}

RangeClass parse_range_class(std::string_view s) {
  for (auto r : {RangeClass::UAM, RangeClass::RAM, RangeClass::OUT_OF_RANGE,
                 RangeClass::AAM_INFEASIBLE}) {
    if (to_string(r) == s) return r;
  }
  throw InputError("unknown range class '" + std::string(s) + "'");
}

double RandomStream::uniform() {
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double RandomStream::gumbel() { return -std::log(-std::log(uniform())); }

std::uint64_t derive_seed(std::uint64_t run_seed, std::uint64_t index) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(run_seed ^ mix(index));
}

GctResult gct(double cost_usd, double wage_usd_per_h, double time_h, double risk_usd) {
  for (double v : {cost_usd, wage_usd_per_h, time_h, risk_usd}) {
    if (!std::isfinite(v) || v < 0.0) {
      throw InputError("generalized cost inputs must be finite and non-negative");
    }
  }
  const double opportunity = wage_usd_per_h * time_h;
  return {-cost_usd - opportunity - risk_usd, cost_usd, opportunity, risk_usd, wage_usd_per_h};
}

GctResult gct(const models::ModeEvaluation& eval, double wage_usd_per_h) {
  return gct(eval.monetary_usd, wage_usd_per_h, eval.time_h, eval.risk_usd);
}

double trip_wage(const geo::CensusTract& origin, const geo::CensusTract& dest) {
  return (origin.median_hourly_wage_usd + dest.median_hourly_wage_usd) / 2.0;
}

double p_aam(double gct_ground, double gct_aam, double scale) {
  if (!(scale > 0.0)) throw ConfigError("logit scale must be positive");
  const double x = scale * (gct_ground - gct_aam);
  if (x >= 0.0) {
    const double e = std::exp(-x);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(x));
}

double p_ground(double gct_ground, double gct_aam, double scale) {
  return p_aam(gct_aam, gct_ground, scale);
}

RangeClass classify_range(double air_distance_mi) {
  if (!(air_distance_mi > 0.0)) return RangeClass::AAM_INFEASIBLE;
  if (air_distance_mi < kUamMaxMi) return RangeClass::UAM;
  if (air_distance_mi <= kRamMaxMi) return RangeClass::RAM;
  return RangeClass::OUT_OF_RANGE;
}

models::Mode decide_with_draw(double p, double u) {
  return u < p ? models::Mode::AAM : models::Mode::GROUND;
}

models::Mode decide(double p, const DecisionRule& rule) {
  if (rule.kind == DecisionRule::Kind::THRESHOLD) {
    return p > rule.threshold ? models::Mode::AAM : models::Mode::GROUND;
  }
  RandomStream rng(rule.seed);
  return decide_with_draw(p, rng.uniform());
}

UtilitySample sample_utilities(double gct_ground, double gct_aam, RandomStream& rng,
                               double scale) {
  if (!(scale > 0.0)) throw ConfigError("logit scale must be positive");
  UtilitySample s;
  s.epsilon_ground = rng.gumbel() / scale;
  s.epsilon_aam = rng.gumbel() / scale;
  s.u_ground = gct_ground + s.epsilon_ground;
  s.u_aam = gct_aam + s.epsilon_aam;
  return s;
}

UtilitySample sample_utilities(double gct_ground, double gct_aam, std::uint64_t seed,
                               double scale) {
  RandomStream rng(seed);
  return sample_utilities(gct_ground, gct_aam, rng, scale);
}

double air_share(const GctResult& air_segment, const GctResult& total) {
  if (total.gct_usd == 0.0) return 0.0;
  return std::clamp(air_segment.gct_usd / total.gct_usd, 0.0, 1.0);
}

} // namespace aam::choice
