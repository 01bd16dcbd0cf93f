#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "aam/geo.hpp"
#include "aam/models.hpp"

namespace aam::choice {

inline constexpr double kUamMaxKm = 150.0;
inline constexpr double kRamMaxKm = 800.0;

/// Generalized cost of a trip. gct_usd is the negated sum of the three
/// non-negative components.
struct GctResult {
  double gct_usd = 0.0;
  double monetary_usd = 0.0;
  double opportunity_usd = 0.0;
  double risk_usd = 0.0;
  double wage_usd_per_h = 0.0;
};

enum class RangeClass { UAM, RAM, OUT_OF_RANGE, AAM_INFEASIBLE };

std::string_view to_string(RangeClass r);
RangeClass parse_range_class(std::string_view s);

struct ChoiceResult {
  double p_aam = 0.0;
  models::Mode chosen = models::Mode::GROUND;
  RangeClass range_class = RangeClass::AAM_INFEASIBLE;
  double air_share_of_gct = 0.0;
};

struct UtilitySample {
  double u_ground = 0.0;
  double u_aam = 0.0;
  double epsilon_ground = 0.0;
  double epsilon_aam = 0.0;
};

/// Seeded uniform/Gumbel source. Bit-reproducible across platforms: uses the
/// raw mt19937_64 stream with an explicit 53-bit conversion rather than the
/// implementation-defined std distributions.
class RandomStream {
public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on the open interval (0, 1).
  double uniform();
  /// Standard Gumbel (location 0, scale 1).
  double gumbel();

private:
  std::mt19937_64 engine_;
};

/// splitmix64 mix of (seed, index); gives each trip its own stream.
std::uint64_t derive_seed(std::uint64_t run_seed, std::uint64_t index);

GctResult gct(double cost_usd, double wage_usd_per_h, double time_h, double risk_usd);

GctResult gct(const models::ModeEvaluation& eval, double wage_usd_per_h);

double trip_wage(const geo::CensusTract& origin, const geo::CensusTract& dest);

/// Binary logit: 1 / (1 + exp(scale * (gct_ground - gct_aam))), saturating
/// instead of overflowing.
double p_aam(double gct_ground, double gct_aam, double scale = 1.0);

/// Mirror of p_aam; p_aam + p_ground == 1.
double p_ground(double gct_ground, double gct_aam, double scale = 1.0);

RangeClass classify_range(double air_distance_mi);

struct DecisionRule {
  enum class Kind { THRESHOLD, SAMPLE };
  Kind kind = Kind::THRESHOLD;
  double threshold = 0.5;
  std::uint64_t seed = 0;
};

/// THRESHOLD: AAM iff p > threshold. SAMPLE: AAM iff the first uniform draw
/// of the rule's seed is < p.
models::Mode decide(double p, const DecisionRule& rule);

/// SAMPLE decision against an explicit uniform draw.
models::Mode decide_with_draw(double p, double u);

UtilitySample sample_utilities(double gct_ground, double gct_aam, RandomStream& rng,
                               double scale = 1.0);
UtilitySample sample_utilities(double gct_ground, double gct_aam, std::uint64_t seed,
                               double scale = 1.0);

/// Share of |GCT_AAM| attributable to the air segment, in [0, 1]; 0 when the
/// total is zero.
double air_share(const GctResult& air_segment, const GctResult& total);

} // namespace aam::choice
