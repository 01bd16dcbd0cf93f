#include <doctest.h>

#include <cmath>
#include <random>

#include "aam/choice.hpp"
#include "aam/error.hpp"

using namespace aam;
using namespace aam::choice;
using models::Mode;

namespace {

double win_rate(double g, double a, std::uint64_t seed, int draws, double scale = 1.0) {
  RandomStream rng(seed);
  int wins = 0;
  for (int i = 0; i < draws; ++i) {
    const auto s = sample_utilities(g, a, rng, scale);
    if (s.u_aam > s.u_ground) ++wins;
  }
  return static_cast<double>(wins) / draws;
}

} // namespace

TEST_CASE("gct") {
  const auto zero = gct(0, 0, 0, 0);
  CHECK(zero.gct_usd == 0.0);
  const auto r = gct(100, 30, 2, 15);
  CHECK(r.gct_usd == -175.0);
  CHECK(r.monetary_usd == 100.0);
  CHECK(r.opportunity_usd == 60.0);
  CHECK(r.risk_usd == 15.0);
  CHECK(r.wage_usd_per_h == 30.0);
  CHECK(gct(100, 0, 5, 0).gct_usd == -100.0);
  CHECK_THROWS_AS(gct(-1, 0, 0, 0), InputError);
  CHECK_THROWS_AS(gct(1, 1, NAN, 0), InputError);
}

TEST_CASE("trip_wage") {
  geo::CensusTract a{"A", {}, 20}, b{"B", {}, 40}, z{"Z", {}, 0}, c{"C", {}, 50};
  CHECK(trip_wage(a, b) == 30.0);
  CHECK(trip_wage(a, a) == 20.0);
  CHECK(trip_wage(z, c) == 25.0);
}

TEST_CASE("p_aam closed forms and saturation") {
  CHECK(p_aam(-120, -120) == 0.5);
  CHECK(p_aam(std::log(3.0), 0.0) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(p_aam(-1000, 0) == 1.0);
  CHECK(p_aam(1000, 0) == 0.0);
  CHECK(p_aam(0, 0, 0.01) == 0.5);
  CHECK(p_aam(-100, 0, 0.01) == doctest::Approx(1.0 / (1.0 + std::exp(-1.0))).epsilon(1e-12));
  CHECK_THROWS_AS(p_aam(0, 0, 0.0), ConfigError);
}

TEST_CASE("p_aam properties") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> g(-600, 0), shift(-300, 300);
  for (int i = 0; i < 1000; ++i) {
    const double x = g(rng), y = g(rng), c = shift(rng);
    CHECK(p_aam(x, x) == 0.5);
    CHECK(p_aam(x, y) + p_ground(x, y) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(p_aam(x + c, y + c) - p_aam(x, y)) <= 1e-12);
    const double p = p_aam(x, y, 0.05);
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
    // strict monotonicity where the logit is not saturated
    CHECK(p_aam(x, y + 1.0, 0.05) > p);
    CHECK(p_aam(x + 1.0, y, 0.05) < p);
  }
}

TEST_CASE("classify_range uses the 150/800 km limits") {
  CHECK(classify_range(100 * geo::kMilesPerKm) == RangeClass::UAM);
  CHECK(classify_range(400 * geo::kMilesPerKm) == RangeClass::RAM);
  CHECK(classify_range(900 * geo::kMilesPerKm) == RangeClass::OUT_OF_RANGE);
  CHECK(classify_range(93.2) == RangeClass::UAM);
  CHECK(classify_range(93.21) == RangeClass::RAM);
  CHECK(classify_range(497.09) == RangeClass::RAM);
  CHECK(classify_range(497.1) == RangeClass::OUT_OF_RANGE);
  CHECK(classify_range(0.0) == RangeClass::AAM_INFEASIBLE);
}

TEST_CASE("classify_range is monotone in distance") {
  int prev = 0;
  for (double d = 0.5; d < 700; d += 0.5) {
    const int cls = static_cast<int>(classify_range(d));
    CHECK(cls >= prev);
    prev = cls;
  }
}

TEST_CASE("decide") {
  CHECK(decide(0.5, {}) == Mode::GROUND);
  CHECK(decide(0.9, {}) == Mode::AAM);
  CHECK(decide(0.3, {DecisionRule::Kind::THRESHOLD, 0.2, 0}) == Mode::AAM);
  CHECK(decide_with_draw(0.3, 0.1) == Mode::AAM);
  CHECK(decide_with_draw(0.3, 0.3) == Mode::GROUND);

  // first uniform draws of seeds 1 and 2, recorded once
  CHECK(RandomStream(1).uniform() == 0.13387664401253269);
  CHECK(RandomStream(2).uniform() == 0.90360402619399438);
  const DecisionRule sample{DecisionRule::Kind::SAMPLE, 0.5, 1};
  CHECK(decide(0.3, sample) == Mode::AAM);
  CHECK(decide(0.3, sample) == decide(0.3, sample));
  CHECK(decide(0.3, {DecisionRule::Kind::SAMPLE, 0.5, 2}) == Mode::GROUND);
}

TEST_CASE("random streams are reproducible and in range") {
  RandomStream a(123), b(123);
  for (int i = 0; i < 1000; ++i) {
    const double u = a.uniform();
    CHECK(u == b.uniform());
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 5) == derive_seed(1, 5));
  CHECK(derive_seed(1, 5) != derive_seed(2, 5));
}

TEST_CASE("sample_utilities adds Gumbel noise to each GCT") {
  const auto s = sample_utilities(-100, -80, 99);
  CHECK(s.u_ground == -100 + s.epsilon_ground);
  CHECK(s.u_aam == -80 + s.epsilon_aam);
  const auto again = sample_utilities(-100, -80, 99);
  CHECK(again.epsilon_ground == s.epsilon_ground);
  CHECK(again.epsilon_aam == s.epsilon_aam);
}

TEST_CASE("Gumbel win-rate matches the logit") {
  CHECK(win_rate(-50, -50, 1, 100000) == doctest::Approx(0.5).epsilon(0.02));
  CHECK(std::abs(win_rate(std::log(3.0), 0.0, 2, 100000) - 0.25) <= 0.01);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> diff(-4, 4);
  for (int i = 0; i < 10; ++i) {
    const double d = diff(rng);
    const double p = p_aam(d, 0.0);
    const double sigma = std::sqrt(p * (1 - p) / 100000);
    CHECK(std::abs(win_rate(d, 0.0, 100 + i, 100000) - p) <= 3 * sigma);
  }
  // scaled logit corresponds to Gumbel noise divided by the scale
  const double p = p_aam(-40, -10, 0.05);
  const double sigma = std::sqrt(p * (1 - p) / 100000);
  CHECK(std::abs(win_rate(-40, -10, 55, 100000, 0.05) - p) <= 3 * sigma);
}

TEST_CASE("air_share") {
  const auto air = gct(150, 30, 1, 0.3);
  const auto total = gct(170, 30, 1.5, 3.3);
  CHECK(air_share(air, total) == doctest::Approx(180.3 / 218.3));
  CHECK(air_share(air, air) == 1.0);
  CHECK(air_share(gct(0, 0, 0, 0), gct(0, 0, 0, 0)) == 0.0);
}
