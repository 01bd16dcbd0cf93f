#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "aam/calibrate.hpp"
#include "aam/error.hpp"

using namespace aam;
using namespace aam::calibrate;

namespace {

// Closed-form simple linear regression, the independent route for degree 1.
std::pair<double, double> simple_linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  const double slope = sxy / sxx;
  return {my - slope * mx, slope};
}

double max_relative_orthogonality(const std::vector<double>& x, const std::vector<double>& y,
                                  const PolynomialModel& m) {
  double y_norm = 0.0;
  for (double v : y) y_norm += v * v;
  y_norm = std::sqrt(y_norm);
  double worst = 0.0;
  for (int j = 0; j <= m.degree(); ++j) {
    double dot = 0.0, col = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double xj = std::pow(x[i], j);
      dot += xj * (y[i] - m(x[i]));
      col += xj * xj;
    }
    worst = std::max(worst, std::abs(dot) / (std::sqrt(col) * y_norm));
  }
  return worst;
}

} // namespace

TEST_CASE("fit_polynomial: exact line, constant and parabola") {
  const std::vector<double> x{0, 1, 2, 3, 4};
  std::vector<double> y;
  for (double v : x) y.push_back(2 * v + 1);
  auto line = fit_polynomial(x, y, 1);
  CHECK(line.coefficients[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(line.coefficients[1] == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(line.domain_min_mi == 0.0);
  CHECK(line.domain_max_mi == 4.0);

  const std::vector<double> xs3{1, 2, 3};
  const std::vector<double> ys3{1, 2, 3};
  const auto constant = fit_polynomial(xs3, ys3, 0);
  REQUIRE(constant.coefficients.size() == 1);
  CHECK(constant.coefficients[0] == doctest::Approx(2.0).epsilon(1e-12));

  std::vector<double> sq;
  for (double v : x) sq.push_back(v * v);
  const auto parabola = fit_polynomial(x, sq, 2);
  CHECK(std::abs(parabola.coefficients[0]) < 1e-9);
  CHECK(std::abs(parabola.coefficients[1]) < 1e-9);
  CHECK(parabola.coefficients[2] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("fit_polynomial: insufficient or degenerate samples") {
  const std::vector<double> x{1, 1, 1};
  const std::vector<double> y{1, 2, 3};
  CHECK_THROWS_AS(fit_polynomial(x, y, 1), CalibrationError);
  CHECK_THROWS_AS(fit_polynomial(std::vector<double>{1, 2}, std::vector<double>{1, 2}, 2),
                  CalibrationError);
  CHECK_THROWS_AS(fit_polynomial(std::vector<double>{1, 2}, std::vector<double>{1}, 1),
                  CalibrationError);
  CHECK_THROWS_AS(fit_polynomial(std::vector<double>{1, NAN}, std::vector<double>{1, 2}, 1),
                  CalibrationError);
}

TEST_CASE("fit_polynomial: residual is orthogonal to the design columns") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> d(50, 1200);
  std::normal_distribution<double> noise(0, 0.05);
  for (int degree = 0; degree <= 3; ++degree) {
    std::vector<double> x, y;
    for (int i = 0; i < 200; ++i) {
      x.push_back(d(rng));
      y.push_back(0.4 + 0.002 * x.back() + 1e-7 * x.back() * x.back() + noise(rng));
    }
    const auto m = fit_polynomial(x, y, degree);
    CHECK(max_relative_orthogonality(x, y, m) <= 1e-8);
  }
}

TEST_CASE("fit_polynomial: duplicating a sample leaves an exact fit unchanged") {
  std::vector<double> x{100, 200, 300, 400};
  std::vector<double> y;
  for (double v : x) y.push_back(0.5 + 0.002 * v);
  const auto before = fit_polynomial(x, y, 1);
  x.push_back(200);
  y.push_back(0.5 + 0.002 * 200);
  const auto after = fit_polynomial(x, y, 1);
  CHECK(after.coefficients[0] == doctest::Approx(before.coefficients[0]).epsilon(1e-12));
  CHECK(after.coefficients[1] == doctest::Approx(before.coefficients[1]).epsilon(1e-12));
}

TEST_CASE("fit_polynomial: over-parameterized fits reproduce the data") {
  std::vector<double> x, y;
  for (int i = 1; i <= 12; ++i) {
    x.push_back(50.0 * i);
    y.push_back(0.3 + 0.0015 * x.back());
  }
  for (int degree = 1; degree <= 3; ++degree) {
    const auto m = fit_polynomial(x, y, degree);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(m(x[i]) - y[i]) <= 1e-7);
  }
}

TEST_CASE("fit_fare_model: noiseless power law matches the two-point solve") {
  std::vector<ingest::FareSample> s;
  for (double d : {100.0, 200.0, 400.0}) s.push_back({d, 10.0 * std::pow(d, -0.5) * d});
  // two-point oracle on the first pair
  const double b = std::log((s[1].fare_usd / s[1].distance_mi) / (s[0].fare_usd / s[0].distance_mi)) /
                   std::log(s[1].distance_mi / s[0].distance_mi);
  const double ln_a = std::log(s[0].fare_usd / s[0].distance_mi) - b * std::log(s[0].distance_mi);
  const auto m = fit_fare_model(s);
  CHECK(m.log_slope == doctest::Approx(b).epsilon(1e-9));
  CHECK(m.log_slope == doctest::Approx(-0.5).epsilon(1e-9));
  CHECK(std::exp(m.log_intercept) == doctest::Approx(10.0).epsilon(1e-9));
  CHECK(m.log_intercept == doctest::Approx(ln_a).epsilon(1e-9));
  CHECK(m.domain_min_mi == 100.0);
  CHECK(m.domain_max_mi == 400.0);
}

TEST_CASE("fit_fare_model: flat per-mile cost and precondition failures") {
  const std::vector<ingest::FareSample> flat{{100, 200}, {300, 600}, {50, 100}};
  const auto m = fit_fare_model(flat);
  CHECK(std::abs(m.log_slope) < 1e-12);
  CHECK(std::exp(m.log_intercept) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_THROWS_AS(fit_fare_model(std::vector<ingest::FareSample>{{100, 50}}), CalibrationError);
  CHECK_THROWS_AS(fit_fare_model(std::vector<ingest::FareSample>{{100, 50}, {100, 60}}),
                  CalibrationError);
  CHECK_THROWS_AS(fit_fare_model(std::vector<ingest::FareSample>{{100, 50}, {200, -1}}),
                  CalibrationError);
}

TEST_CASE("fit_fare_model: decreasing cost per mile gives a negative slope") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> step(5, 150);
  std::uniform_real_distribution<double> drop(0.01, 0.3);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<ingest::FareSample> s;
    double d = 20.0, fpm = 3.0;
    const int n = 2 + trial % 10;
    for (int i = 0; i < n; ++i) {
      s.push_back({d, fpm * d});
      d += step(rng);
      fpm *= 1.0 - drop(rng);
    }
    CHECK(fit_fare_model(s).log_slope < 0.0);
  }
}

TEST_CASE("fit_blocktime_model: linear data recovered by a quadratic fit") {
  std::vector<ingest::BlockTimeSample> s;
  std::vector<double> x, y;
  for (double d = 100; d <= 1000; d += 75) {
    s.push_back({d, 0.5 + 0.002 * d});
    x.push_back(d);
    y.push_back(0.5 + 0.002 * d);
  }
  const auto [c0, c1] = simple_linear_fit(x, y);
  const auto m = fit_blocktime_model(s);
  REQUIRE(m.poly.degree() == 2);
  CHECK(m.poly.coefficients[0] == doctest::Approx(c0).epsilon(1e-7));
  CHECK(m.poly.coefficients[1] == doctest::Approx(c1).epsilon(1e-7));
  CHECK(std::abs(m.poly.coefficients[0] - 0.5) < 1e-7);
  CHECK(std::abs(m.poly.coefficients[1] - 0.002) < 1e-7);
  CHECK(std::abs(m.poly.coefficients[2]) < 1e-7);
  CHECK(m.min_block_h == kDefaultMinBlockH);
}

TEST_CASE("fit_blocktime_model: single distance is degenerate") {
  const std::vector<ingest::BlockTimeSample> s{{300, 1.0}, {300, 1.1}, {300, 0.9}};
  CHECK_THROWS_AS(fit_blocktime_model(s), CalibrationError);
}

TEST_CASE("predict_block: interior predictions bracket neighbouring samples") {
  std::vector<ingest::BlockTimeSample> s;
  for (double d = 100; d <= 900; d += 100) s.push_back({d, 0.4 + 0.0018 * d + 2e-7 * d * d});
  const auto m = fit_blocktime_model(s);
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    const double mid = 0.5 * (s[i].distance_mi + s[i + 1].distance_mi);
    const auto p = predict_block(m, mid);
    CHECK(p.value > s[i].block_h);
    CHECK(p.value < s[i + 1].block_h);
    CHECK_FALSE(p.extrapolated);
  }
}

TEST_CASE("average_values") {
  CHECK(average_values(std::vector<double>{10}) == 10.0);
  CHECK(average_values(std::vector<double>{1, 3}) == 2.0);
  CHECK(average_values(std::vector<double>{11.6e6, 12.4e6}) == doctest::Approx(12.0e6));
  CHECK_THROWS_AS(average_values(std::vector<double>{}), CalibrationError);
}

TEST_CASE("predictions") {
  const FareModel fare{std::log(10.0), -0.5, 50, 500};
  const auto f = predict_fare(fare, 100);
  CHECK(f.value == doctest::Approx(100.0).epsilon(1e-12));
  CHECK_FALSE(f.extrapolated);
  CHECK(predict_fare(fare, 1000).extrapolated);
  CHECK_THROWS_AS(predict_fare(fare, 0), InputError);

  BlockTimeModel bt{{{0.5, 0.002, 0.0}, 100, 1000}, 0.25};
  const auto b = predict_block(bt, 250);
  CHECK(b.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_FALSE(b.extrapolated);
  CHECK_THROWS_AS(predict_block(bt, -5), InputError);

  BlockTimeModel dipping{{{-0.3, 0.004, 0.0}, 50, 1000}, 0.25};
  const auto tiny = predict_block(dipping, 5);
  CHECK(tiny.value == 0.25);
  CHECK(tiny.extrapolated);
}

TEST_CASE("model JSON round-trips") {
  const ModelBundle m{{4.65, -0.8, 60, 1200}, {{{0.45, 0.0021, 1.5e-7}, 60, 1200}, 0.25}};
  CHECK(models_from_json(models_to_json(m)) == m);
  CHECK_THROWS_AS(models_from_json("{\"fare\": {}}"), InputError);
  CHECK_THROWS_AS(models_from_json("not json"), InputError);
}
