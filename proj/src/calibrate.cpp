#include "aam/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <Eigen/Dense>
#include <json.hpp>

#include "aam/error.hpp"
#include "aam/text.hpp"

namespace aam::calibrate {

double PolynomialModel::operator()(double x) const {
  double acc = 0.0;
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) {
    acc = acc * x + *it;
  }
  return acc;
}

PolynomialModel fit_polynomial(std::span<const double> xs, std::span<const double> ys,
                               int degree) {
  if (degree < 0) throw CalibrationError("polynomial degree must be >= 0");
  if (xs.size() != ys.size()) {
    throw CalibrationError("sample size mismatch: " + std::to_string(xs.size()) + " x values, " +
                           std::to_string(ys.size()) + " y values");
  }
  const auto n = xs.size();
  const auto cols = static_cast<std::size_t>(degree) + 1;
  if (n < cols) {
    throw CalibrationError("insufficient samples: degree " + std::to_string(degree) + " needs " +
                           std::to_string(cols) + ", got " + std::to_string(n));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) {
      throw CalibrationError("non-finite sample at index " + std::to_string(i));
    }
  }
  const std::set<double> distinct(xs.begin(), xs.end());
  if (distinct.size() < cols) {
    throw CalibrationError("degenerate design: degree " + std::to_string(degree) + " needs " +
                           std::to_string(cols) + " distinct x values, got " +
                           std::to_string(distinct.size()));
  }

  Eigen::MatrixXd design(n, cols);
  Eigen::VectorXd rhs(n);
  for (std::size_t i = 0; i < n; ++i) {
    double p = 1.0;
    for (std::size_t j = 0; j < cols; ++j) {
      design(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = p;
      p *= xs[i];
    }
    rhs(static_cast<Eigen::Index>(i)) = ys[i];
  }
  // Power columns differ by orders of magnitude; equilibrate before the QR.
  Eigen::VectorXd scale = design.colwise().norm().transpose();
  for (Eigen::Index j = 0; j < scale.size(); ++j) {
    if (scale(j) == 0.0) scale(j) = 1.0;
  }
  const Eigen::MatrixXd scaled = design * scale.cwiseInverse().asDiagonal();
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(scaled);
  if (qr.rank() < static_cast<Eigen::Index>(cols)) {
    throw CalibrationError("degenerate design: rank " + std::to_string(qr.rank()) + " < " +
                           std::to_string(cols));
  }
  const Eigen::VectorXd sol = qr.solve(rhs).cwiseQuotient(scale);

  PolynomialModel model;
  model.coefficients.assign(sol.data(), sol.data() + sol.size());
  for (double c : model.coefficients) {
    if (!std::isfinite(c)) throw CalibrationError("fit produced non-finite coefficients");
  }
  const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
  model.domain_min_mi = *lo;
  model.domain_max_mi = *hi;
  return model;
}

FareModel fit_fare_model(std::span<const ingest::FareSample> samples) {
  std::vector<double> log_d;
  std::vector<double> log_fpm;
  log_d.reserve(samples.size());
  log_fpm.reserve(samples.size());
  for (const auto& s : samples) {
    if (!(s.distance_mi > 0.0) || !(s.fare_usd > 0.0)) {
      throw CalibrationError("fare samples must have positive distance and fare");
    }
    log_d.push_back(std::log(s.distance_mi));
    log_fpm.push_back(std::log(s.fare_usd / s.distance_mi));
  }
  if (std::set<double>(log_d.begin(), log_d.end()).size() < 2) {
    throw CalibrationError("fare model needs at least 2 distinct distances");
  }
  const auto poly = fit_polynomial(log_d, log_fpm, 1);
  FareModel model;
  model.log_intercept = poly.coefficients[0];
  model.log_slope = poly.coefficients[1];
  const auto [lo, hi] = std::minmax_element(
      samples.begin(), samples.end(),
      [](const auto& a, const auto& b) { return a.distance_mi < b.distance_mi; });
  model.domain_min_mi = lo->distance_mi;
  model.domain_max_mi = hi->distance_mi;
  return model;
}

BlockTimeModel fit_blocktime_model(std::span<const ingest::BlockTimeSample> samples, int degree,
                                   double min_block_h) {
  if (!(min_block_h >= 0.0)) throw CalibrationError("min_block_h must be non-negative");
  std::vector<double> xs;
  std::vector<double> ys;
  xs.reserve(samples.size());
  ys.reserve(samples.size());
  for (const auto& s : samples) {
    if (!(s.distance_mi > 0.0) || !(s.block_h > 0.0)) {
      throw CalibrationError("block time samples must have positive distance and time");
    }
    xs.push_back(s.distance_mi);
    ys.push_back(s.block_h);
  }
  return {fit_polynomial(xs, ys, degree), min_block_h};
}

double average_values(std::span<const double> values) {
  if (values.empty()) throw CalibrationError("cannot average an empty list");
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

Prediction predict_fare(const FareModel& model, double distance_mi) {
  if (!(distance_mi > 0.0)) throw InputError("fare prediction needs a positive distance");
  const double per_mile = std::exp(model.log_intercept + model.log_slope * std::log(distance_mi));
  return {per_mile * distance_mi,
          distance_mi < model.domain_min_mi || distance_mi > model.domain_max_mi};
}

Prediction predict_block(const BlockTimeModel& model, double distance_mi) {
  if (!(distance_mi > 0.0)) throw InputError("block time prediction needs a positive distance");
  return {std::max(model.poly(distance_mi), model.min_block_h),
          distance_mi < model.poly.domain_min_mi || distance_mi > model.poly.domain_max_mi};
}

namespace {

using nlohmann::json;

json domain(double lo, double hi) { return json::array({lo, hi}); }

double number_at(const json& j, const char* key, const std::string& source) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    throw InputError(source + ": missing numeric field '" + key + "'");
  }
  return j.at(key).get<double>();
}

std::vector<double> numbers(const json& j, const char* key, const std::string& source) {
  if (!j.contains(key) || !j.at(key).is_array()) {
    throw InputError(source + ": missing array '" + key + "'");
  }
  std::vector<double> out;
  for (const auto& v : j.at(key)) {
    if (!v.is_number()) throw InputError(source + ": non-numeric entry in '" + key + "'");
    out.push_back(v.get<double>());
  }
  return out;
}

} // namespace

std::string models_to_json(const ModelBundle& m) {
  json j;
  j["fare"] = {{"form", "power_law_per_mile"},
               {"coefficients", {m.fare.log_intercept, m.fare.log_slope}},
               {"domain_mi", domain(m.fare.domain_min_mi, m.fare.domain_max_mi)}};
  j["blocktime"] = {{"form", "polynomial"},
                    {"coefficients", m.blocktime.poly.coefficients},
                    {"domain_mi", domain(m.blocktime.poly.domain_min_mi,
                                         m.blocktime.poly.domain_max_mi)},
                    {"min_block_h", m.blocktime.min_block_h}};
  return j.dump(2) + "\n";
}

ModelBundle models_from_json(const std::string& text, const std::string& source) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(source + ": " + e.what());
  }
  if (!j.is_object() || !j.contains("fare") || !j.contains("blocktime")) {
    throw InputError(source + ": expected 'fare' and 'blocktime' objects");
  }
  ModelBundle m;
  const auto fare = numbers(j["fare"], "coefficients", source);
  if (fare.size() != 2) throw InputError(source + ": fare needs 2 coefficients");
  const auto fare_dom = numbers(j["fare"], "domain_mi", source);
  if (fare_dom.size() != 2) throw InputError(source + ": fare domain_mi needs 2 entries");
  m.fare = {fare[0], fare[1], fare_dom[0], fare_dom[1]};

  m.blocktime.poly.coefficients = numbers(j["blocktime"], "coefficients", source);
  if (m.blocktime.poly.coefficients.empty()) {
    throw InputError(source + ": blocktime needs at least one coefficient");
  }
  const auto bt_dom = numbers(j["blocktime"], "domain_mi", source);
  if (bt_dom.size() != 2) throw InputError(source + ": blocktime domain_mi needs 2 entries");
  m.blocktime.poly.domain_min_mi = bt_dom[0];
  m.blocktime.poly.domain_max_mi = bt_dom[1];
  m.blocktime.min_block_h = number_at(j["blocktime"], "min_block_h", source);
  return m;
}

ModelBundle load_models(const std::string& path) {
  return models_from_json(text::read_file(path), path);
}

} // namespace aam::calibrate
