#pragma once

#include <span>
#include <string>
#include <vector>

#include "aam/ingest.hpp"

namespace aam::calibrate {

inline constexpr double kDefaultMinBlockH = 0.25;
inline constexpr int kDefaultBlockDegree = 2;

/// p(x) = c0 + c1 x + ... + ck x^k over the fitted sample range.
struct PolynomialModel {
  std::vector<double> coefficients;
  double domain_min_mi = 0.0;
  double domain_max_mi = 0.0;

  int degree() const { return static_cast<int>(coefficients.size()) - 1; }
  double operator()(double x) const;

  bool operator==(const PolynomialModel&) const = default;
};

/// Power-law cost per mile: fare_per_mile(d) = exp(log_intercept) * d^log_slope.
struct FareModel {
  double log_intercept = 0.0;
  double log_slope = 0.0;
  double domain_min_mi = 0.0;
  double domain_max_mi = 0.0;

  bool operator==(const FareModel&) const = default;
};

struct BlockTimeModel {
  PolynomialModel poly;
  double min_block_h = kDefaultMinBlockH;

  bool operator==(const BlockTimeModel&) const = default;
};

/// A model output plus whether the input fell outside the calibration domain.
struct Prediction {
  double value = 0.0;
  bool extrapolated = false;
};

/// Ordinary least squares polynomial fit via column-pivoted Householder QR on
/// a column-equilibrated Vandermonde design.
PolynomialModel fit_polynomial(std::span<const double> xs, std::span<const double> ys,
                               int degree);

FareModel fit_fare_model(std::span<const ingest::FareSample> samples);

BlockTimeModel fit_blocktime_model(std::span<const ingest::BlockTimeSample> samples,
                                   int degree = kDefaultBlockDegree,
                                   double min_block_h = kDefaultMinBlockH);

double average_values(std::span<const double> values);

/// Total fare in USD (per-mile rate times distance).
Prediction predict_fare(const FareModel& model, double distance_mi);

/// Block hours, clamped below by the model's min_block_h.
Prediction predict_block(const BlockTimeModel& model, double distance_mi);

struct ModelBundle {
  FareModel fare;
  BlockTimeModel blocktime;

  bool operator==(const ModelBundle&) const = default;
};

/// JSON model file: {"fare": {...}, "blocktime": {...}}.
std::string models_to_json(const ModelBundle& models);
ModelBundle models_from_json(const std::string& text, const std::string& source = "models");
ModelBundle load_models(const std::string& path);

} // namespace aam::calibrate
