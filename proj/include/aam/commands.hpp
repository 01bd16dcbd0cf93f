#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "aam/pipeline.hpp"

// Implementations behind the CLI subcommands. Each throws aam::Error
// subclasses; the CLI maps them to exit codes.
namespace aam::commands {

struct CalibrateOptions {
  std::string fares;
  std::string blocktimes;
  std::string out;
  int blocktime_degree = calibrate::kDefaultBlockDegree;
  double min_block_h = calibrate::kDefaultMinBlockH;
};

calibrate::ModelBundle run_calibrate(const CalibrateOptions& opts);

struct EvaluateOptions {
  std::string trips;
  std::string tracts;
  std::string hubs;
  std::string models;
  std::string params;
  std::string config;                 // optional key=value file
  std::string out;
  std::optional<int> workers;         // overrides config
  std::optional<std::uint64_t> seed;  // overrides config
};

struct EvaluateSummary {
  std::size_t trips = 0;
  std::size_t aam_chosen = 0;
  std::string metadata_path;
};

/// Writes the evaluations CSV to opts.out and run metadata JSON next to it
/// (`<out>.meta.json`).
EvaluateSummary run_evaluate(const EvaluateOptions& opts);

/// Writes means.csv and shares.csv into out_dir (created if missing).
void run_report(const std::string& evals_path, const std::string& out_dir);

struct CurvesOptions {
  std::string models;
  std::string params;
  std::string config;
  std::string grid = "10:800:10";
  std::string out;
};

/// Writes the curve CSV and `<out>.meta.json` with the crossing distance.
pipeline::CurveBundle run_curves(const CurvesOptions& opts);

struct SynthOptions {
  std::string out_dir;
  std::size_t tracts = 200;
  std::size_t trips = 1000;
  std::size_t fare_samples = 400;
  std::size_t blocktime_samples = 400;
  std::uint64_t seed = 2024;
};

/// Writes tracts.csv, hubs.csv, trips.csv, fares.csv, blocktimes.csv and
/// params.txt into out_dir.
void run_synth(const SynthOptions& opts);

/// Builds the run configuration the way `evaluate` and `curves` do.
pipeline::RunConfig load_run_config(const std::string& params_path, const std::string& config_path);

} // namespace aam::commands
