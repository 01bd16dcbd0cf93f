#include "aam/commands.hpp"

#include <filesystem>

#include <json.hpp>

#include "aam/error.hpp"
#include "aam/synthetic.hpp"
#include "aam/text.hpp"

namespace aam::commands {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json config_json(const pipeline::RunConfig& config) {
  json j = json::object();
  for (const auto& [k, v] : pipeline::describe(config)) j[k] = v;
  j["economic"] = {{"mileage_rate_usd_per_mi", config.economic.mileage_rate_usd_per_mi},
                   {"vsl_usd", config.economic.vsl_usd},
                   {"ground_fatalities_per_mi", config.economic.ground_fatalities_per_mi},
                   {"air_fatalities_per_mi", config.economic.air_fatalities_per_mi}};
  return j;
}

void ensure_parent(const std::string& path) {
  const auto parent = fs::path(path).parent_path();
  if (!parent.empty()) {
    std::error_code ec;
    fs::create_directories(parent, ec);
    if (ec) throw IoError("cannot create directory " + parent.string() + ": " + ec.message());
  }
}

} // namespace

pipeline::RunConfig load_run_config(const std::string& params_path,
                                    const std::string& config_path) {
  pipeline::RunConfig config;
  pipeline::apply_environment(config);
  const auto params = ingest::load_params(params_path);
  config.economic = params.economic;
  pipeline::apply_settings(config, params.overrides);
  if (!config_path.empty()) {
    pipeline::apply_settings(config,
                             ingest::parse_key_values(text::read_file(config_path), config_path));
  }
  config.router.earth = config.earth;
  pipeline::validate(config);
  return config;
}

calibrate::ModelBundle run_calibrate(const CalibrateOptions& opts) {
  const auto fares = ingest::load_fare_samples(opts.fares);
  const auto blocks = ingest::load_blocktime_samples(opts.blocktimes);
  calibrate::ModelBundle bundle{
      calibrate::fit_fare_model(fares),
      calibrate::fit_blocktime_model(blocks, opts.blocktime_degree, opts.min_block_h)};
  ensure_parent(opts.out);
  text::write_file(opts.out, calibrate::models_to_json(bundle));
  return bundle;
}

EvaluateSummary run_evaluate(const EvaluateOptions& opts) {
  auto config = load_run_config(opts.params, opts.config);
  if (opts.workers) config.workers = *opts.workers;
  if (opts.seed) config.decision.seed = *opts.seed;
  pipeline::validate(config);

  const auto models_text = text::read_file(opts.models);
  const auto models = calibrate::models_from_json(models_text, opts.models);
  const auto tracts = ingest::load_tracts(opts.tracts);
  const auto hubs = ingest::load_hubs(opts.hubs, config.dwell);
  const auto trips = ingest::load_trips(opts.trips, tracts);

  const router::Router router(config.router);
  const pipeline::EvalContext ctx(tracts, hubs, models, config, router);
  const auto evals = pipeline::evaluate_all(trips, ctx, config.workers);
  const auto records = pipeline::to_records(evals);
  router.save_cache();

  EvaluateSummary summary;
  summary.trips = records.size();
  for (const auto& r : records) {
    if (r.chosen == models::Mode::AAM) ++summary.aam_chosen;
  }

  ensure_parent(opts.out);
  text::write_file(opts.out, pipeline::write_evaluations(records));

  json meta;
  meta["command"] = "evaluate";
  meta["config"] = config_json(config);
  meta["models_fingerprint"] = pipeline::fingerprint(models_text);
  meta["inputs"] = {{"tracts", tracts.size()}, {"hubs", hubs.size()}, {"trips", trips.size()}};
  meta["results"] = {{"evaluated", summary.trips}, {"aam_chosen", summary.aam_chosen}};
  summary.metadata_path = opts.out + ".meta.json";
  text::write_file(summary.metadata_path, meta.dump(2) + "\n");
  return summary;
}

void run_report(const std::string& evals_path, const std::string& out_dir) {
  const auto records = pipeline::load_evaluations(evals_path);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create directory " + out_dir + ": " + ec.message());
  text::write_file((fs::path(out_dir) / "means.csv").string(),
                   pipeline::write_mean_table(pipeline::aggregate_means(records)));
  text::write_file((fs::path(out_dir) / "shares.csv").string(),
                   pipeline::write_share_table(pipeline::demographic_shares(records)));
}

pipeline::CurveBundle run_curves(const CurvesOptions& opts) {
  const auto config = load_run_config(opts.params, opts.config);
  const auto models_text = text::read_file(opts.models);
  const auto models = calibrate::models_from_json(models_text, opts.models);
  const auto grid = pipeline::parse_grid(opts.grid);
  auto bundle = pipeline::emit_curves(models, config, grid);

  ensure_parent(opts.out);
  text::write_file(opts.out, pipeline::write_curves(bundle));
  json meta;
  meta["command"] = "curves";
  meta["config"] = config_json(config);
  meta["grid"] = opts.grid;
  meta["models_fingerprint"] = pipeline::fingerprint(models_text);
  meta["crossing_distance_mi"] =
      bundle.crossing_distance_mi ? json(*bundle.crossing_distance_mi) : json(nullptr);
  meta["upward_crossings"] = bundle.upward_crossings;
  text::write_file(opts.out + ".meta.json", meta.dump(2) + "\n");
  return bundle;
}

void run_synth(const SynthOptions& opts) {
  std::error_code ec;
  fs::create_directories(opts.out_dir, ec);
  if (ec) throw IoError("cannot create directory " + opts.out_dir + ": " + ec.message());
  const fs::path dir(opts.out_dir);
  const auto hubs = synthetic::tennessee_hubs();
  const auto tracts = synthetic::generate_tracts(opts.tracts, opts.seed, hubs);
  const auto trips = synthetic::generate_trips(opts.trips, opts.seed + 1, tracts);
  text::write_file((dir / "hubs.csv").string(), ingest::write_hubs(hubs));
  text::write_file((dir / "tracts.csv").string(), ingest::write_tracts(tracts));
  text::write_file((dir / "trips.csv").string(), ingest::write_trips(trips));
  text::write_file((dir / "fares.csv").string(),
                   ingest::write_fare_samples(
                       synthetic::generate_fare_samples(opts.fare_samples, opts.seed + 2)));
  text::write_file((dir / "blocktimes.csv").string(),
                   ingest::write_blocktime_samples(synthetic::generate_blocktime_samples(
                       opts.blocktime_samples, opts.seed + 3)));
  text::write_file((dir / "params.txt").string(),
                   ingest::write_params(synthetic::reference_params()));
}

} // namespace aam::commands
