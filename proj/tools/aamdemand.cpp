#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "aam/commands.hpp"
#include "aam/error.hpp"

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"AAM mode-choice demand engine"};
  app.require_subcommand(1);

  aam::commands::CalibrateOptions cal;
  auto* calibrate = app.add_subcommand("calibrate", "Fit fare and block-time models");
  calibrate->add_option("--fares", cal.fares, "Fare samples CSV")->required();
  calibrate->add_option("--blocktimes", cal.blocktimes, "Block-time samples CSV")->required();
  calibrate->add_option("--out", cal.out, "Output models JSON")->required();
  calibrate->add_option("--degree", cal.blocktime_degree, "Block-time polynomial degree")
      ->capture_default_str();
  calibrate->add_option("--min-block-h", cal.min_block_h, "Lower clamp on block time (hours)")
      ->capture_default_str();

  aam::commands::EvaluateOptions ev;
  int workers = 0;
  long long seed = -1;
  auto* evaluate = app.add_subcommand("evaluate", "Evaluate mode choice for every trip");
  evaluate->add_option("--trips", ev.trips, "Trip demand CSV")->required();
  evaluate->add_option("--tracts", ev.tracts, "Census tract CSV")->required();
  evaluate->add_option("--hubs", ev.hubs, "Hub airport CSV")->required();
  evaluate->add_option("--models", ev.models, "Models JSON from calibrate")->required();
  evaluate->add_option("--params", ev.params, "Economic params key=value file")->required();
  evaluate->add_option("--config", ev.config, "Run config key=value file");
  evaluate->add_option("--out", ev.out, "Output evaluations CSV")->required();
  evaluate->add_option("--workers", workers, "Worker threads (overrides config)");
  evaluate->add_option("--seed", seed, "Run seed (overrides config)");

  std::string evals_path;
  std::string out_dir;
  auto* report = app.add_subcommand("report", "Aggregate means and demographic shares");
  report->add_option("--evals", evals_path, "Evaluations CSV")->required();
  report->add_option("--out-dir", out_dir, "Output directory")->required();

  aam::commands::CurvesOptions cur;
  auto* curves = app.add_subcommand("curves", "Emit GCT / probability / air-share curves");
  curves->add_option("--models", cur.models, "Models JSON")->required();
  curves->add_option("--params", cur.params, "Economic params key=value file")->required();
  curves->add_option("--config", cur.config, "Run config key=value file");
  curves->add_option("--grid", cur.grid, "start:stop:step or comma list (miles)")
      ->capture_default_str();
  curves->add_option("--out", cur.out, "Output curves CSV")->required();

  aam::commands::SynthOptions syn;
  auto* synth = app.add_subcommand("synth", "Write a synthetic input dataset");
  synth->add_option("--out-dir", syn.out_dir, "Output directory")->required();
  synth->add_option("--tracts", syn.tracts, "Number of tracts")->capture_default_str();
  synth->add_option("--trips", syn.trips, "Number of trip rows")->capture_default_str();
  synth->add_option("--seed", syn.seed, "Generator seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitValidation;
  }

  try {
    if (*calibrate) {
      const auto m = aam::commands::run_calibrate(cal);
      std::printf("fare: ln a = %.6f, b = %.6f; blocktime degree %d\n", m.fare.log_intercept,
                  m.fare.log_slope, m.blocktime.poly.degree());
    } else if (*evaluate) {
      if (workers > 0) ev.workers = workers;
      if (seed >= 0) ev.seed = static_cast<std::uint64_t>(seed);
      const auto s = aam::commands::run_evaluate(ev);
      std::printf("evaluated %zu trips, %zu chose AAM\n", s.trips, s.aam_chosen);
    } else if (*report) {
      aam::commands::run_report(evals_path, out_dir);
    } else if (*curves) {
      const auto b = aam::commands::run_curves(cur);
      if (b.crossing_distance_mi) {
        std::printf("p_aam crosses 0.5 at %.1f mi\n", *b.crossing_distance_mi);
      } else {
        std::printf("p_aam never crosses 0.5 on this grid\n");
      }
    } else if (*synth) {
      aam::commands::run_synth(syn);
    }
  } catch (const aam::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const aam::RoutingError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const aam::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return 0;
}
