#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "geodetect/runner.hpp"

namespace {

using geodetect::MeasureKind;
using geodetect::RunOptions;

struct CommonArgs {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::optional<int> calibration_trials;
  std::optional<int> guard_cells;
  std::optional<double> pf;
  std::vector<std::string> measures;
  bool enhanced = false;
  std::optional<int> reduced_dim;
  std::vector<double> scr_db;
};

void add_common(CLI::App* cmd, CommonArgs& args, const std::string& default_out) {
  args.out = default_out;
  cmd->add_option("--config", args.config,
                  "scenario file, flat key=value lines with # comments");
  cmd->add_option("--out", args.out, "output CSV path")->capture_default_str();
  cmd->add_option("--seed", args.seed, "base RNG seed");
  cmd->add_option("--trials", args.trials, "evaluation trials per grid point");
  cmd->add_option("--calibration-trials", args.calibration_trials,
                  "clutter-only trials used to pin the threshold");
  cmd->add_option("--guard-cells", args.guard_cells,
                  "cells dropped on each side of the cell under test");
  cmd->add_option("--pf", args.pf, "false-alarm probability");
  cmd->add_option("--measure", args.measures,
                  "measure to run (rd, kld, jsd, ldd); repeatable");
  cmd->add_flag("--enhanced", args.enhanced,
                "use the reduced-dimension statistic");
  cmd->add_option("--n", args.reduced_dim, "reduced dimension for --enhanced");
  cmd->add_option("--scr-db", args.scr_db,
                  "signal-to-clutter grid in dB; repeatable");
}

RunOptions assemble(const CommonArgs& args) {
  RunOptions options = args.config.empty()
                           ? RunOptions{}
                           : geodetect::load_run_options(args.config);
  if (args.seed) {
    options.scenario.seed = *args.seed;
  }
  if (args.trials) {
    options.trials = *args.trials;
  }
  if (args.calibration_trials) {
    options.calibration_trials = *args.calibration_trials;
  }
  if (args.guard_cells) {
    options.guard_cells = *args.guard_cells;
  }
  if (args.pf) {
    options.scenario.pf = *args.pf;
  }
  if (!args.measures.empty()) {
    options.measures.clear();
    for (const std::string& name : args.measures) {
      options.measures.push_back(geodetect::measure_kind_from_string(name));
    }
  }
  if (args.enhanced) {
    options.enhanced = true;
  }
  if (args.reduced_dim) {
    options.reduced_dim = *args.reduced_dim;
  }
  if (!args.scr_db.empty()) {
    options.scenario.scr_grid_db = args.scr_db;
  }
  return options;
}

void default_grid(RunOptions& options, std::initializer_list<double> grid) {
  if (options.scenario.scr_grid_db.empty()) {
    options.scenario.scr_grid_db = grid;
  }
}

void report(const std::string& path, std::size_t rows) {
  std::cout << "wrote " << rows << " rows to " << path << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"matrix-CFAR detector studies on the covariance manifold"};
  app.require_subcommand(1);

  CommonArgs sweep_args;
  CLI::App* sweep = app.add_subcommand(
      "pd-sweep", "detection probability over an SCR grid");
  add_common(sweep, sweep_args, "pd_sweep.csv");

  CommonArgs ordering_args;
  std::vector<int> ordering_bandwidths = {1, 2, 3, 4, 5};
  CLI::App* ordering = app.add_subcommand(
      "ordering", "mean statistic versus target bandwidth");
  add_common(ordering, ordering_args, "ordering.csv");
  ordering
      ->add_option("--bandwidth", ordering_bandwidths,
                   "target bandwidths to compare; repeatable")
      ->capture_default_str();

  CommonArgs enhance_args;
  std::vector<int> enhance_bandwidths = {1, 2, 3};
  std::vector<int> enhance_dims = {0, 1, 2, 3};
  CLI::App* enhance = app.add_subcommand(
      "enhance-study", "detection probability across reduced dimensions");
  add_common(enhance, enhance_args, "enhance_study.csv");
  enhance
      ->add_option("--bandwidth", enhance_bandwidths,
                   "target bandwidths; repeatable")
      ->capture_default_str();
  enhance
      ->add_option("--dims", enhance_dims,
                   "reduced dimensions, 0 = unenhanced baseline; repeatable")
      ->capture_default_str();

  CommonArgs analyze_args;
  std::vector<double> analyze_sigma2 = {0.1, 1.0, 10.0};
  CLI::App* analyze = app.add_subcommand(
      "analyze", "extremal target spectra of the adjusted potentials");
  add_common(analyze, analyze_args, "analysis.csv");
  analyze
      ->add_option("--sigma2", analyze_sigma2,
                   "per-bin relative target powers; repeatable")
      ->capture_default_str();

  CommonArgs calibrate_args;
  CLI::App* calibrate = app.add_subcommand(
      "calibrate", "clutter-only threshold for the configured detector");
  add_common(calibrate, calibrate_args, "calibration.csv");

  try {
    app.parse(argc, argv);

    if (sweep->parsed()) {
      RunOptions options = assemble(sweep_args);
      default_grid(options, {0.0, 2.0, 4.0, 6.0, 8.0, 10.0});
      const auto rows = geodetect::run_pd_sweep(options);
      geodetect::write_sweep_csv(sweep_args.out, rows);
      geodetect::write_manifest(sweep_args.out, "pd-sweep", options, rows.size());
      report(sweep_args.out, rows.size());
    } else if (ordering->parsed()) {
      RunOptions options = assemble(ordering_args);
      default_grid(options, {0.0, 5.0, 10.0});
      const auto rows =
          geodetect::run_measure_ordering(options, ordering_bandwidths);
      geodetect::write_ordering_csv(ordering_args.out, rows);
      geodetect::write_manifest(ordering_args.out, "ordering", options,
                                rows.size());
      report(ordering_args.out, rows.size());
    } else if (enhance->parsed()) {
      RunOptions options = assemble(enhance_args);
      if (enhance_args.measures.empty() && enhance_args.config.empty()) {
        options.measures = {MeasureKind::LogDet};
      }
      default_grid(options, {0.0, 2.0, 4.0, 6.0, 8.0, 10.0});
      const auto rows = geodetect::run_enhancement_study(
          options, enhance_bandwidths, enhance_dims);
      geodetect::write_enhancement_csv(enhance_args.out, rows);
      geodetect::write_manifest(enhance_args.out, "enhance-study", options,
                                rows.size());
      report(enhance_args.out, rows.size());
    } else if (analyze->parsed()) {
      RunOptions options = assemble(analyze_args);
      const auto rows = geodetect::run_analysis_report(options, analyze_sigma2);
      geodetect::write_analysis_csv(analyze_args.out, rows);
      geodetect::write_manifest(analyze_args.out, "analyze", options,
                                rows.size());
      report(analyze_args.out, rows.size());
    } else if (calibrate->parsed()) {
      RunOptions options = assemble(calibrate_args);
      const auto rows = geodetect::run_calibration(options);
      geodetect::write_calibration_csv(calibrate_args.out, rows);
      geodetect::write_manifest(calibrate_args.out, "calibrate", options,
                                rows.size());
      report(calibrate_args.out, rows.size());
    }
    return 0;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const geodetect::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const geodetect::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
