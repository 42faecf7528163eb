#pragma once

// Study drivers behind the CLI subcommands: detection-probability sweeps,
// statistic-vs-bandwidth ordering, enhancement studies, the extremal-spectrum
// analysis report, and threshold calibration. Also owns deterministic CSV
// serialization (17 significant digits via to_chars, LF endings, no locale)
// and the JSON manifest sidecar written next to every CSV.
//
// Trial layout: thresholds are calibrated on clutter-only trials
// 0 .. calibration_trials-1; evaluation uses trials calibration_trials ..
// calibration_trials+trials-1. Every measure sees the same trials, so
// measure-vs-measure comparisons are paired.

#include <cstdint>
#include <string>
#include <vector>

#include "geodetect/detector.hpp"

namespace geodetect {

struct WilsonInterval {
  double lower = 0.0;
  double upper = 0.0;
};

// 95% score interval for a binomial proportion.
WilsonInterval wilson_interval(int successes, int trials);

struct RunOptions {
  Scenario scenario;
  std::vector<MeasureKind> measures = {MeasureKind::RiemannianDistance,
                                       MeasureKind::KullbackLeibler,
                                       MeasureKind::LogDet};
  bool enhanced = false;
  int reduced_dim = 1;
  int guard_cells = 0;
  int trials = 10000;
  int calibration_trials = 10000;
};

// Flat key=value config with '#' comments; unknown keys are ConfigErrors.
RunOptions load_run_options(const std::string& path);

struct SweepRow {
  MeasureKind measure;
  bool enhanced = false;
  int reduced_dim = 0;
  double scr_db = 0.0;
  double pd = 0.0;
  double pd_lower = 0.0;
  double pd_upper = 0.0;
  int trials = 0;
  double threshold = 0.0;
};

// Pd over the scenario's SCR grid for each configured measure. Infeasible
// detector configs (reduction too large for num_pulses) produce NaN rows
// instead of failing the whole run.
std::vector<SweepRow> run_pd_sweep(const RunOptions& options);

struct OrderingRow {
  MeasureKind measure;
  int bandwidth = 0;
  double scr_db = 0.0;
  double mean_statistic = 0.0;
  double normalized = 0.0;  // mean_statistic over the across-bandwidth mean
  int trials = 0;
};

// Statistic of bandwidth-k targets under the idealized model: the reference
// is exactly the true clutter covariance and the observed covariance adds
// the target's lag matrix, so every whitened eigenvalue sits at or above 1
// and the excess trace equals m * scr. The construction is deterministic;
// normalization divides per (measure, scr) by the across-bandwidth mean.
std::vector<OrderingRow> run_measure_ordering(const RunOptions& options,
                                              const std::vector<int>& bandwidths);

struct EnhancementStudyRow {
  MeasureKind measure;
  int bandwidth = 0;
  int reduced_dim = 0;  // 0 marks the unenhanced baseline detector
  double scr_db = 0.0;
  double pd = 0.0;
  double pd_lower = 0.0;
  double pd_upper = 0.0;
  int trials = 0;
  double threshold = 0.0;
};

// Pd of enhanced detectors across (bandwidth, reduced dimension) pairs;
// reduced_dim 0 runs the plain detector as the baseline.
std::vector<EnhancementStudyRow> run_enhancement_study(
    const RunOptions& options, const std::vector<int>& bandwidths,
    const std::vector<int>& reduced_dims);

struct AnalysisRow {
  MeasureKind measure;
  double sigma2 = 0.0;
  int k = 0;
  double value = 0.0;
  bool is_argmax = false;
  bool lattice_checked = false;
  double lattice_max = 0.0;
  bool lattice_agrees = false;
};

// Flat extremal candidates per (measure, sigma2); when num_pulses <= 5 each
// group also carries an exhaustive lattice cross-check.
std::vector<AnalysisRow> run_analysis_report(const RunOptions& options,
                                             const std::vector<double>& sigma2_grid);

struct CalibrationRow {
  MeasureKind measure;
  bool enhanced = false;
  int reduced_dim = 0;
  double pf = 0.0;
  int calibration_trials = 0;
  double threshold = 0.0;
};

std::vector<CalibrationRow> run_calibration(const RunOptions& options);

// 17-significant-digit decimal via std::to_chars; "nan"/"inf" spelled out.
std::string format_real(double v);

void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows);
void write_ordering_csv(const std::string& path,
                        const std::vector<OrderingRow>& rows);
void write_enhancement_csv(const std::string& path,
                           const std::vector<EnhancementStudyRow>& rows);
void write_analysis_csv(const std::string& path,
                        const std::vector<AnalysisRow>& rows);
void write_calibration_csv(const std::string& path,
                           const std::vector<CalibrationRow>& rows);

// Reproducibility sidecar at csv_path + ".manifest.json": command, options,
// scenario, and row count. No timestamps, so reruns are byte-identical.
void write_manifest(const std::string& csv_path, const std::string& command,
                    const RunOptions& options, std::size_t rows);

}  // namespace geodetect
