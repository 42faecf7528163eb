#include "geodetect/runner.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include <json.hpp>

#include "geodetect/signal.hpp"

namespace geodetect {

namespace {

constexpr double kZ95 = 1.959963984540054;  // two-sided 95% normal quantile

double nan_value() { return std::numeric_limits<double>::quiet_NaN(); }

DetectorConfig detector_config(const RunOptions& options, MeasureKind kind,
                               bool enhanced, int reduced_dim) {
  DetectorConfig config;
  config.kind = kind;
  config.enhanced = enhanced;
  config.reduced_dim = reduced_dim;
  config.guard_cells = options.guard_cells;
  config.pf = options.scenario.pf;
  config.calibration_trials = options.calibration_trials;
  return config;
}

bool reduction_feasible(const Scenario& scenario, int reduced_dim) {
  return reduced_dim >= 1 && 2 * reduced_dim <= scenario.num_pulses;
}

SceneSource clutter_source(const Scenario& scenario, int guard_cells) {
  return [scenario, guard_cells](std::uint64_t trial) {
    return generate_scene(scenario, Hypothesis::ClutterOnly, 0.0, trial,
                          guard_cells);
  };
}

}  // namespace

WilsonInterval wilson_interval(int successes, int trials) {
  if (trials < 1 || successes < 0 || successes > trials) {
    throw DomainError("wilson_interval: need 0 <= successes <= trials");
  }
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = kZ95 * kZ95;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half =
      kZ95 * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

std::vector<SweepRow> run_pd_sweep(const RunOptions& options) {
  validate_scenario(options.scenario);
  if (options.trials < 1) {
    throw ConfigError("run_pd_sweep: trials must be >= 1");
  }
  std::vector<SweepRow> rows;
  for (MeasureKind kind : options.measures) {
    SweepRow base;
    base.measure = kind;
    base.enhanced = options.enhanced;
    base.reduced_dim = options.enhanced ? options.reduced_dim : 0;
    base.trials = options.trials;

    if (options.enhanced &&
        !reduction_feasible(options.scenario, options.reduced_dim)) {
      for (double scr : options.scenario.scr_grid_db) {
        SweepRow row = base;
        row.scr_db = scr;
        row.pd = row.pd_lower = row.pd_upper = row.threshold = nan_value();
        rows.push_back(row);
      }
      continue;
    }

    const DetectorConfig config = detector_config(
        options, kind, options.enhanced, options.reduced_dim);
    const double threshold = calibrate_threshold(
        config, clutter_source(options.scenario, options.guard_cells));

    for (double scr : options.scenario.scr_grid_db) {
      int hits = 0;
      for (int j = 0; j < options.trials; ++j) {
        const std::uint64_t trial =
            static_cast<std::uint64_t>(options.calibration_trials + j);
        const Scene scene =
            generate_scene(options.scenario, Hypothesis::TargetPresent, scr,
                           trial, options.guard_cells);
        if (detect(test_statistic(config, scene), threshold) ==
            Hypothesis::TargetPresent) {
          ++hits;
        }
      }
      SweepRow row = base;
      row.scr_db = scr;
      row.pd = static_cast<double>(hits) / static_cast<double>(options.trials);
      const WilsonInterval ci = wilson_interval(hits, options.trials);
      row.pd_lower = ci.lower;
      row.pd_upper = ci.upper;
      row.threshold = threshold;
      rows.push_back(row);
    }
  }
  return rows;
}

std::vector<OrderingRow> run_measure_ordering(
    const RunOptions& options, const std::vector<int>& bandwidths) {
  validate_scenario(options.scenario);
  if (options.trials < 1) {
    throw ConfigError("run_measure_ordering: trials must be >= 1");
  }
  if (bandwidths.empty()) {
    throw ConfigError("run_measure_ordering: need at least one bandwidth");
  }
  for (int b : bandwidths) {
    if (b < 1 || b > options.scenario.num_pulses) {
      throw ConfigError("run_measure_ordering: bandwidth outside [1, m]");
    }
  }
  const Scenario& sc = options.scenario;
  const double clutter_power = clutter_mean_power(sc.clutter);
  // idealized construction: the reference is the true clutter covariance
  // (mean power times the speckle covariance) and the observed side adds the
  // target's own lag matrix. Both sides are exact, so the statistic is
  // deterministic and the whitened excess trace equals m * scr by the lag
  // normalization; the trials column echoes the manifest, it is not a Monte
  // Carlo count here.
  const Matrix clutter_cov =
      clutter_power * speckle_covariance(sc.clutter, sc.num_pulses).mat();
  const HpdMatrix reference{clutter_cov};

  std::vector<OrderingRow> rows;
  for (MeasureKind kind : options.measures) {
    for (double scr : sc.scr_grid_db) {
      std::vector<double> means;
      means.reserve(bandwidths.size());
      for (int b : bandwidths) {
        TargetSpec spec;
        spec.kind = TargetSpec::Kind::Bandlimited;
        spec.bandwidth = b;
        spec.amplitude = sc.target.amplitude;
        const Vector target = scale_to_scr(
            generate_target(spec, sc.num_pulses, sc.prf_hz), clutter_power,
            scr);
        const Matrix target_cov = toeplitz_covariance(target).mat();
        const HpdMatrix observed{Matrix(target_cov + clutter_cov)};
        means.push_back(measure(kind, observed, reference));
      }
      double across = 0.0;
      for (double v : means) {
        across += v;
      }
      across /= static_cast<double>(means.size());
      for (std::size_t i = 0; i < bandwidths.size(); ++i) {
        OrderingRow row;
        row.measure = kind;
        row.bandwidth = bandwidths[i];
        row.scr_db = scr;
        row.mean_statistic = means[i];
        row.normalized = means[i] / std::max(across, 1e-300);
        row.trials = options.trials;
        rows.push_back(row);
      }
    }
  }
  return rows;
}

std::vector<EnhancementStudyRow> run_enhancement_study(
    const RunOptions& options, const std::vector<int>& bandwidths,
    const std::vector<int>& reduced_dims) {
  validate_scenario(options.scenario);
  if (options.trials < 1) {
    throw ConfigError("run_enhancement_study: trials must be >= 1");
  }
  if (bandwidths.empty() || reduced_dims.empty()) {
    throw ConfigError("run_enhancement_study: empty bandwidth or dim grid");
  }
  for (int b : bandwidths) {
    if (b < 1 || b > options.scenario.num_pulses) {
      throw ConfigError("run_enhancement_study: bandwidth outside [1, m]");
    }
  }

  std::vector<EnhancementStudyRow> rows;
  for (MeasureKind kind : options.measures) {
    // thresholds depend only on (measure, n): clutter-only scenes carry no
    // target, so they are shared across bandwidths
    std::vector<double> thresholds(reduced_dims.size(), nan_value());
    for (std::size_t d = 0; d < reduced_dims.size(); ++d) {
      const int n = reduced_dims[d];
      const bool enhanced = n > 0;
      if (enhanced && !reduction_feasible(options.scenario, n)) {
        continue;  // threshold stays NaN, rows below inherit it
      }
      const DetectorConfig config = detector_config(options, kind, enhanced, n);
      thresholds[d] = calibrate_threshold(
          config, clutter_source(options.scenario, options.guard_cells));
    }

    for (int b : bandwidths) {
      Scenario sc = options.scenario;
      sc.target.kind = TargetSpec::Kind::Bandlimited;
      sc.target.bandwidth = b;
      for (std::size_t d = 0; d < reduced_dims.size(); ++d) {
        const int n = reduced_dims[d];
        const bool enhanced = n > 0;
        const bool feasible = !enhanced || reduction_feasible(sc, n);
        const DetectorConfig config =
            detector_config(options, kind, enhanced, std::max(n, 1));
        for (double scr : sc.scr_grid_db) {
          EnhancementStudyRow row;
          row.measure = kind;
          row.bandwidth = b;
          row.reduced_dim = n;
          row.scr_db = scr;
          row.trials = options.trials;
          if (!feasible) {
            row.pd = row.pd_lower = row.pd_upper = nan_value();
            row.threshold = nan_value();
            rows.push_back(row);
            continue;
          }
          int hits = 0;
          for (int j = 0; j < options.trials; ++j) {
            const std::uint64_t trial =
                static_cast<std::uint64_t>(options.calibration_trials + j);
            const Scene scene = generate_scene(
                sc, Hypothesis::TargetPresent, scr, trial, options.guard_cells);
            if (detect(test_statistic(config, scene), thresholds[d]) ==
                Hypothesis::TargetPresent) {
              ++hits;
            }
          }
          row.pd =
              static_cast<double>(hits) / static_cast<double>(options.trials);
          const WilsonInterval ci = wilson_interval(hits, options.trials);
          row.pd_lower = ci.lower;
          row.pd_upper = ci.upper;
          row.threshold = thresholds[d];
          rows.push_back(row);
        }
      }
    }
  }
  return rows;
}

std::vector<AnalysisRow> run_analysis_report(
    const RunOptions& options, const std::vector<double>& sigma2_grid) {
  const int m = options.scenario.num_pulses;
  if (m < 2) {
    throw ConfigError("run_analysis_report: num_pulses must be >= 2");
  }
  if (sigma2_grid.empty()) {
    throw ConfigError("run_analysis_report: empty sigma2 grid");
  }
  std::vector<AnalysisRow> rows;
  for (MeasureKind kind : options.measures) {
    for (double sigma2 : sigma2_grid) {
      if (!(sigma2 > 0.0)) {
        throw ConfigError("run_analysis_report: sigma2 must be > 0");
      }
      const ExtremalSpectra spectra = extremal_spectra(kind, m, sigma2);
      const bool lattice_checked = m <= 5;
      double lattice_max = nan_value();
      bool lattice_agrees = false;
      if (lattice_checked) {
        const LatticeCheck check = lattice_maximize(kind, m, sigma2);
        lattice_max = check.lattice_max;
        lattice_agrees = check.agrees;
      }
      for (const ExtremalCandidate& cand : spectra.candidates) {
        AnalysisRow row;
        row.measure = kind;
        row.sigma2 = sigma2;
        row.k = cand.k;
        row.value = cand.value;
        row.is_argmax = (cand.k - 1 == spectra.argmax);
        row.lattice_checked = lattice_checked;
        row.lattice_max = lattice_max;
        row.lattice_agrees = lattice_agrees;
        rows.push_back(row);
      }
    }
  }
  return rows;
}

std::vector<CalibrationRow> run_calibration(const RunOptions& options) {
  validate_scenario(options.scenario);
  std::vector<CalibrationRow> rows;
  for (MeasureKind kind : options.measures) {
    CalibrationRow row;
    row.measure = kind;
    row.enhanced = options.enhanced;
    row.reduced_dim = options.enhanced ? options.reduced_dim : 0;
    row.pf = options.scenario.pf;
    row.calibration_trials = options.calibration_trials;
    if (options.enhanced &&
        !reduction_feasible(options.scenario, options.reduced_dim)) {
      row.threshold = nan_value();
    } else {
      const DetectorConfig config = detector_config(
          options, kind, options.enhanced, options.reduced_dim);
      row.threshold = calibrate_threshold(
          config, clutter_source(options.scenario, options.guard_cells));
    }
    rows.push_back(row);
  }
  return rows;
}

// --- serialization -----------------------------------------------------------

std::string format_real(double v) {
  if (std::isnan(v)) {
    return "nan";
  }
  if (std::isinf(v)) {
    return v > 0.0 ? "inf" : "-inf";
  }
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v,
                                 std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // binary keeps LF endings
  if (!out) {
    throw Error("cannot open output file " + path);
  }
  return out;
}

}  // namespace

void write_sweep_csv(const std::string& path,
                     const std::vector<SweepRow>& rows) {
  std::ofstream out = open_out(path);
  out << "measure,enhanced,n,scr_db,pd,pd_lower,pd_upper,trials,threshold\n";
  for (const SweepRow& r : rows) {
    out << to_string(r.measure) << ',' << (r.enhanced ? 1 : 0) << ','
        << r.reduced_dim << ',' << format_real(r.scr_db) << ','
        << format_real(r.pd) << ',' << format_real(r.pd_lower) << ','
        << format_real(r.pd_upper) << ',' << r.trials << ','
        << format_real(r.threshold) << '\n';
  }
}

void write_ordering_csv(const std::string& path,
                        const std::vector<OrderingRow>& rows) {
  std::ofstream out = open_out(path);
  out << "measure,bandwidth,scr_db,mean_statistic,normalized,trials\n";
  for (const OrderingRow& r : rows) {
    out << to_string(r.measure) << ',' << r.bandwidth << ','
        << format_real(r.scr_db) << ',' << format_real(r.mean_statistic) << ','
        << format_real(r.normalized) << ',' << r.trials << '\n';
  }
}

void write_enhancement_csv(const std::string& path,
                           const std::vector<EnhancementStudyRow>& rows) {
  std::ofstream out = open_out(path);
  out << "measure,bandwidth,n,scr_db,pd,pd_lower,pd_upper,trials,threshold\n";
  for (const EnhancementStudyRow& r : rows) {
    out << to_string(r.measure) << ',' << r.bandwidth << ',' << r.reduced_dim
        << ',' << format_real(r.scr_db) << ',' << format_real(r.pd) << ','
        << format_real(r.pd_lower) << ',' << format_real(r.pd_upper) << ','
        << r.trials << ',' << format_real(r.threshold) << '\n';
  }
}

void write_analysis_csv(const std::string& path,
                        const std::vector<AnalysisRow>& rows) {
  std::ofstream out = open_out(path);
  out << "measure,sigma2,k,value,is_argmax,lattice_checked,lattice_max,"
         "lattice_agrees\n";
  for (const AnalysisRow& r : rows) {
    out << to_string(r.measure) << ',' << format_real(r.sigma2) << ',' << r.k
        << ',' << format_real(r.value) << ',' << (r.is_argmax ? 1 : 0) << ','
        << (r.lattice_checked ? 1 : 0) << ',' << format_real(r.lattice_max)
        << ',' << (r.lattice_agrees ? 1 : 0) << '\n';
  }
}

void write_calibration_csv(const std::string& path,
                           const std::vector<CalibrationRow>& rows) {
  std::ofstream out = open_out(path);
  out << "measure,enhanced,n,pf,calibration_trials,threshold\n";
  for (const CalibrationRow& r : rows) {
    out << to_string(r.measure) << ',' << (r.enhanced ? 1 : 0) << ','
        << r.reduced_dim << ',' << format_real(r.pf) << ','
        << r.calibration_trials << ',' << format_real(r.threshold) << '\n';
  }
}

void write_manifest(const std::string& csv_path, const std::string& command,
                    const RunOptions& options, std::size_t rows) {
  nlohmann::json j;
  j["command"] = command;
  j["output"] = csv_path;
  j["rows"] = rows;
  std::vector<std::string> measures;
  for (MeasureKind kind : options.measures) {
    measures.emplace_back(to_string(kind));
  }
  j["measures"] = measures;
  j["enhanced"] = options.enhanced;
  j["reduced_dim"] = options.reduced_dim;
  j["guard_cells"] = options.guard_cells;
  j["trials"] = options.trials;
  j["calibration_trials"] = options.calibration_trials;

  const Scenario& sc = options.scenario;
  nlohmann::json s;
  s["num_cells"] = sc.num_cells;
  s["num_pulses"] = sc.num_pulses;
  s["target_cell"] = sc.target_cell;
  s["pf"] = sc.pf;
  s["prf_hz"] = sc.prf_hz;
  s["clutter_shape"] = sc.clutter.shape;
  s["clutter_scale"] = sc.clutter.scale;
  s["speckle_ar1"] = sc.clutter.speckle_ar1;
  s["target"] = sc.target.kind == TargetSpec::Kind::Doppler ? "doppler"
                                                            : "bandlimited";
  s["doppler_hz"] = sc.target.doppler_hz;
  s["bandwidth"] = sc.target.bandwidth;
  s["amplitude"] = sc.target.amplitude;
  s["scr_grid_db"] = sc.scr_grid_db;
  s["seed"] = sc.seed;
  j["scenario"] = s;

  std::ofstream out = open_out(csv_path + ".manifest.json");
  out << j.dump(2) << '\n';
}

// --- config loading ----------------------------------------------------------

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) {
    return "";
  }
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) {
      throw std::invalid_argument("trailing characters");
    }
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: bad numeric value '" + value + "' for " + key);
  }
}

long long parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(value, &used);
    if (used != value.size()) {
      throw std::invalid_argument("trailing characters");
    }
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: bad integer value '" + value + "' for " + key);
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "1" || value == "true") {
    return true;
  }
  if (value == "0" || value == "false") {
    return false;
  }
  throw ConfigError("config: bad boolean value '" + value + "' for " + key);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) {
      items.push_back(item);
    }
  }
  return items;
}

}  // namespace

RunOptions load_run_options(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("config: cannot open " + path);
  }
  RunOptions options;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto comment = line.find('#');
    if (comment != std::string::npos) {
      line = line.substr(0, comment);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config: line " + std::to_string(line_no) +
                        " is not key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (value.empty()) {
      throw ConfigError("config: empty value for " + key);
    }

    Scenario& sc = options.scenario;
    if (key == "num_cells") {
      sc.num_cells = static_cast<int>(parse_int(key, value));
    } else if (key == "num_pulses") {
      sc.num_pulses = static_cast<int>(parse_int(key, value));
    } else if (key == "target_cell") {
      sc.target_cell = static_cast<int>(parse_int(key, value));
    } else if (key == "pf") {
      sc.pf = parse_double(key, value);
    } else if (key == "prf_hz") {
      sc.prf_hz = parse_double(key, value);
    } else if (key == "clutter_shape") {
      sc.clutter.shape = parse_double(key, value);
    } else if (key == "clutter_scale") {
      sc.clutter.scale = parse_double(key, value);
    } else if (key == "speckle_ar1") {
      sc.clutter.speckle_ar1 = parse_double(key, value);
    } else if (key == "target") {
      if (value == "doppler") {
        sc.target.kind = TargetSpec::Kind::Doppler;
      } else if (value == "bandlimited") {
        sc.target.kind = TargetSpec::Kind::Bandlimited;
      } else {
        throw ConfigError("config: target must be doppler or bandlimited");
      }
    } else if (key == "doppler_hz") {
      sc.target.doppler_hz = parse_double(key, value);
    } else if (key == "bandwidth") {
      sc.target.bandwidth = static_cast<int>(parse_int(key, value));
    } else if (key == "amplitude") {
      sc.target.amplitude = parse_double(key, value);
    } else if (key == "scr_db") {
      sc.scr_grid_db.clear();
      for (const std::string& item : split_list(value)) {
        sc.scr_grid_db.push_back(parse_double(key, item));
      }
    } else if (key == "seed") {
      sc.seed = static_cast<std::uint64_t>(parse_int(key, value));
    } else if (key == "trials") {
      options.trials = static_cast<int>(parse_int(key, value));
    } else if (key == "calibration_trials") {
      options.calibration_trials = static_cast<int>(parse_int(key, value));
    } else if (key == "guard_cells") {
      options.guard_cells = static_cast<int>(parse_int(key, value));
    } else if (key == "measures") {
      options.measures.clear();
      for (const std::string& item : split_list(value)) {
        options.measures.push_back(measure_kind_from_string(item));
      }
      if (options.measures.empty()) {
        throw ConfigError("config: measures list is empty");
      }
    } else if (key == "enhanced") {
      options.enhanced = parse_bool(key, value);
    } else if (key == "n") {
      options.reduced_dim = static_cast<int>(parse_int(key, value));
    } else {
      throw ConfigError("config: unknown key '" + key + "' on line " +
                        std::to_string(line_no));
    }
  }
  return options;
}

}  // namespace geodetect
