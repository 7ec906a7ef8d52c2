#pragma once

// Experiment configuration, dispatch and artifact writing.
//
// One JSON document describes a run. Artifacts in the output directory:
//   meta.json        resolved config, version, wall time, scale, results
//   monitors.csv     t,I1,I2,energy_drift,linf,tail
//   snapshot_<t>.csv x,u at requested times and at the final time
//   spectrum.csv     k,abs_uhat of the final state (k >= 0)
//   wave.csv         x,Q (solitary)
//   family.csv       continuation summary (solitary)
//   singularity.csv  t,mu,delta,xpos,residual (schwartz, dsw, fit)

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fch/evolution.hpp"
#include "fch/initial_data.hpp"
#include "fch/singularity.hpp"
#include "fch/solitary.hpp"

namespace fch {

enum class ExperimentKind { solitary, propagate, perturb, schwartz, dsw, fit };
enum class Scale { desk, paper };

std::string_view to_string(ExperimentKind kind);
std::string_view to_string(Scale scale);
/// Throws ConfigError for unknown names.
ExperimentKind parse_kind(std::string_view name);
Scale parse_scale(std::string_view name);

struct ResolutionOverride {
  std::optional<std::size_t> n;
  std::optional<std::size_t> steps;
};

struct ExperimentConfig {
  std::string name = "run";
  ExperimentKind kind = ExperimentKind::propagate;

  double alpha = 1.5;
  double omega = 0.6;
  double kappa2 = 1.0 / 3.0;
  double epsilon = 1.0;

  double half_period = 100.0;
  std::size_t n = 1u << 16;

  double t_end = 1.0;
  std::size_t steps = 10000;
  std::size_t monitor_stride = 10;
  std::vector<double> snapshot_times;
  double tail_stop = 1e-6;
  /// Evenly spaced times at which the singularity fit is sampled (schwartz, dsw).
  std::size_t track_samples = 200;

  InitialData initial = SolitaryWave{2.0};
  /// Continuation targets for kind=solitary; empty means the single wave (alpha, c, omega).
  std::vector<WaveParameters> schedule;

  FitOptions fit{};
  /// Input directory of snapshot_<t>.csv files for kind=fit.
  std::string snapshot_dir;

  /// Applied when running at desk scale.
  ResolutionOverride desk;
  std::string output_dir;

  /// Throws ConfigError naming the offending field.
  void validate() const;
  /// Copy with the scale's overrides applied.
  ExperimentConfig at_scale(Scale scale) const;
  EquationParams equation() const { return {alpha, 2.0 * omega, kappa2, epsilon, 1.0}; }
};

/// Parses a JSON config. Syntax errors report line and column; field errors
/// name the field. Unknown keys are rejected.
ExperimentConfig parse_config(std::string_view json_text, std::string_view origin = "<config>");
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::ordered_json to_json(const ExperimentConfig& cfg);

struct RunOptions {
  Scale scale = Scale::paper;
  /// Overrides cfg.output_dir; empty with an empty cfg.output_dir disables writing.
  std::string output_dir;
};

struct ExperimentReport {
  ExperimentConfig config;  // as run (scale applied)
  Scale scale = Scale::paper;
  double wall_seconds = 0.0;
  nlohmann::ordered_json results;

  std::optional<EvolutionResult> evolution;
  std::optional<TrackResult> track;
  std::vector<SolitarySolution> waves;
  /// Initial data (physical) for evolution kinds.
  RealVector initial;
  /// Time of the first snapshot with an oscillation (dsw); negative if none.
  double first_oscillation = -1.0;
};

/// Runs one experiment and writes its artifacts when an output directory is
/// set. Numerical failures propagate as fch::Error after meta.json records them.
ExperimentReport run_experiment(const ExperimentConfig& cfg, const RunOptions& options = {});

/// Number of interior local minima whose prominence (the lower of the highest
/// values to their left and right, minus the minimum) exceeds
/// rel_prominence * max|u|.
std::size_t count_oscillations(std::span<const double> u, double rel_prominence = 1e-3);

/// (max - min) / mean of the samples with t >= (1 - fraction) * t_last.
double final_fluctuation(std::span<const double> t, std::span<const double> v, double fraction = 0.25);

/// True if v never rises by more than rel_tol (relative) after its global maximum.
bool monotone_after_peak(std::span<const double> v, double rel_tol = 1e-6);

/// Fits every snapshot_<t>.csv in `dir` (sorted by t).
TrackResult track_directory(const std::filesystem::path& dir, const TrackOptions& options = {});

/// `snapshot_<t>.csv` with t printed as %.6f.
std::string snapshot_filename(double t);

}  // namespace fch
