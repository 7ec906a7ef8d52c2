#pragma once

// Complex-singularity tracking from the asymptotic law of Fourier coefficients.
// A singularity u ~ (z - z0)^mu at z0 = x0 - i delta gives, for large k,
//
//   ln|u^(k)| ~ A - (mu + 1) ln k - delta k,      arg u^(k) ~ phi0 - k x0.
//
// delta -> 0 signals loss of regularity on the real axis.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fch/evolution.hpp"
#include "fch/grid.hpp"

namespace fch {

struct FitOptions {
  /// Smallest wavenumber entering the fit.
  double k_min = 100.0;
  /// Largest wavenumber entering the fit; <= 0 means the last mode above the noise floor.
  double k_max = 0.0;
  /// Modes below noise_floor * max|u^| are discarded.
  double noise_floor = 1e-13;
  std::size_t min_modes = 20;
};

struct SingularityFit {
  double mu = 0.0;
  double delta = 0.0;
  double x_pos = 0.0;
  double log_amp = 0.0;
  double k_lo = 0.0;
  double k_hi = 0.0;
  /// RMS misfit of ln|u^| over the window.
  double residual = 0.0;
  double mu_stderr = 0.0;
  double delta_stderr = 0.0;
  std::size_t modes = 0;
  /// The unconstrained fit gave delta < 0 and was refitted with delta = 0.
  bool delta_clamped = false;
};

/// Throws WindowTooSmall (< min_modes usable) or NoiseFloor (nothing above the floor).
SingularityFit fit(const SpectralField& u_hat, const FitOptions& options = {});

enum class Verdict { blow_up, no_blow_up, undetermined };

std::string_view to_string(Verdict verdict);

struct TrackEntry {
  double t = 0.0;
  std::optional<SingularityFit> fit;
  /// Set when the fit failed: "noise_floor", "window_too_small", ...
  std::string gap;
};

struct TrackResult {
  std::vector<TrackEntry> entries;
  Verdict verdict = Verdict::undetermined;
  double t_star = 0.0;
  /// mu of the fit closest to t_star.
  double mu = 0.0;
  double threshold = 0.0;
  /// t_star was extrapolated from the last resolved fits of a truncated run.
  bool extrapolated = false;
};

struct TrackOptions {
  FitOptions fit{};
  /// delta below which the singularity counts as on the real axis; <= 0 means 2 / k_max.
  double delta_threshold = 0.0;
  /// The run stopped early for lack of resolution; allows extrapolating delta(t).
  bool run_truncated = false;
  /// Number of trailing fits used for extrapolation.
  std::size_t extrapolation_points = 5;
};

/// fit() wrapped so that failures become a gap instead of an exception.
TrackEntry fit_entry(double t, const SpectralField& u_hat, const FitOptions& options = {});

/// Fits each snapshot (ordered in time) and decides whether delta reaches the axis.
TrackResult track(std::span<const Snapshot> snapshots, const TrackOptions& options = {});

/// The decision part of track() for entries fitted elsewhere (e.g. during a run).
TrackResult judge(std::vector<TrackEntry> entries, double max_wavenumber, const TrackOptions& options = {});

}  // namespace fch
