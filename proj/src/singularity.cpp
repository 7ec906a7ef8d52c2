#include "fch/singularity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fch/errors.hpp"
#include "fch/kernels.hpp"
#include "fch/lsq.hpp"

namespace fch {

SingularityFit fit(const SpectralField& u_hat, const FitOptions& options) {
  const TorusGrid& grid = u_hat.grid();
  const auto k = grid.wavenumbers();
  const std::size_t half = grid.nyquist_index();
  const double peak = kernels::omp::max_abs(u_hat.coeffs());
  if (peak == 0.0) throw NoiseFloor("fit: zero field");
  const double floor = options.noise_floor * peak;

  std::size_t first = half;
  for (std::size_t j = 1; j < half; ++j) {
    if (k[j] >= options.k_min) {
      first = j;
      break;
    }
  }
  std::size_t cut = 0;
  for (std::size_t j = 1; j < half; ++j)
    if (std::abs(u_hat[j]) > floor && (options.k_max <= 0.0 || k[j] <= options.k_max)) cut = j;
  if (first >= half || cut < first) throw NoiseFloor("fit: window lies below the noise floor");

  std::vector<std::size_t> idx;
  for (std::size_t j = first; j <= cut; ++j)
    if (std::abs(u_hat[j]) > floor) idx.push_back(j);
  if (idx.size() < options.min_modes)
    throw WindowTooSmall("fit: only " + std::to_string(idx.size()) + " usable modes in [" +
                         std::to_string(k[first]) + ", " + std::to_string(k[cut]) + "]");

  const std::size_t m = idx.size();
  std::vector<double> ones(m, 1.0), neg_log_k(m), neg_k(m), y(m), kk(m);
  for (std::size_t i = 0; i < m; ++i) {
    kk[i] = k[idx[i]];
    neg_log_k[i] = -std::log(kk[i]);
    neg_k[i] = -kk[i];
    y[i] = std::log(std::abs(u_hat[idx[i]]));
  }

  SingularityFit out;
  out.k_lo = kk.front();
  out.k_hi = kk.back();
  out.modes = m;

  const std::vector<std::vector<double>> full{ones, neg_log_k, neg_k};
  LinearFit lf = least_squares(full, y);
  if (lf.beta[2] >= 0.0) {
    out.log_amp = lf.beta[0];
    out.mu = lf.beta[1] - 1.0;
    out.delta = lf.beta[2];
    out.mu_stderr = lf.stderr_beta[1];
    out.delta_stderr = lf.stderr_beta[2];
  } else {
    const std::vector<std::vector<double>> reduced{ones, neg_log_k};
    lf = least_squares(reduced, y);
    out.log_amp = lf.beta[0];
    out.mu = lf.beta[1] - 1.0;
    out.delta = 0.0;
    out.mu_stderr = lf.stderr_beta[1];
    out.delta_clamped = true;
  }
  out.residual = std::sqrt(lf.rss / static_cast<double>(m));

  // Phase: arg u^(k) = phi0 - k x0, unwrapped along the window.
  std::vector<double> phase(m);
  double prev = 0.0;
  double offset = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double raw = std::arg(u_hat[idx[i]]);
    if (i > 0) {
      double jump = raw - prev;
      while (jump > std::numbers::pi) {
        offset -= 2.0 * std::numbers::pi;
        jump -= 2.0 * std::numbers::pi;
      }
      while (jump < -std::numbers::pi) {
        offset += 2.0 * std::numbers::pi;
        jump += 2.0 * std::numbers::pi;
      }
    }
    prev = raw;
    phase[i] = raw + offset;
  }
  const std::vector<std::vector<double>> phase_cols{ones, neg_k};
  const LinearFit pf = least_squares(phase_cols, phase);
  const double period = grid.period();
  const double half_period = 0.5 * period;
  double x0 = std::fmod(pf.beta[1] + half_period, period);
  if (x0 < 0.0) x0 += period;
  out.x_pos = x0 - half_period;
  return out;
}

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::blow_up:
      return "blow_up";
    case Verdict::no_blow_up:
      return "no_blow_up";
    case Verdict::undetermined:
      break;
  }
  return "undetermined";
}

TrackEntry fit_entry(double t, const SpectralField& u_hat, const FitOptions& options) {
  TrackEntry e;
  e.t = t;
  try {
    e.fit = fit(u_hat, options);
  } catch (const NoiseFloor&) {
    e.gap = "noise_floor";
  } catch (const WindowTooSmall&) {
    e.gap = "window_too_small";
  } catch (const Error& err) {
    e.gap = err.what();
  }
  return e;
}

TrackResult track(std::span<const Snapshot> snapshots, const TrackOptions& options) {
  if (snapshots.empty()) return {};
  std::vector<TrackEntry> entries;
  entries.reserve(snapshots.size());
  for (const auto& snap : snapshots) entries.push_back(fit_entry(snap.t, snap.coeffs, options.fit));
  return judge(std::move(entries), snapshots.front().coeffs.grid().max_wavenumber(), options);
}

TrackResult judge(std::vector<TrackEntry> fitted_entries, double max_wavenumber, const TrackOptions& options) {
  TrackResult out;
  out.entries = std::move(fitted_entries);
  out.threshold = options.delta_threshold > 0.0 ? options.delta_threshold : 2.0 / max_wavenumber;
  if (out.entries.empty()) return out;

  const auto& entries = out.entries;
  const double thr = out.threshold;

  // First crossing below the threshold, interpolated linearly in delta.
  const TrackEntry* prev_fit = nullptr;
  for (const auto& e : entries) {
    if (!e.fit) continue;
    if (e.fit->delta < thr) {
      out.verdict = Verdict::blow_up;
      out.mu = e.fit->mu;
      if (prev_fit != nullptr && prev_fit->fit->delta > e.fit->delta) {
        const double d0 = prev_fit->fit->delta;
        const double d1 = e.fit->delta;
        out.t_star = prev_fit->t + (d0 - thr) * (e.t - prev_fit->t) / (d0 - d1);
      } else {
        out.t_star = e.t;
      }
      return out;
    }
    prev_fit = &e;
  }

  std::vector<const TrackEntry*> fitted;
  for (const auto& e : entries)
    if (e.fit) fitted.push_back(&e);

  // Truncated run: extrapolate the trailing delta(t) trend to the threshold.
  if (options.run_truncated && fitted.size() >= 3) {
    const std::size_t count = std::min(options.extrapolation_points, fitted.size());
    std::vector<double> ones(count, 1.0), ts(count), ds(count);
    for (std::size_t i = 0; i < count; ++i) {
      const auto* e = fitted[fitted.size() - count + i];
      ts[i] = e->t;
      ds[i] = e->fit->delta;
    }
    const std::vector<std::vector<double>> cols{ones, ts};
    const LinearFit lf = least_squares(cols, ds);
    const double slope = lf.beta[1];
    if (slope < 0.0) {
      out.verdict = Verdict::blow_up;
      out.extrapolated = true;
      out.t_star = std::max(ts.back(), (thr - lf.beta[0]) / slope);
      out.mu = fitted.back()->fit->mu;
      return out;
    }
  }

  // No crossing: delta must not decrease over the final third. Snapshots whose
  // spectrum never rises above the noise floor past k_min are fully resolved.
  const std::size_t start = entries.size() - std::max<std::size_t>(1, entries.size() / 3);
  bool smooth = true;
  double running_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = start; i < entries.size(); ++i) {
    const auto& e = entries[i];
    if (e.fit) {
      // tolerate fit noise of 1% per sample
      if (std::isfinite(running_min) && e.fit->delta < 0.99 * running_min) smooth = false;
      running_min = std::min(running_min, e.fit->delta);
    } else if (e.gap != "noise_floor") {
      smooth = false;
    }
  }
  out.verdict = smooth ? Verdict::no_blow_up : Verdict::undetermined;
  if (!fitted.empty()) out.mu = fitted.back()->fit->mu;
  return out;
}

}  // namespace fch
