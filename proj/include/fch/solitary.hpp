#pragma once

// Smooth solitary waves of the fractional CH equation.
//
// A wave u = Q(x - ct) solves, after one integration with decay at infinity,
//
//   (-c(1 + |k|^a) + kappa1) Q^ + 3/2 F(Q^2)
//       + kappa2 (|k|^a F(Q^2) + F(Q D^a Q') / (ik)) = 0,
//
// which is solved for Q on a TorusGrid with Newton-Krylov (GMRES inner solves)
// and traced in (alpha, c, omega) from the closed-form CH wave.

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fch/gmres.hpp"
#include "fch/grid.hpp"

namespace fch {

struct SolitaryWaveProblem {
  double alpha;
  double speed;
  double kappa1;
  double kappa2;
  TorusGrid grid;

  /// Throws InvalidArgument unless alpha in (0, 2] and speed != 0.
  void validate() const;
};

enum class DecayClass { exponential, algebraic, unresolved };

std::string_view to_string(DecayClass kind);

struct SpectralDecay {
  DecayClass kind = DecayClass::unresolved;
  /// delta of exp(-delta k) for exponential decay, mu + 1 of k^-(mu+1) for algebraic.
  double rate = 0.0;
  double k_lo = 0.0;
  double k_hi = 0.0;
};

/// Classifies the large-k decay of |u^(k)| over the top decade above the noise floor.
SpectralDecay classify_decay(const SpectralField& field, double noise_floor = 1e-13);

struct SolitarySolution {
  SolitaryWaveProblem problem;
  RealVector profile;
  SpectralField coeffs;
  /// Max norm of the physical-space residual.
  double residual_norm = 0.0;
  SpectralDecay decay;
  int newton_steps = 0;
  int krylov_iterations = 0;
  /// Largest relative Jacobian/finite-difference mismatch seen (when checked).
  double jacobian_check = 0.0;

  double amplitude() const;
};

struct NewtonSettings {
  double tol = 1e-10;
  int max_newton = 30;
  int max_halvings = 5;
  GmresSettings gmres{};
  bool check_jacobian = false;
  /// Reject algebraically decaying limits with NonSmoothLimit.
  bool require_smooth = true;
};

/// Residual of the integrated travelling-wave equation, in coefficient space.
SpectralField residual(const SpectralField& q, const SolitaryWaveProblem& prob);

/// Directional derivative of residual() at q along v.
SpectralField jacobian_action(const SpectralField& q, const SpectralField& v,
                              const SolitaryWaveProblem& prob);

/// Max norm of the physical-space residual.
double residual_max_norm(std::span<const double> q, const SolitaryWaveProblem& prob);

/// Max norm of the unintegrated travelling-wave equation
///   (kappa1 - c) Q' + 3/2 (Q^2)' - c D^a Q' + kappa2 (D^a (Q^2)' + Q D^a Q') = 0,
/// evaluated independently of residual().
double unintegrated_residual_max_norm(std::span<const double> q, const SolitaryWaveProblem& prob);

/// Fourier symbols of the travelling-wave operator for one problem.
struct WaveSymbols {
  explicit WaveSymbols(const SolitaryWaveProblem& prob);

  RealVector frac;    // |k|^a
  RealVector frac_d;  // k |k|^a (Nyquist zeroed): D^a d/dx = i * frac_d
  RealVector linear;  // -c (1 + |k|^a) + kappa1
};

/// Linearization of residual() frozen at one iterate.
class Linearization {
 public:
  Linearization(const SpectralField& q, const SolitaryWaveProblem& prob);
  Linearization(const SpectralField& q, const SolitaryWaveProblem& prob,
                std::shared_ptr<const WaveSymbols> symbols);
  SpectralField apply(const SpectralField& v) const;

 private:
  SolitaryWaveProblem prob_;
  std::shared_ptr<const WaveSymbols> symbols_;
  RealVector q_;
  RealVector dq_;  // D^a Q'
};

/// Throws NoConvergence on stagnation/divergence and NonSmoothLimit when the
/// residual converges but the spectrum decays algebraically.
SolitarySolution newton_krylov_solve(const SolitaryWaveProblem& prob, std::span<const double> initial,
                                     const NewtonSettings& settings = {});

struct WaveParameters {
  double alpha;
  double speed;
  double omega;
};

struct ContinuationPlan {
  TorusGrid grid;
  double kappa2 = 1.0 / 3.0;
  std::vector<WaveParameters> schedule;
  NewtonSettings newton{};
  double max_alpha_step = 0.05;
  double max_speed_step = 0.25;
  double max_omega_step = 0.1;
  int max_bisections = 4;
};

/// Raised by trace_continuation when a step cannot be reached.
class ContinuationFailure : public std::runtime_error {
 public:
  ContinuationFailure(const std::string& what, std::optional<SolitarySolution> last_good,
                      WaveParameters frontier);
  const std::optional<SolitarySolution>& last_good() const noexcept { return last_good_; }
  /// Closest parameters to the failing target that did not converge.
  const WaveParameters& frontier() const noexcept { return frontier_; }

 private:
  std::optional<SolitarySolution> last_good_;
  WaveParameters frontier_;
};

/// Seeds with the CH closed form at alpha = 2 and the first target's (c, omega),
/// then walks through the schedule inserting steps no larger than the plan's
/// limits. Returns one solution per scheduled target.
std::vector<SolitarySolution> trace_continuation(const ContinuationPlan& plan);

/// Convenience: a single wave reached from alpha = 2.
SolitarySolution solitary_wave(const TorusGrid& grid, WaveParameters target, double kappa2 = 1.0 / 3.0,
                               const NewtonSettings& newton = {});

/// Circularly shifts `q` so its maximum sits on the node at x = 0, then
/// averages with its mirror image.
void center_and_symmetrize(std::span<double> q);

}  // namespace fch
