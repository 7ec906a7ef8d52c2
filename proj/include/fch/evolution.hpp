#pragma once

// Time integration of the (epsilon-rescaled) fractional CH equation
//
//   u_t + kappa1 u_x + 3 u u_x + e^a D^a u_t = -kappa2 e^a [2 D^a (u u_x) + u D^a u_x]
//
// with classical RK4 in coefficient space, plus its conserved quantities and
// resolution monitors.

#include <functional>
#include <string_view>
#include <vector>

#include "fch/grid.hpp"

namespace fch {

struct EquationParams {
  double alpha;
  double kappa1;
  double kappa2;
  double epsilon = 1.0;
  /// Multiplier on the 3 u u_x term (1 for the equation itself; 0 leaves a linear problem).
  double quadratic = 1.0;
};

struct EvolutionConfig {
  EquationParams equation;
  TorusGrid grid;
  double t_end = 1.0;
  std::size_t steps = 1000;
  std::size_t monitor_stride = 10;
  std::vector<double> snapshot_times;
  /// Stop once the tail indicator exceeds this (loss of resolution). <= 0 disables.
  double tail_stop = 1e-6;
  bool dealias = false;

  double dt() const { return t_end / static_cast<double>(steps); }
  /// Throws InvalidArgument on N_t < 1, t_end <= 0, epsilon outside (0, 1].
  void validate() const;
};

struct MonitorSeries {
  std::vector<double> t;
  std::vector<double> mass;
  std::vector<double> energy;
  std::vector<double> energy_drift;
  std::vector<double> linf;
  std::vector<double> tail;

  std::size_t size() const { return t.size(); }
};

struct Snapshot {
  double t;
  SpectralField coeffs;
};

enum class StopReason { completed, resolution_lost, non_finite };

std::string_view to_string(StopReason reason);

struct EvolutionResult {
  SpectralField final_state;
  double final_time = 0.0;
  std::size_t steps_taken = 0;
  MonitorSeries monitors;
  std::vector<Snapshot> snapshots;
  StopReason stop = StopReason::completed;

  bool truncated() const { return stop != StopReason::completed; }
};

/// Called at every monitor sample with the physical field; must not retain spans.
using MonitorCallback = std::function<void(double t, std::span<const double> u, const SpectralField& coeffs)>;

/// Right-hand side u_t with precomputed symbols and scratch space. One instance
/// per integrating thread.
class FchOperator {
 public:
  FchOperator(const EquationParams& eq, TorusGrid grid);

  void rhs(std::span<const Complex> u_hat, std::span<Complex> out);
  /// One classical RK4 step in place; re-symmetrizes and throws NonFinite on NaN/Inf.
  void rk4_step(std::span<Complex> u_hat, double dt);
  /// As rk4_step, but leaves `u_hat` untouched when the step is non-finite.
  void rk4_advance(ComplexVector& u_hat, double dt);

  const TorusGrid& grid() const { return grid_; }
  const EquationParams& equation() const { return eq_; }

 private:
  EquationParams eq_;
  TorusGrid grid_;
  RealVector k_odd_;
  RealVector frac_;       // |k|^a
  RealVector frac_d_;     // k |k|^a, Nyquist zeroed
  RealVector inv_mass_;   // 1 / (1 + e^a |k|^a)
  RealVector u_, w_, p_;
  ComplexVector sq_, prod_, tmp_;
  ComplexVector k1_, k2_, k3_, k4_, stage_, next_;
};

SpectralField rhs(const SpectralField& u_hat, const EquationParams& eq);
SpectralField rk4_step(const SpectralField& u_hat, double dt, const EquationParams& eq);

EvolutionResult evolve(std::span<const double> u0, const EvolutionConfig& cfg,
                       const MonitorCallback& on_monitor = {});

/// I1 = integral of (u + e^a D^a u) = zero mode.
double conserved_mass(const SpectralField& u_hat);
/// I2 = integral of (u^2 + |e^{a/2} D^{a/2} u|^2), via Plancherel.
double conserved_energy(const SpectralField& u_hat, double alpha, double epsilon = 1.0);
double conserved_mass(std::span<const double> u, const TorusGrid& grid);
double conserved_energy(std::span<const double> u, const TorusGrid& grid, double alpha, double epsilon = 1.0);

/// max_{|k| >= 0.9 k_max} |u_k| / max_k |u_k|.
double tail_indicator(const SpectralField& u_hat);

/// Gradient-catastrophe time of u_t + kappa1 u_x + 3 u u_x = 0: -1 / min(3 u0').
/// kappa1 is a Galilean shift and does not enter. Throws NoBreaking if min u0' >= 0.
double hopf_break_time(std::span<const double> u0, const TorusGrid& grid, double kappa1 = 0.0);

/// min_x (u0 + e^a D^a u0 + omega), logged as a diagnostic only.
double non_breaking_margin(std::span<const double> u0, const TorusGrid& grid, double alpha, double omega,
                           double epsilon = 1.0);

}  // namespace fch
