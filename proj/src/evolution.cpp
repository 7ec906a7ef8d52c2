#include "fch/evolution.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "fch/errors.hpp"
#include "fch/kernels.hpp"

namespace fch {

namespace ko = kernels::omp;

void EvolutionConfig::validate() const {
  if (steps < 1) throw InvalidArgument("number of time steps must be >= 1");
  if (!(t_end > 0.0)) throw InvalidArgument("final time must be positive");
  if (!(equation.epsilon > 0.0 && equation.epsilon <= 1.0))
    throw InvalidArgument("epsilon must lie in (0, 1]");
  if (!(equation.alpha > 0.0)) throw InvalidArgument("fractional order must be positive");
  if (monitor_stride < 1) throw InvalidArgument("monitor stride must be >= 1");
}

std::string_view to_string(StopReason reason) {
  switch (reason) {
    case StopReason::completed:
      return "completed";
    case StopReason::resolution_lost:
      return "resolution_lost";
    case StopReason::non_finite:
      return "non_finite";
  }
  return "unknown";
}

FchOperator::FchOperator(const EquationParams& eq, TorusGrid grid) : eq_(eq), grid_(std::move(grid)) {
  const std::size_t n = grid_.size();
  const auto kodd = grid_.odd_wavenumbers();
  const auto kabs = grid_.abs_wavenumbers();
  const double scale = std::pow(eq_.epsilon, eq_.alpha);
  k_odd_.assign(kodd.begin(), kodd.end());
  frac_.resize(n);
  frac_d_.resize(n);
  inv_mass_.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    frac_[j] = std::pow(kabs[j], eq_.alpha);
    frac_d_[j] = kodd[j] * frac_[j];
    inv_mass_[j] = 1.0 / (1.0 + scale * frac_[j]);
  }
  u_.resize(n);
  w_.resize(n);
  p_.resize(n);
  for (auto* v : {&sq_, &prod_, &tmp_, &k1_, &k2_, &k3_, &k4_, &stage_, &next_}) v->resize(n);
}

void FchOperator::rhs(std::span<const Complex> u_hat, std::span<Complex> out) {
  const std::size_t n = grid_.size();
  grid_.inverse_into(u_hat, u_);
  ko::multiply(u_, u_, p_);
  grid_.forward_into(p_, sq_);
  ko::scale_i(frac_d_, u_hat, tmp_);
  grid_.inverse_into(tmp_, w_);
  ko::multiply(u_, w_, p_);
  grid_.forward_into(p_, prod_);

  // u_t^ = -(1 + e^a|k|^a)^{-1} [ ik k1 u^ + 3/2 ik F(u^2) + k2 e^a (|k|^a ik F(u^2) + F(u D^a u_x)) ]
  const double k1 = eq_.kappa1;
  const double q = 1.5 * eq_.quadratic;
  const double k2 = eq_.kappa2 * std::pow(eq_.epsilon, eq_.alpha);
  const auto nn = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t jj = 0; jj < nn; ++jj) {
    const auto j = static_cast<std::size_t>(jj);
    // a = k1 u^ + q F(u^2);  bracket = i k a + k2 (i k|k|^a F(u^2) + F(u D^a u_x))
    const double ar = k1 * u_hat[j].real() + q * sq_[j].real();
    const double ai = k1 * u_hat[j].imag() + q * sq_[j].imag();
    const double kd = k2 * frac_d_[j];
    const double br = -k_odd_[j] * ai - kd * sq_[j].imag() + k2 * prod_[j].real();
    const double bi = k_odd_[j] * ar + kd * sq_[j].real() + k2 * prod_[j].imag();
    out[j] = Complex(-inv_mass_[j] * br, -inv_mass_[j] * bi);
  }
}

void FchOperator::rk4_step(std::span<Complex> y, double dt) {
  ComplexVector work(y.begin(), y.end());
  rk4_advance(work, dt);
  std::copy(work.begin(), work.end(), y.begin());
}

void FchOperator::rk4_advance(ComplexVector& y, double dt) {
  rhs(y, k1_);
  ko::axpy(y, 0.5 * dt, k1_, stage_);
  rhs(stage_, k2_);
  ko::axpy(y, 0.5 * dt, k2_, stage_);
  rhs(stage_, k3_);
  ko::axpy(y, dt, k3_, stage_);
  rhs(stage_, k4_);
  ko::rk4_combine(y, k1_, k2_, k3_, k4_, dt, next_);
  ko::hermitian_symmetrize(next_);
  if (!ko::all_finite(next_)) throw NonFinite("RK4 step produced a non-finite coefficient");
  y.swap(next_);
}

SpectralField rhs(const SpectralField& u_hat, const EquationParams& eq) {
  FchOperator op(eq, u_hat.grid());
  SpectralField out(u_hat.grid());
  op.rhs(u_hat.coeffs(), out.coeffs());
  return out;
}

SpectralField rk4_step(const SpectralField& u_hat, double dt, const EquationParams& eq) {
  FchOperator op(eq, u_hat.grid());
  SpectralField out = u_hat;
  op.rk4_step(out.coeffs(), dt);
  return out;
}

double conserved_mass(const SpectralField& u_hat) { return u_hat[0].real(); }

namespace {

RealVector energy_weights(const TorusGrid& grid, double alpha, double epsilon) {
  const auto kabs = grid.abs_wavenumbers();
  const double scale = std::pow(epsilon, alpha);
  RealVector w(kabs.size());
  for (std::size_t j = 0; j < w.size(); ++j) w[j] = 1.0 + scale * std::pow(kabs[j], alpha);
  return w;
}

double weighted_energy(const SpectralField& u_hat, std::span<const double> weights) {
  double sum = 0.0;
  for (std::size_t j = 0; j < u_hat.size(); ++j) sum += weights[j] * std::norm(u_hat[j]);
  return sum / u_hat.grid().period();
}

}  // namespace

double conserved_energy(const SpectralField& u_hat, double alpha, double epsilon) {
  return weighted_energy(u_hat, energy_weights(u_hat.grid(), alpha, epsilon));
}

double conserved_mass(std::span<const double> u, const TorusGrid& grid) {
  return conserved_mass(forward(grid, u));
}

double conserved_energy(std::span<const double> u, const TorusGrid& grid, double alpha, double epsilon) {
  return conserved_energy(forward(grid, u), alpha, epsilon);
}

double tail_indicator(const SpectralField& u_hat) {
  const double peak = ko::max_abs(u_hat.coeffs());
  if (peak == 0.0) return 0.0;
  const double cut = 0.9 * u_hat.grid().max_wavenumber();
  const auto kabs = u_hat.grid().abs_wavenumbers();
  double tail = 0.0;
  for (std::size_t j = 0; j < u_hat.size(); ++j)
    if (kabs[j] >= cut) tail = std::max(tail, std::abs(u_hat[j]));
  return tail / peak;
}

namespace {

class MonitorRecorder {
 public:
  MonitorRecorder(const EvolutionConfig& cfg, const MonitorCallback& cb)
      : cb_(cb), weights_(energy_weights(cfg.grid, cfg.equation.alpha, cfg.equation.epsilon)) {}

  /// Returns the tail indicator of the sample.
  double record(double t, const SpectralField& state) {
    const RealVector u = inverse(state);
    const double mass = conserved_mass(state);
    const double energy = weighted_energy(state, weights_);
    if (series.size() == 0) energy0_ = energy;
    const double drift = energy0_ != 0.0 ? std::abs(energy - energy0_) / std::abs(energy0_) : std::abs(energy);
    const double tail = tail_indicator(state);
    series.t.push_back(t);
    series.mass.push_back(mass);
    series.energy.push_back(energy);
    series.energy_drift.push_back(drift);
    series.linf.push_back(ko::max_abs(std::span<const double>(u)));
    series.tail.push_back(tail);
    if (cb_) cb_(t, u, state);
    return tail;
  }

  MonitorSeries series;

 private:
  const MonitorCallback& cb_;
  RealVector weights_;
  double energy0_ = 0.0;
};

}  // namespace

EvolutionResult evolve(std::span<const double> u0, const EvolutionConfig& cfg, const MonitorCallback& on_monitor) {
  cfg.validate();
  if (u0.size() != cfg.grid.size()) throw InvalidArgument("initial data length does not match the grid");

  const double dt = cfg.dt();
  FchOperator op(cfg.equation, cfg.grid);
  SpectralField state = forward(cfg.grid, u0);
  if (cfg.dealias) apply_two_thirds_filter(state);
  ComplexVector y(state.coeffs().begin(), state.coeffs().end());

  // Requested output times map to the nearest step index.
  std::vector<std::pair<std::size_t, double>> wanted;
  for (double t : cfg.snapshot_times) {
    if (t < 0.0 || t > cfg.t_end * (1.0 + 1e-12)) continue;
    const auto idx = static_cast<std::size_t>(std::llround(t / dt));
    wanted.emplace_back(std::min(idx, cfg.steps), t);
  }
  std::sort(wanted.begin(), wanted.end());
  std::size_t next_snap = 0;

  EvolutionResult result{state, 0.0, 0, {}, {}, StopReason::completed};
  MonitorRecorder monitors(cfg, on_monitor);

  auto emit_snapshots = [&](std::size_t step, const SpectralField& s) {
    while (next_snap < wanted.size() && wanted[next_snap].first == step) {
      result.snapshots.push_back({static_cast<double>(step) * dt, s});
      ++next_snap;
    }
  };

  double tail = monitors.record(0.0, state);
  emit_snapshots(0, state);
  std::size_t step = 0;
  while (step < cfg.steps) {
    if (cfg.tail_stop > 0.0 && tail > cfg.tail_stop) {
      result.stop = StopReason::resolution_lost;
      break;
    }
    try {
      op.rk4_advance(y, dt);
    } catch (const NonFinite&) {
      result.stop = StopReason::non_finite;
      break;
    }
    ++step;
    const double t = static_cast<double>(step) * dt;
    const bool monitor = step % cfg.monitor_stride == 0 || step == cfg.steps;
    const bool snapshot = next_snap < wanted.size() && wanted[next_snap].first == step;
    if (cfg.dealias || monitor || snapshot) {
      std::copy(y.begin(), y.end(), state.coeffs().begin());
      if (cfg.dealias) {
        apply_two_thirds_filter(state);
        std::copy(state.coeffs().begin(), state.coeffs().end(), y.begin());
      }
    }
    if (snapshot) emit_snapshots(step, state);
    if (monitor) tail = monitors.record(t, state);
  }

  std::copy(y.begin(), y.end(), state.coeffs().begin());
  result.final_state = std::move(state);
  result.final_time = static_cast<double>(step) * dt;
  result.steps_taken = step;
  result.monitors = std::move(monitors.series);
  return result;
}

double hopf_break_time(std::span<const double> u0, const TorusGrid& grid, double /*kappa1*/) {
  if (u0.size() != grid.size()) throw InvalidArgument("initial data length does not match the grid");
  const SpectralField u_hat = forward(grid, u0);
  const RealVector du = inverse(spectral_derivative(u_hat));
  const std::size_t n = du.size();
  const auto imin = static_cast<std::size_t>(std::min_element(du.begin(), du.end()) - du.begin());
  if (!(du[imin] < 0.0)) throw NoBreaking("initial data has no negative slope; no gradient catastrophe");

  // parabola through the minimum and its neighbours
  const double h = grid.spacing();
  const double a = du[(imin + n - 1) % n];
  const double b = du[imin];
  const double c = du[(imin + 1) % n];
  const double curvature = a - 2.0 * b + c;
  double slope = b;
  double offset = 0.0;
  if (curvature > 0.0) {
    offset = 0.5 * (a - c) / curvature;
    slope = b - 0.25 * (a - c) * offset;
  }

  // polish on the trigonometric interpolant: Newton on u'' = 0
  const auto k = grid.odd_wavenumbers();
  const double x_node = grid.nodes()[imin];
  const double norm = 1.0 / grid.period();
  auto derivatives = [&](double x) {
    double d1 = 0.0, d2 = 0.0, d3 = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (k[j] == 0.0) continue;
      const Complex e = u_hat[j] * std::exp(Complex(0.0, k[j] * x));
      const double k2 = k[j] * k[j];
      d1 -= k[j] * e.imag();
      d2 -= k2 * e.real();
      d3 += k2 * k[j] * e.imag();
    }
    return std::array<double, 3>{d1 * norm, d2 * norm, d3 * norm};
  };
  double x = x_node + offset * h;
  for (int it = 0; it < 8; ++it) {
    const auto d = derivatives(x);
    if (!(d[2] > 0.0)) break;
    const double step = d[1] / d[2];
    x -= step;
    if (std::abs(x - x_node) > h) break;
    if (std::abs(step) <= 1e-14 * h) {
      slope = std::min(slope, derivatives(x)[0]);
      break;
    }
  }
  return -1.0 / (3.0 * slope);
}

double non_breaking_margin(std::span<const double> u0, const TorusGrid& grid, double alpha, double omega,
                           double epsilon) {
  const SpectralField u_hat = forward(grid, u0);
  SpectralField d = fractional_laplacian(u_hat, alpha);
  d *= std::pow(epsilon, alpha);
  const RealVector du = inverse(d);
  double margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < u0.size(); ++i) margin = std::min(margin, u0[i] + du[i] + omega);
  return margin;
}

}  // namespace fch
