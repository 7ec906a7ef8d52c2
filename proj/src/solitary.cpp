#include "fch/solitary.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fch/ch_soliton.hpp"
#include "fch/errors.hpp"
#include "fch/kernels.hpp"
#include "fch/lsq.hpp"

namespace fch {

namespace ko = kernels::omp;

void SolitaryWaveProblem::validate() const {
  if (!(alpha > 0.0 && alpha <= 2.0))
    throw InvalidArgument("fractional order must lie in (0, 2], got " + std::to_string(alpha));
  if (speed == 0.0 || !std::isfinite(speed)) throw InvalidArgument("wave speed must be nonzero");
  if (!std::isfinite(kappa1) || !std::isfinite(kappa2)) throw InvalidArgument("non-finite coefficients");
}

std::string_view to_string(DecayClass kind) {
  switch (kind) {
    case DecayClass::exponential:
      return "exponential";
    case DecayClass::algebraic:
      return "algebraic";
    case DecayClass::unresolved:
      break;
  }
  return "unresolved";
}

WaveSymbols::WaveSymbols(const SolitaryWaveProblem& prob) {
  const auto kabs = prob.grid.abs_wavenumbers();
  const auto kodd = prob.grid.odd_wavenumbers();
  const std::size_t n = kabs.size();
  frac.resize(n);
  frac_d.resize(n);
  linear.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    frac[j] = std::pow(kabs[j], prob.alpha);
    frac_d[j] = kodd[j] * frac[j];
    linear[j] = -prob.speed * (1.0 + frac[j]) + prob.kappa1;
  }
}

namespace {

SpectralField residual_with(const SpectralField& qhat, std::span<const double> q,
                            const SolitaryWaveProblem& prob, const WaveSymbols& sym) {
  const TorusGrid& grid = prob.grid;
  const std::size_t n = grid.size();
  RealVector work(n), dq(n), prod(n);
  ComplexVector tmp(n);

  ko::multiply(q, q, work);
  SpectralField q2(grid);
  grid.forward_into(work, q2.coeffs());

  ko::scale_i(sym.frac_d, qhat.coeffs(), tmp);
  grid.inverse_into(tmp, dq);
  ko::multiply(q, dq, prod);
  SpectralField f(grid);
  grid.forward_into(prod, f.coeffs());
  const SpectralField anti = antiderivative(f, prod);

  SpectralField out(grid);
  auto o = out.coeffs();
  const auto qc = qhat.coeffs();
  const auto s = q2.coeffs();
  const auto a = anti.coeffs();
  const double k2 = prob.kappa2;
  for (std::size_t j = 0; j < n; ++j)
    o[j] = sym.linear[j] * qc[j] + 1.5 * s[j] + k2 * (sym.frac[j] * s[j] + a[j]);
  return out;
}

double max_abs_physical(const SpectralField& f) {
  const RealVector v = inverse(f);
  return ko::max_abs(std::span<const double>(v));
}

}  // namespace

SpectralField residual(const SpectralField& q, const SolitaryWaveProblem& prob) {
  prob.validate();
  const WaveSymbols sym(prob);
  return residual_with(q, inverse(q), prob, sym);
}

double residual_max_norm(std::span<const double> q, const SolitaryWaveProblem& prob) {
  prob.validate();
  const WaveSymbols sym(prob);
  return max_abs_physical(residual_with(forward(prob.grid, q), q, prob, sym));
}

double unintegrated_residual_max_norm(std::span<const double> q, const SolitaryWaveProblem& prob) {
  prob.validate();
  const TorusGrid& grid = prob.grid;
  const std::size_t n = grid.size();
  const SpectralField qhat = forward(grid, q);
  const SpectralField dq = spectral_derivative(qhat);
  RealVector sq(n);
  for (std::size_t i = 0; i < n; ++i) sq[i] = q[i] * q[i];
  const SpectralField dsq = spectral_derivative(forward(grid, sq));
  const SpectralField frac_dq = fractional_laplacian(dq, prob.alpha);
  const RealVector frac_dq_x = inverse(frac_dq);
  RealVector prod(n);
  for (std::size_t i = 0; i < n; ++i) prod[i] = q[i] * frac_dq_x[i];

  SpectralField total = (prob.kappa1 - prob.speed) * dq;
  total += 1.5 * dsq;
  total -= prob.speed * frac_dq;
  total += prob.kappa2 * fractional_laplacian(dsq, prob.alpha);
  total += prob.kappa2 * forward(grid, prod);
  return max_abs_physical(total);
}

Linearization::Linearization(const SpectralField& q, const SolitaryWaveProblem& prob)
    : Linearization(q, prob, std::make_shared<const WaveSymbols>(prob)) {}

Linearization::Linearization(const SpectralField& q, const SolitaryWaveProblem& prob,
                             std::shared_ptr<const WaveSymbols> symbols)
    : prob_(prob), symbols_(std::move(symbols)), q_(inverse(q)), dq_(q.size()) {
  ComplexVector tmp(q.size());
  ko::scale_i(symbols_->frac_d, q.coeffs(), tmp);
  prob_.grid.inverse_into(tmp, dq_);
}

SpectralField Linearization::apply(const SpectralField& v) const {
  const TorusGrid& grid = prob_.grid;
  const std::size_t n = grid.size();
  const WaveSymbols& sym = *symbols_;
  RealVector vx(n), work(n), dv(n);
  ComplexVector tmp(n);

  grid.inverse_into(v.coeffs(), vx);
  ko::multiply(q_, vx, work);
  SpectralField qv(grid);
  grid.forward_into(work, qv.coeffs());

  ko::scale_i(sym.frac_d, v.coeffs(), tmp);
  grid.inverse_into(tmp, dv);
  ko::multiply_add(vx, dq_, q_, dv, work);
  SpectralField g(grid);
  grid.forward_into(work, g.coeffs());
  const SpectralField anti = antiderivative(g, work);

  SpectralField out(grid);
  auto o = out.coeffs();
  const auto vc = v.coeffs();
  const auto s = qv.coeffs();
  const auto a = anti.coeffs();
  const double k2 = prob_.kappa2;
  for (std::size_t j = 0; j < n; ++j)
    o[j] = sym.linear[j] * vc[j] + 3.0 * s[j] + k2 * (2.0 * sym.frac[j] * s[j] + a[j]);
  return out;
}

SpectralField jacobian_action(const SpectralField& q, const SpectralField& v,
                              const SolitaryWaveProblem& prob) {
  prob.validate();
  return Linearization(q, prob).apply(v);
}

double SolitarySolution::amplitude() const {
  return *std::max_element(profile.begin(), profile.end());
}

SpectralDecay classify_decay(const SpectralField& field, double noise_floor) {
  const TorusGrid& grid = field.grid();
  const std::size_t half = grid.nyquist_index();
  const auto k = grid.wavenumbers();
  SpectralDecay out;

  const double peak = ko::max_abs(field.coeffs());
  if (peak == 0.0) return out;
  const double floor = noise_floor * peak;

  std::size_t cut = 0;
  for (std::size_t j = 1; j < half; ++j)
    if (std::abs(field[j]) > floor) cut = j;
  if (cut < 20) return out;

  std::vector<double> ones, kk, logk, y;
  for (std::size_t j = std::max<std::size_t>(1, cut / 10); j <= cut; ++j) {
    const double a = std::abs(field[j]);
    if (a <= floor) continue;
    ones.push_back(1.0);
    kk.push_back(-k[j]);
    logk.push_back(-std::log(k[j]));
    y.push_back(std::log(a));
  }
  out.k_lo = k[std::max<std::size_t>(1, cut / 10)];
  out.k_hi = k[cut];
  if (y.size() < 10) return out;

  const std::vector<std::vector<double>> exp_cols{ones, kk};
  const std::vector<std::vector<double>> alg_cols{ones, logk};
  const LinearFit exp_fit = least_squares(exp_cols, y);
  const LinearFit alg_fit = least_squares(alg_cols, y);
  const double delta = exp_fit.beta[1];
  if (exp_fit.aic() < alg_fit.aic() && delta > 5.0 / grid.max_wavenumber()) {
    out.kind = DecayClass::exponential;
    out.rate = delta;
  } else if (alg_fit.aic() < exp_fit.aic()) {
    out.kind = DecayClass::algebraic;
    out.rate = alg_fit.beta[1];
  }
  return out;
}

void center_and_symmetrize(std::span<double> q) {
  const std::size_t n = q.size();
  const auto peak = static_cast<std::size_t>(std::max_element(q.begin(), q.end()) - q.begin());
  const std::size_t center = n / 2;
  if (peak != center) {
    const std::size_t shift = (center + n - peak) % n;
    std::rotate(q.begin(), q.begin() + static_cast<std::ptrdiff_t>(n - shift), q.end());
  }
  for (std::size_t i = 1; i < center; ++i) {
    const double avg = 0.5 * (q[i] + q[n - i]);
    q[i] = avg;
    q[n - i] = avg;
  }
}

SolitarySolution newton_krylov_solve(const SolitaryWaveProblem& prob, std::span<const double> initial,
                                     const NewtonSettings& settings) {
  prob.validate();
  const TorusGrid& grid = prob.grid;
  const std::size_t n = grid.size();
  if (initial.size() != n) throw InvalidArgument("initial iterate has wrong length");
  const auto sym = std::make_shared<const WaveSymbols>(prob);

  // Right preconditioner: inverse of the constant-coefficient linear symbol.
  RealVector inv_linear(n);
  {
    double scale = 0.0;
    for (double p : sym->linear) scale = std::max(scale, std::abs(p));
    for (std::size_t j = 0; j < n; ++j) {
      const double p = sym->linear[j];
      inv_linear[j] = std::abs(p) > 1e-8 * scale ? 1.0 / p : 1.0;
    }
  }

  RealVector q(initial.begin(), initial.end());
  center_and_symmetrize(q);

  auto evaluate = [&](const RealVector& state, SpectralField& qhat, RealVector& r) {
    qhat = forward(grid, state);
    grid.inverse_into(residual_with(qhat, state, prob, *sym).coeffs(), r);
    const double m = ko::max_abs(std::span<const double>(r));
    return std::isfinite(m) ? m : std::numeric_limits<double>::infinity();
  };

  SpectralField qhat(grid);
  RealVector r(n);
  double rnorm = evaluate(q, qhat, r);

  SolitarySolution sol{prob, {}, SpectralField(grid), rnorm, {}, 0, 0, 0.0};
  bool converged = rnorm <= settings.tol;
  ComplexVector ctmp(n);

  while (!converged) {
    if (sol.newton_steps >= settings.max_newton)
      throw NoConvergence("Newton: no convergence after " + std::to_string(settings.max_newton) +
                          " steps (residual " + std::to_string(rnorm) + ")");
    const Linearization lin(qhat, prob, sym);

    if (settings.check_jacobian) {
      SpectralField v = forward(grid, r);
      // residual() is quadratic, so central differences are exact up to rounding
      // and a large step keeps the rounding small.
      const double eps = 1e-4 * std::max(1.0, ko::max_abs(std::span<const double>(q))) /
                         std::max(1e-300, ko::max_abs(std::span<const double>(r)));
      SpectralField plus = qhat + eps * v;
      SpectralField minus = qhat - eps * v;
      SpectralField fd = residual_with(plus, inverse(plus), prob, *sym);
      fd -= residual_with(minus, inverse(minus), prob, *sym);
      fd *= 1.0 / (2.0 * eps);
      SpectralField exact = lin.apply(v);
      const double scale = ko::max_abs(exact.coeffs());
      fd -= exact;
      if (scale > 0.0) sol.jacobian_check = std::max(sol.jacobian_check, ko::max_abs(fd.coeffs()) / scale);
    }

    const LinearMap op = [&](std::span<const double> x, std::span<double> y) {
      grid.forward_into(x, ctmp);
      const SpectralField jx = lin.apply(SpectralField(grid, ctmp));
      grid.inverse_into(jx.coeffs(), y);
    };
    const LinearMap precond = [&](std::span<const double> x, std::span<double> y) {
      grid.forward_into(x, ctmp);
      for (std::size_t j = 0; j < n; ++j) ctmp[j] *= inv_linear[j];
      grid.inverse_into(ctmp, y);
    };
    RealVector rhs(n);
    for (std::size_t i = 0; i < n; ++i) rhs[i] = -r[i];
    const GmresResult step = gmres(op, precond, rhs, settings.gmres);
    sol.krylov_iterations += step.iterations;

    double lambda = 1.0;
    bool accepted = false;
    RealVector trial(n), trial_r(n);
    SpectralField trial_hat(grid);
    for (int h = 0; h <= settings.max_halvings; ++h, lambda *= 0.5) {
      for (std::size_t i = 0; i < n; ++i) trial[i] = q[i] + lambda * step.x[i];
      center_and_symmetrize(trial);
      const double tn = evaluate(trial, trial_hat, trial_r);
      if (tn < rnorm) {
        q.swap(trial);
        r.swap(trial_r);
        qhat = trial_hat;
        rnorm = tn;
        accepted = true;
        break;
      }
    }
    ++sol.newton_steps;
    if (!accepted)
      throw NoConvergence("Newton: residual stagnated at " + std::to_string(rnorm) + " after " +
                          std::to_string(sol.newton_steps) + " steps");
    converged = rnorm <= settings.tol;
  }

  sol.profile = std::move(q);
  sol.coeffs = qhat;
  sol.residual_norm = rnorm;
  sol.decay = classify_decay(sol.coeffs);
  if (settings.require_smooth && sol.decay.kind == DecayClass::algebraic)
    throw NonSmoothLimit("Newton converged to a limit with algebraic spectral decay (rate " +
                         std::to_string(sol.decay.rate) + ")");
  return sol;
}

ContinuationFailure::ContinuationFailure(const std::string& what, std::optional<SolitarySolution> last_good,
                                         WaveParameters frontier)
    : std::runtime_error(what), last_good_(std::move(last_good)), frontier_(frontier) {}

namespace {

WaveParameters lerp(const WaveParameters& a, const WaveParameters& b, double t) {
  return {a.alpha + t * (b.alpha - a.alpha), a.speed + t * (b.speed - a.speed),
          a.omega + t * (b.omega - a.omega)};
}

WaveParameters params_of(const SolitarySolution& s) {
  return {s.problem.alpha, s.problem.speed, 0.5 * s.problem.kappa1};
}

class Tracer {
 public:
  explicit Tracer(const ContinuationPlan& plan) : plan_(plan) {}

  SolitarySolution solve(const WaveParameters& p, std::span<const double> seed) const {
    const SolitaryWaveProblem prob{p.alpha, p.speed, 2.0 * p.omega, plan_.kappa2, plan_.grid};
    return newton_krylov_solve(prob, seed, plan_.newton);
  }

  void start(const WaveParameters& first) {
    const WaveParameters anchor{2.0, first.speed, first.omega};
    const RealVector seed = sample_on_grid(ChSolitonParams(anchor.speed, anchor.omega), plan_.grid);
    try {
      last_ = solve(anchor, seed);
    } catch (const Error& e) {
      throw ContinuationFailure(std::string("continuation: CH seed did not converge: ") + e.what(),
                                std::nullopt, anchor);
    }
  }

  void reach(const WaveParameters& target, int depth) {
    try {
      last_ = solve(target, last_->profile);
      return;
    } catch (const NoConvergence&) {
    } catch (const NonSmoothLimit&) {
    }
    if (depth >= plan_.max_bisections)
      throw ContinuationFailure("continuation: no smooth solution reached at alpha=" +
                                    std::to_string(target.alpha) + ", c=" + std::to_string(target.speed) +
                                    ", omega=" + std::to_string(target.omega),
                                last_, target);
    reach(lerp(params_of(*last_), target, 0.5), depth + 1);
    reach(target, depth + 1);
  }

  void walk_to(const WaveParameters& target) {
    const WaveParameters from = params_of(*last_);
    const double steps = std::max({std::abs(target.alpha - from.alpha) / plan_.max_alpha_step,
                                   std::abs(target.speed - from.speed) / plan_.max_speed_step,
                                   std::abs(target.omega - from.omega) / plan_.max_omega_step, 1.0});
    const int count = static_cast<int>(std::ceil(steps - 1e-9));
    for (int s = 1; s <= count; ++s) reach(s == count ? target : lerp(from, target, double(s) / count), 0);
  }

  const SolitarySolution& last() const { return *last_; }

 private:
  const ContinuationPlan& plan_;
  std::optional<SolitarySolution> last_;
};

}  // namespace

std::vector<SolitarySolution> trace_continuation(const ContinuationPlan& plan) {
  if (plan.schedule.empty()) return {};
  Tracer tracer(plan);
  tracer.start(plan.schedule.front());
  std::vector<SolitarySolution> out;
  out.reserve(plan.schedule.size());
  for (const auto& target : plan.schedule) {
    tracer.walk_to(target);
    out.push_back(tracer.last());
  }
  return out;
}

SolitarySolution solitary_wave(const TorusGrid& grid, WaveParameters target, double kappa2,
                               const NewtonSettings& newton) {
  ContinuationPlan plan{grid, kappa2, {target}, newton};
  return trace_continuation(plan).front();
}

}  // namespace fch
