#include "fch/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "fch/csv.hpp"
#include "fch/errors.hpp"

#ifndef FCH_VERSION
#define FCH_VERSION "0.0.0"
#endif

namespace fch {

using ojson = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

constexpr std::pair<ExperimentKind, std::string_view> kKinds[] = {
    {ExperimentKind::solitary, "solitary"}, {ExperimentKind::propagate, "propagate"},
    {ExperimentKind::perturb, "perturb"},   {ExperimentKind::schwartz, "schwartz"},
    {ExperimentKind::dsw, "dsw"},           {ExperimentKind::fit, "fit"},
};

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

[[noreturn]] void field_error(const std::string& field, const std::string& msg) {
  throw ConfigError("field '" + field + "': " + msg);
}

// Typed access to one JSON object with unknown-key rejection.
class Section {
 public:
  Section(const nlohmann::json& obj, std::string path, std::set<std::string> allowed)
      : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) field_error(path_.empty() ? "<root>" : path_, "expected an object");
    for (const auto& [key, _] : obj_.items())
      if (!allowed.count(key)) field_error(name(key), "unknown key");
  }

  std::string name(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  bool has(const std::string& key) const { return obj_.contains(key); }
  const nlohmann::json& raw(const std::string& key) const { return obj_.at(key); }

  double number(const std::string& key, std::optional<double> fallback = std::nullopt) const {
    if (!has(key)) {
      if (fallback) return *fallback;
      field_error(name(key), "required");
    }
    const auto& v = obj_.at(key);
    if (!v.is_number()) field_error(name(key), "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) field_error(name(key), "not finite");
    return d;
  }

  std::size_t count(const std::string& key, std::optional<std::size_t> fallback = std::nullopt) const {
    if (!has(key)) {
      if (fallback) return *fallback;
      field_error(name(key), "required");
    }
    const auto& v = obj_.at(key);
    // accept 1e4-style literals if they are integral
    if (!v.is_number()) field_error(name(key), "expected a non-negative integer");
    const double d = v.get<double>();
    if (!(d >= 0.0) || std::floor(d) != d || d > 1e15) field_error(name(key), "expected a non-negative integer");
    return static_cast<std::size_t>(d);
  }

  std::string text(const std::string& key, std::optional<std::string> fallback = std::nullopt) const {
    if (!has(key)) {
      if (fallback) return *fallback;
      field_error(name(key), "required");
    }
    const auto& v = obj_.at(key);
    if (!v.is_string()) field_error(name(key), "expected a string");
    return v.get<std::string>();
  }

 private:
  const nlohmann::json& obj_;
  std::string path_;
};

InitialData parse_initial(const nlohmann::json& j) {
  const std::string type = Section(j, "initial", {"type", "c", "A", "lambda", "path"}).text("type");
  if (type == "solitary") {
    Section s(j, "initial", {"type", "c"});
    return SolitaryWave{s.number("c")};
  }
  if (type == "gaussian") {
    Section s(j, "initial", {"type", "A"});
    return GaussianBump{s.number("A")};
  }
  if (type == "perturbed") {
    Section s(j, "initial", {"type", "c", "A"});
    return PerturbedSoliton{s.number("c"), s.number("A")};
  }
  if (type == "scaled") {
    Section s(j, "initial", {"type", "c", "lambda"});
    return ScaledSoliton{s.number("c"), s.number("lambda")};
  }
  if (type == "sech2") {
    Section s(j, "initial", {"type"});
    return SechSquared{};
  }
  if (type == "file") {
    Section s(j, "initial", {"type", "path"});
    return FromFile{s.text("path")};
  }
  field_error("initial.type", "unknown initial data '" + type + "'");
}

ojson initial_json(const InitialData& d) {
  ojson j;
  if (const auto* p = std::get_if<SolitaryWave>(&d)) {
    j["type"] = "solitary";
    j["c"] = p->speed;
  } else if (const auto* p = std::get_if<GaussianBump>(&d)) {
    j["type"] = "gaussian";
    j["A"] = p->amplitude;
  } else if (const auto* p = std::get_if<PerturbedSoliton>(&d)) {
    j["type"] = "perturbed";
    j["c"] = p->speed;
    j["A"] = p->amplitude;
  } else if (const auto* p = std::get_if<ScaledSoliton>(&d)) {
    j["type"] = "scaled";
    j["c"] = p->speed;
    j["lambda"] = p->scale;
  } else if (std::holds_alternative<SechSquared>(d)) {
    j["type"] = "sech2";
  } else if (const auto* p = std::get_if<FromFile>(&d)) {
    j["type"] = "file";
    j["path"] = p->path;
  }
  return j;
}

std::optional<double> soliton_speed(const InitialData& d) {
  if (const auto* p = std::get_if<SolitaryWave>(&d)) return p->speed;
  if (const auto* p = std::get_if<PerturbedSoliton>(&d)) return p->speed;
  if (const auto* p = std::get_if<ScaledSoliton>(&d)) return p->speed;
  return std::nullopt;
}

// Sign of the deviation from the unperturbed wave (0 when unknown).
double perturbation_sign(const InitialData& d) {
  if (const auto* p = std::get_if<PerturbedSoliton>(&d)) return p->amplitude > 0 ? 1.0 : (p->amplitude < 0 ? -1.0 : 0.0);
  if (const auto* p = std::get_if<ScaledSoliton>(&d)) return p->scale > 1 ? 1.0 : (p->scale < 1 ? -1.0 : 0.0);
  return 0.0;
}

ojson decay_json(const SpectralDecay& d) {
  return ojson{{"class", std::string(to_string(d.kind))}, {"rate", d.rate}, {"k_lo", d.k_lo}, {"k_hi", d.k_hi}};
}

ojson wave_json(const SolitarySolution& s) {
  return ojson{{"alpha", s.problem.alpha},
               {"c", s.problem.speed},
               {"omega", 0.5 * s.problem.kappa1},
               {"amplitude", s.amplitude()},
               {"residual", s.residual_norm},
               {"decay", decay_json(s.decay)},
               {"newton_steps", s.newton_steps},
               {"krylov_iterations", s.krylov_iterations}};
}

ojson track_json(const TrackResult& tr) {
  std::size_t gaps = 0;
  for (const auto& e : tr.entries)
    if (!e.fit) ++gaps;
  ojson j{{"verdict", std::string(to_string(tr.verdict))},
          {"t_star", tr.t_star},
          {"mu", tr.mu},
          {"threshold", tr.threshold},
          {"extrapolated", tr.extrapolated},
          {"samples", tr.entries.size()},
          {"gaps", gaps}};
  for (auto it = tr.entries.rbegin(); it != tr.entries.rend(); ++it) {
    if (!it->fit) continue;
    const auto& f = *it->fit;
    j["last_fit"] = ojson{{"t", it->t},       {"mu", f.mu},       {"delta", f.delta},
                          {"x_pos", f.x_pos}, {"k_lo", f.k_lo},   {"k_hi", f.k_hi},
                          {"residual", f.residual}, {"mu_stderr", f.mu_stderr},
                          {"delta_stderr", f.delta_stderr}};
    break;
  }
  return j;
}

void write_singularity_csv(const fs::path& path, const TrackResult& tr) {
  RealVector t, mu, delta, xpos, res;
  for (const auto& e : tr.entries) {
    if (!e.fit) continue;
    t.push_back(e.t);
    mu.push_back(e.fit->mu);
    delta.push_back(e.fit->delta);
    xpos.push_back(e.fit->x_pos);
    res.push_back(e.fit->residual);
  }
  csv::write(path, {"t", "mu", "delta", "xpos", "residual"}, {t, mu, delta, xpos, res});
}

void write_field(const fs::path& path, const TorusGrid& grid, std::span<const double> u,
                 const std::string& name = "u") {
  csv::write(path, {"x", name}, {grid.nodes(), u});
}

void write_spectrum(const fs::path& path, const SpectralField& f) {
  const std::size_t half = f.size() / 2;
  RealVector k(half + 1), a(half + 1);
  for (std::size_t j = 0; j <= half; ++j) {
    k[j] = f.grid().wavenumbers()[j];
    a[j] = std::abs(f[j]);
  }
  // the Nyquist entry is stored with k = -k_max
  k[half] = std::abs(k[half]);
  csv::write(path, {"k", "abs_uhat"}, {k, a});
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw ConfigError("cannot write '" + path.string() + "'");
  f << text;
}

std::string read_text(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open '" + path.string() + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct Context {
  ExperimentReport& report;
  std::optional<fs::path> out;
};

void run_solitary(Context& ctx) {
  auto& rep = ctx.report;
  const auto& c = rep.config;
  const TorusGrid grid(c.half_period, c.n);
  std::vector<WaveParameters> schedule = c.schedule;
  if (schedule.empty()) {
    const auto speed = soliton_speed(c.initial);
    if (!speed) field_error("initial", "kind 'solitary' needs a schedule or a solitary initial datum");
    schedule.push_back({c.alpha, *speed, c.omega});
  }
  ContinuationPlan plan{grid, c.kappa2, schedule};

  auto emit = [&](const std::vector<SolitarySolution>& waves) {
    ojson family = ojson::array();
    RealVector a, sp, om, amp, res, steps, rate;
    for (const auto& w : waves) {
      family.push_back(wave_json(w));
      a.push_back(w.problem.alpha);
      sp.push_back(w.problem.speed);
      om.push_back(0.5 * w.problem.kappa1);
      amp.push_back(w.amplitude());
      res.push_back(w.residual_norm);
      steps.push_back(static_cast<double>(w.newton_steps));
      rate.push_back(w.decay.rate);
    }
    rep.results["family"] = family;
    if (!waves.empty()) {
      rep.results["residual"] = waves.back().residual_norm;
      rep.results["decay"] = decay_json(waves.back().decay);
      rep.results["amplitude"] = waves.back().amplitude();
    }
    if (ctx.out && !waves.empty()) {
      write_field(*ctx.out / "wave.csv", grid, waves.back().profile, "Q");
      csv::write(*ctx.out / "family.csv", {"alpha", "c", "omega", "amplitude", "residual", "newton_steps", "decay_rate"},
                 {a, sp, om, amp, res, steps, rate});
    }
  };

  try {
    rep.waves = trace_continuation(plan);
  } catch (const ContinuationFailure& f) {
    if (f.last_good()) rep.waves.push_back(*f.last_good());
    emit(rep.waves);
    rep.results["frontier"] = ojson{{"alpha", f.frontier().alpha}, {"c", f.frontier().speed}, {"omega", f.frontier().omega}};
    throw NoConvergence(f.what());
  }
  emit(rep.waves);
}

void run_fit(Context& ctx) {
  auto& rep = ctx.report;
  const auto& c = rep.config;
  const fs::path dir = c.snapshot_dir;
  TrackOptions opts;
  opts.fit = c.fit;
  // a run that lost resolution says so in its meta.json
  if (fs::exists(dir / "meta.json")) {
    try {
      const auto meta = nlohmann::json::parse(read_text(dir / "meta.json"));
      if (meta.contains("truncated") && meta["truncated"].is_boolean()) opts.run_truncated = meta["truncated"].get<bool>();
    } catch (const nlohmann::json::exception&) {
    }
  }
  rep.track = track_directory(dir, opts);
  rep.results["singularity"] = track_json(*rep.track);
  if (ctx.out) write_singularity_csv(*ctx.out / "singularity.csv", *rep.track);
}

void run_evolution(Context& ctx) {
  auto& rep = ctx.report;
  const auto& c = rep.config;
  const TorusGrid grid(c.half_period, c.n);
  const EquationParams eq = c.equation();

  SampledData data = sample(c.initial, grid, {c.alpha, c.omega, c.kappa2});
  rep.initial = data.u;
  if (data.wave) rep.waves.push_back(*data.wave);

  EvolutionConfig ec{eq, grid, c.t_end, c.steps, c.monitor_stride, c.snapshot_times, c.tail_stop};

  const bool tracked = c.kind == ExperimentKind::schwartz || c.kind == ExperimentKind::dsw;
  const bool dsw = c.kind == ExperimentKind::dsw;

  if (dsw) {
    try {
      rep.results["hopf_break_time"] = hopf_break_time(data.u, grid, eq.kappa1);
    } catch (const NoBreaking&) {
      rep.results["hopf_break_time"] = nullptr;
    }
    rep.results["non_breaking_margin"] = non_breaking_margin(data.u, grid, c.alpha, c.omega, c.epsilon);
  }

  std::vector<TrackEntry> entries;
  std::size_t next_sample = 0;
  const double half_dt = 0.5 * ec.dt();
  MonitorCallback cb;
  if (tracked) {
    cb = [&](double t, std::span<const double> u, const SpectralField& coeffs) {
      if (next_sample <= c.track_samples &&
          t + half_dt >= c.t_end * static_cast<double>(next_sample) / static_cast<double>(c.track_samples)) {
        entries.push_back(fit_entry(t, coeffs, c.fit));
        while (next_sample <= c.track_samples &&
               t + half_dt >= c.t_end * static_cast<double>(next_sample) / static_cast<double>(c.track_samples))
          ++next_sample;
      }
      if (dsw && rep.first_oscillation < 0.0 && count_oscillations(u) > 0) rep.first_oscillation = t;
    };
  }

  rep.evolution = evolve(data.u, ec, cb);
  const EvolutionResult& ev = *rep.evolution;
  const MonitorSeries& m = ev.monitors;

  auto& r = rep.results;
  r["stop"] = std::string(to_string(ev.stop));
  r["final_time"] = ev.final_time;
  r["steps_taken"] = ev.steps_taken;
  r["energy_drift"] = m.energy_drift.back();
  r["max_energy_drift"] = *std::max_element(m.energy_drift.begin(), m.energy_drift.end());
  const double i1 = m.mass.front();
  r["mass_drift"] = i1 != 0.0 ? std::abs(m.mass.back() - i1) / std::abs(i1) : std::abs(m.mass.back());
  const auto peak = std::max_element(m.linf.begin(), m.linf.end());
  r["linf_initial"] = m.linf.front();
  r["linf_final"] = m.linf.back();
  r["linf_max"] = *peak;
  r["linf_max_time"] = m.t[static_cast<std::size_t>(peak - m.linf.begin())];
  r["linf_final_fluctuation"] = final_fluctuation(m.t, m.linf);
  r["linf_monotone_after_peak"] = monotone_after_peak(m.linf);
  r["tail_final"] = m.tail.back();

  if (c.kind == ExperimentKind::propagate) {
    const auto speed = soliton_speed(c.initial);
    if (speed && data.wave) {
      const SpectralField q = forward(grid, data.wave->profile);
      const RealVector expected = inverse(translate(q, *speed * ev.final_time));
      const RealVector got = inverse(ev.final_state);
      double err = 0.0;
      for (std::size_t i = 0; i < got.size(); ++i) err = std::max(err, std::abs(got[i] - expected[i]));
      r["shape_error"] = err;
    }
  }

  if (c.kind == ExperimentKind::perturb && data.wave) {
    const double peak0 = data.wave->amplitude();
    // mean over the final quarter
    double sum = 0.0;
    std::size_t cnt = 0;
    for (std::size_t i = 0; i < m.size(); ++i)
      if (m.t[i] >= 0.75 * m.t.back()) {
        sum += m.linf[i];
        ++cnt;
      }
    const double level = sum / static_cast<double>(std::max<std::size_t>(cnt, 1));
    const double sign = perturbation_sign(c.initial);
    r["unperturbed_peak"] = peak0;
    r["final_level"] = level;
    r["perturbation_sign"] = sign;
    r["sign_consistent"] = sign != 0.0 && (level - peak0) * sign > 0.0;
  }

  if (tracked) {
    if (entries.empty() || entries.back().t < ev.final_time - half_dt)
      entries.push_back(fit_entry(ev.final_time, ev.final_state, c.fit));
    TrackOptions opts;
    opts.fit = c.fit;
    opts.run_truncated = ev.truncated();
    rep.track = judge(std::move(entries), grid.max_wavenumber(), opts);
    r["singularity"] = track_json(*rep.track);
  }
  if (dsw) {
    r["first_oscillation"] = rep.first_oscillation >= 0.0 ? ojson(rep.first_oscillation) : ojson(nullptr);
    r["oscillations_final"] = count_oscillations(inverse(ev.final_state));
  }

  if (ctx.out) {
    const fs::path& out = *ctx.out;
    csv::write(out / "monitors.csv", {"t", "I1", "I2", "energy_drift", "linf", "tail"},
               {m.t, m.mass, m.energy, m.energy_drift, m.linf, m.tail});
    std::set<std::string> written;
    for (const auto& s : ev.snapshots) {
      const std::string name = snapshot_filename(s.t);
      if (written.insert(name).second) write_field(out / name, grid, inverse(s.coeffs));
    }
    const std::string last = snapshot_filename(ev.final_time);
    if (written.insert(last).second) write_field(out / last, grid, inverse(ev.final_state));
    write_spectrum(out / "spectrum.csv", ev.final_state);
    if (rep.track) write_singularity_csv(out / "singularity.csv", *rep.track);
  }
}

ojson meta_json(const ExperimentReport& rep, const std::string& status, const std::string& error) {
  ojson j;
  j["name"] = rep.config.name;
  j["version"] = FCH_VERSION;
  j["scale"] = std::string(to_string(rep.scale));
  j["status"] = status;
  if (!error.empty()) j["error"] = error;
  j["wall_seconds"] = rep.wall_seconds;
  j["truncated"] = rep.evolution ? rep.evolution->truncated() : false;
  j["config"] = to_json(rep.config);
  j["results"] = rep.results;
  return j;
}

}  // namespace

std::string_view to_string(ExperimentKind kind) {
  for (const auto& [k, name] : kKinds)
    if (k == kind) return name;
  return "unknown";
}

std::string_view to_string(Scale scale) { return scale == Scale::desk ? "desk" : "paper"; }

ExperimentKind parse_kind(std::string_view name) {
  for (const auto& [k, n] : kKinds)
    if (n == name) return k;
  throw ConfigError("field 'kind': unknown experiment kind '" + std::string(name) + "'");
}

Scale parse_scale(std::string_view name) {
  if (name == "desk") return Scale::desk;
  if (name == "paper") return Scale::paper;
  throw ConfigError("unknown scale '" + std::string(name) + "' (expected desk or paper)");
}

void ExperimentConfig::validate() const {
  if (!(alpha > 0.0)) field_error("equation.alpha", "must be positive");
  if (!(omega > 0.0)) field_error("equation.omega", "must be positive");
  if (!std::isfinite(kappa2)) field_error("equation.kappa2", "not finite");
  if (!(epsilon > 0.0 && epsilon <= 1.0)) field_error("equation.epsilon", "must lie in (0, 1]");
  if (!(half_period > 0.0)) field_error("grid.L", "must be positive");
  if (!is_power_of_two(n) || n < 16) field_error("grid.N", "must be a power of two >= 16");
  if (kind == ExperimentKind::fit) {
    if (snapshot_dir.empty()) field_error("fit.snapshot_dir", "required for kind 'fit'");
  } else if (kind != ExperimentKind::solitary) {
    if (!(t_end > 0.0)) field_error("time.t_end", "must be positive");
    if (steps < 1) field_error("time.steps", "must be >= 1");
    if (monitor_stride < 1) field_error("time.monitor_stride", "must be >= 1");
    for (double t : snapshot_times)
      if (!(t >= 0.0 && t <= t_end)) field_error("time.snapshot_times", "times must lie in [0, t_end]");
    if (track_samples < 2) field_error("time.track_samples", "must be >= 2");
  }
  if (kind == ExperimentKind::propagate && !std::holds_alternative<SolitaryWave>(initial))
    field_error("initial.type", "kind 'propagate' needs a solitary initial datum");
  if (kind == ExperimentKind::perturb && !std::holds_alternative<PerturbedSoliton>(initial) &&
      !std::holds_alternative<ScaledSoliton>(initial))
    field_error("initial.type", "kind 'perturb' needs a perturbed or scaled initial datum");
  for (const auto& w : schedule)
    if (!(w.alpha > 0.0 && w.omega > 0.0 && std::isfinite(w.speed))) field_error("schedule", "invalid target");
  if (!(fit.k_min > 0.0)) field_error("fit.k_min", "must be positive");
  if (fit.k_max > 0.0 && !(fit.k_max > fit.k_min)) field_error("fit.k_max", "must exceed fit.k_min (or be 0)");
  if (!(fit.noise_floor > 0.0 && fit.noise_floor < 1.0)) field_error("fit.noise_floor", "must lie in (0, 1)");
  if (desk.n && (!is_power_of_two(*desk.n) || *desk.n < 16)) field_error("desk.N", "must be a power of two >= 16");
  if (desk.steps && *desk.steps < 1) field_error("desk.steps", "must be >= 1");
}

ExperimentConfig ExperimentConfig::at_scale(Scale scale) const {
  ExperimentConfig c = *this;
  if (scale == Scale::desk) {
    if (desk.n) c.n = *desk.n;
    if (desk.steps) c.steps = *desk.steps;
  }
  return c;
}

ExperimentConfig parse_config(std::string_view json_text, std::string_view origin) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text.begin(), json_text.end());
  } catch (const nlohmann::json::parse_error& e) {
    // byte offset -> line:column
    std::size_t line = 1, col = 1;
    const std::size_t upto = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, json_text.size());
    for (std::size_t i = 0; i < upto; ++i) {
      if (json_text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError(std::string(origin) + ":" + std::to_string(line) + ":" + std::to_string(col) +
                      ": JSON syntax error");
  }

  try {
    ExperimentConfig c;
    Section root(j, "", {"name", "kind", "equation", "grid", "time", "initial", "schedule", "fit", "desk", "output"});
    c.name = root.text("name", std::string("run"));
    c.kind = parse_kind(root.text("kind"));

    if (root.has("equation")) {
      Section s(root.raw("equation"), "equation", {"alpha", "omega", "kappa2", "epsilon"});
      c.alpha = s.number("alpha", c.alpha);
      c.omega = s.number("omega", c.omega);
      c.kappa2 = s.number("kappa2", c.kappa2);
      c.epsilon = s.number("epsilon", c.epsilon);
    }
    if (root.has("grid")) {
      Section s(root.raw("grid"), "grid", {"L", "N"});
      c.half_period = s.number("L", c.half_period);
      c.n = s.count("N", c.n);
    }
    if (root.has("time")) {
      Section s(root.raw("time"), "time",
                {"t_end", "steps", "monitor_stride", "snapshot_times", "tail_stop", "track_samples"});
      c.t_end = s.number("t_end", c.t_end);
      c.steps = s.count("steps", c.steps);
      c.monitor_stride = s.count("monitor_stride", c.monitor_stride);
      c.tail_stop = s.number("tail_stop", c.tail_stop);
      c.track_samples = s.count("track_samples", c.track_samples);
      if (s.has("snapshot_times")) {
        const auto& a = s.raw("snapshot_times");
        if (!a.is_array()) field_error("time.snapshot_times", "expected an array");
        for (const auto& v : a) {
          if (!v.is_number()) field_error("time.snapshot_times", "expected numbers");
          c.snapshot_times.push_back(v.get<double>());
        }
      }
    }
    if (root.has("initial")) c.initial = parse_initial(root.raw("initial"));
    if (root.has("schedule")) {
      const auto& a = root.raw("schedule");
      if (!a.is_array()) field_error("schedule", "expected an array");
      for (std::size_t i = 0; i < a.size(); ++i) {
        Section s(a[i], "schedule[" + std::to_string(i) + "]", {"alpha", "c", "omega"});
        c.schedule.push_back({s.number("alpha"), s.number("c"), s.number("omega", c.omega)});
      }
    }
    if (root.has("fit")) {
      Section s(root.raw("fit"), "fit", {"k_min", "k_max", "noise_floor", "min_modes", "snapshot_dir"});
      c.fit.k_min = s.number("k_min", c.fit.k_min);
      c.fit.k_max = s.number("k_max", c.fit.k_max);
      c.fit.noise_floor = s.number("noise_floor", c.fit.noise_floor);
      c.fit.min_modes = s.count("min_modes", c.fit.min_modes);
      c.snapshot_dir = s.text("snapshot_dir", std::string());
    }
    if (root.has("desk")) {
      Section s(root.raw("desk"), "desk", {"N", "steps"});
      if (s.has("N")) c.desk.n = s.count("N");
      if (s.has("steps")) c.desk.steps = s.count("steps");
    }
    c.output_dir = root.text("output", std::string());
    c.validate();
    return c;
  } catch (const ConfigError& e) {
    throw ConfigError(std::string(origin) + ": " + e.what());
  }
}

ExperimentConfig load_config(const fs::path& path) {
  return parse_config(read_text(path), path.string());
}

ojson to_json(const ExperimentConfig& c) {
  ojson j;
  j["name"] = c.name;
  j["kind"] = std::string(to_string(c.kind));
  j["equation"] = ojson{{"alpha", c.alpha}, {"omega", c.omega}, {"kappa2", c.kappa2}, {"epsilon", c.epsilon}};
  j["grid"] = ojson{{"L", c.half_period}, {"N", c.n}};
  if (c.kind != ExperimentKind::solitary && c.kind != ExperimentKind::fit) {
    j["time"] = ojson{{"t_end", c.t_end},
                      {"steps", c.steps},
                      {"monitor_stride", c.monitor_stride},
                      {"snapshot_times", c.snapshot_times},
                      {"tail_stop", c.tail_stop},
                      {"track_samples", c.track_samples}};
  }
  if (c.kind != ExperimentKind::fit) j["initial"] = initial_json(c.initial);
  if (!c.schedule.empty()) {
    ojson s = ojson::array();
    for (const auto& w : c.schedule) s.push_back(ojson{{"alpha", w.alpha}, {"c", w.speed}, {"omega", w.omega}});
    j["schedule"] = s;
  }
  j["fit"] = ojson{{"k_min", c.fit.k_min}, {"k_max", c.fit.k_max}, {"noise_floor", c.fit.noise_floor}, {"min_modes", c.fit.min_modes}};
  if (!c.snapshot_dir.empty()) j["fit"]["snapshot_dir"] = c.snapshot_dir;
  if (c.desk.n || c.desk.steps) {
    ojson d = ojson::object();
    if (c.desk.n) d["N"] = *c.desk.n;
    if (c.desk.steps) d["steps"] = *c.desk.steps;
    j["desk"] = d;
  }
  if (!c.output_dir.empty()) j["output"] = c.output_dir;
  return j;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg, const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  ExperimentReport rep;
  rep.scale = options.scale;
  rep.config = cfg.at_scale(options.scale);
  rep.config.validate();
  rep.results = ojson::object();

  Context ctx{rep, std::nullopt};
  const std::string dir = !options.output_dir.empty() ? options.output_dir : rep.config.output_dir;
  if (!dir.empty()) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory '" + dir + "': " + ec.message());
    ctx.out = fs::path(dir);
  }

  auto finish = [&](const std::string& status, const std::string& error) {
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (ctx.out) write_text(*ctx.out / "meta.json", meta_json(rep, status, error).dump(2) + "\n");
  };

  try {
    switch (rep.config.kind) {
      case ExperimentKind::solitary:
        run_solitary(ctx);
        break;
      case ExperimentKind::fit:
        run_fit(ctx);
        break;
      default:
        run_evolution(ctx);
        break;
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    finish("failed", e.what());
    throw;
  }
  finish("ok", "");
  return rep;
}

std::size_t count_oscillations(std::span<const double> u, double rel_prominence) {
  const std::size_t n = u.size();
  if (n < 3) return 0;
  double scale = 0.0;
  for (double v : u) scale = std::max(scale, std::abs(v));
  const double tol = rel_prominence * scale;
  RealVector left(n), right(n);
  left[0] = u[0];
  for (std::size_t i = 1; i < n; ++i) left[i] = std::max(left[i - 1], u[i]);
  right[n - 1] = u[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) right[i] = std::max(right[i + 1], u[i]);
  std::size_t count = 0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    // plateau-safe local minimum: strictly below one side, not above the other
    const bool is_min = (u[i] < u[i - 1] && u[i] <= u[i + 1]);
    if (!is_min) continue;
    if (std::min(left[i], right[i]) - u[i] > tol) ++count;
  }
  return count;
}

double final_fluctuation(std::span<const double> t, std::span<const double> v, double fraction) {
  if (t.empty() || t.size() != v.size()) return 0.0;
  const double from = (1.0 - fraction) * t.back();
  double lo = std::numeric_limits<double>::infinity(), hi = -lo, sum = 0.0;
  std::size_t cnt = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < from) continue;
    lo = std::min(lo, v[i]);
    hi = std::max(hi, v[i]);
    sum += v[i];
    ++cnt;
  }
  const double mean = sum / static_cast<double>(cnt);
  return mean != 0.0 ? (hi - lo) / std::abs(mean) : 0.0;
}

bool monotone_after_peak(std::span<const double> v, double rel_tol) {
  if (v.empty()) return true;
  const auto peak = static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
  for (std::size_t i = peak + 1; i < v.size(); ++i)
    if (v[i] > v[i - 1] * (1.0 + rel_tol)) return false;
  return true;
}

std::string snapshot_filename(double t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "snapshot_%.6f.csv", t);
  return buf;
}

TrackResult track_directory(const fs::path& dir, const TrackOptions& options) {
  if (!fs::is_directory(dir)) throw ConfigError("not a directory: '" + dir.string() + "'");
  std::vector<std::pair<double, fs::path>> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("snapshot_", 0) != 0 || entry.path().extension() != ".csv") continue;
    const std::string stem = entry.path().stem().string().substr(9);
    char* end = nullptr;
    const double t = std::strtod(stem.c_str(), &end);
    if (end == stem.c_str() || *end != '\0') continue;
    files.emplace_back(t, entry.path());
  }
  if (files.empty()) throw ConfigError("no snapshot_<t>.csv files in '" + dir.string() + "'");
  std::sort(files.begin(), files.end());

  std::optional<TorusGrid> grid;
  std::vector<Snapshot> snaps;
  for (const auto& [t, path] : files) {
    const csv::Table tab = csv::read(path);
    const auto& x = tab.column("x");
    const auto& u = tab.column("u");
    if (x.size() < 2) throw ConfigError(path.string() + ": too few rows");
    if (!grid) {
      const double h = x[1] - x[0];
      grid.emplace(static_cast<double>(x.size()) * h / (2.0 * M_PI), x.size());
    } else if (grid->size() != x.size()) {
      throw ConfigError(path.string() + ": grid size differs from the first snapshot");
    }
    snaps.push_back({t, forward(*grid, u)});
  }
  return track(snaps, options);
}

}  // namespace fch
