#include "fch/presets.hpp"

#include <string>

#include "fch/errors.hpp"

namespace fch {

namespace {

// Desk overrides only where the published resolution is expensive.
constexpr Preset kPresets[] = {
    {"fig-solitary-c2", "solitary waves c=2, omega=0.6 for alpha from 1.8 down to 0.9",
     R"({"name": "fig-solitary-c2", "kind": "solitary",
         "equation": {"omega": 0.6, "kappa2": 0.3333333333333333},
         "grid": {"L": 100, "N": 65536},
         "schedule": [{"alpha": 1.8, "c": 2}, {"alpha": 1.5, "c": 2}, {"alpha": 1.2, "c": 2},
                      {"alpha": 1.0, "c": 2}, {"alpha": 0.9, "c": 2}],
         "desk": {"N": 32768}})"},
    {"fig-propagate", "propagation of the alpha=1.5, c=2 solitary wave for t in [0, 1]",
     R"({"name": "fig-propagate", "kind": "propagate",
         "equation": {"alpha": 1.5, "omega": 0.6},
         "grid": {"L": 100, "N": 65536},
         "time": {"t_end": 1, "steps": 10000, "snapshot_times": [0, 0.5, 1]},
         "initial": {"type": "solitary", "c": 2},
         "desk": {"N": 8192}})"},
    {"fig-perturb-a15-p08", "alpha=1.5 solitary wave plus 0.08 exp(-x^2), t=40",
     R"({"name": "fig-perturb-a15-p08", "kind": "perturb",
         "equation": {"alpha": 1.5, "omega": 0.6},
         "grid": {"L": 100, "N": 65536},
         "time": {"t_end": 40, "steps": 10000, "snapshot_times": [0, 40]},
         "initial": {"type": "perturbed", "c": 2, "A": 0.08},
         "desk": {"N": 32768, "steps": 5000}})"},
    {"fig-perturb-a15-m08", "alpha=1.5 solitary wave minus 0.08 exp(-x^2), t=40",
     R"({"name": "fig-perturb-a15-m08", "kind": "perturb",
         "equation": {"alpha": 1.5, "omega": 0.6},
         "grid": {"L": 100, "N": 65536},
         "time": {"t_end": 40, "steps": 10000, "snapshot_times": [0, 40]},
         "initial": {"type": "perturbed", "c": 2, "A": -0.08},
         "desk": {"N": 32768, "steps": 5000}})"},
    {"fig-perturb-a09-p001", "alpha=0.9 solitary wave plus 0.01 exp(-x^2), t=100",
     R"({"name": "fig-perturb-a09-p001", "kind": "perturb",
         "equation": {"alpha": 0.9, "omega": 0.6},
         "grid": {"L": 100, "N": 65536},
         "time": {"t_end": 100, "steps": 20000, "snapshot_times": [0, 100]},
         "initial": {"type": "perturbed", "c": 2, "A": 0.01},
         "desk": {"N": 32768, "steps": 10000}})"},
    {"fig-perturb-a09-m001", "alpha=0.9 solitary wave minus 0.01 exp(-x^2), t=100",
     R"({"name": "fig-perturb-a09-m001", "kind": "perturb",
         "equation": {"alpha": 0.9, "omega": 0.6},
         "grid": {"L": 100, "N": 65536},
         "time": {"t_end": 100, "steps": 20000, "snapshot_times": [0, 100]},
         "initial": {"type": "perturbed", "c": 2, "A": -0.01},
         "desk": {"N": 32768, "steps": 10000}})"},
    {"fig-perturb-a09-l099", "alpha=0.9 solitary wave scaled by lambda=0.99, t=100",
     R"({"name": "fig-perturb-a09-l099", "kind": "perturb",
         "equation": {"alpha": 0.9, "omega": 0.6},
         "grid": {"L": 100, "N": 65536},
         "time": {"t_end": 100, "steps": 20000, "snapshot_times": [0, 100]},
         "initial": {"type": "scaled", "c": 2, "lambda": 0.99},
         "desk": {"N": 32768, "steps": 10000}})"},
    {"fig-perturb-a09-l101", "alpha=0.9 solitary wave scaled by lambda=1.01, t=100",
     R"({"name": "fig-perturb-a09-l101", "kind": "perturb",
         "equation": {"alpha": 0.9, "omega": 0.6},
         "grid": {"L": 100, "N": 65536},
         "time": {"t_end": 100, "steps": 20000, "snapshot_times": [0, 100]},
         "initial": {"type": "scaled", "c": 2, "lambda": 1.01},
         "desk": {"N": 32768, "steps": 10000}})"},
    {"fig-schwartz-a15", "Gaussian A=1, alpha=1.5: hump splits, a solitary wave emerges, t=20",
     R"({"name": "fig-schwartz-a15", "kind": "schwartz",
         "equation": {"alpha": 1.5, "omega": 0.6},
         "grid": {"L": 10, "N": 16384},
         "time": {"t_end": 20, "steps": 10000, "snapshot_times": [0, 5, 10, 15, 20]},
         "initial": {"type": "gaussian", "A": 1}})"},
    {"fig-radiation-a09", "Gaussian A=0.5, alpha=0.9: radiation, monotone L-infinity decay, t=40",
     R"({"name": "fig-radiation-a09", "kind": "schwartz",
         "equation": {"alpha": 0.9, "omega": 0.6},
         "grid": {"L": 10, "N": 16384},
         "time": {"t_end": 40, "steps": 20000, "snapshot_times": [0, 10, 20, 30, 40]},
         "initial": {"type": "gaussian", "A": 0.5}})"},
    {"fig-blowup-a09", "Gaussian A=1, alpha=0.9: cusp formation near t=1.77",
     R"({"name": "fig-blowup-a09", "kind": "schwartz",
         "equation": {"alpha": 0.9, "omega": 0.6},
         "grid": {"L": 3, "N": 16384},
         "time": {"t_end": 1.8, "steps": 10000, "snapshot_times": [0, 0.9, 1.5]},
         "initial": {"type": "gaussian", "A": 1}})"},
    {"fig-dsw-e1", "sech^2 data, alpha=1.5, epsilon=0.1, t=1",
     R"({"name": "fig-dsw-e1", "kind": "dsw",
         "equation": {"alpha": 1.5, "omega": 0.6, "epsilon": 0.1},
         "grid": {"L": 5, "N": 16384},
         "time": {"t_end": 1, "steps": 10000, "snapshot_times": [0, 1]},
         "initial": {"type": "sech2"}})"},
    {"fig-dsw-e2", "sech^2 data, alpha=1.5, epsilon=0.01: first oscillation near t=0.4, t=1",
     R"({"name": "fig-dsw-e2", "kind": "dsw",
         "equation": {"alpha": 1.5, "omega": 0.6, "epsilon": 0.01},
         "grid": {"L": 5, "N": 16384},
         "time": {"t_end": 1, "steps": 10000, "snapshot_times": [0, 0.35, 0.7, 1]},
         "initial": {"type": "sech2"}})"},
    {"fig-dsw-e3", "sech^2 data, alpha=1.5, epsilon=0.001, t=1 (N=2^18, N_t=1e5)",
     R"({"name": "fig-dsw-e3", "kind": "dsw",
         "equation": {"alpha": 1.5, "omega": 0.6, "epsilon": 0.001},
         "grid": {"L": 5, "N": 262144},
         "time": {"t_end": 1, "steps": 100000, "snapshot_times": [0, 1], "track_samples": 100},
         "initial": {"type": "sech2"},
         "desk": {"N": 131072, "steps": 50000}})"},
    {"fig-dsw-a09-e1", "sech^2 data, alpha=0.9, epsilon=0.1, t=1.005 and t=1.5",
     R"({"name": "fig-dsw-a09-e1", "kind": "dsw",
         "equation": {"alpha": 0.9, "omega": 0.6, "epsilon": 0.1},
         "grid": {"L": 5, "N": 16384},
         "time": {"t_end": 1.5, "steps": 10000, "snapshot_times": [0, 1.005, 1.5]},
         "initial": {"type": "sech2"}})"},
    {"fig-dsw-a09-e2", "sech^2 data, alpha=0.9, epsilon=0.01: cusp near t=0.68",
     R"({"name": "fig-dsw-a09-e2", "kind": "dsw",
         "equation": {"alpha": 0.9, "omega": 0.6, "epsilon": 0.01},
         "grid": {"L": 5, "N": 32768},
         "time": {"t_end": 0.7, "steps": 10000, "snapshot_times": [0, 0.35, 0.6]},
         "initial": {"type": "sech2"}})"},
};

}  // namespace

std::span<const Preset> presets() { return kPresets; }

const Preset* find_preset(std::string_view name) {
  for (const auto& p : kPresets)
    if (p.name == name) return &p;
  return nullptr;
}

ExperimentConfig preset_config(std::string_view name) {
  const Preset* p = find_preset(name);
  if (p == nullptr) throw ConfigError("unknown preset '" + std::string(name) + "'");
  return parse_config(p->json, p->name);
}

}  // namespace fch
