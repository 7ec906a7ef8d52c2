// fch: command-line runner for the fractional CH experiments.
//
//   fch run <config.json|preset> [--scale desk|paper] [--out DIR]
//   fch presets
//   fch fit <snapshot-dir> [--k-min K] [--k-max K] [--out DIR]
//
// Exit status: 0 success, 2 configuration error, 3 numerical failure.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fch/errors.hpp"
#include "fch/experiment.hpp"
#include "fch/kernels.hpp"
#include "fch/presets.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kNumericalFailure = 3;

void print_summary(const fch::ExperimentReport& rep) {
  std::printf("%s (%s, %s scale) finished in %.1f s\n", rep.config.name.c_str(),
              std::string(fch::to_string(rep.config.kind)).c_str(), std::string(fch::to_string(rep.scale)).c_str(),
              rep.wall_seconds);
  std::cout << rep.results.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudospectral solver suite for the fractional Camassa-Holm equation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", FCH_VERSION);

  std::string target, scale = "paper", out_dir;
  auto* run = app.add_subcommand("run", "run an experiment from a JSON config or a preset name");
  run->add_option("config", target, "config file or preset name")->required();
  run->add_option("--scale", scale, "desk or paper")->check(CLI::IsMember({"desk", "paper"}));
  run->add_option("--out", out_dir, "output directory (default: config 'output' or ./<name>)");

  app.add_subcommand("presets", "list built-in presets");

  std::string snap_dir;
  double k_min = 100.0;
  double k_max = 0.0;
  auto* fit = app.add_subcommand("fit", "fit the Fourier asymptotics of snapshot_<t>.csv files");
  fit->add_option("snapshot-dir", snap_dir, "directory with snapshot files")->required();
  fit->add_option("--k-min", k_min, "smallest wavenumber in the fit window");
  fit->add_option("--k-max", k_max, "largest wavenumber in the fit window (default: last mode above the noise floor)");
  fit->add_option("--out", out_dir, "output directory (default: <snapshot-dir>/fit)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  fch::kernels::configure_threads_from_env();

  try {
    if (app.got_subcommand("presets")) {
      for (const auto& p : fch::presets()) std::printf("%-22s %s\n", std::string(p.name).c_str(), std::string(p.anchor).c_str());
      return 0;
    }

    fch::ExperimentConfig cfg;
    fch::RunOptions opts;
    if (app.got_subcommand("run")) {
      if (std::filesystem::is_regular_file(target)) {
        cfg = fch::load_config(target);
      } else if (fch::find_preset(target) != nullptr) {
        cfg = fch::preset_config(target);
      } else {
        throw fch::ConfigError("'" + target + "' is neither a config file nor a preset (see `fch presets`)");
      }
      opts.scale = fch::parse_scale(scale);
      opts.output_dir = !out_dir.empty() ? out_dir : (!cfg.output_dir.empty() ? cfg.output_dir : cfg.name);
    } else {
      cfg.name = "fit";
      cfg.kind = fch::ExperimentKind::fit;
      cfg.snapshot_dir = snap_dir;
      cfg.fit.k_min = k_min;
      cfg.fit.k_max = k_max;
      opts.output_dir = !out_dir.empty() ? out_dir : (std::filesystem::path(snap_dir) / "fit").string();
    }

    const auto rep = fch::run_experiment(cfg, opts);
    print_summary(rep);
    std::printf("artifacts: %s\n", opts.output_dir.c_str());
    return 0;
  } catch (const fch::ConfigError& e) {
    std::fprintf(stderr, "fch: configuration error: %s\n", e.what());
    return kConfigError;
  } catch (const fch::InvalidArgument& e) {
    std::fprintf(stderr, "fch: configuration error: %s\n", e.what());
    return kConfigError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "fch: numerical failure: %s\n", e.what());
    return kNumericalFailure;
  }
}
