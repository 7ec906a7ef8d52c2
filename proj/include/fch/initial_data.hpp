#pragma once

// Initial-data descriptors for the experiments and their sampling on a grid.

#include <optional>
#include <string>
#include <variant>

#include "fch/grid.hpp"
#include "fch/solitary.hpp"

namespace fch {

struct SolitaryWave {
  double speed;
};

/// A exp(-x^2).
struct GaussianBump {
  double amplitude;
};

/// Q_c + A exp(-x^2).
struct PerturbedSoliton {
  double speed;
  double amplitude;
};

/// lambda Q_c.
struct ScaledSoliton {
  double speed;
  double scale;
};

/// sech^2 x.
struct SechSquared {};

/// One value per node, either a bare column or a CSV with an `x,u` header.
struct FromFile {
  std::string path;
};

using InitialData = std::variant<SolitaryWave, GaussianBump, PerturbedSoliton, ScaledSoliton, SechSquared, FromFile>;

/// Equation parameters the soliton-based descriptors need.
struct WaveContext {
  double alpha;
  double omega;
  double kappa2 = 1.0 / 3.0;
  NewtonSettings newton{};
};

struct SampledData {
  RealVector u;
  /// The underlying solitary wave, for descriptors built on one.
  std::optional<SolitarySolution> wave;
};

bool uses_solitary_wave(const InitialData& data);
std::string describe(const InitialData& data);

/// Throws ConfigError on unreadable files or a length mismatch, InvalidArgument
/// on non-finite amplitudes; solver errors propagate from the wave solve.
SampledData sample(const InitialData& data, const TorusGrid& grid, const WaveContext& ctx);

}  // namespace fch
