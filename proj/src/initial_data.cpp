#include "fch/initial_data.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "fch/errors.hpp"

namespace fch {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw InvalidArgument(std::string("non-finite ") + what);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

RealVector read_column(const std::string& path, std::size_t n) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open initial data file '" + path + "'");
  RealVector u;
  u.reserve(n);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto comma = line.rfind(',');
    const std::string field = comma == std::string::npos ? line : line.substr(comma + 1);
    char* end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    if (end == field.c_str()) {
      if (lineno == 1) continue;  // header
      throw ConfigError(path + ":" + std::to_string(lineno) + ": not a number: '" + field + "'");
    }
    if (!std::isfinite(v)) throw ConfigError(path + ":" + std::to_string(lineno) + ": non-finite value");
    u.push_back(v);
  }
  if (u.size() != n)
    throw ConfigError(path + ": expected " + std::to_string(n) + " values, found " + std::to_string(u.size()));
  return u;
}

SolitarySolution wave_for(double speed, const TorusGrid& grid, const WaveContext& ctx) {
  require_finite(speed, "speed");
  return solitary_wave(grid, {ctx.alpha, speed, ctx.omega}, ctx.kappa2, ctx.newton);
}

}  // namespace

bool uses_solitary_wave(const InitialData& data) {
  return std::holds_alternative<SolitaryWave>(data) || std::holds_alternative<PerturbedSoliton>(data) ||
         std::holds_alternative<ScaledSoliton>(data);
}

std::string describe(const InitialData& data) {
  return std::visit(overloaded{
                        [](const SolitaryWave& d) { return "solitary(c=" + fmt(d.speed) + ")"; },
                        [](const GaussianBump& d) { return "gaussian(A=" + fmt(d.amplitude) + ")"; },
                        [](const PerturbedSoliton& d) {
                          return "perturbed(c=" + fmt(d.speed) + ", A=" + fmt(d.amplitude) + ")";
                        },
                        [](const ScaledSoliton& d) {
                          return "scaled(c=" + fmt(d.speed) + ", lambda=" + fmt(d.scale) + ")";
                        },
                        [](const SechSquared&) { return std::string("sech2"); },
                        [](const FromFile& d) { return "file(" + d.path + ")"; },
                    },
                    data);
}

SampledData sample(const InitialData& data, const TorusGrid& grid, const WaveContext& ctx) {
  const auto x = grid.nodes();
  const std::size_t n = grid.size();
  SampledData out;
  out.u.resize(n);

  std::visit(overloaded{
                 [&](const SolitaryWave& d) {
                   out.wave = wave_for(d.speed, grid, ctx);
                   out.u = out.wave->profile;
                 },
                 [&](const GaussianBump& d) {
                   require_finite(d.amplitude, "amplitude");
                   for (std::size_t i = 0; i < n; ++i) out.u[i] = d.amplitude * std::exp(-x[i] * x[i]);
                 },
                 [&](const PerturbedSoliton& d) {
                   require_finite(d.amplitude, "amplitude");
                   out.wave = wave_for(d.speed, grid, ctx);
                   for (std::size_t i = 0; i < n; ++i)
                     out.u[i] = out.wave->profile[i] + d.amplitude * std::exp(-x[i] * x[i]);
                 },
                 [&](const ScaledSoliton& d) {
                   require_finite(d.scale, "scale");
                   out.wave = wave_for(d.speed, grid, ctx);
                   for (std::size_t i = 0; i < n; ++i) out.u[i] = d.scale * out.wave->profile[i];
                 },
                 [&](const SechSquared&) {
                   for (std::size_t i = 0; i < n; ++i) {
                     const double s = 1.0 / std::cosh(x[i]);
                     out.u[i] = s * s;
                   }
                 },
                 [&](const FromFile& d) { out.u = read_column(d.path, n); },
             },
             data);
  return out;
}

}  // namespace fch
