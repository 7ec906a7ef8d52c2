// Serial vs OpenMP timings for the pointwise kernels, plus one RHS evaluation
// and one RK4 step of the full operator.
//
//   fch_bench [log2N ...]      (default: 14 16 18)

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <vector>

#include "fch/evolution.hpp"
#include "fch/kernels.hpp"

using namespace fch;
using Clock = std::chrono::steady_clock;

namespace {

// Best of `reps` timings of `inner` calls after one warm-up, in microseconds per call.
double best_us(const std::function<void()>& f, int inner = 20, int reps = 5) {
  f();
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = Clock::now();
    for (int i = 0; i < inner; ++i) f();
    const double us = std::chrono::duration<double, std::micro>(Clock::now() - t0).count() / inner;
    best = std::min(best, us);
  }
  return best;
}

void row(const char* name, std::size_t n, double serial_us, double omp_us) {
  std::printf("%-20s %9zu %12.1f %12.1f %8.2fx\n", name, n, serial_us, omp_us, serial_us / omp_us);
}

volatile double sink = 0.0;

void run(std::size_t n) {
  std::vector<double> sym(n), a(n), b(n), c(n), d(n), rout(n);
  std::vector<Complex> x(n), y(n), k1(n), k2(n), k3(n), k4(n), out(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double s = std::sin(0.001 * static_cast<double>(j));
    sym[j] = 1.0 + s;
    a[j] = s;
    b[j] = 1.0 - s;
    c[j] = 0.5 * s;
    d[j] = 2.0;
    x[j] = {s, 1.0 - s};
    y[j] = {1.0 - s, s};
    k1[j] = k2[j] = k3[j] = k4[j] = {0.1 * s, 0.2};
  }
  namespace ks = kernels::serial;
  namespace ko = kernels::omp;
  row("scale", n, best_us([&] { ks::scale(sym, x, out); }), best_us([&] { ko::scale(sym, x, out); }));
  row("scale_i", n, best_us([&] { ks::scale_i(sym, x, out); }), best_us([&] { ko::scale_i(sym, x, out); }));
  row("multiply", n, best_us([&] { ks::multiply(a, b, rout); }), best_us([&] { ko::multiply(a, b, rout); }));
  row("multiply_add", n, best_us([&] { ks::multiply_add(a, b, c, d, rout); }),
      best_us([&] { ko::multiply_add(a, b, c, d, rout); }));
  row("axpy", n, best_us([&] { ks::axpy(x, 0.5, y, out); }), best_us([&] { ko::axpy(x, 0.5, y, out); }));
  row("rk4_combine", n, best_us([&] { ks::rk4_combine(y, k1, k2, k3, k4, 1e-3, out); }),
      best_us([&] { ko::rk4_combine(y, k1, k2, k3, k4, 1e-3, out); }));
  row("hermitian_symmetrize", n, best_us([&] { ks::hermitian_symmetrize(out); }),
      best_us([&] { ko::hermitian_symmetrize(out); }));
  row("max_abs", n, best_us([&] { sink = ks::max_abs(std::span<const Complex>(x)); }),
      best_us([&] { sink = ko::max_abs(std::span<const Complex>(x)); }));

  // full operator (uses the omp kernels and FFTW)
  const TorusGrid grid(10.0, n);
  std::vector<double> u0(n);
  for (std::size_t j = 0; j < n; ++j) u0[j] = std::exp(-grid.nodes()[j] * grid.nodes()[j]);
  FchOperator op({1.5, 1.2, 1.0 / 3.0}, grid);
  const SpectralField f = forward(grid, u0);
  ComplexVector in(f.coeffs().begin(), f.coeffs().end()), rhs_out(n);
  const double rhs_us = best_us([&] { op.rhs(in, rhs_out); }, 10, 3);
  ComplexVector state = in;
  const double step_us = best_us([&] { op.rk4_advance(state, 1e-5); }, 5, 3);
  std::printf("%-20s %9zu %12s %12.1f\n", "rhs (fCH)", n, "-", rhs_us);
  std::printf("%-20s %9zu %12s %12.1f\n", "rk4 step (fCH)", n, "-", step_us);
}

}  // namespace

int main(int argc, char** argv) {
  kernels::configure_threads_from_env();
  std::vector<int> logs;
  for (int i = 1; i < argc; ++i) logs.push_back(std::atoi(argv[i]));
  if (logs.empty()) logs = {14, 16, 18};
  std::printf("OpenMP threads: %d\n", omp_get_max_threads());
  std::printf("%-20s %9s %12s %12s %9s\n", "kernel", "N", "serial[us]", "omp[us]", "speedup");
  for (int l : logs) {
    if (l < 4 || l > 24) continue;
    run(std::size_t{1} << l);
  }
}
