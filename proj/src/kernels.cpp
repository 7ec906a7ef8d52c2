#include "fch/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

namespace fch::kernels {

namespace {

inline std::size_t mirror(std::size_t j, std::size_t n) { return j == 0 ? 0 : n - j; }

}  // namespace

namespace serial {

void scale(std::span<const double> symbol, std::span<const Complex> in, std::span<Complex> out) {
  for (std::size_t j = 0; j < in.size(); ++j) out[j] = symbol[j] * in[j];
}

void scale_i(std::span<const double> symbol, std::span<const Complex> in, std::span<Complex> out) {
  for (std::size_t j = 0; j < in.size(); ++j)
    out[j] = Complex(-symbol[j] * in[j].imag(), symbol[j] * in[j].real());
}

void multiply(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  for (std::size_t n = 0; n < a.size(); ++n) out[n] = a[n] * b[n];
}

void multiply_add(std::span<const double> a, std::span<const double> b, std::span<const double> c,
                  std::span<const double> d, std::span<double> out) {
  for (std::size_t n = 0; n < a.size(); ++n) out[n] = a[n] * b[n] + c[n] * d[n];
}

void axpy(std::span<const Complex> x, double a, std::span<const Complex> y, std::span<Complex> out) {
  for (std::size_t j = 0; j < x.size(); ++j) out[j] = x[j] + a * y[j];
}

void rk4_combine(std::span<const Complex> y, std::span<const Complex> k1, std::span<const Complex> k2,
                 std::span<const Complex> k3, std::span<const Complex> k4, double dt,
                 std::span<Complex> out) {
  const double w = dt / 6.0;
  for (std::size_t j = 0; j < y.size(); ++j)
    out[j] = y[j] + w * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
}

void hermitian_symmetrize(std::span<Complex> c) {
  const std::size_t n = c.size();
  for (std::size_t j = 0; j <= n / 2; ++j) {
    const std::size_t m = mirror(j, n);
    const Complex avg = 0.5 * (c[j] + std::conj(c[m]));
    c[j] = avg;
    c[m] = std::conj(avg);
  }
}

double max_abs(std::span<const Complex> c) {
  double m = 0.0;
  for (const auto& z : c) m = std::max(m, std::abs(z));
  return m;
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

bool all_finite(std::span<const Complex> c) {
  for (const auto& z : c)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

}  // namespace serial

namespace omp {

void scale(std::span<const double> symbol, std::span<const Complex> in, std::span<Complex> out) {
  const auto n = static_cast<std::ptrdiff_t>(in.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 0; j < n; ++j) out[j] = symbol[j] * in[j];
}

void scale_i(std::span<const double> symbol, std::span<const Complex> in, std::span<Complex> out) {
  const auto n = static_cast<std::ptrdiff_t>(in.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 0; j < n; ++j)
    out[j] = Complex(-symbol[j] * in[j].imag(), symbol[j] * in[j].real());
}

void multiply(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  const auto n = static_cast<std::ptrdiff_t>(a.size());
#pragma omp parallel for simd schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void multiply_add(std::span<const double> a, std::span<const double> b, std::span<const double> c,
                  std::span<const double> d, std::span<double> out) {
  const auto n = static_cast<std::ptrdiff_t>(a.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = a[i] * b[i] + c[i] * d[i];
}

void axpy(std::span<const Complex> x, double a, std::span<const Complex> y, std::span<Complex> out) {
  const auto n = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 0; j < n; ++j) out[j] = x[j] + a * y[j];
}

void rk4_combine(std::span<const Complex> y, std::span<const Complex> k1, std::span<const Complex> k2,
                 std::span<const Complex> k3, std::span<const Complex> k4, double dt,
                 std::span<Complex> out) {
  const double w = dt / 6.0;
  const auto n = static_cast<std::ptrdiff_t>(y.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 0; j < n; ++j)
    out[j] = y[j] + w * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
}

void hermitian_symmetrize(std::span<Complex> c) {
  const std::size_t n = c.size();
  const auto half = static_cast<std::ptrdiff_t>(n / 2);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t jj = 0; jj <= half; ++jj) {
    const auto j = static_cast<std::size_t>(jj);
    const std::size_t m = mirror(j, n);
    const Complex avg = 0.5 * (c[j] + std::conj(c[m]));
    c[j] = avg;
    c[m] = std::conj(avg);
  }
}

double max_abs(std::span<const Complex> c) {
  double m = 0.0;
  const auto n = static_cast<std::ptrdiff_t>(c.size());
#pragma omp parallel for reduction(max : m) schedule(static)
  for (std::ptrdiff_t j = 0; j < n; ++j) m = std::max(m, std::abs(c[j]));
  return m;
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  const auto n = static_cast<std::ptrdiff_t>(v.size());
#pragma omp parallel for reduction(max : m) schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) m = std::max(m, std::abs(v[i]));
  return m;
}

bool all_finite(std::span<const Complex> c) {
  bool ok = true;
  const auto n = static_cast<std::ptrdiff_t>(c.size());
#pragma omp parallel for reduction(&& : ok) schedule(static)
  for (std::ptrdiff_t j = 0; j < n; ++j)
    ok = ok && std::isfinite(c[j].real()) && std::isfinite(c[j].imag());
  return ok;
}

}  // namespace omp

void set_thread_limit(int threads) {
  if (threads > 0) omp_set_num_threads(threads);
}

void configure_threads_from_env() {
  const char* env = std::getenv("FCH_THREADS");
  if (env == nullptr) return;
  try {
    set_thread_limit(std::stoi(env));
  } catch (const std::exception&) {
    // ignore malformed values
  }
}

}  // namespace fch::kernels
