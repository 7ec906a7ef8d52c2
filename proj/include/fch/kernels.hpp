#pragma once

// Pointwise kernels over coefficient and collocation arrays.
//
// Every kernel exists twice: `serial` is the plain reference loop kept for
// testing and benchmarking, `omp` is the OpenMP version the solvers call.
// Both evaluate the same expression per element, so results are bit-identical.

#include <complex>
#include <span>

namespace fch::kernels {

using Complex = std::complex<double>;

namespace serial {

/// out[j] = symbol[j] * in[j]
void scale(std::span<const double> symbol, std::span<const Complex> in, std::span<Complex> out);
/// out[j] = i * symbol[j] * in[j]
void scale_i(std::span<const double> symbol, std::span<const Complex> in, std::span<Complex> out);
void multiply(std::span<const double> a, std::span<const double> b, std::span<double> out);
/// out = a*b + c*d
void multiply_add(std::span<const double> a, std::span<const double> b, std::span<const double> c,
                  std::span<const double> d, std::span<double> out);
/// out = x + a*y
void axpy(std::span<const Complex> x, double a, std::span<const Complex> y, std::span<Complex> out);
/// out = y + dt/6 (k1 + 2 k2 + 2 k3 + k4)
void rk4_combine(std::span<const Complex> y, std::span<const Complex> k1, std::span<const Complex> k2,
                 std::span<const Complex> k3, std::span<const Complex> k4, double dt,
                 std::span<Complex> out);
/// c[j] <- (c[j] + conj(c[-j])) / 2, native FFT order.
void hermitian_symmetrize(std::span<Complex> c);
double max_abs(std::span<const Complex> c);
double max_abs(std::span<const double> v);
bool all_finite(std::span<const Complex> c);

}  // namespace serial

namespace omp {

/// out[j] = symbol[j] * in[j]
void scale(std::span<const double> symbol, std::span<const Complex> in, std::span<Complex> out);
/// out[j] = i * symbol[j] * in[j]
void scale_i(std::span<const double> symbol, std::span<const Complex> in, std::span<Complex> out);
void multiply(std::span<const double> a, std::span<const double> b, std::span<double> out);
/// out = a*b + c*d
void multiply_add(std::span<const double> a, std::span<const double> b, std::span<const double> c,
                  std::span<const double> d, std::span<double> out);
/// out = x + a*y
void axpy(std::span<const Complex> x, double a, std::span<const Complex> y, std::span<Complex> out);
/// out = y + dt/6 (k1 + 2 k2 + 2 k3 + k4)
void rk4_combine(std::span<const Complex> y, std::span<const Complex> k1, std::span<const Complex> k2,
                 std::span<const Complex> k3, std::span<const Complex> k4, double dt,
                 std::span<Complex> out);
/// c[j] <- (c[j] + conj(c[-j])) / 2, native FFT order.
void hermitian_symmetrize(std::span<Complex> c);
double max_abs(std::span<const Complex> c);
double max_abs(std::span<const double> v);
bool all_finite(std::span<const Complex> c);

}  // namespace omp

/// Caps the number of OpenMP threads used by the `omp` kernels.
void set_thread_limit(int threads);

/// Applies FCH_THREADS from the environment when it holds a positive integer.
void configure_threads_from_env();

}  // namespace fch::kernels
