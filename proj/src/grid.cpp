#include "fch/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <mutex>
#include <numbers>
#include <string>

#include "fch/errors.hpp"
#include "fch/kernels.hpp"

namespace fch {

namespace {

// FFTW's planner is not thread-safe; execution with new arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

struct FftwScratch {
  double* real = nullptr;
  fftw_complex* half = nullptr;
  std::size_t n = 0;

  ~FftwScratch() { release(); }

  void release() {
    if (real) fftw_free(real);
    if (half) fftw_free(half);
    real = nullptr;
    half = nullptr;
    n = 0;
  }

  void ensure(std::size_t size) {
    if (size == n) return;
    release();
    real = static_cast<double*>(fftw_malloc(sizeof(double) * size));
    half = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (size / 2 + 1)));
    n = size;
  }
};

FftwScratch& scratch(std::size_t n) {
  thread_local FftwScratch s;
  s.ensure(n);
  return s;
}

}  // namespace

namespace detail {

struct GridData {
  double half_period;
  std::size_t n;
  double h;
  RealVector nodes;
  RealVector k;
  RealVector k_odd;
  RealVector k_abs;
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;

  GridData(double L, std::size_t size) : half_period(L), n(size) {
    h = 2.0 * std::numbers::pi * L / static_cast<double>(n);
    nodes.resize(n);
    k.resize(n);
    k_odd.resize(n);
    k_abs.resize(n);
    for (std::size_t i = 0; i < n; ++i) nodes[i] = -std::numbers::pi * L + static_cast<double>(i) * h;
    for (std::size_t j = 0; j < n; ++j) {
      const double idx = j <= n / 2 ? static_cast<double>(j) : static_cast<double>(j) - static_cast<double>(n);
      k[j] = idx / L;
      k_abs[j] = std::abs(k[j]);
      k_odd[j] = (j == n / 2) ? 0.0 : k[j];
    }

    std::lock_guard lock(planner_mutex());
    auto* r = static_cast<double*>(fftw_malloc(sizeof(double) * n));
    auto* c = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (n / 2 + 1)));
    const int ni = static_cast<int>(n);
    r2c = fftw_plan_dft_r2c_1d(ni, r, c, FFTW_ESTIMATE);
    c2r = fftw_plan_dft_c2r_1d(ni, c, r, FFTW_ESTIMATE);
    fftw_free(r);
    fftw_free(c);
  }

  ~GridData() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(r2c);
    fftw_destroy_plan(c2r);
  }

  GridData(const GridData&) = delete;
  GridData& operator=(const GridData&) = delete;
};

}  // namespace detail

TorusGrid::TorusGrid(double half_period, std::size_t n) {
  if (!(half_period > 0.0) || !std::isfinite(half_period))
    throw InvalidArgument("grid half-period must be positive, got " + std::to_string(half_period));
  if (!is_power_of_two(n) || n < 16)
    throw InvalidArgument("grid size must be a power of two >= 16, got " + std::to_string(n));
  data_ = std::make_shared<const detail::GridData>(half_period, n);
}

double TorusGrid::half_period() const noexcept { return data_->half_period; }
std::size_t TorusGrid::size() const noexcept { return data_->n; }
double TorusGrid::spacing() const noexcept { return data_->h; }
double TorusGrid::period() const noexcept { return 2.0 * std::numbers::pi * data_->half_period; }
double TorusGrid::max_wavenumber() const noexcept {
  return static_cast<double>(data_->n / 2) / data_->half_period;
}
std::span<const double> TorusGrid::nodes() const noexcept { return data_->nodes; }
std::span<const double> TorusGrid::wavenumbers() const noexcept { return data_->k; }
std::span<const double> TorusGrid::odd_wavenumbers() const noexcept { return data_->k_odd; }
std::span<const double> TorusGrid::abs_wavenumbers() const noexcept { return data_->k_abs; }

bool operator==(const TorusGrid& a, const TorusGrid& b) noexcept {
  return a.data_ == b.data_ || (a.size() == b.size() && a.half_period() == b.half_period());
}

void TorusGrid::forward_into(std::span<const double> u, std::span<Complex> out) const {
  const std::size_t n = size();
  if (u.size() != n || out.size() != n)
    throw InvalidArgument("forward: length " + std::to_string(u.size()) + " does not match grid size " +
                          std::to_string(n));
  auto& s = scratch(n);
  std::memcpy(s.real, u.data(), sizeof(double) * n);
  fftw_execute_dft_r2c(data_->r2c, s.real, s.half);

  // exp(-i k x_n) = (-1)^j exp(-2 pi i j n / N) because x_0 = -pi L.
  const double h = data_->h;
  const auto half = static_cast<std::ptrdiff_t>(n / 2);
  const fftw_complex* c = s.half;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t jj = 0; jj <= half; ++jj) {
    const auto j = static_cast<std::size_t>(jj);
    const double w = (j % 2 == 0) ? h : -h;
    const Complex v(w * c[j][0], w * c[j][1]);
    out[j] = v;
    if (j != 0 && j != n / 2) out[n - j] = std::conj(v);
  }
  out[n / 2] = Complex(out[n / 2].real(), 0.0);
}

void TorusGrid::inverse_into(std::span<const Complex> coeffs, std::span<double> out) const {
  const std::size_t n = size();
  if (coeffs.size() != n || out.size() != n)
    throw InvalidArgument("inverse: length " + std::to_string(coeffs.size()) +
                          " does not match grid size " + std::to_string(n));
  auto& s = scratch(n);
  const double scale = 1.0 / period();
  const auto half = static_cast<std::ptrdiff_t>(n / 2);
  fftw_complex* c = s.half;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t jj = 0; jj <= half; ++jj) {
    const auto j = static_cast<std::size_t>(jj);
    const double w = (j % 2 == 0) ? scale : -scale;
    c[j][0] = w * coeffs[j].real();
    c[j][1] = w * coeffs[j].imag();
  }
  c[0][1] = 0.0;
  c[n / 2][1] = 0.0;
  fftw_execute_dft_c2r(data_->c2r, s.half, s.real);
  std::memcpy(out.data(), s.real, sizeof(double) * n);
}

SpectralField::SpectralField(TorusGrid grid) : grid_(std::move(grid)), coeffs_(grid_.size()) {}

SpectralField::SpectralField(TorusGrid grid, ComplexVector coeffs)
    : grid_(std::move(grid)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != grid_.size())
    throw InvalidArgument("spectral field length " + std::to_string(coeffs_.size()) +
                          " does not match grid size " + std::to_string(grid_.size()));
}

double SpectralField::hermitian_defect() const {
  const double scale = kernels::omp::max_abs(std::span<const Complex>(coeffs_));
  if (scale == 0.0) return 0.0;
  double defect = 0.0;
  for (std::size_t j = 0; j < coeffs_.size(); ++j)
    defect = std::max(defect, std::abs(coeffs_[grid_.mirror(j)] - std::conj(coeffs_[j])));
  return defect / scale;
}

void SpectralField::symmetrize() { kernels::omp::hermitian_symmetrize(coeffs_); }

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  if (!(grid_ == other.grid_)) throw InvalidArgument("spectral fields live on different grids");
  kernels::omp::axpy(coeffs_, 1.0, other.coeffs_, coeffs_);
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  if (!(grid_ == other.grid_)) throw InvalidArgument("spectral fields live on different grids");
  kernels::omp::axpy(coeffs_, -1.0, other.coeffs_, coeffs_);
  return *this;
}

SpectralField& SpectralField::operator*=(double s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double s, SpectralField a) { return a *= s; }

SpectralField forward(const TorusGrid& grid, std::span<const double> u) {
  SpectralField f(grid);
  grid.forward_into(u, f.coeffs());
  return f;
}

RealVector inverse(const SpectralField& field) {
  RealVector u(field.size());
  field.grid().inverse_into(field.coeffs(), u);
  return u;
}

SpectralField fractional_laplacian(const SpectralField& field, double alpha) {
  if (!(alpha > 0.0)) throw InvalidArgument("fractional order must be positive");
  const auto kabs = field.grid().abs_wavenumbers();
  RealVector symbol(kabs.size());
  for (std::size_t j = 0; j < kabs.size(); ++j) symbol[j] = std::pow(kabs[j], alpha);
  SpectralField out(field.grid());
  kernels::omp::scale(symbol, field.coeffs(), out.coeffs());
  return out;
}

SpectralField spectral_derivative(const SpectralField& field) {
  SpectralField out(field.grid());
  kernels::omp::scale_i(field.grid().odd_wavenumbers(), field.coeffs(), out.coeffs());
  return out;
}

SpectralField antiderivative(const SpectralField& field) {
  return antiderivative(field, inverse(field));
}

SpectralField antiderivative(const SpectralField& field, std::span<const double> values) {
  const TorusGrid& grid = field.grid();
  const std::size_t n = grid.size();
  if (values.size() != n) throw InvalidArgument("antiderivative: physical values have wrong length");
  const auto k = grid.odd_wavenumbers();
  SpectralField out(grid);
  auto c = field.coeffs();
  auto o = out.coeffs();
  const auto nn = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t jj = 1; jj < nn; ++jj) {
    const auto j = static_cast<std::size_t>(jj);
    // f/(ik) = -i f / k
    o[j] = k[j] == 0.0 ? Complex(0.0, 0.0) : Complex(c[j].imag() / k[j], -c[j].real() / k[j]);
  }
  // de l'Hospital: f_hat'(0) = -i h sum x_n f_n, so f_hat'(0)/i = -h sum x_n f_n.
  const auto x = grid.nodes();
  double moment = 0.0;
  for (std::size_t i = 0; i < n; ++i) moment += x[i] * values[i];
  o[0] = Complex(-grid.spacing() * moment, 0.0);
  return out;
}

SpectralField translate(const SpectralField& field, double shift) {
  const auto k = field.grid().wavenumbers();
  const std::size_t nyq = field.grid().nyquist_index();
  SpectralField out(field.grid());
  for (std::size_t j = 0; j < field.size(); ++j) {
    if (j == nyq) {
      out[j] = field[j] * std::cos(k[j] * shift);
    } else {
      out[j] = field[j] * std::polar(1.0, -k[j] * shift);
    }
  }
  return out;
}

void apply_two_thirds_filter(SpectralField& field) {
  const double cut = 2.0 / 3.0 * field.grid().max_wavenumber();
  const auto kabs = field.grid().abs_wavenumbers();
  for (std::size_t j = 0; j < field.size(); ++j)
    if (kabs[j] > cut) field[j] = 0.0;
}

}  // namespace fch
