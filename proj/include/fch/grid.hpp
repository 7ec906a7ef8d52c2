#pragma once

// Periodic collocation grid on x in L[-pi, pi) and its Fourier dual.
//
// Transform convention (used by every module):
//
//   u_hat(k) = h * sum_n u(x_n) exp(-i k x_n),       x_n = -pi L + n h,  h = 2 pi L / N
//   u(x_n)   = 1/(2 pi L) * sum_k u_hat(k) exp(i k x_n)
//
// i.e. the trapezoid rule for the continuous transform. Under it Plancherel
// reads  h * sum_n u_n^2 = 1/(2 pi L) * sum_k |u_hat_k|^2  and the zero mode
// equals the integral of u over one period. Coefficients are stored in native
// FFT order: index j <-> k = j/L for j <= N/2, (j - N)/L otherwise.

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace fch {

using Complex = std::complex<double>;
using RealVector = std::vector<double>;
using ComplexVector = std::vector<Complex>;

namespace detail {
struct GridData;
}

class TorusGrid {
 public:
  /// Throws InvalidArgument unless half_period > 0 and n is a power of two >= 16.
  TorusGrid(double half_period, std::size_t n);

  double half_period() const noexcept;
  std::size_t size() const noexcept;
  double spacing() const noexcept;
  double period() const noexcept;
  /// Largest resolved wavenumber N/(2L).
  double max_wavenumber() const noexcept;

  std::span<const double> nodes() const noexcept;
  std::span<const double> wavenumbers() const noexcept;
  /// Wavenumbers with the Nyquist entry zeroed: the symbol of odd operators.
  std::span<const double> odd_wavenumbers() const noexcept;
  /// |k|, Nyquist included.
  std::span<const double> abs_wavenumbers() const noexcept;

  std::size_t nyquist_index() const noexcept { return size() / 2; }
  /// Index of the node at x = 0.
  std::size_t center_index() const noexcept { return size() / 2; }
  /// Index of -k given the index of k.
  std::size_t mirror(std::size_t j) const noexcept { return j == 0 ? 0 : size() - j; }

  /// Transforms into caller-provided storage; lengths must equal size().
  void forward_into(std::span<const double> u, std::span<Complex> out) const;
  void inverse_into(std::span<const Complex> coeffs, std::span<double> out) const;

  friend bool operator==(const TorusGrid& a, const TorusGrid& b) noexcept;

 private:
  std::shared_ptr<const detail::GridData> data_;
};

/// Fourier coefficients of a real field, tied to the grid they live on.
class SpectralField {
 public:
  explicit SpectralField(TorusGrid grid);
  SpectralField(TorusGrid grid, ComplexVector coeffs);

  const TorusGrid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return coeffs_.size(); }
  std::span<const Complex> coeffs() const noexcept { return coeffs_; }
  std::span<Complex> coeffs() noexcept { return coeffs_; }
  const Complex& operator[](std::size_t j) const { return coeffs_[j]; }
  Complex& operator[](std::size_t j) { return coeffs_[j]; }

  /// max_k |c(-k) - conj c(k)| / max_k |c(k)|  (0 for the zero field).
  double hermitian_defect() const;
  void symmetrize();

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(double s);

 private:
  TorusGrid grid_;
  ComplexVector coeffs_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double s, SpectralField a);

SpectralField forward(const TorusGrid& grid, std::span<const double> u);
RealVector inverse(const SpectralField& field);

/// Multiplies by |k|^alpha (zero mode -> 0). Throws InvalidArgument for alpha <= 0.
SpectralField fractional_laplacian(const SpectralField& field, double alpha);

/// Multiplies by ik; the Nyquist mode is zeroed.
SpectralField spectral_derivative(const SpectralField& field);

/// Divides by ik for k != 0 (Nyquist zeroed). The k = 0 entry is the limit
/// lim_{k->0} f_hat(k)/(ik) = -h * sum_n x_n f(x_n).
SpectralField antiderivative(const SpectralField& field);
/// Same, with the physical values of the field already at hand.
SpectralField antiderivative(const SpectralField& field, std::span<const double> values);

/// u(x - shift), exact for band-limited fields.
SpectralField translate(const SpectralField& field, double shift);

/// Zeroes modes with |k| > (2/3) k_max.
void apply_two_thirds_filter(SpectralField& field);

}  // namespace fch
