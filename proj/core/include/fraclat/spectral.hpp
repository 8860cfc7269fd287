#pragma once

#include <complex>
#include <span>
#include <vector>

#include "fraclat/lattice.hpp"

namespace fraclat {

/// Order alpha of the fractional Laplacian, 0 < alpha <= 1.
/// alpha = 1 is the ordinary graph Laplacian and serves as an exactness anchor.
class FractionalOrder {
 public:
  explicit FractionalOrder(double alpha);
  double value() const noexcept { return alpha_; }
  bool is_one() const noexcept { return alpha_ == 1.0; }

 private:
  double alpha_;
};

/// Resolution of the periodic trapezoid rule on [-pi, pi]^d and the kernel truncation radius.
struct SpectralConfig {
  int points = 8192;  ///< M, quadrature points per axis
  int radius = 1;     ///< R, kernel table radius (sup-norm)

  void validate() const;
};

/// Defaults: M = 8192 / 1024 / 128 for d = 1 / 2 / >=3, R = min(4L, M/4).
SpectralConfig default_spectral_config(int dim, int box_radius);

/// Tabulated K^alpha(x) for offsets with max_i |x_i| <= R.
class Kernel {
 public:
  Kernel(FractionalOrder alpha, int dim, int radius, int points, std::vector<double> values);

  FractionalOrder alpha() const noexcept { return alpha_; }
  int dim() const noexcept { return dim_; }
  int radius() const noexcept { return radius_; }
  int side() const noexcept { return 2 * radius_ + 1; }
  /// Quadrature points per axis used to build the table.
  int points() const noexcept { return points_; }

  /// Sum of |K| over quadrature-grid offsets outside the table.
  double tail_bound() const noexcept { return tail_bound_; }
  /// max |K_M - K_2M| over the table, NaN when the doubling test was skipped.
  double doubling_error() const noexcept { return doubling_error_; }
  void set_diagnostics(double tail_bound, double doubling_error) noexcept {
    tail_bound_ = tail_bound;
    doubling_error_ = doubling_error;
  }

  /// Table index of an offset with max_i |x_i| <= R.
  std::size_t index(std::span<const int> x) const;
  /// K(x), zero outside the table.
  double operator()(std::span<const int> x) const;

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

 private:
  FractionalOrder alpha_;
  int dim_;
  int radius_;
  int points_;
  std::vector<double> values_;
  double tail_bound_ = 0.0;
  double doubling_error_;
};

/// Phi(theta)^alpha with Phi(theta) = sum_i 4 sin^2(theta_i / 2).
double symbol(std::span<const double> theta, FractionalOrder alpha);

/// Lattice Fourier transform sum_x u(x) e^{i x.theta}, summed directly over the box.
std::complex<double> dft(const Field& u, std::span<const double> theta);

/// K^alpha on max|x| <= R by the M^d-point periodic trapezoid rule (one inverse FFT).
/// Throws std::invalid_argument when R >= M/2.
Kernel kernel_table(FractionalOrder alpha, int dim, int radius, const SpectralConfig& cfg,
                    bool doubling_check = true);

/// Exact kernel of the operator on the torus of side 2L+1 (the periodisation of K^alpha).
/// Applied with apply_kernel on a PeriodicWrap geometry it reproduces apply_multiplier_fft.
Kernel periodic_kernel(FractionalOrder alpha, const LatticeGeometry& geom);

/// v(x) = sum_{max|x-y| <= R} K(x - y) u(y) under the geometry's boundary rule.
Field apply_kernel(const Field& u, const Kernel& K);

/// Multiplier path via FFT. On PeriodicWrap this is exact for the torus; on ZeroExtended the
/// box is zero-padded to the next power of two >= 2(2L+1) per axis.
Field apply_multiplier_fft(const Field& u, FractionalOrder alpha);

/// (u, v)_alpha = sum_x ((-Delta)^alpha u)(x) v(x) + sum_x h(x) u(x) v(x), with h sampled on the box.
double halpha_inner(const Field& u, const Field& v, const Kernel& K, const Field& h);

/// (1/M^d) sum_j Phi(theta_j)^alpha Re(u^(theta_j) conj(v^(theta_j))) on the M-point grid per axis,
/// using direct dft() sums. With M = 2L+1 on a periodic box this is exact; on a zero-extended box
/// it equals the M-point kernel form once M > 4L.
double symbol_quadrature(const Field& u, const Field& v, FractionalOrder alpha, int points);

/// sum_{|x| <= R} K(x) e^{i x.theta}; approximates symbol(theta) up to the truncation tail.
double kernel_symbol(const Kernel& K, std::span<const double> theta);

struct DecayRow {
  int distance;   ///< |x|
  double scaled;  ///< |K(x)| |x|^(d + 2 alpha)
};

struct DecayReport {
  bool supported = false;  ///< false for d != 1; no rows are produced then
  std::vector<DecayRow> rows;
};

/// Scaled kernel magnitudes for 2 <= |x| <= R (d = 1 only).
DecayReport decay_check(const Kernel& K);

}  // namespace fraclat
