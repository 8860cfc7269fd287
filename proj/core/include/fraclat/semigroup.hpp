#pragma once

#include <vector>

#include "fraclat/lattice.hpp"
#include "fraclat/spectral.hpp"

namespace fraclat {

/// Quadrature settings for the heat kernel and the subordination integral.
struct HeatConfig {
  int t_nodes = 128;         ///< Gauss-Legendre nodes on each of the two t-segments
  double t_split = 1.0;      ///< t-integral is split into (0, T] and [T, inf)
  int tail_power = 2;        ///< sigma = rho^q smoothing on the [T, inf) segment
  int bessel_points = 64;    ///< minimum trapezoid nodes for the Bessel integral
  double kernel_floor = 1e-16;  ///< heat kernel entries below this are dropped (halo truncation)

  void validate() const;
};

/// G_t(n) = e^{-2t} I_n(2t) for n = 0..n_max, by trapezoid quadrature of
/// (1/pi) int_0^pi e^{-4t sin^2(theta/2)} cos(n theta) d theta.
std::vector<double> heat_kernel_1d(double t, int n_max, const HeatConfig& cfg = {});

/// e^{t Delta} u on the box, using the infinite-lattice heat kernel prod_i G_t(x_i - y_i).
/// Requires a ZeroExtended geometry; throws std::domain_error for t < 0.
Field heat_apply(const Field& u, double t, const HeatConfig& cfg = {});

/// 1 - sum_{|n| <= n_max} G_t(n): the one-dimensional heat mass outside a window.
double heat_tail(double t, int n_max, const HeatConfig& cfg = {});

/// Gamma(-alpha) for 0 < alpha < 1.
double gamma_negative(double alpha);

/// (1/Gamma(-alpha)) int_0^inf (e^{-t lambda} - 1) t^{-1-alpha} dt with the same t-quadrature
/// used by fraclap_semigroup. Equals lambda^alpha up to quadrature error.
double subordination_scalar(double lambda, FractionalOrder alpha, const HeatConfig& cfg = {});

/// Largest relative error of subordination_scalar against lambda^alpha at the 20 points
/// lambda_k = 4k/20, k = 1..20 (times the dimension when dim > 1).
double scalar_identity_error(FractionalOrder alpha, const HeatConfig& cfg = {}, int dim = 1);

/// Doubles t_nodes from 16 until scalar_identity_error <= tol (or max_nodes is reached).
HeatConfig calibrate_heat_config(FractionalOrder alpha, double tol = 1e-6, HeatConfig base = {},
                                 int max_nodes = 4096);

/// (-Delta)^alpha u via the heat-semigroup subordination integral. Requires 0 < alpha < 1.
Field fraclap_semigroup(const Field& u, FractionalOrder alpha, const HeatConfig& cfg = {});

}  // namespace fraclat
