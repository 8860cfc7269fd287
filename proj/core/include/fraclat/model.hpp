#pragma once

#include <span>
#include <string>
#include <vector>

#include "fraclat/lattice.hpp"
#include "fraclat/spectral.hpp"

namespace fraclat {

/// Integer-periodic table over Z^d: value(x) = values[x mod period], stored lexicographically.
class PeriodicTable {
 public:
  PeriodicTable(std::vector<int> period, std::vector<double> values);

  const std::vector<int>& period() const noexcept { return period_; }
  const std::vector<double>& values() const noexcept { return values_; }
  int dim() const noexcept { return static_cast<int>(period_.size()); }

  double operator()(std::span<const int> x) const;
  double min() const;
  double max() const;
  /// Every period divides 2L+1, so the table is consistent on the torus.
  bool commensurate_with(const LatticeGeometry& geom) const;

 private:
  std::vector<int> period_;
  std::vector<double> values_;
};

/// The potential h(x) with 0 < c1 <= h <= c2.
class Potential {
 public:
  enum class Kind { Constant, Periodic };

  static Potential constant(double c);
  static Potential periodic(PeriodicTable table);

  Kind kind() const noexcept { return kind_; }
  double operator()(std::span<const int> x) const;
  double lower() const noexcept { return c1_; }  ///< c1
  double upper() const noexcept { return c2_; }  ///< c2
  const PeriodicTable* table() const noexcept { return kind_ == Kind::Periodic ? &table_ : nullptr; }

  /// h sampled on every site of the box.
  Field sample(const LatticeGeometry& geom) const;

 private:
  Potential(Kind kind, PeriodicTable table, double c1, double c2);

  Kind kind_;
  PeriodicTable table_;
  double c1_;
  double c2_;
};

/// f(x, u) = a(x) |u|^{p-2} u with primitive F(x, u) = a(x) |u|^p / p, p > 2, a > 0.
class Nonlinearity {
 public:
  enum class Kind { PurePower, WeightedPower };

  static Nonlinearity pure_power(double p);
  static Nonlinearity weighted_power(double p, PeriodicTable weight);

  Kind kind() const noexcept { return kind_; }
  double exponent() const noexcept { return p_; }
  const PeriodicTable* weight_table() const noexcept { return kind_ == Kind::WeightedPower ? &weight_ : nullptr; }

  double weight(std::span<const int> x) const;
  /// a(x) sampled on the box (all ones for the pure power).
  Field sample_weight(const LatticeGeometry& geom) const;

  double f(double a, double u) const;
  double F(double a, double u) const;
  /// d f / d u.
  double df(double a, double u) const;
  /// F(a, to) - F(a, from) without cancellation when to is close to from.
  double F_diff(double a, double from, double to) const;

 private:
  Nonlinearity(Kind kind, double p, PeriodicTable weight);

  Kind kind_;
  double p_;
  PeriodicTable weight_;
};

/// The finite problem (-Delta)^alpha u + h u = f(x, u) on a box.
///
/// On a PeriodicWrap box the operator is the exact torus operator (periodic_kernel); on a
/// ZeroExtended box it is kernel_table(alpha, d, R, spectral) applied with zero extension.
class Model {
 public:
  Model(LatticeGeometry geom, FractionalOrder alpha, Potential h, Nonlinearity nl,
        SpectralConfig spectral);
  /// Uses default_spectral_config for the geometry.
  Model(LatticeGeometry geom, FractionalOrder alpha, Potential h, Nonlinearity nl);

  const LatticeGeometry& geometry() const noexcept { return geom_; }
  FractionalOrder alpha() const noexcept { return alpha_; }
  const Potential& potential() const noexcept { return h_; }
  const Nonlinearity& nonlinearity() const noexcept { return nl_; }
  const Kernel& kernel() const noexcept { return kernel_; }
  const SpectralConfig& spectral() const noexcept { return spectral_; }

  const Field& h_values() const noexcept { return h_values_; }
  const Field& weight_values() const noexcept { return weight_values_; }

  /// (-Delta)^alpha u.
  Field apply_operator(const Field& u) const;
  /// ((-Delta)^alpha + h) u.
  Field apply_linear(const Field& u) const;

  /// Pointwise f, F at a site index of the box.
  double f_at(std::size_t site, double u) const { return nl_.f(weight_values_[site], u); }
  double F_at(std::size_t site, double u) const { return nl_.F(weight_values_[site], u); }

  /// Copy with a replaced kernel table (used by fault-injection checks).
  Model with_kernel(Kernel kernel) const;

 private:
  void check_compatible() const;

  LatticeGeometry geom_;
  FractionalOrder alpha_;
  Potential h_;
  Nonlinearity nl_;
  SpectralConfig spectral_;
  Kernel kernel_;
  Field h_values_;
  Field weight_values_;
};

double f_eval(const Model& m, std::span<const int> x, double u);
double F_eval(const Model& m, std::span<const int> x, double u);

/// ||u||_alpha^2 = (u, u)_alpha.
double halpha_norm_sq(const Model& m, const Field& u);
/// (u, v)_alpha with the model's kernel and potential.
double halpha_inner(const Model& m, const Field& u, const Field& v);

/// I(u) = 1/2 ||u||_alpha^2 - sum_x F(x, u(x)).
double energy(const Model& m, const Field& u);

/// l^2 representative of I'(u): ((-Delta)^alpha u)(x) + h(x) u(x) - f(x, u(x)).
Field gradient(const Model& m, const Field& u);

/// <I'(u), u> = ||u||_alpha^2 - sum_x f(x, u) u. Throws std::domain_error for u = 0.
double nehari_residual(const Model& m, const Field& u);

/// sum_x (1/2 f(x, u) u - F(x, u)); equals I(u) at critical points.
double mountain_gap(const Model& m, const Field& u);

/// Everything needed to rebuild a Model from a config file.
struct ModelConfig {
  int dim = 1;
  int radius = 16;
  Boundary boundary = Boundary::ZeroExtended;
  double alpha = 0.5;
  // h
  std::string h_kind = "constant";
  double h_constant = 1.0;
  std::vector<int> h_period;
  std::vector<double> h_values;
  // f
  std::string f_kind = "power";
  double p = 4.0;
  std::vector<int> weight_period;
  std::vector<double> weight_values;
  // spectral; zero means "default for the geometry"
  int points = 0;
  int kernel_radius = 0;

  Model build() const;
};

/// Parses {d, L, boundary, alpha, h: {kind, c | values, period}, f: {kind, p, weight?}, spectral: {M, R}}.
ModelConfig parse_model_config(const std::string& json_text);
std::string to_json(const ModelConfig& cfg);

}  // namespace fraclat
