#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace fraclat {

/// How a box of radius L is embedded into Z^d.
enum class Boundary {
  ZeroExtended,  ///< every site outside the box carries the value 0
  PeriodicWrap,  ///< coordinates are identified modulo 2L+1
};

std::string_view to_string(Boundary b);
Boundary parse_boundary(std::string_view name);

/// Multi-index of a lattice site or an offset vector.
using Site = std::vector<int>;

/// The finite window [-L, L]^d of Z^d together with its boundary rule.
///
/// Sites are stored lexicographically: x_1 varies slowest, x_d fastest.
class LatticeGeometry {
 public:
  LatticeGeometry(int dim, int radius, Boundary boundary = Boundary::ZeroExtended);

  int dim() const noexcept { return dim_; }
  int radius() const noexcept { return radius_; }
  Boundary boundary() const noexcept { return boundary_; }
  bool periodic() const noexcept { return boundary_ == Boundary::PeriodicWrap; }

  /// Number of sites per axis, 2L+1.
  int side() const noexcept { return 2 * radius_ + 1; }
  std::size_t site_count() const noexcept { return count_; }

  /// Linear index of a site inside the box. No boundary rule is applied.
  std::size_t index(std::span<const int> x) const;
  Site site(std::size_t idx) const;
  void site(std::size_t idx, std::span<int> out) const;

  /// Linear index of an arbitrary point of Z^d under the boundary rule.
  /// Returns nothing when the point lies outside a zero-extended box.
  std::optional<std::size_t> locate(std::span<const int> x) const;

  /// Reduces a coordinate into [-L, L] modulo 2L+1.
  int wrap(int coord) const noexcept;

  bool contains(std::span<const int> x) const noexcept;

  friend bool operator==(const LatticeGeometry&, const LatticeGeometry&) = default;

 private:
  int dim_;
  int radius_;
  Boundary boundary_;
  std::size_t count_;
};

/// A real function on the box, zero-extended or wrapped to all of Z^d.
class Field {
 public:
  explicit Field(LatticeGeometry geom);
  Field(LatticeGeometry geom, std::vector<double> values);

  static Field delta(const LatticeGeometry& geom, std::span<const int> at);
  static Field constant(const LatticeGeometry& geom, double c);

  const LatticeGeometry& geometry() const noexcept { return geom_; }
  std::size_t size() const noexcept { return values_.size(); }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  double operator[](std::size_t i) const noexcept { return values_[i]; }
  double& operator[](std::size_t i) noexcept { return values_[i]; }

  /// Value at an arbitrary point of Z^d, honouring the boundary rule.
  double at(std::span<const int> x) const;

  bool all_finite() const noexcept;
  bool is_zero() const noexcept;

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double c) noexcept;
  /// this += c * other
  Field& axpy(double c, const Field& other);

  friend Field operator+(Field a, const Field& b) { return a += b; }
  friend Field operator-(Field a, const Field& b) { return a -= b; }
  friend Field operator*(double c, Field a) { return a *= c; }
  friend Field operator-(Field a) { return a *= -1.0; }

  friend bool operator==(const Field&, const Field&) = default;

 private:
  LatticeGeometry geom_;
  std::vector<double> values_;
};

/// Reduction order for sums over sites. Both are deterministic.
enum class Summation { Lexicographic, Compensated };

double sum(std::span<const double> xs, Summation mode = Summation::Lexicographic);
double dot(const Field& u, const Field& v, Summation mode = Summation::Lexicographic);

/// l^s norm for s in [1, inf]; pass std::numeric_limits<double>::infinity() for the sup norm.
double norm(const Field& u, double s, Summation mode = Summation::Lexicographic);

/// (shift u)(x) = u(x - y).
Field shift(const Field& u, std::span<const int> y);

/// (reflect u)(x) = u(r - x). On a zero-extended box only r = 0 maps the box onto itself.
Field reflect(const Field& u, std::span<const int> r);

struct InterpolationSides {
  double lhs;  ///< ||u||_q^q
  double rhs;  ///< ||u||_2^2 ||u||_inf^(q-2)
};

InterpolationSides interpolation_check(const Field& u, double q);

/// Fraction of the squared l^2 mass carried by the outermost shell max_i |x_i| = L.
double boundary_mass(const Field& u);

void require_same_geometry(const Field& u, const Field& v);

}  // namespace fraclat
