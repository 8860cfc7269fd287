#include "fraclat/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace fraclat {

std::string_view to_string(Boundary b) {
  return b == Boundary::PeriodicWrap ? "periodic" : "zero";
}

Boundary parse_boundary(std::string_view name) {
  if (name == "zero" || name == "ZeroExtended" || name == "zero_extended") return Boundary::ZeroExtended;
  if (name == "periodic" || name == "PeriodicWrap" || name == "periodic_wrap") return Boundary::PeriodicWrap;
  throw std::invalid_argument("unknown boundary mode '" + std::string(name) + "'");
}

LatticeGeometry::LatticeGeometry(int dim, int radius, Boundary boundary)
    : dim_(dim), radius_(radius), boundary_(boundary), count_(1) {
  if (dim < 1) throw std::invalid_argument("lattice dimension must be >= 1");
  if (radius < 1) throw std::invalid_argument("box radius must be >= 1");
  const auto n = static_cast<std::size_t>(side());
  for (int i = 0; i < dim; ++i) {
    if (count_ > std::numeric_limits<std::size_t>::max() / n)
      throw std::length_error("lattice box too large");
    count_ *= n;
  }
}

std::size_t LatticeGeometry::index(std::span<const int> x) const {
  std::size_t idx = 0;
  const auto n = static_cast<std::size_t>(side());
  for (int i = 0; i < dim_; ++i) idx = idx * n + static_cast<std::size_t>(x[i] + radius_);
  return idx;
}

Site LatticeGeometry::site(std::size_t idx) const {
  Site x(static_cast<std::size_t>(dim_));
  site(idx, x);
  return x;
}

void LatticeGeometry::site(std::size_t idx, std::span<int> out) const {
  const auto n = static_cast<std::size_t>(side());
  for (int i = dim_ - 1; i >= 0; --i) {
    out[i] = static_cast<int>(idx % n) - radius_;
    idx /= n;
  }
}

int LatticeGeometry::wrap(int coord) const noexcept {
  const int n = side();
  int r = (coord + radius_) % n;
  if (r < 0) r += n;
  return r - radius_;
}

bool LatticeGeometry::contains(std::span<const int> x) const noexcept {
  for (int i = 0; i < dim_; ++i)
    if (x[i] < -radius_ || x[i] > radius_) return false;
  return true;
}

std::optional<std::size_t> LatticeGeometry::locate(std::span<const int> x) const {
  std::size_t idx = 0;
  const auto n = static_cast<std::size_t>(side());
  for (int i = 0; i < dim_; ++i) {
    int c = x[i];
    if (periodic()) {
      c = wrap(c);
    } else if (c < -radius_ || c > radius_) {
      return std::nullopt;
    }
    idx = idx * n + static_cast<std::size_t>(c + radius_);
  }
  return idx;
}

Field::Field(LatticeGeometry geom) : geom_(geom), values_(geom.site_count(), 0.0) {}

Field::Field(LatticeGeometry geom, std::vector<double> values) : geom_(geom), values_(std::move(values)) {
  if (values_.size() != geom_.site_count())
    throw std::invalid_argument("field has " + std::to_string(values_.size()) + " values, geometry expects " +
                                std::to_string(geom_.site_count()));
  if (!all_finite()) throw std::domain_error("field values must be finite");
}

Field Field::delta(const LatticeGeometry& geom, std::span<const int> at) {
  Field u(geom);
  const auto idx = geom.locate(at);
  if (!idx) throw std::out_of_range("delta site outside the box");
  u.values_[*idx] = 1.0;
  return u;
}

Field Field::constant(const LatticeGeometry& geom, double c) {
  return Field(geom, std::vector<double>(geom.site_count(), c));
}

double Field::at(std::span<const int> x) const {
  const auto idx = geom_.locate(x);
  return idx ? values_[*idx] : 0.0;
}

bool Field::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

bool Field::is_zero() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

void require_same_geometry(const Field& u, const Field& v) {
  if (!(u.geometry() == v.geometry())) throw std::invalid_argument("fields live on different geometries");
}

Field& Field::operator+=(const Field& other) {
  require_same_geometry(*this, other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  require_same_geometry(*this, other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

Field& Field::operator*=(double c) noexcept {
  for (auto& v : values_) v *= c;
  return *this;
}

Field& Field::axpy(double c, const Field& other) {
  require_same_geometry(*this, other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += c * other.values_[i];
  return *this;
}

double sum(std::span<const double> xs, Summation mode) {
  if (mode == Summation::Lexicographic) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  // Neumaier's variant of Kahan summation.
  double s = 0.0;
  double c = 0.0;
  for (double x : xs) {
    const double t = s + x;
    if (std::abs(s) >= std::abs(x))
      c += (s - t) + x;
    else
      c += (x - t) + s;
    s = t;
  }
  return s + c;
}

double dot(const Field& u, const Field& v, Summation mode) {
  require_same_geometry(u, v);
  std::vector<double> terms(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) terms[i] = u[i] * v[i];
  return sum(terms, mode);
}

double norm(const Field& u, double s, Summation mode) {
  if (!(s >= 1.0)) throw std::domain_error("l^s norm requires s >= 1");
  const auto vals = u.values();
  if (std::isinf(s)) {
    double m = 0.0;
    for (double v : vals) m = std::max(m, std::abs(v));
    return m;
  }
  std::vector<double> terms(vals.size());
  if (s == 1.0) {
    for (std::size_t i = 0; i < vals.size(); ++i) terms[i] = std::abs(vals[i]);
    return sum(terms, mode);
  }
  if (s == 2.0) {
    for (std::size_t i = 0; i < vals.size(); ++i) terms[i] = vals[i] * vals[i];
    return std::sqrt(sum(terms, mode));
  }
  for (std::size_t i = 0; i < vals.size(); ++i) terms[i] = std::pow(std::abs(vals[i]), s);
  return std::pow(sum(terms, mode), 1.0 / s);
}

Field shift(const Field& u, std::span<const int> y) {
  const auto& g = u.geometry();
  if (static_cast<int>(y.size()) != g.dim()) throw std::invalid_argument("shift offset has wrong dimension");
  Field out(g);
  Site x(static_cast<std::size_t>(g.dim()));
  for (std::size_t i = 0; i < g.site_count(); ++i) {
    g.site(i, x);
    for (int k = 0; k < g.dim(); ++k) x[k] -= y[k];
    out[i] = u.at(x);
  }
  return out;
}

Field reflect(const Field& u, std::span<const int> r) {
  const auto& g = u.geometry();
  if (static_cast<int>(r.size()) != g.dim()) throw std::invalid_argument("reflection centre has wrong dimension");
  Field out(g);
  Site x(static_cast<std::size_t>(g.dim()));
  for (std::size_t i = 0; i < g.site_count(); ++i) {
    g.site(i, x);
    for (int k = 0; k < g.dim(); ++k) x[k] = r[k] - x[k];
    out[i] = u.at(x);
  }
  return out;
}

InterpolationSides interpolation_check(const Field& u, double q) {
  if (!(q > 2.0)) throw std::domain_error("interpolation inequality needs q > 2");
  const double l2 = norm(u, 2.0);
  const double linf = norm(u, std::numeric_limits<double>::infinity());
  std::vector<double> terms(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) terms[i] = std::pow(std::abs(u[i]), q);
  return {sum(terms), l2 * l2 * std::pow(linf, q - 2.0)};
}

double boundary_mass(const Field& u) {
  const auto& g = u.geometry();
  double shell = 0.0;
  double total = 0.0;
  Site x(static_cast<std::size_t>(g.dim()));
  for (std::size_t i = 0; i < g.site_count(); ++i) {
    const double w = u[i] * u[i];
    total += w;
    g.site(i, x);
    const bool outer = std::any_of(x.begin(), x.end(), [&](int c) { return std::abs(c) == g.radius(); });
    if (outer) shell += w;
  }
  return total > 0.0 ? shell / total : 0.0;
}

}  // namespace fraclat
