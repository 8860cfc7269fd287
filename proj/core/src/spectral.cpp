#include "fraclat/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "fft.hpp"

namespace fraclat {

namespace {

using cplx = std::complex<double>;

std::size_t ipow(std::size_t base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

int positive_mod(int a, int m) {
  const int r = a % m;
  return r < 0 ? r + m : r;
}

/// 4 sin^2(pi j / M) for j = 0..M-1, i.e. the per-axis symbol on the grid theta_j = 2 pi j / M.
std::vector<double> axis_symbol(int points) {
  std::vector<double> s(static_cast<std::size_t>(points));
  for (int j = 0; j < points; ++j) {
    const double t = std::sin(std::numbers::pi * j / points);
    s[static_cast<std::size_t>(j)] = 4.0 * t * t;
  }
  return s;
}

double power_alpha(double phi, FractionalOrder alpha) {
  if (alpha.is_one()) return phi;
  return phi <= 0.0 ? 0.0 : std::pow(phi, alpha.value());
}

/// Multiplies a row-major P^d complex grid by Phi(theta_k)^alpha.
void multiply_symbol(std::vector<cplx>& grid, int dim, int points, FractionalOrder alpha) {
  const auto s = axis_symbol(points);
  std::vector<int> k(static_cast<std::size_t>(dim), 0);
  for (auto& z : grid) {
    double phi = 0.0;
    for (int a = 0; a < dim; ++a) phi += s[static_cast<std::size_t>(k[a])];
    z *= power_alpha(phi, alpha);
    for (int a = dim - 1; a >= 0; --a) {
      if (++k[a] < points) break;
      k[a] = 0;
    }
  }
}

/// K_M on the full periodic grid: (1/M^d) sum_j Phi(theta_j)^alpha e^{-i x.theta_j}.
std::vector<double> trapezoid_kernel_grid(FractionalOrder alpha, int dim, int points) {
  const std::size_t total = ipow(static_cast<std::size_t>(points), dim);
  std::vector<cplx> grid(total, cplx(1.0, 0.0));
  multiply_symbol(grid, dim, points, alpha);
  const std::vector<int> dims(static_cast<std::size_t>(dim), points);
  detail::fft_inplace(grid, dims, -1);
  std::vector<double> out(total);
  const double scale = 1.0 / static_cast<double>(total);
  for (std::size_t i = 0; i < total; ++i) out[i] = grid[i].real() * scale;
  return out;
}

/// Replaces every entry by the mean over its orbit under coordinate sign flips and permutations.
void symmetrize_table(std::vector<double>& table, int dim, int radius) {
  const int side = 2 * radius + 1;
  const auto canon_side = static_cast<std::size_t>(radius + 1);
  std::vector<double> acc(ipow(canon_side, dim), 0.0);
  std::vector<int> count(acc.size(), 0);
  std::vector<std::size_t> key(table.size());
  std::vector<int> x(static_cast<std::size_t>(dim));
  for (std::size_t i = 0; i < table.size(); ++i) {
    std::size_t r = i;
    for (int a = dim - 1; a >= 0; --a) {
      x[a] = std::abs(static_cast<int>(r % static_cast<std::size_t>(side)) - radius);
      r /= static_cast<std::size_t>(side);
    }
    std::sort(x.begin(), x.end());
    std::size_t c = 0;
    for (int v : x) c = c * canon_side + static_cast<std::size_t>(v);
    key[i] = c;
    acc[c] += table[i];
    ++count[c];
  }
  for (std::size_t i = 0; i < table.size(); ++i) table[i] = acc[key[i]] / count[key[i]];
}

struct TableExtract {
  std::vector<double> table;
  double tail = 0.0;
};

TableExtract extract_table(const std::vector<double>& grid, int dim, int points, int radius) {
  const int side = 2 * radius + 1;
  TableExtract ex;
  ex.table.assign(ipow(static_cast<std::size_t>(side), dim), 0.0);
  std::vector<int> k(static_cast<std::size_t>(dim), 0);
  std::vector<double> tail_terms;
  for (double value : grid) {
    bool inside = true;
    std::size_t t = 0;
    for (int a = 0; a < dim; ++a) {
      // Representative of k in [-M/2, M/2).
      const int x = k[a] < points / 2 || (points % 2 == 1 && k[a] == points / 2) ? k[a] : k[a] - points;
      if (std::abs(x) > radius) inside = false;
      t = t * static_cast<std::size_t>(side) + static_cast<std::size_t>(x + radius);
    }
    if (inside)
      ex.table[t] = value;
    else
      tail_terms.push_back(std::abs(value));
    for (int a = dim - 1; a >= 0; --a) {
      if (++k[a] < points) break;
      k[a] = 0;
    }
  }
  ex.tail = sum(tail_terms);
  symmetrize_table(ex.table, dim, radius);
  return ex;
}

}  // namespace

FractionalOrder::FractionalOrder(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::domain_error("fractional order must satisfy 0 < alpha <= 1, got " + std::to_string(alpha));
}

void SpectralConfig::validate() const {
  if (points < 16 || points % 2 != 0)
    throw std::invalid_argument("quadrature points M must be even and >= 16, got " + std::to_string(points));
  if (radius < 1) throw std::invalid_argument("kernel radius R must be >= 1");
}

SpectralConfig default_spectral_config(int dim, int box_radius) {
  SpectralConfig cfg;
  cfg.points = dim == 1 ? 8192 : dim == 2 ? 1024 : 128;
  cfg.radius = std::max(1, std::min(4 * box_radius, cfg.points / 4));
  return cfg;
}

Kernel::Kernel(FractionalOrder alpha, int dim, int radius, int points, std::vector<double> values)
    : alpha_(alpha),
      dim_(dim),
      radius_(radius),
      points_(points),
      values_(std::move(values)),
      doubling_error_(std::numeric_limits<double>::quiet_NaN()) {
  if (dim < 1 || radius < 0) throw std::invalid_argument("invalid kernel shape");
  if (values_.size() != ipow(static_cast<std::size_t>(side()), dim))
    throw std::invalid_argument("kernel table size does not match its radius");
}

std::size_t Kernel::index(std::span<const int> x) const {
  std::size_t t = 0;
  for (int a = 0; a < dim_; ++a) t = t * static_cast<std::size_t>(side()) + static_cast<std::size_t>(x[a] + radius_);
  return t;
}

double Kernel::operator()(std::span<const int> x) const {
  for (int a = 0; a < dim_; ++a)
    if (std::abs(x[a]) > radius_) return 0.0;
  return values_[index(x)];
}

double symbol(std::span<const double> theta, FractionalOrder alpha) {
  double phi = 0.0;
  for (double t : theta) {
    const double s = std::sin(0.5 * t);
    phi += 4.0 * s * s;
  }
  return power_alpha(phi, alpha);
}

std::complex<double> dft(const Field& u, std::span<const double> theta) {
  const auto& g = u.geometry();
  if (static_cast<int>(theta.size()) != g.dim()) throw std::invalid_argument("dft: theta has wrong dimension");
  double re = 0.0;
  double im = 0.0;
  Site x(static_cast<std::size_t>(g.dim()));
  for (std::size_t i = 0; i < g.site_count(); ++i) {
    if (u[i] == 0.0) continue;
    g.site(i, x);
    double phase = 0.0;
    for (int a = 0; a < g.dim(); ++a) phase += x[a] * theta[a];
    re += u[i] * std::cos(phase);
    im += u[i] * std::sin(phase);
  }
  return {re, im};
}

Kernel kernel_table(FractionalOrder alpha, int dim, int radius, const SpectralConfig& cfg, bool doubling_check) {
  cfg.validate();
  if (dim < 1) throw std::invalid_argument("dimension must be >= 1");
  if (radius < 1) throw std::invalid_argument("kernel radius must be >= 1");
  if (2 * radius >= cfg.points)
    throw std::invalid_argument("kernel radius R=" + std::to_string(radius) + " must be < M/2=" +
                                std::to_string(cfg.points / 2) + " to avoid aliasing");
  const auto ex = extract_table(trapezoid_kernel_grid(alpha, dim, cfg.points), dim, cfg.points, radius);
  Kernel K(alpha, dim, radius, cfg.points, ex.table);
  double doubling = std::numeric_limits<double>::quiet_NaN();
  if (doubling_check) {
    const auto fine = extract_table(trapezoid_kernel_grid(alpha, dim, 2 * cfg.points), dim, 2 * cfg.points, radius);
    doubling = 0.0;
    for (std::size_t i = 0; i < ex.table.size(); ++i)
      doubling = std::max(doubling, std::abs(ex.table[i] - fine.table[i]));
  }
  K.set_diagnostics(ex.tail, doubling);
  return K;
}

Kernel periodic_kernel(FractionalOrder alpha, const LatticeGeometry& geom) {
  const int n = geom.side();
  const auto ex = extract_table(trapezoid_kernel_grid(alpha, geom.dim(), n), geom.dim(), n, geom.radius());
  Kernel K(alpha, geom.dim(), geom.radius(), n, ex.table);
  K.set_diagnostics(0.0, std::numeric_limits<double>::quiet_NaN());
  return K;
}

Field apply_kernel(const Field& u, const Kernel& K) {
  const auto& g = u.geometry();
  const int d = g.dim();
  if (K.dim() != d) throw std::invalid_argument("kernel dimension does not match the field");
  const int L = g.radius();
  const int n = g.side();

  // Fold the table onto the set of differences x - y that occur between box sites.
  const bool periodic = g.periodic();
  const int width = periodic ? n : 4 * L + 1;
  const int shift_to_index = periodic ? L : 2 * L;
  std::vector<double> folded(ipow(static_cast<std::size_t>(width), d), 0.0);
  {
    const int R = K.radius();
    std::vector<int> o(static_cast<std::size_t>(d), -R);
    const auto vals = K.values();
    for (std::size_t t = 0; t < vals.size(); ++t) {
      bool keep = true;
      std::size_t f = 0;
      for (int a = 0; a < d; ++a) {
        int z = o[a];
        if (periodic) {
          z = g.wrap(z);
        } else if (std::abs(z) > 2 * L) {
          keep = false;
        }
        f = f * static_cast<std::size_t>(width) + static_cast<std::size_t>(z + shift_to_index);
      }
      if (keep) folded[f] += vals[t];
      for (int a = d - 1; a >= 0; --a) {
        if (++o[a] <= R) break;
        o[a] = -R;
      }
    }
  }

  // diff[x * n + y] = folded-axis index of x - y for box coordinates x, y (0-based).
  std::vector<std::size_t> diff(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      const int z = periodic ? positive_mod(x - y + L, n) : x - y + 2 * L;
      diff[static_cast<std::size_t>(x * n + y)] = static_cast<std::size_t>(z);
    }
  std::vector<std::size_t> stride(static_cast<std::size_t>(d));
  for (int a = 0; a < d; ++a) stride[static_cast<std::size_t>(a)] = ipow(static_cast<std::size_t>(width), d - 1 - a);

  const std::size_t count = g.site_count();
  std::vector<int> coords(count * static_cast<std::size_t>(d));
  for (std::size_t i = 0; i < count; ++i) {
    g.site(i, std::span<int>(coords.data() + i * d, static_cast<std::size_t>(d)));
    for (int a = 0; a < d; ++a) coords[i * d + a] += L;
  }

  std::vector<std::size_t> support;
  for (std::size_t j = 0; j < count; ++j)
    if (u[j] != 0.0) support.push_back(j);

  Field v(g);
  for (std::size_t i = 0; i < count; ++i) {
    const int* xi = coords.data() + i * d;
    double acc = 0.0;
    for (std::size_t j : support) {
      const int* yj = coords.data() + j * d;
      std::size_t f = 0;
      for (int a = 0; a < d; ++a) f += diff[static_cast<std::size_t>(xi[a] * n + yj[a])] * stride[a];
      acc += folded[f] * u[j];
    }
    v[i] = acc;
  }
  return v;
}

Field apply_multiplier_fft(const Field& u, FractionalOrder alpha) {
  const auto& g = u.geometry();
  const int d = g.dim();
  int points = g.side();
  if (!g.periodic()) {
    points = 1;
    while (points < 2 * g.side()) points *= 2;
  }
  const std::size_t total = ipow(static_cast<std::size_t>(points), d);
  std::vector<cplx> grid(total, cplx(0.0, 0.0));
  std::vector<std::size_t> slot(g.site_count());
  Site x(static_cast<std::size_t>(d));
  for (std::size_t i = 0; i < g.site_count(); ++i) {
    g.site(i, x);
    std::size_t s = 0;
    for (int a = 0; a < d; ++a) s = s * static_cast<std::size_t>(points) + static_cast<std::size_t>(positive_mod(x[a], points));
    slot[i] = s;
    grid[s] = u[i];
  }
  const std::vector<int> dims(static_cast<std::size_t>(d), points);
  detail::fft_inplace(grid, dims, -1);
  multiply_symbol(grid, d, points, alpha);
  detail::fft_inplace(grid, dims, +1);
  Field v(g);
  const double scale = 1.0 / static_cast<double>(total);
  for (std::size_t i = 0; i < g.site_count(); ++i) v[i] = grid[slot[i]].real() * scale;
  return v;
}

double halpha_inner(const Field& u, const Field& v, const Kernel& K, const Field& h) {
  require_same_geometry(u, v);
  require_same_geometry(u, h);
  const Field Au = apply_kernel(u, K);
  std::vector<double> terms(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) terms[i] = Au[i] * v[i] + h[i] * u[i] * v[i];
  return sum(terms);
}

double symbol_quadrature(const Field& u, const Field& v, FractionalOrder alpha, int points) {
  require_same_geometry(u, v);
  if (points < 1) throw std::invalid_argument("symbol_quadrature needs at least one point");
  const auto& g = u.geometry();
  const int d = g.dim();
  const int L = g.radius();
  const int n = g.side();
  // e^{i c theta_j} for c in [-L, L], theta_j = 2 pi j / M.
  std::vector<cplx> phase(static_cast<std::size_t>(points) * static_cast<std::size_t>(n));
  for (int j = 0; j < points; ++j)
    for (int c = -L; c <= L; ++c) {
      const double th = 2.0 * std::numbers::pi * j / points;
      phase[static_cast<std::size_t>(j * n + c + L)] = std::polar(1.0, c * th);
    }
  const auto s = axis_symbol(points);

  std::vector<int> coords(g.site_count() * static_cast<std::size_t>(d));
  for (std::size_t i = 0; i < g.site_count(); ++i)
    g.site(i, std::span<int>(coords.data() + i * d, static_cast<std::size_t>(d)));

  const std::size_t total = ipow(static_cast<std::size_t>(points), d);
  std::vector<int> k(static_cast<std::size_t>(d), 0);
  std::vector<double> terms(total);
  for (std::size_t q = 0; q < total; ++q) {
    cplx uh(0.0, 0.0);
    cplx vh(0.0, 0.0);
    for (std::size_t i = 0; i < g.site_count(); ++i) {
      if (u[i] == 0.0 && v[i] == 0.0) continue;
      cplx e(1.0, 0.0);
      for (int a = 0; a < d; ++a) e *= phase[static_cast<std::size_t>(k[a] * n + coords[i * d + a] + L)];
      uh += u[i] * e;
      vh += v[i] * e;
    }
    double phi = 0.0;
    for (int a = 0; a < d; ++a) phi += s[static_cast<std::size_t>(k[a])];
    terms[q] = power_alpha(phi, alpha) * (uh * std::conj(vh)).real();
    for (int a = d - 1; a >= 0; --a) {
      if (++k[a] < points) break;
      k[a] = 0;
    }
  }
  return sum(terms) / static_cast<double>(total);
}

double kernel_symbol(const Kernel& K, std::span<const double> theta) {
  if (static_cast<int>(theta.size()) != K.dim()) throw std::invalid_argument("theta has wrong dimension");
  const int d = K.dim();
  const int R = K.radius();
  std::vector<int> o(static_cast<std::size_t>(d), -R);
  const auto vals = K.values();
  std::vector<double> terms(vals.size());
  for (std::size_t t = 0; t < vals.size(); ++t) {
    double ph = 0.0;
    for (int a = 0; a < d; ++a) ph += o[a] * theta[a];
    terms[t] = vals[t] * std::cos(ph);
    for (int a = d - 1; a >= 0; --a) {
      if (++o[a] <= R) break;
      o[a] = -R;
    }
  }
  return sum(terms);
}

DecayReport decay_check(const Kernel& K) {
  DecayReport report;
  if (K.dim() != 1) return report;
  report.supported = true;
  const double expo = 1.0 + 2.0 * K.alpha().value();
  for (int r = 2; r <= K.radius(); ++r) {
    const int x[1] = {r};
    report.rows.push_back({r, std::abs(K(x)) * std::pow(static_cast<double>(r), expo)});
  }
  return report;
}

}  // namespace fraclat
