#include "fraclat/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "parallel.hpp"
#include "quadrature.hpp"

namespace fraclat {

namespace {

/// Trapezoid nodes/weights for (1/pi) int_0^thetamax g(theta) d theta with g even and either
/// pi-periodic-compatible (thetamax = pi) or negligible beyond thetamax.
struct BesselGrid {
  std::vector<double> theta;
  std::vector<double> weight;  // includes the 1/pi factor
};

BesselGrid bessel_grid(double t, int n_max, const HeatConfig& cfg) {
  // Beyond 4t sin^2(theta/2) = 40 the integrand is below e^-40.
  double theta_max = std::numbers::pi;
  if (4.0 * t > 40.0) theta_max = 2.0 * std::asin(std::sqrt(10.0 / t));
  const double band = n_max + 16.0 * std::sqrt(t) + 32.0;
  const int intervals = std::max(cfg.bessel_points, static_cast<int>(std::ceil(theta_max * band / std::numbers::pi)));
  const double h = theta_max / intervals;
  BesselGrid grid;
  grid.theta.resize(static_cast<std::size_t>(intervals) + 1);
  grid.weight.resize(static_cast<std::size_t>(intervals) + 1);
  for (int j = 0; j <= intervals; ++j) {
    grid.theta[static_cast<std::size_t>(j)] = j * h;
    grid.weight[static_cast<std::size_t>(j)] = (j == 0 || j == intervals ? 0.5 : 1.0) * h / std::numbers::pi;
  }
  return grid;
}

/// G_t(n) (increment = false) or G_t(n) - delta_{n0} (increment = true), n = 0..n_max.
/// The increment form uses expm1.
std::vector<double> heat_table(double t, int n_max, const HeatConfig& cfg, bool increment) {
  std::vector<double> out(static_cast<std::size_t>(n_max) + 1, 0.0);
  if (t == 0.0) {
    if (!increment) out[0] = 1.0;
    return out;
  }
  const auto grid = bessel_grid(t, n_max, cfg);
  // Full-period grids integrate cos(n theta) exactly, so the -1 in expm1 only touches n = 0.
  const bool full_period = 4.0 * t <= 40.0;
  for (std::size_t j = 0; j < grid.theta.size(); ++j) {
    const double s = std::sin(0.5 * grid.theta[j]);
    const double arg = -4.0 * t * s * s;
    const double g = (increment && full_period) ? std::expm1(arg) : std::exp(arg);
    const double w = grid.weight[j] * g;
    // Chebyshev recurrence for cos(n theta), re-anchored every 16 steps to stop error growth.
    const double theta = grid.theta[j];
    const double c1 = std::cos(theta);
    double cprev = 1.0;
    double ccur = c1;
    out[0] += w;
    for (int n = 1; n <= n_max; ++n) {
      if (n % 16 == 0) {
        cprev = std::cos((n - 1) * theta);
        ccur = std::cos(n * theta);
      }
      out[static_cast<std::size_t>(n)] += w * ccur;
      const double cnext = 2.0 * c1 * ccur - cprev;
      cprev = ccur;
      ccur = cnext;
    }
  }
  if (increment && !full_period) out[0] -= 1.0;
  // Halo truncation: drop the super-exponentially small far tail. The increment table scales
  // like t as t -> 0, so its floor is taken relative to the centre entry.
  const std::size_t start = increment ? 1 : 0;
  const double floor = increment ? cfg.kernel_floor * std::abs(out[0]) : cfg.kernel_floor;
  for (std::size_t n = start; n < out.size(); ++n) {
    if (std::abs(out[n]) < floor) {
      std::fill(out.begin() + static_cast<std::ptrdiff_t>(n), out.end(), 0.0);
      break;
    }
  }
  return out;
}

/// out = sum over the line along `axis` of table(|x_a - y_a|) in(y).
Field convolve_axis(const Field& in, int axis, const std::vector<double>& table) {
  const auto& g = in.geometry();
  const int n = g.side();
  const int d = g.dim();
  std::size_t stride = 1;
  for (int a = axis + 1; a < d; ++a) stride *= static_cast<std::size_t>(n);
  const std::size_t block = stride * static_cast<std::size_t>(n);
  const int reach = static_cast<int>(table.size()) - 1;
  Field out(g);
  for (std::size_t base = 0; base < g.site_count(); base += block) {
    for (std::size_t inner = 0; inner < stride; ++inner) {
      const std::size_t origin = base + inner;
      for (int x = 0; x < n; ++x) {
        double acc = 0.0;
        const int lo = std::max(0, x - reach);
        const int hi = std::min(n - 1, x + reach);
        for (int y = lo; y <= hi; ++y)
          acc += table[static_cast<std::size_t>(std::abs(x - y))] * in[origin + static_cast<std::size_t>(y) * stride];
        out[origin + static_cast<std::size_t>(x) * stride] = acc;
      }
    }
  }
  return out;
}

void require_zero_extended(const Field& u) {
  if (u.geometry().periodic())
    throw std::invalid_argument("the semigroup route uses the infinite-lattice heat kernel; use a ZeroExtended box");
}

/// e^{t Delta} u - u, telescoped over axes so every factor uses the accurate increment kernel.
Field heat_increment(const Field& u, double t, const HeatConfig& cfg) {
  const auto& g = u.geometry();
  const int reach = 2 * g.radius();
  const auto G = heat_table(t, reach, cfg, false);
  const auto D = heat_table(t, reach, cfg, true);
  // sum_a (G_a - I) prod_{b > a} G_b u
  Field acc(g);
  Field tail = u;
  for (int a = g.dim() - 1; a >= 0; --a) {
    acc += convolve_axis(tail, a, D);
    if (a > 0) tail = convolve_axis(tail, a, G);
  }
  return acc;
}

Field heat_apply_unchecked(const Field& u, double t, const HeatConfig& cfg) {
  const auto G = heat_table(t, 2 * u.geometry().radius(), cfg, false);
  Field v = u;
  for (int a = 0; a < u.geometry().dim(); ++a) v = convolve_axis(v, a, G);
  return v;
}

/// Nodes and weights of the two t-segments (see fraclap_semigroup).
struct TimeRule {
  std::vector<double> near_t, near_w;  // (0, T]: integrand (e^{t Delta} u - u)
  std::vector<double> far_t, far_w;    // [T, inf): integrand e^{t Delta} u
  double constant;                     // T^{-alpha} / alpha, multiplies -u
};

TimeRule time_rule(double alpha, const HeatConfig& cfg) {
  const double T = cfg.t_split;
  const double Ta = std::pow(T, -alpha);
  TimeRule r;
  // t = T tau^{1/(1-alpha)} absorbs the t^{-1-alpha} endpoint singularity.
  const auto gl = detail::gauss_legendre(cfg.t_nodes, 0.0, 1.0);
  const double p = 1.0 / (1.0 - alpha);
  for (std::size_t j = 0; j < gl.nodes.size(); ++j) {
    const double tau = gl.nodes[j];
    r.near_t.push_back(T * std::pow(tau, p));
    r.near_w.push_back(gl.weights[j] * Ta * p * std::pow(tau, -p));
  }
  // t = T sigma^{-1/alpha}, sigma = rho^q: the weight t^{-1-alpha} dt becomes (q T^-alpha / alpha) rho^{q-1} d rho.
  const int q = cfg.tail_power;
  for (std::size_t j = 0; j < gl.nodes.size(); ++j) {
    const double rho = gl.nodes[j];
    r.far_t.push_back(T * std::pow(rho, -static_cast<double>(q) / alpha));
    r.far_w.push_back(gl.weights[j] * Ta * q / alpha * std::pow(rho, q - 1));
  }
  r.constant = Ta / alpha;
  return r;
}

void require_open_order(FractionalOrder alpha) {
  if (!(alpha.value() < 1.0))
    throw std::domain_error("the subordination integral needs 0 < alpha < 1 (Gamma(-alpha) has a pole at 1)");
}

}  // namespace

void HeatConfig::validate() const {
  if (t_nodes < 16 || bessel_points < 16) throw std::invalid_argument("heat quadrature counts must be >= 16");
  if (!(t_split > 0.0)) throw std::invalid_argument("t_split must be positive");
  if (tail_power < 1) throw std::invalid_argument("tail_power must be >= 1");
}

std::vector<double> heat_kernel_1d(double t, int n_max, const HeatConfig& cfg) {
  if (t < 0.0) throw std::domain_error("heat time must be non-negative");
  if (n_max < 0) throw std::invalid_argument("n_max must be non-negative");
  return heat_table(t, n_max, cfg, false);
}

Field heat_apply(const Field& u, double t, const HeatConfig& cfg) {
  if (t < 0.0) throw std::domain_error("heat time must be non-negative");
  require_zero_extended(u);
  if (t == 0.0) return u;
  return heat_apply_unchecked(u, t, cfg);
}

double heat_tail(double t, int n_max, const HeatConfig& cfg) {
  if (t < 0.0) throw std::domain_error("heat time must be non-negative");
  const auto D = heat_table(t, n_max, cfg, true);
  // 1 - (1 + D0 + 2 sum D_n) without forming 1 + D0.
  double inside = D[0];
  for (std::size_t n = 1; n < D.size(); ++n) inside += 2.0 * D[n];
  return -inside;
}

double gamma_negative(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("gamma_negative needs 0 < alpha < 1");
  return std::tgamma(2.0 - alpha) / ((-alpha) * (1.0 - alpha));
}

double subordination_scalar(double lambda, FractionalOrder alpha, const HeatConfig& cfg) {
  require_open_order(alpha);
  cfg.validate();
  const auto r = time_rule(alpha.value(), cfg);
  double near = 0.0;
  for (std::size_t j = 0; j < r.near_t.size(); ++j) near += r.near_w[j] * std::expm1(-r.near_t[j] * lambda);
  double far = 0.0;
  for (std::size_t j = 0; j < r.far_t.size(); ++j) far += r.far_w[j] * std::exp(-r.far_t[j] * lambda);
  return (near + far - r.constant) / gamma_negative(alpha.value());
}

double scalar_identity_error(FractionalOrder alpha, const HeatConfig& cfg, int dim) {
  double worst = 0.0;
  for (int k = 1; k <= 20; ++k) {
    const double lambda = 4.0 * dim * k / 20.0;
    const double exact = std::pow(lambda, alpha.value());
    worst = std::max(worst, std::abs(subordination_scalar(lambda, alpha, cfg) - exact) / exact);
  }
  return worst;
}

HeatConfig calibrate_heat_config(FractionalOrder alpha, double tol, HeatConfig base, int max_nodes) {
  base.t_nodes = 16;
  while (scalar_identity_error(alpha, base) > tol && base.t_nodes < max_nodes) base.t_nodes *= 2;
  return base;
}

Field fraclap_semigroup(const Field& u, FractionalOrder alpha, const HeatConfig& cfg) {
  require_open_order(alpha);
  require_zero_extended(u);
  cfg.validate();
  const auto r = time_rule(alpha.value(), cfg);
  const std::size_t n_near = r.near_t.size();
  const std::size_t n_far = r.far_t.size();
  std::vector<Field> terms(n_near + n_far, Field(u.geometry()));
  detail::parallel_for(n_near + n_far, [&](std::size_t j) {
    if (j < n_near) {
      terms[j] = heat_increment(u, r.near_t[j], cfg);
      terms[j] *= r.near_w[j];
    } else {
      const std::size_t k = j - n_near;
      terms[j] = heat_apply_unchecked(u, r.far_t[k], cfg);
      terms[j] *= r.far_w[k];
    }
  });
  Field acc(u.geometry());
  for (const auto& term : terms) acc += term;
  acc.axpy(-r.constant, u);
  acc *= 1.0 / gamma_negative(alpha.value());
  return acc;
}

}  // namespace fraclat
