#include "fraclat/nehari.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace fraclat {

Field symmetrize(const Field& u, const Reflection& sym) {
  if (sym.parity != 1 && sym.parity != -1) throw std::invalid_argument("reflection parity must be +1 or -1");
  Field r = reflect(u, sym.center_sum);
  Field out = u;
  out.axpy(static_cast<double>(sym.parity), r);
  out *= 0.5;
  return out;
}

void SolverConfig::validate() const {
  if (!(tol_grad > 0.0) || !(tol_nehari > 0.0)) throw std::invalid_argument("solver tolerances must be positive");
  if (max_iter < 1) throw std::invalid_argument("max_iter must be at least 1");
  if (!(step0 > 0.0)) throw std::invalid_argument("step0 must be positive");
  if (!(backtrack > 0.0 && backtrack < 1.0)) throw std::invalid_argument("backtrack must lie in (0, 1)");
  if (!(armijo > 0.0 && armijo < 1.0)) throw std::invalid_argument("armijo constant must lie in (0, 1)");
  if (!(boundary_mass_tol >= 0.0)) throw std::invalid_argument("boundary_mass_tol must be non-negative");
}

namespace {

// sum_x f(x, s w) w / s, which falls from ||w||^2-like values at 0 to infinity.
double ray_term(const Model& m, const Field& w, double s) {
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) acc += m.f_at(i, s * w[i]) * w[i];
  return acc / s;
}

double ray_term_ds(const Model& m, const Field& w, double s) {
  const auto& nl = m.nonlinearity();
  const auto& a = m.weight_values();
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double v = s * w[i];
    acc += nl.df(a[i], v) * w[i] * w[i] / s - nl.f(a[i], v) * w[i] / (s * s);
  }
  return acc;
}

double closed_form_scale(const Model& m, const Field& w, double norm_sq) {
  const double p = m.nonlinearity().exponent();
  const auto& a = m.weight_values();
  double b = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) b += a[i] * std::pow(std::abs(w[i]), p);
  return std::pow(norm_sq / b, 1.0 / (p - 2.0));
}

double root_solve_scale(const Model& m, const Field& w, double norm_sq) {
  // psi(s) = ||w||^2 - ray_term(s) is strictly decreasing with a single sign change.
  auto psi = [&](double s) { return norm_sq - ray_term(m, w, s); };
  double lo = 1.0;
  double hi = 1.0;
  if (psi(1.0) > 0.0) {
    while (psi(hi) > 0.0) {
      lo = hi;
      hi *= 2.0;
      if (!std::isfinite(hi)) throw std::runtime_error("nehari_scale: bracket growth failed");
    }
  } else {
    while (psi(lo) <= 0.0) {
      hi = lo;
      lo *= 0.5;
      if (lo == 0.0) throw std::runtime_error("nehari_scale: bracket growth failed");
    }
  }
  double s = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double v = psi(s);
    if (v == 0.0) return s;
    if (v > 0.0) lo = s; else hi = s;
    const double d = -ray_term_ds(m, w, s);
    double next = (d != 0.0) ? s - v / d : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - s);
    s = next;
    if (step <= 1e-15 * s || (hi - lo) <= 1e-15 * s) break;
  }
  return s;
}

bool use_closed_form(ScaleMethod method) {
  if (method == ScaleMethod::ClosedForm) return true;
  if (method == ScaleMethod::RootSolve) return false;
  return true;  // every supported nonlinearity is a (weighted) power
}

double scale_from_norm(const Model& m, const Field& w, double norm_sq, ScaleMethod method) {
  if (!(norm_sq > 0.0)) throw std::domain_error("nehari_scale: ||w||_alpha must be positive");
  return use_closed_form(method) ? closed_form_scale(m, w, norm_sq) : root_solve_scale(m, w, norm_sq);
}

}  // namespace

double nehari_scale(const Model& m, const Field& w, ScaleMethod method) {
  require_same_geometry(w, m.h_values());
  if (w.is_zero()) throw std::domain_error("nehari_scale: w must be nonzero");
  return scale_from_norm(m, w, halpha_norm_sq(m, w), method);
}

Field project_m(const Model& m, const Field& w) {
  require_same_geometry(w, m.h_values());
  if (w.is_zero()) throw std::domain_error("project_m: w must be nonzero");
  const double n = std::sqrt(halpha_norm_sq(m, w));
  Field hat = (1.0 / n) * w;
  const double s = scale_from_norm(m, hat, halpha_norm_sq(m, hat), ScaleMethod::Auto);
  return s * hat;
}

Field unproject_m(const Model& m, const Field& u) {
  if (u.is_zero()) throw std::domain_error("unproject_m: u must be nonzero");
  return (1.0 / std::sqrt(halpha_norm_sq(m, u))) * u;
}

namespace {

struct Point {
  Field u;
  Field lu;  // (A + h) u
  Field g;
  double energy = 0.0;
  double scale = 0.0;
};

// m(w) together with (A + h) m(w); uses one operator application.
Point project_point(const Model& m, const Field& w) {
  Field lw = m.apply_linear(w);
  const double nsq = dot(lw, w, Summation::Compensated);
  if (!(nsq > 0.0)) throw std::domain_error("projected descent reached u = 0");
  const double n = std::sqrt(nsq);
  Field hat = (1.0 / n) * w;
  const double s = closed_form_scale(m, hat, nsq / (n * n));
  const double c = s / n;
  Point pt{c * w, c * lw, Field(w.geometry()), 0.0, s};
  double quad = 0.0;
  double pot = 0.0;
  for (std::size_t i = 0; i < pt.u.size(); ++i) {
    pt.g[i] = pt.lu[i] - m.f_at(i, pt.u[i]);
    quad += pt.lu[i] * pt.u[i];
    pot += m.F_at(i, pt.u[i]);
  }
  pt.energy = 0.5 * quad - pot;
  return pt;
}

// I(to) - I(from) computed from the difference.
double energy_change(const Model& m, const Point& from, const Point& to) {
  Field d = to.u - from.u;
  Field ld = m.apply_linear(d);
  const auto& nl = m.nonlinearity();
  const auto& a = m.weight_values();
  double quad = 0.0;
  double pot = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    quad += ld[i] * (to.u[i] + from.u[i]);
    pot += nl.F_diff(a[i], from.u[i], to.u[i]);
  }
  return 0.5 * quad - pot;
}

double l2(const Field& u) { return std::sqrt(dot(u, u, Summation::Compensated)); }

double boundary_mass_for(const Field& u) {
  const auto& g = u.geometry();
  if (!g.periodic()) return boundary_mass(u);
  // On the torus measure the shell farthest from the peak.
  std::size_t peak = 0;
  for (std::size_t i = 1; i < u.size(); ++i)
    if (std::abs(u[i]) > std::abs(u[peak])) peak = i;
  Site y = g.site(peak);
  for (int& c : y) c = -c;
  return boundary_mass(shift(u, y));
}

GroundStateResult make_result(const Model& m, const Point& pt, int iterations, std::vector<double> s_hist,
                              std::vector<double> trace, const SolverConfig& cfg) {
  GroundStateResult r;
  r.u = pt.u;
  r.energy = energy(m, pt.u);
  r.grad_residual = l2(pt.g) / l2(pt.u);
  r.nehari_residual = nehari_residual(m, pt.u);
  r.iterations = iterations;
  r.s_history = std::move(s_hist);
  r.energy_trace = std::move(trace);
  r.boundary_mass = boundary_mass_for(pt.u);
  if (r.boundary_mass > cfg.boundary_mass_tol) {
    std::ostringstream os;
    os << "boundary mass " << r.boundary_mass << " exceeds " << cfg.boundary_mass_tol
       << "; the box may be too small";
    r.warnings.push_back(os.str());
  }
  return r;
}

}  // namespace

GroundStateResult minimize(const Model& m, const Field& w0, const SolverConfig& cfg) {
  cfg.validate();
  require_same_geometry(w0, m.h_values());
  if (w0.is_zero()) throw std::domain_error("minimize: w0 must be nonzero");
  auto sym = [&](Field w) { return cfg.symmetry ? symmetrize(w, *cfg.symmetry) : w; };

  Field start = sym(w0);
  if (start.is_zero()) throw std::domain_error("minimize: w0 vanishes on the symmetric subspace");
  Point cur = project_point(m, start);
  std::vector<double> s_hist{cur.scale};
  std::vector<double> trace{cur.energy};
  double trace_energy = cur.energy;

  double eta_prev = cfg.step0;
  Field du(w0.geometry());
  Field dg(w0.geometry());
  bool have_bb = false;

  for (int k = 0;; ++k) {
    const double gsq = dot(cur.g, cur.g, Summation::Compensated);
    const double grad_res = std::sqrt(gsq) / l2(cur.u);
    if (grad_res <= cfg.tol_grad) {
      GroundStateResult r = make_result(m, cur, k, std::move(s_hist), std::move(trace), cfg);
      if (std::abs(r.nehari_residual) <= cfg.tol_nehari) return r;
      throw NonConvergenceError("minimize: gradient converged but Nehari residual exceeds tolerance",
                                std::move(r));
    }
    if (k >= cfg.max_iter) {
      std::ostringstream os;
      os << "minimize: no convergence after " << cfg.max_iter << " iterations (grad residual " << grad_res << ")";
      throw NonConvergenceError(os.str(), make_result(m, cur, k, std::move(s_hist), std::move(trace), cfg));
    }

    double eta = eta_prev;
    if (have_bb) {
      const double sy = dot(du, dg);
      const double ss = dot(du, du);
      if (sy > 0.0 && ss > 0.0) eta = ss / sy;
      else eta = 2.0 * eta_prev;
    }
    eta = std::clamp(eta, 1e-12, 1e6);

    bool accepted = false;
    std::optional<Point> next;
    double change = 0.0;
    while (eta >= 1e-30) {
      Field w = cur.u;
      w.axpy(-eta, cur.g);
      w = sym(std::move(w));
      if (!w.is_zero()) {
        next = project_point(m, w);
        change = energy_change(m, cur, *next);
        if (change <= -cfg.armijo * eta * gsq) {
          accepted = true;
          break;
        }
      }
      eta *= cfg.backtrack;
    }
    if (!accepted) {
      std::ostringstream os;
      os << "minimize: line search underflow at iteration " << k << " (grad residual " << grad_res << ")";
      throw StagnationError(os.str(), make_result(m, cur, k, std::move(s_hist), std::move(trace), cfg));
    }
    du = next->u - cur.u;
    dg = next->g - cur.g;
    have_bb = true;
    eta_prev = eta;
    trace_energy += change;
    trace.push_back(trace_energy);
    s_hist.push_back(next->scale);
    cur = std::move(*next);
  }
}

OrbitMatch orbit_distance(const Model& m, const Field& u1, const Field& u2, bool sign_aware) {
  require_same_geometry(u1, u2);
  require_same_geometry(u1, m.h_values());
  const auto& g = u1.geometry();
  const std::size_t n = g.site_count();
  const int d = g.dim();

  Field l1 = m.apply_linear(u1);
  Field a2 = m.apply_operator(u2);
  const double n1sq = dot(l1, u1, Summation::Compensated);
  const double a2sq = dot(a2, u2, Summation::Compensated);
  const Field& h = m.h_values();
  double h2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) h2 += h[i] * u2[i] * u2[i];
  const double n2sq = a2sq + h2;
  const double denom = std::sqrt(std::max(n1sq, n2sq));

  OrbitMatch best;
  best.shift.assign(static_cast<std::size_t>(d), 0);
  if (denom == 0.0) return best;

  auto exact = [&](const Site& y, int sigma) {
    Field diff = u1;
    diff.axpy(-static_cast<double>(sigma), shift(u2, y));
    return std::sqrt(std::max(halpha_norm_sq(m, diff), 0.0)) / denom;
  };

  // Shift range: the torus, or every offset that keeps supports overlapping on a zero-extended box.
  const int reach = g.periodic() ? g.radius() : 2 * g.radius();
  const int width = 2 * reach + 1;
  std::size_t n_shifts = 1;
  for (int k = 0; k < d; ++k) n_shifts *= static_cast<std::size_t>(width);
  auto shift_at = [&](std::size_t idx) {
    Site y(static_cast<std::size_t>(d));
    for (int k = d - 1; k >= 0; --k) {
      y[k] = static_cast<int>(idx % static_cast<std::size_t>(width)) - reach;
      idx /= static_cast<std::size_t>(width);
    }
    return y;
  };

  struct Candidate {
    double dist_sq;
    std::size_t shift;
    int sign;
  };
  std::vector<Candidate> cands;
  cands.reserve(n_shifts * 2);

  if (g.periodic()) {
    // ||u1 - sigma S_y u2||^2 = ||u1||^2 + (u2, A u2) + sum h(x) u2(x - y)^2 - 2 sigma sum (L u1)(x) u2(x - y).
    Site x(static_cast<std::size_t>(d));
    Site z(static_cast<std::size_t>(d));
    for (std::size_t s = 0; s < n_shifts; ++s) {
      const Site y = shift_at(s);
      double corr = 0.0;
      double hy = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        g.site(i, x);
        for (int k = 0; k < d; ++k) z[k] = x[k] - y[k];
        const double v = u2.at(z);
        corr += l1[i] * v;
        hy += h[i] * v * v;
      }
      const double base = n1sq + a2sq + hy;
      cands.push_back({base - 2.0 * corr, s, 1});
      if (sign_aware) cands.push_back({base + 2.0 * corr, s, -1});
    }
  } else {
    for (std::size_t s = 0; s < n_shifts; ++s) {
      const Site y = shift_at(s);
      for (int sigma : {1, -1}) {
        if (sigma == -1 && !sign_aware) continue;
        const double e = exact(y, sigma);
        cands.push_back({e * e * denom * denom, s, sigma});
      }
    }
  }

  std::stable_sort(cands.begin(), cands.end(),
                   [](const Candidate& a, const Candidate& b) { return a.dist_sq < b.dist_sq; });
  // The correlation values lose accuracy near zero; re-evaluate the leading candidates directly.
  const double slack = 1e-6 * denom * denom;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < cands.size(); ++c) {
    if (c >= 8 && cands[c].dist_sq > cands[0].dist_sq + slack) break;
    const Site y = shift_at(cands[c].shift);
    const double e = exact(y, cands[c].sign);
    if (e < best_d) {
      best_d = e;
      best.shift = y;
      for (int& c : best.shift) c = -c;
      best.sign = cands[c].sign;
    }
    if (c >= 64) break;
  }
  best.distance = best_d;
  return best;
}

BatchCertificate certify_batch(const Model& m, const std::vector<Field>& solutions) {
  if (solutions.empty()) throw std::invalid_argument("certify_batch needs at least one solution");
  BatchCertificate cert;
  std::vector<double> norms;
  std::vector<Field> units;
  cert.c_batch = std::numeric_limits<double>::infinity();
  for (const auto& u : solutions) {
    cert.c_batch = std::min(cert.c_batch, energy(m, u));
    const double nu = std::sqrt(halpha_norm_sq(m, u));
    norms.push_back(nu);
    units.push_back((1.0 / nu) * u);
  }
  if (!(cert.c_batch > 0.0)) throw std::domain_error("certify_batch: batch minimum energy must be positive");
  const double root = std::sqrt(2.0 * cert.c_batch);
  cert.min_norm_ratio = std::numeric_limits<double>::infinity();
  for (double nu : norms) cert.min_norm_ratio = std::min(cert.min_norm_ratio, nu / root);
  cert.norm_bound_holds = cert.min_norm_ratio >= 1.0 - 1e-8;

  cert.max_lipschitz_ratio = 0.0;
  const double lip = std::sqrt(2.0 / cert.c_batch);
  for (std::size_t i = 0; i < solutions.size(); ++i) {
    for (std::size_t j = i + 1; j < solutions.size(); ++j) {
      const double rhs = lip * std::sqrt(std::max(halpha_norm_sq(m, solutions[i] - solutions[j]), 0.0));
      const double lhs = std::sqrt(std::max(halpha_norm_sq(m, units[i] - units[j]), 0.0));
      if (rhs == 0.0) {
        if (lhs > 0.0) cert.max_lipschitz_ratio = std::numeric_limits<double>::infinity();
        continue;
      }
      cert.max_lipschitz_ratio = std::max(cert.max_lipschitz_ratio, lhs / rhs);
    }
  }
  cert.lipschitz_holds = cert.max_lipschitz_ratio <= 1.0;
  return cert;
}

}  // namespace fraclat
