#include <algorithm>
#include <cmath>
#include <cstring>
#include <functional>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "fraclat/cli.hpp"
#include "fraclat/io.hpp"
#include "fraclat/model.hpp"
#include "fraclat/nehari.hpp"
#include "fraclat/random.hpp"
#include "fraclat/semigroup.hpp"
#include "fraclat/spectral.hpp"

namespace fraclat::cli {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

class Suite {
 public:
  explicit Suite(const ValidateOptions& opts) : opts_(opts) {}

  bool wants(const std::string& module) const { return !opts_.only || *opts_.only == module; }

  /// Passes when measured <= tolerance.
  void check(const std::string& module, const std::string& name, double measured, double tolerance,
             std::string detail = {}) {
    results_.push_back({module, name, measured <= tolerance, measured, tolerance, std::move(detail)});
  }

  void run(const std::string& module, const std::string& name, const std::function<void()>& body) {
    try {
      body();
    } catch (const std::exception& e) {
      results_.push_back({module, name, false, kInf, 0.0, std::string("threw: ") + e.what()});
    }
  }

  Kernel faulty(Kernel K) const {
    if (opts_.wrong_sign_kernel)
      for (double& v : K.values()) v = -v;
    return K;
  }

  std::vector<CheckResult> take() { return std::move(results_); }

 private:
  ValidateOptions opts_;
  std::vector<CheckResult> results_;
};

double rel_sup(const Field& a, const Field& b, double scale) { return norm(a - b, kInf) / scale; }

Model small_model(int L, Boundary b, double alpha = 0.5) {
  return Model(LatticeGeometry(1, L, b), FractionalOrder(alpha), Potential::constant(1.0),
               Nonlinearity::pure_power(4.0));
}

// ---------------------------------------------------------------- lattice

void lattice_checks(Suite& s) {
  const std::string mod = "lattice";
  const std::vector<LatticeGeometry> geoms{LatticeGeometry(1, 16), LatticeGeometry(2, 5, Boundary::PeriodicWrap)};

  s.run(mod, "norm_embedding", [&] {
    PortableRng rng(101);
    const double orders[] = {2.0, 3.0, 4.0, 6.0, kInf};
    double worst = -kInf;
    for (int i = 0; i < 100; ++i) {
      const Field u = random_field(geoms[i % 2], rng);
      for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 5; ++b)
          worst = std::max(worst, (norm(u, orders[b]) - norm(u, orders[a])) / norm(u, orders[a]));
    }
    s.check(mod, "norm_embedding", worst, 1e-15, "max (|u|_s2 - |u|_s1)/|u|_s1 over s1 < s2");
  });

  s.run(mod, "interpolation", [&] {
    PortableRng rng(102);
    double worst = -kInf;
    for (int i = 0; i < 100; ++i) {
      const Field u = random_field(geoms[i % 2], rng);
      for (double q : {2.5, 3.0, 4.0, 6.0}) {
        const auto side = interpolation_check(u, q);
        worst = std::max(worst, (side.lhs - side.rhs) / side.rhs);
      }
    }
    s.check(mod, "interpolation", worst, 1e-14, "max (lhs - rhs)/rhs");
  });

  s.run(mod, "shift_bijection", [&] {
    PortableRng rng(103);
    const Field u = random_field(geoms[1], rng);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const Site y{rng.integer(-12, 12), rng.integer(-12, 12)};
      const Site my{-y[0], -y[1]};
      const Field v = shift(u, y);
      worst = std::max(worst, norm(shift(v, my) - u, kInf));
      std::vector<double> a(u.values().begin(), u.values().end());
      std::vector<double> b(v.values().begin(), v.values().end());
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      if (a != b) worst = kInf;
    }
    s.check(mod, "shift_bijection", worst, 0.0, "shift(shift(u, y), -y) - u, exact");
  });

  s.run(mod, "norm_determinism", [&] {
    PortableRng rng(104);
    const Field u = random_field(geoms[1], rng);
    double mismatches = 0.0;
    for (double q : {2.0, 3.0, kInf}) {
      const double a = norm(u, q);
      const double b = norm(u, q);
      if (std::memcmp(&a, &b, sizeof a) != 0) mismatches += 1.0;
    }
    s.check(mod, "norm_determinism", mismatches, 0.0, "bitwise repeat of norm");
  });
}

// ---------------------------------------------------------------- spectral

void spectral_checks(Suite& s) {
  const std::string mod = "spectral";

  s.run(mod, "stencil", [&] {
    double worst = 0.0;
    for (int d : {1, 2}) {
      const Kernel K = s.faulty(kernel_table(FractionalOrder(1.0), d, 4, SpectralConfig{256, 4}));
      const LatticeGeometry box(d, 4);
      Site x(static_cast<std::size_t>(d));
      for (std::size_t i = 0; i < box.site_count(); ++i) {
        box.site(i, x);
        int l1 = 0;
        for (int c : x) l1 += std::abs(c);
        const double expect = l1 == 0 ? 2.0 * d : l1 == 1 ? -1.0 : 0.0;
        worst = std::max(worst, std::abs(K(x) - expect));
      }
    }
    s.check(mod, "stencil", worst, 1e-12, "alpha = 1, M = 256, d in {1, 2}");
  });

  const Kernel half = s.faulty(kernel_table(FractionalOrder(0.5), 1, 64, SpectralConfig{8192, 64}));

  s.run(mod, "half_closed_form", [&] {
    double worst = std::abs(half(std::vector<int>{0}) - 4.0 / std::numbers::pi);
    for (int x = 1; x <= 20; ++x)
      for (int sx : {x, -x})
        worst = std::max(worst, std::abs(half(std::vector<int>{sx}) + 4.0 / (std::numbers::pi * (4.0 * x * x - 1.0))));
    s.check(mod, "half_closed_form", worst, 1e-6, "alpha = 1/2, M = 8192, |x| <= 20");
  });

  s.run(mod, "kernel_negativity", [&] {
    double violations = 0.0;
    auto scan = [&](const Kernel& K) {
      const LatticeGeometry box(K.dim(), K.radius());
      Site x(static_cast<std::size_t>(K.dim()));
      for (std::size_t i = 0; i < box.site_count(); ++i) {
        box.site(i, x);
        const bool origin = std::all_of(x.begin(), x.end(), [](int c) { return c == 0; });
        if (origin ? !(K(x) > 0.0) : !(K(x) < 0.0)) violations += 1.0;
      }
    };
    for (double a : {0.25, 0.5, 0.75}) scan(s.faulty(kernel_table(FractionalOrder(a), 1, 50, SpectralConfig{8192, 50})));
    scan(s.faulty(kernel_table(FractionalOrder(0.5), 2, 8, SpectralConfig{256, 8})));
    s.check(mod, "kernel_negativity", violations, 0.0, "K(0) > 0 and K(x) < 0 off the origin");
  });

  s.run(mod, "kernel_symmetry", [&] {
    double worst = 0.0;
    for (int d : {2, 3}) {
      const Kernel K = s.faulty(kernel_table(FractionalOrder(0.3), d, d == 2 ? 8 : 3, SpectralConfig{d == 2 ? 256 : 32, 1}));
      const LatticeGeometry box(d, K.radius());
      Site x(static_cast<std::size_t>(d));
      for (std::size_t i = 0; i < box.site_count(); ++i) {
        box.site(i, x);
        Site y = x;
        for (int& c : y) c = -c;
        worst = std::max(worst, std::abs(K(x) - K(y)));
        std::sort(y.begin(), y.end());
        do {
          worst = std::max(worst, std::abs(K(x) - K(y)));
        } while (std::next_permutation(y.begin(), y.end()));
      }
    }
    s.check(mod, "kernel_symmetry", worst, 0.0, "sign flips and permutations, exact");
  });

  s.run(mod, "kernel_sum_zero", [&] {
    double worst = 0.0;
    for (int d : {1, 2}) {
      const Kernel K = s.faulty(periodic_kernel(FractionalOrder(0.5), LatticeGeometry(d, d == 1 ? 50 : 8, Boundary::PeriodicWrap)));
      double acc = 0.0;
      for (double v : K.values()) acc += v;
      worst = std::max(worst, std::abs(acc));
    }
    s.check(mod, "kernel_sum_zero", worst, 1e-12, "sum of the full periodic table");
  });

  s.run(mod, "symbol_bound", [&] {
    PortableRng rng(201);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const int d = 1 + i % 2;
      const LatticeGeometry g(d, d == 1 ? 6 : 2, Boundary::PeriodicWrap);
      const double a = 0.25 + 0.5 * rng.uniform();
      const Field u = random_field(g, rng);
      const double semi = symbol_quadrature(u, u, FractionalOrder(a), g.side());
      worst = std::max(worst, semi / (std::pow(4.0 * d, a) * dot(u, u)));
    }
    s.check(mod, "symbol_bound", worst, 1.0 + 1e-12, "max [u]^2 / ((4d)^alpha |u|_2^2)");
  });

  s.run(mod, "tail_consistency", [&] {
    PortableRng rng(202);
    const Kernel K = kernel_table(FractionalOrder(0.5), 1, 50, SpectralConfig{8192, 50});
    const Kernel Kf = s.faulty(K);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const double th[1] = {rng.uniform(-std::numbers::pi, std::numbers::pi)};
      const double err = std::abs(kernel_symbol(Kf, th) - symbol(th, FractionalOrder(0.5)));
      worst = std::max(worst, err / (K.tail_bound() + 1e-12));
    }
    s.check(mod, "tail_consistency", worst, 1.0, "|sum K e^{ix.theta} - Phi^alpha| / tail_bound");
  });

  const LatticeGeometry torus(1, 16, Boundary::PeriodicWrap);
  const Kernel tk = s.faulty(periodic_kernel(FractionalOrder(0.5), torus));
  const Field ones = Field::constant(torus, 1.0);

  s.run(mod, "self_adjoint", [&] {
    PortableRng rng(203);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const Field u = random_field(torus, rng);
      const Field v = random_field(torus, rng);
      const double scale = std::sqrt(dot(u, u) * dot(v, v));
      worst = std::max(worst, std::abs(halpha_inner(u, v, tk, ones) - halpha_inner(v, u, tk, ones)) / scale);
    }
    s.check(mod, "self_adjoint", worst, 1e-12, "|(u,v) - (v,u)| / (|u|_2 |v|_2)");
  });

  s.run(mod, "linearity", [&] {
    PortableRng rng(204);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const Field u = random_field(torus, rng);
      const Field v = random_field(torus, rng);
      const double a = rng.uniform(-3.0, 3.0);
      const double b = rng.uniform(-3.0, 3.0);
      const Field lhs = apply_kernel(a * u + b * v, tk);
      const Field rhs = a * apply_kernel(u, tk) + b * apply_kernel(v, tk);
      const double scale = std::abs(a) * norm(u, kInf) + std::abs(b) * norm(v, kInf);
      worst = std::max(worst, rel_sup(lhs, rhs, scale));
    }
    s.check(mod, "linearity", worst, 1e-12, "relative sup error");
  });

  s.run(mod, "fft_boundedness", [&] {
    PortableRng rng(205);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const int d = 1 + i % 2;
      const LatticeGeometry g(d, d == 1 ? 16 : 5, Boundary::PeriodicWrap);
      const double a = rng.uniform(0.1, 1.0);
      const Field u = random_field(g, rng);
      worst = std::max(worst, norm(apply_multiplier_fft(u, FractionalOrder(a)), 2.0) / (std::pow(4.0 * d, a) * norm(u, 2.0)));
    }
    s.check(mod, "fft_boundedness", worst, 1.0 + 1e-12, "max |A u|_2 / ((4d)^alpha |u|_2)");
  });

  s.run(mod, "fft_vs_kernel", [&] {
    PortableRng rng(206);
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
      const Field u = random_field(torus, rng);
      worst = std::max(worst, rel_sup(apply_multiplier_fft(u, FractionalOrder(0.5)), apply_kernel(u, tk), norm(u, kInf)));
    }
    s.check(mod, "fft_vs_kernel", worst, 1e-12, "periodic box, relative sup error");
  });

  s.run(mod, "plancherel", [&] {
    PortableRng rng(207);
    const LatticeGeometry g(1, 8);
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
      const Field u = random_field(g, rng);
      const int M = 64;
      double acc = 0.0;
      for (int j = 0; j < M; ++j) {
        const double th[1] = {2.0 * std::numbers::pi * j / M};
        acc += std::norm(dft(u, th));
      }
      worst = std::max(worst, std::abs(acc / M - dot(u, u)) / dot(u, u));
    }
    s.check(mod, "plancherel", worst, 1e-10, "relative error of the quadrature of |u^|^2");
  });

  s.run(mod, "spectral_vs_kernel_inner", [&] {
    PortableRng rng(208);
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
      const Field u = random_field(torus, rng);
      const Field v = random_field(torus, rng);
      const double kernel_form = halpha_inner(u, v, tk, ones);
      const double spectral_form = symbol_quadrature(u, v, FractionalOrder(0.5), torus.side()) + dot(u, v);
      worst = std::max(worst, std::abs(kernel_form - spectral_form) / std::sqrt(dot(u, u) * dot(v, v)));
    }
    s.check(mod, "spectral_vs_kernel_inner", worst, 1e-8, "periodic box");
  });

  s.run(mod, "decay_half", [&] {
    const auto rep = decay_check(half);
    double worst = 0.0;
    for (const auto& r : rep.rows)
      if (r.distance >= 5 && r.distance <= 50) worst = std::max(worst, std::abs(r.scaled * std::numbers::pi - 1.0));
    s.check(mod, "decay_half", worst, 0.1, "max | pi |K(x)| x^2 - 1 | on [5, 50]");
  });

  s.run(mod, "decay_quarter_spread", [&] {
    const Kernel K = s.faulty(kernel_table(FractionalOrder(0.25), 1, 64, SpectralConfig{8192, 64}));
    double lo = kInf, hi = 0.0;
    for (const auto& r : decay_check(K).rows)
      if (r.distance >= 5 && r.distance <= 50) {
        lo = std::min(lo, r.scaled);
        hi = std::max(hi, r.scaled);
      }
    s.check(mod, "decay_quarter_spread", (hi - lo) / hi, 0.5, "relative spread of |K(x)| x^1.5 on [5, 50]");
  });
}

// ---------------------------------------------------------------- semigroup

void semigroup_checks(Suite& s) {
  const std::string mod = "semigroup";
  const LatticeGeometry g(1, 20);

  for (double a : {0.25, 0.5, 0.75}) {
    const std::string tag = "definition_equivalence_" + std::to_string(a).substr(0, 4);
    s.run(mod, tag, [&] {
      const FractionalOrder al(a);
      const HeatConfig hc = calibrate_heat_config(al, 1e-6);
      const Kernel K = kernel_table(al, 1, 40, SpectralConfig{8192, 40}, false);
      std::vector<Field> inputs{Field::delta(g, std::vector<int>{0})};
      PortableRng rng(301);
      for (int i = 0; i < 10; ++i) inputs.push_back(random_field(g, rng));
      double worst = 0.0;
      for (const auto& u : inputs)
        worst = std::max(worst, rel_sup(fraclap_semigroup(u, al, hc), apply_kernel(u, K), norm(u, kInf)));
      s.check(mod, tag, worst, 1e-4, "|semigroup - kernel|_inf / |u|_inf");
    });
  }

  s.run(mod, "scalar_identity", [&] {
    double worst = 0.0;
    for (double a : {0.25, 0.5, 0.75}) {
      const FractionalOrder al(a);
      worst = std::max(worst, scalar_identity_error(al, calibrate_heat_config(al, 1e-6)));
    }
    s.check(mod, "scalar_identity", worst, 1e-6, "relative error at 20 lambda in (0, 4]");
  });

  s.run(mod, "semigroup_property", [&] {
    const LatticeGeometry box(1, 32);
    PortableRng rng(302);
    double worst = 0.0;
    for (int i = 0; i < 5; ++i) {
      Field u(box);
      for (int x = -4; x <= 4; ++x) u[box.index(std::vector<int>{x})] = rng.uniform(-1.0, 1.0);
      const double t1 = rng.uniform(0.1, 1.5);
      const double t2 = rng.uniform(0.1, 1.5);
      worst = std::max(worst, rel_sup(heat_apply(heat_apply(u, t1), t2), heat_apply(u, t1 + t2), norm(u, kInf)));
    }
    s.check(mod, "semigroup_property", worst, 1e-8, "|H_t H_s u - H_{s+t} u|_inf / |u|_inf");
  });
}

// ---------------------------------------------------------------- model

void model_checks(Suite& s) {
  const std::string mod = "model";
  PortableRng rng(401);
  std::vector<double> samples;
  for (int i = 0; i < 200; ++i) samples.push_back(std::exp(rng.uniform(-8.0, 4.0)) * (i % 2 ? 1.0 : -1.0));

  s.run(mod, "growth_bound", [&] {
    double violations = 0.0;
    for (double p : {2.5, 4.0, 6.0}) {
      const auto nl = Nonlinearity::pure_power(p);
      for (double u : samples)
        if (std::abs(nl.f(1.0, u)) > std::abs(u) + std::pow(std::abs(u), p - 1.0)) violations += 1.0;
    }
    s.check(mod, "growth_bound", violations, 0.0, "|f(u)| <= |u| + |u|^(p-1)");
  });

  s.run(mod, "superquadratic", [&] {
    double worst = 0.0;
    for (double p : {2.5, 4.0, 6.0}) {
      const auto nl = Nonlinearity::pure_power(p);
      for (double a : {0.5, 1.0, 2.0})
        for (double u : samples) {
          const double lhs = nl.f(a, u) * u - 2.0 * nl.F(a, u);
          const double expect = (1.0 - 2.0 / p) * a * std::pow(std::abs(u), p);
          if (!(lhs > 0.0)) worst = kInf;
          worst = std::max(worst, std::abs(lhs - expect) / expect);
        }
    }
    s.check(mod, "superquadratic", worst, 1e-13, "f u - 2F = (1 - 2/p) a |u|^p > 0");
  });

  s.run(mod, "f_over_u_monotone", [&] {
    double violations = 0.0;
    for (double p : {2.5, 4.0, 6.0}) {
      const auto nl = Nonlinearity::pure_power(p);
      for (int i = 0; i < 200; ++i) {
        const double u1 = std::exp(rng.uniform(-8.0, 4.0));
        const double u2 = u1 * (1.0 + rng.uniform(1e-6, 1.0));
        if (!(nl.f(1.0, u2) / u2 > nl.f(1.0, u1) / u1)) violations += 1.0;
      }
    }
    s.check(mod, "f_over_u_monotone", violations, 0.0, "f(u)/u strictly increasing on u > 0");
  });

  s.run(mod, "gradient_fd", [&] {
    const Model m = small_model(8, Boundary::ZeroExtended);
    double worst = 0.0;
    for (int i = 0; i < 5; ++i) {
      const Field u = random_field(m.geometry(), rng);
      const Field v = random_field(m.geometry(), rng);
      const double exact = dot(gradient(m, u), v);
      auto central = [&](double eps) { return (energy(m, u + eps * v) - energy(m, u - eps * v)) / (2.0 * eps); };
      const double eps = 1e-3;
      const double rich = (4.0 * central(eps / 2.0) - central(eps)) / 3.0;
      worst = std::max(worst, std::abs(rich - exact) / std::max(1.0, std::abs(exact)));
    }
    s.check(mod, "gradient_fd", worst, 1e-8, "Richardson-extrapolated central differences");
  });

  s.run(mod, "periodicity", [&] {
    const LatticeGeometry g(1, 7, Boundary::PeriodicWrap);
    const Model mh(g, FractionalOrder(0.5), Potential::periodic(PeriodicTable({3}, {1.0, 2.0, 1.5})),
                   Nonlinearity::pure_power(4.0));
    const Model mf(g, FractionalOrder(0.5), Potential::constant(1.0),
                   Nonlinearity::weighted_power(4.0, PeriodicTable({5}, {1.0, 0.5, 2.0, 1.0, 0.75})));
    double worst = 0.0;
    for (int i = 0; i < 5; ++i) {
      const Field u = random_field(g, rng);
      for (const auto& [model, T] : {std::pair<const Model*, int>{&mh, 3}, {&mh, -6}, {&mf, 5}, {&mf, 10}}) {
        const double e = energy(*model, u);
        worst = std::max(worst, std::abs(energy(*model, shift(u, std::vector<int>{T})) - e) / std::max(1.0, std::abs(e)));
      }
    }
    s.check(mod, "periodicity", worst, 1e-12, "energy(shift(u, T e_1)) - energy(u) for multiples T of the period");
  });
}

// ---------------------------------------------------------------- nehari

void nehari_checks(Suite& s) {
  const std::string mod = "nehari";
  const Model m = small_model(32, Boundary::PeriodicWrap);
  PortableRng rng(501);

  s.run(mod, "project_energy_positive", [&] {
    double nonpositive = 0.0;
    for (int i = 0; i < 100; ++i)
      if (!(energy(m, project_m(m, random_field(m.geometry(), rng))) > 0.0)) nonpositive += 1.0;
    s.check(mod, "project_energy_positive", nonpositive, 0.0, "rays whose projection has I <= 0");
  });

  s.run(mod, "closed_form_vs_root", [&] {
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const Field w = random_field(m.geometry(), rng);
      const double a = nehari_scale(m, w, ScaleMethod::ClosedForm);
      const double b = nehari_scale(m, w, ScaleMethod::RootSolve);
      worst = std::max(worst, std::abs(a - b) / a);
    }
    s.check(mod, "closed_form_vs_root", worst, 1e-10, "relative scale difference over 100 rays");
  });

  s.run(mod, "ray_maximum", [&] {
    double worst = -kInf;
    for (int i = 0; i < 10; ++i) {
      const Field w = random_field(m.geometry(), rng);
      const double sw = nehari_scale(m, w);
      const double peak = energy(m, sw * w);
      for (int k = 0; k < 100; ++k) {
        const double sc = sw * std::pow(10.0, -1.0 + 2.0 * k / 99.0);
        worst = std::max(worst, (energy(m, sc * w) - peak) / std::abs(peak));
      }
    }
    s.check(mod, "ray_maximum", worst, 1e-14, "max (I(s w) - I(s_w w)) / |I(s_w w)| on the log grid");
  });

  s.run(mod, "residual_at_scale", [&] {
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const Field w = random_field(m.geometry(), rng);
      worst = std::max(worst, std::abs(nehari_residual(m, nehari_scale(m, w) * w)));
    }
    s.check(mod, "residual_at_scale", worst, 1e-10, "|<I'(s_w w), s_w w>|");
  });

  const double centre[1] = {0.0};
  const SolverConfig cfg;
  std::optional<GroundStateResult> ground;
  s.run(mod, "solve_converges", [&] {
    ground = minimize(m, gaussian_bump(m.geometry(), centre, 2.0), cfg);
    s.check(mod, "solve_converges", ground->grad_residual, cfg.tol_grad, "grad residual of the converged state");
  });
  if (ground) {
    s.run(mod, "descent_monotone", [&] {
      double increases = 0.0;
      for (std::size_t k = 1; k < ground->energy_trace.size(); ++k)
        if (ground->energy_trace[k] > ground->energy_trace[k - 1]) increases += 1.0;
      s.check(mod, "descent_monotone", increases, 0.0, "energy increases along the trace");
    });
    s.run(mod, "pointwise_equation", [&] {
      const Field g = gradient(m, ground->u);
      const double bound = cfg.tol_grad * norm(ground->u, 2.0) * std::sqrt(static_cast<double>(g.size()));
      s.check(mod, "pointwise_equation", norm(g, kInf), bound, "max_x |A u + h u - f(u)|");
    });
    s.run(mod, "energy_identity", [&] {
      const double e = energy(m, ground->u);
      s.check(mod, "energy_identity", std::abs(e - mountain_gap(m, ground->u)), 1e-8 * (1.0 + std::abs(e)),
              "|I(u) - sum (f u / 2 - F)|");
    });
  }

  s.run(mod, "batch_certificates", [&] {
    MultistartConfig ms;
    ms.n_starts = 8;
    ms.seed = 3;
    const SolutionSet set = multistart(m, ms, cfg);
    const BatchCertificate cert = certify_batch(m, set.solutions);
    s.check(mod, "batch_norm_bound", 1.0 - cert.min_norm_ratio, 1e-8, "1 - min |u|_alpha / sqrt(2 c_batch)");
    s.check(mod, "batch_lipschitz", cert.max_lipschitz_ratio, 1.0, "max Lipschitz ratio of m^-1 over pairs");
  });
}

// ---------------------------------------------------------------- cli

void cli_checks(Suite& s) {
  const std::string mod = "cli";
  s.run(mod, "csv_round_trip", [&] {
    PortableRng rng(601);
    double mismatches = 0.0;
    for (int d : {1, 2}) {
      const LatticeGeometry g(d, 4, d == 1 ? Boundary::ZeroExtended : Boundary::PeriodicWrap);
      Field u = random_field(g, rng);
      for (std::size_t i = 0; i < u.size(); ++i) u[i] *= std::pow(10.0, rng.uniform(-300.0, 300.0));
      u[0] = 0.0;
      if (!(io::parse_field_csv(io::field_csv(u), g) == u)) mismatches += 1.0;
    }
    s.check(mod, "csv_round_trip", mismatches, 0.0, "write -> read is bit-exact");
  });

  s.run(mod, "solve_determinism", [&] {
    const Model m = small_model(16, Boundary::PeriodicWrap);
    const double c[1] = {3.0};
    const Field w0 = gaussian_bump(m.geometry(), c, 1.5);
    const auto a = minimize(m, w0);
    const auto b = minimize(m, w0);
    const bool same = a.u == b.u && std::memcmp(&a.energy, &b.energy, sizeof a.energy) == 0 &&
                      a.energy_trace == b.energy_trace;
    s.check(mod, "solve_determinism", same ? 0.0 : 1.0, 0.0, "two identical solves are bit-identical");
  });
}

}  // namespace

std::vector<CheckResult> run_validation(const ValidateOptions& opts) {
  Suite s(opts);
  if (s.wants("lattice")) lattice_checks(s);
  if (s.wants("spectral")) spectral_checks(s);
  if (s.wants("semigroup")) semigroup_checks(s);
  if (s.wants("model")) model_checks(s);
  if (s.wants("nehari")) nehari_checks(s);
  if (s.wants("cli")) cli_checks(s);
  return s.take();
}

std::string validation_json(const std::vector<CheckResult>& results) {
  nlohmann::json arr = nlohmann::json::array();
  bool ok = true;
  for (const auto& r : results) {
    ok = ok && r.passed;
    nlohmann::json j{{"module", r.module}, {"name", r.name}, {"passed", r.passed}, {"tolerance", r.tolerance},
                     {"detail", r.detail}};
    if (std::isfinite(r.measured)) j["measured"] = r.measured;
    else j["measured"] = nullptr;
    arr.push_back(std::move(j));
  }
  return nlohmann::json{{"passed", ok}, {"checks", arr}}.dump(2) + "\n";
}

void print_validation_table(std::ostream& out, const std::vector<CheckResult>& results) {
  std::size_t failed = 0;
  for (const auto& r : results) {
    std::ostringstream line;
    line << (r.passed ? "PASS " : "FAIL ") << std::left << std::setw(10) << r.module << std::setw(32) << r.name
         << " measured=" << std::setw(13) << std::setprecision(6) << r.measured << " tol=" << r.tolerance;
    if (!r.passed && !r.detail.empty()) line << "  (" << r.detail << ")";
    out << line.str() << "\n";
    if (!r.passed) ++failed;
  }
  out << results.size() - failed << "/" << results.size() << " checks passed\n";
}

}  // namespace fraclat::cli
