#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "fraclat/model.hpp"
#include "fraclat/random.hpp"

using namespace fraclat;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Model power_model(int d, int L, double alpha, double h, double p, Boundary b = Boundary::ZeroExtended) {
  return Model(LatticeGeometry(d, L, b), FractionalOrder(alpha), Potential::constant(h), Nonlinearity::pure_power(p));
}

double lp_power(const Field& u, double p) {
  double acc = 0.0;
  for (double v : u.values()) acc += std::pow(std::abs(v), p);
  return acc;
}

}  // namespace

TEST(PeriodicTable, LooksUpModuloPeriod) {
  const PeriodicTable t({2, 3}, {1, 2, 3, 4, 5, 6});
  const int a[] = {0, 0};
  const int b[] = {1, 2};
  const int c[] = {-1, -1};
  const int e[] = {4, 7};
  EXPECT_EQ(t(a), 1.0);
  EXPECT_EQ(t(b), 6.0);
  EXPECT_EQ(t(c), 6.0);
  EXPECT_EQ(t(e), 2.0);
  EXPECT_EQ(t.min(), 1.0);
  EXPECT_EQ(t.max(), 6.0);
  EXPECT_TRUE(t.commensurate_with(LatticeGeometry(2, 7, Boundary::PeriodicWrap)) == false);
  EXPECT_TRUE(PeriodicTable({3}, {1, 2, 3}).commensurate_with(LatticeGeometry(1, 6, Boundary::PeriodicWrap)) == false);
  EXPECT_TRUE(PeriodicTable({3}, {1, 2, 3}).commensurate_with(LatticeGeometry(1, 4, Boundary::PeriodicWrap)));
}

TEST(PeriodicTable, Validation) {
  EXPECT_THROW(PeriodicTable({0}, {}), std::invalid_argument);
  EXPECT_THROW(PeriodicTable({2}, {1.0}), std::invalid_argument);
  EXPECT_THROW(PeriodicTable({2}, {1.0, std::nan("")}), std::domain_error);
}

TEST(Potential, BoundsAndValidation) {
  const Potential h = Potential::periodic(PeriodicTable({3}, {0.5, 2.0, 1.0}));
  EXPECT_EQ(h.lower(), 0.5);
  EXPECT_EQ(h.upper(), 2.0);
  const int x[] = {4};
  EXPECT_EQ(h(x), 2.0);
  EXPECT_THROW(Potential::constant(0.0), std::domain_error);
  EXPECT_THROW(Potential::periodic(PeriodicTable({2}, {1.0, -1.0})), std::domain_error);
}

TEST(Nonlinearity, PowerValues) {
  const auto nl = Nonlinearity::pure_power(4.0);
  EXPECT_EQ(nl.f(1.0, 2.0), 8.0);
  EXPECT_EQ(nl.F(1.0, 2.0), 4.0);
  EXPECT_EQ(nl.f(1.0, 0.0), 0.0);
  EXPECT_EQ(nl.F(1.0, 0.0), 0.0);
  EXPECT_EQ(nl.df(1.0, 2.0), 12.0);
  EXPECT_THROW(Nonlinearity::pure_power(2.0), std::domain_error);
  EXPECT_THROW(Nonlinearity::weighted_power(3.0, PeriodicTable({1}, {0.0})), std::domain_error);
}

TEST(Nonlinearity, OddAndEven) {
  PortableRng rng(40);
  for (double p : {2.5, 3.0, 4.0, 7.3}) {
    const auto nl = Nonlinearity::pure_power(p);
    for (int i = 0; i < 200; ++i) {
      const double a = rng.uniform(0.2, 3.0);
      const double u = rng.uniform(-5.0, 5.0);
      EXPECT_EQ(nl.f(a, -u), -nl.f(a, u));
      EXPECT_EQ(nl.F(a, -u), nl.F(a, u));
    }
  }
}

TEST(Nonlinearity, FDiffMatchesDirectDifference) {
  PortableRng rng(41);
  const auto nl = Nonlinearity::pure_power(3.5);
  for (int i = 0; i < 500; ++i) {
    const double a = rng.uniform(0.5, 2.0);
    const double from = rng.uniform(-3.0, 3.0);
    const double to = rng.uniform(-3.0, 3.0);
    const double direct = nl.F(a, to) - nl.F(a, from);
    EXPECT_NEAR(nl.F_diff(a, from, to), direct, 1e-13 * (1.0 + std::abs(nl.F(a, from)) + std::abs(nl.F(a, to))));
  }
  // Near-equal arguments: compare with the first-order expansion F' = f.
  const double u = 0.7;
  const double du = (u + 1e-9) - u;
  EXPECT_NEAR(nl.F_diff(1.0, u, u + du) / du, nl.f(1.0, u), 1e-8);
  EXPECT_EQ(nl.F_diff(1.0, 1e-200, 0.0), nl.F(1.0, 0.0) - nl.F(1.0, 1e-200));
}

TEST(Nonlinearity, SuperquadraticGap) {
  PortableRng rng(42);
  for (double p : {2.2, 3.0, 4.0, 6.0}) {
    const auto nl = Nonlinearity::pure_power(p);
    for (int i = 0; i < 200; ++i) {
      const double a = rng.uniform(0.2, 3.0);
      double u = rng.uniform(-4.0, 4.0);
      if (u == 0.0) u = 1.0;
      const double gap = nl.f(a, u) * u - 2.0 * nl.F(a, u);
      EXPECT_GT(gap, 0.0);
      EXPECT_NEAR(gap, (1.0 - 2.0 / p) * a * std::pow(std::abs(u), p), 1e-12 * a * std::pow(std::abs(u), p));
    }
  }
}

TEST(Nonlinearity, StrictMonotoneQuotient) {
  PortableRng rng(43);
  const auto nl = Nonlinearity::pure_power(3.0);
  for (int i = 0; i < 500; ++i) {
    const double u1 = rng.uniform(1e-3, 5.0);
    const double u2 = u1 * rng.uniform(1.001, 3.0);
    EXPECT_GT(nl.f(1.0, u2) / u2, nl.f(1.0, u1) / u1);
    EXPECT_LT(nl.f(1.0, -u2) / u2, nl.f(1.0, -u1) / u1);
  }
}

TEST(Nonlinearity, GrowthBound) {
  PortableRng rng(44);
  for (double p : {2.5, 4.0}) {
    const auto nl = Nonlinearity::pure_power(p);
    for (int i = 0; i < 200; ++i) {
      const double u = rng.uniform(-10.0, 10.0);
      EXPECT_LE(std::abs(nl.f(1.0, u)), std::abs(u) + std::pow(std::abs(u), p - 1.0));
    }
  }
}

TEST(Model, RejectsIncommensurateTables) {
  const LatticeGeometry torus(1, 7, Boundary::PeriodicWrap);
  EXPECT_THROW(Model(torus, FractionalOrder(0.5), Potential::periodic(PeriodicTable({4}, {1, 2, 1, 2})),
                     Nonlinearity::pure_power(4.0)),
               std::invalid_argument);
  EXPECT_THROW(Model(torus, FractionalOrder(0.5), Potential::periodic(PeriodicTable({1, 1}, {1})),
                     Nonlinearity::pure_power(4.0)),
               std::invalid_argument);
}

TEST(Energy, HandExample) {
  const Model m = power_model(1, 3, 1.0, 1.0, 4.0);
  const Field d = Field::delta(m.geometry(), Site{0});
  EXPECT_NEAR(energy(m, d), 1.25, 1e-14);
  EXPECT_EQ(energy(m, Field(m.geometry())), 0.0);
}

TEST(Energy, EvenInU) {
  PortableRng rng(45);
  const Model m = power_model(2, 4, 0.6, 1.3, 3.0);
  for (int i = 0; i < 20; ++i) {
    const Field u = random_field(m.geometry(), rng);
    EXPECT_NEAR(energy(m, -1.0 * u), energy(m, u), 1e-12 * (1.0 + std::abs(energy(m, u))));
  }
}

TEST(Gradient, ZeroAtZeroAndPointwiseForm) {
  const Model m = power_model(1, 5, 0.5, 1.0, 4.0);
  EXPECT_EQ(norm(gradient(m, Field(m.geometry())), kInf), 0.0);
  PortableRng rng(46);
  const Field u = random_field(m.geometry(), rng);
  const Field g = gradient(m, u);
  const Field lu = m.apply_linear(u);
  for (std::size_t i = 0; i < u.size(); ++i) EXPECT_NEAR(g[i], lu[i] - u[i] * u[i] * u[i], 1e-14);
}

TEST(Gradient, RichardsonFiniteDifference) {
  PortableRng rng(47);
  for (double alpha : {0.3, 0.7, 1.0}) {
    const Model m = power_model(1, 6, alpha, 1.5, 4.0);
    for (int i = 0; i < 5; ++i) {
      const Field u = random_field(m.geometry(), rng);
      const Field v = random_field(m.geometry(), rng);
      const double exact = dot(gradient(m, u), v);
      auto central = [&](double eps) {
        return (energy(m, u + eps * v) - energy(m, u - eps * v)) / (2.0 * eps);
      };
      const double e3 = std::abs(central(1e-3) - exact);
      const double e4 = std::abs(central(1e-4) - exact);
      EXPECT_GT(e3 / e4, 80.0);
      EXPECT_LT(e3 / e4, 125.0);
      // Richardson extrapolation removes the O(eps^2) term.
      const double rich = (4.0 * central(5e-4) - central(1e-3)) / 3.0;
      EXPECT_NEAR(rich, exact, 1e-8 * (1.0 + std::abs(exact)));
    }
  }
}

TEST(Nehari, ResidualMatchesNormDifference) {
  PortableRng rng(48);
  const Model m = power_model(1, 8, 0.5, 1.0, 3.0);
  for (int i = 0; i < 20; ++i) {
    const Field u = random_field(m.geometry(), rng);
    const double expect = halpha_norm_sq(m, u) - lp_power(u, 3.0);
    EXPECT_NEAR(nehari_residual(m, u), expect, 1e-12 * (1.0 + std::abs(expect)));
  }
  EXPECT_THROW(nehari_residual(m, Field(m.geometry())), std::domain_error);
}

TEST(Nehari, ResidualSignAlongRay) {
  PortableRng rng(49);
  const Model m = power_model(2, 3, 0.4, 1.0, 4.0);
  for (int i = 0; i < 20; ++i) {
    const Field u = random_field(m.geometry(), rng);
    EXPECT_GT(nehari_residual(m, 1e-3 * u), 0.0);
    EXPECT_LT(nehari_residual(m, 1e3 * u), 0.0);
  }
}

TEST(MountainGap, QuarticForm) {
  PortableRng rng(50);
  const Model m = power_model(1, 8, 0.5, 1.0, 4.0);
  EXPECT_EQ(mountain_gap(m, Field(m.geometry())), 0.0);
  for (int i = 0; i < 20; ++i) {
    const Field u = random_field(m.geometry(), rng);
    EXPECT_NEAR(mountain_gap(m, u), 0.25 * lp_power(u, 4.0), 1e-13 * lp_power(u, 4.0));
    EXPECT_GT(mountain_gap(m, u), 0.0);
  }
}

TEST(Periodicity, EnergyInvariantUnderPeriodShifts) {
  PortableRng rng(51);
  const LatticeGeometry torus(1, 7, Boundary::PeriodicWrap);
  const Model mh(torus, FractionalOrder(0.5), Potential::periodic(PeriodicTable({3}, {1.0, 2.0, 1.5})),
                 Nonlinearity::pure_power(4.0));
  const Model mf(torus, FractionalOrder(0.5), Potential::constant(1.0),
                 Nonlinearity::weighted_power(3.0, PeriodicTable({5}, {1.0, 0.5, 2.0, 1.5, 0.8})));
  for (int i = 0; i < 20; ++i) {
    const Field u = random_field(torus, rng);
    const double eh = energy(mh, u);
    const double ef = energy(mf, u);
    for (int s : {3, -6}) EXPECT_NEAR(energy(mh, shift(u, Site{s})), eh, 1e-12 * (1.0 + std::abs(eh)));
    for (int s : {5, 10}) EXPECT_NEAR(energy(mf, shift(u, Site{s})), ef, 1e-12 * (1.0 + std::abs(ef)));
  }
  // Shifts off the period generally change the energy.
  const Field u = random_field(torus, rng);
  EXPECT_GT(std::abs(energy(mh, shift(u, Site{1})) - energy(mh, u)), 1e-6);
}

TEST(Periodicity, TwoDimensionalTable) {
  PortableRng rng(52);
  const LatticeGeometry torus(2, 7, Boundary::PeriodicWrap);
  std::vector<double> values(15);
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = 1.0 + 0.1 * static_cast<double>(i);
  const Model m(torus, FractionalOrder(0.7), Potential::periodic(PeriodicTable({3, 5}, values)),
                Nonlinearity::pure_power(4.0));
  const Field u = random_field(torus, rng);
  const double e = energy(m, u);
  EXPECT_NEAR(energy(m, shift(u, Site{3, 0})), e, 1e-12 * (1.0 + std::abs(e)));
  EXPECT_NEAR(energy(m, shift(u, Site{0, 5})), e, 1e-12 * (1.0 + std::abs(e)));
}

TEST(Config, ParseAndRoundTrip) {
  const std::string text = R"({"d": 1, "L": 31, "boundary": "periodic", "alpha": 0.5,
    "h": {"kind": "periodic", "period": [3], "values": [1.0, 2.0, 1.5]},
    "f": {"kind": "weighted_power", "p": 3.5, "weight": {"period": [1], "values": [2.0]}},
    "spectral": {"M": 2048, "R": 40}})";
  const ModelConfig cfg = parse_model_config(text);
  EXPECT_EQ(cfg.dim, 1);
  EXPECT_EQ(cfg.radius, 31);
  EXPECT_EQ(cfg.boundary, Boundary::PeriodicWrap);
  EXPECT_EQ(cfg.h_kind, "periodic");
  EXPECT_EQ(cfg.weight_values, std::vector<double>{2.0});
  EXPECT_EQ(cfg.points, 2048);
  const ModelConfig again = parse_model_config(to_json(cfg));
  EXPECT_EQ(to_json(again), to_json(cfg));
  const Model m = cfg.build();
  EXPECT_EQ(m.nonlinearity().exponent(), 3.5);
  EXPECT_EQ(m.potential().upper(), 2.0);
}

TEST(Config, Defaults) {
  const ModelConfig cfg = parse_model_config(R"({"d": 2, "L": 6, "alpha": 0.3})");
  EXPECT_EQ(cfg.boundary, Boundary::ZeroExtended);
  EXPECT_EQ(cfg.h_kind, "constant");
  EXPECT_EQ(cfg.p, 4.0);
  const Model m = cfg.build();
  EXPECT_EQ(m.geometry().dim(), 2);
}

TEST(Config, Errors) {
  EXPECT_THROW(parse_model_config("{"), std::invalid_argument);
  EXPECT_THROW(parse_model_config(R"({"L": 4, "alpha": 0.5})"), std::invalid_argument);
  EXPECT_THROW(parse_model_config(R"({"d": 1, "L": 4, "alpha": 0.5, "h": {"kind": "random"}})"),
               std::invalid_argument);
  EXPECT_THROW(parse_model_config(R"({"d": 1, "L": 4, "alpha": 0.5, "boundary": "mirror"})"),
               std::invalid_argument);
  EXPECT_THROW(parse_model_config(R"({"d": 1, "L": 4, "alpha": 1.5})").build(), std::domain_error);
}
