#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "fraclat/nehari.hpp"
#include "fraclat/random.hpp"
#include "support/ground_oracle.hpp"
#include "support/oracles.hpp"

using namespace fraclat;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Model torus_model(int L = 64) {
  return Model(LatticeGeometry(1, L, Boundary::PeriodicWrap), FractionalOrder(0.5), Potential::constant(1.0),
               Nonlinearity::pure_power(4.0));
}

Field bump(const LatticeGeometry& g, double c, double width = 3.0) {
  const double center[] = {c};
  return gaussian_bump(g, center, width);
}

double alpha_norm(const Model& m, const Field& u) { return std::sqrt(halpha_norm_sq(m, u)); }

double lp_power(const Field& u, double p) {
  double acc = 0.0;
  for (double v : u.values()) acc += std::pow(std::abs(v), p);
  return acc;
}

}  // namespace

TEST(NehariScale, DeltaHandExample) {
  const Model m(LatticeGeometry(1, 3), FractionalOrder(1.0), Potential::constant(1.0), Nonlinearity::pure_power(4.0));
  const Field d = Field::delta(m.geometry(), Site{0});
  const double s = nehari_scale(m, d);
  EXPECT_NEAR(s, std::sqrt(3.0), 1e-14);
  EXPECT_NEAR(energy(m, s * d), 2.25, 1e-13);
  // Dense sampling of the ray s -> I(s delta).
  double best_s = 0.0;
  double best_e = -kInf;
  for (int k = 0; k <= 40000; ++k) {
    const double t = 1e-4 * k;
    const double e = energy(m, t * d);
    if (e > best_e) {
      best_e = e;
      best_s = t;
    }
  }
  EXPECT_NEAR(best_s, std::sqrt(3.0), 1e-4);
  EXPECT_GE(energy(m, s * d), best_e);
  EXPECT_NEAR(best_e, 2.25, 1e-7);
}

TEST(NehariScale, Homogeneity) {
  PortableRng rng(60);
  const Model m = torus_model(10);
  for (int i = 0; i < 20; ++i) {
    const Field w = random_field(m.geometry(), rng);
    const double c = rng.uniform(0.1, 10.0);
    EXPECT_NEAR(nehari_scale(m, c * w), nehari_scale(m, w) / c, 1e-12 * nehari_scale(m, w) / c);
  }
}

TEST(NehariScale, ClosedFormMatchesRootSolve) {
  PortableRng rng(61);
  const Model pure(LatticeGeometry(1, 12), FractionalOrder(0.4), Potential::constant(1.2), Nonlinearity::pure_power(3.0));
  const Model weighted(LatticeGeometry(1, 12), FractionalOrder(0.7), Potential::constant(0.8),
                       Nonlinearity::weighted_power(4.5, PeriodicTable({3}, {1.0, 2.0, 0.5})));
  for (const Model* m : {&pure, &weighted}) {
    for (int i = 0; i < 100; ++i) {
      const Field w = random_field(m->geometry(), rng);
      const double a = nehari_scale(*m, w, ScaleMethod::ClosedForm);
      const double b = nehari_scale(*m, w, ScaleMethod::RootSolve);
      EXPECT_NEAR(a, b, 1e-10 * a);
    }
  }
  const Model m = torus_model(10);
  for (int i = 0; i < 20; ++i) {
    const Field w = random_field(m.geometry(), rng);
    const double closed = std::pow(halpha_norm_sq(m, w) / lp_power(w, 4.0), 0.5);
    EXPECT_NEAR(nehari_scale(m, w), closed, 1e-10 * closed);
  }
}

TEST(NehariScale, MaximisesEnergyOnRay) {
  PortableRng rng(62);
  const Model m(LatticeGeometry(2, 4), FractionalOrder(0.6), Potential::constant(1.0), Nonlinearity::pure_power(3.0));
  for (int i = 0; i < 10; ++i) {
    const Field w = random_field(m.geometry(), rng);
    const double s = nehari_scale(m, w);
    const double top = energy(m, s * w);
    EXPECT_LE(std::abs(nehari_residual(m, s * w)), 1e-10);
    for (int k = 0; k < 100; ++k) {
      const double t = s * std::pow(10.0, -1.0 + 2.0 * k / 99.0);
      EXPECT_GE(top, energy(m, t * w) - 1e-14 * std::abs(top));
    }
  }
}

TEST(NehariScale, Errors) {
  const Model m = torus_model(5);
  EXPECT_THROW(nehari_scale(m, Field(m.geometry())), std::domain_error);
  EXPECT_THROW(project_m(m, Field(m.geometry())), std::domain_error);
  EXPECT_THROW(unproject_m(m, Field(m.geometry())), std::domain_error);
}

TEST(ProjectM, LandsOnManifoldWithPositiveEnergy) {
  PortableRng rng(63);
  const Model m = torus_model(16);
  for (int i = 0; i < 100; ++i) {
    const Field w = random_field(m.geometry(), rng);
    const Field u = project_m(m, w);
    EXPECT_LE(std::abs(nehari_residual(m, u)), 1e-10);
    EXPECT_GT(energy(m, u), 0.0);
  }
}

TEST(ProjectM, IdempotentScaleInvariantAndOdd) {
  PortableRng rng(64);
  const Model m(LatticeGeometry(2, 5), FractionalOrder(0.3), Potential::constant(1.0), Nonlinearity::pure_power(3.5));
  for (int i = 0; i < 20; ++i) {
    const Field w = random_field(m.geometry(), rng);
    const Field u = project_m(m, w);
    const double nu = alpha_norm(m, u);
    const Field again = project_m(m, u);
    EXPECT_LE(std::abs(nehari_residual(m, again)), 1e-10);
    EXPECT_LE(alpha_norm(m, again - u), 1e-8 * nu);
    const double c = rng.uniform(0.01, 100.0);
    EXPECT_LE(norm(project_m(m, c * w) - u, kInf), 1e-10 * norm(u, kInf));
    EXPECT_LE(norm(project_m(m, -1.0 * w) + u, kInf), 1e-14 * norm(u, kInf));
  }
}

TEST(ProjectM, InverseRecoversUnitVector) {
  PortableRng rng(65);
  const Model m = torus_model(12);
  for (int i = 0; i < 20; ++i) {
    const Field w = random_field(m.geometry(), rng);
    const Field hat = (1.0 / alpha_norm(m, w)) * w;
    EXPECT_LE(alpha_norm(m, unproject_m(m, project_m(m, w)) - hat), 1e-12);
  }
}

TEST(Symmetrize, ProjectsOntoSubspace) {
  PortableRng rng(66);
  const LatticeGeometry g(1, 8, Boundary::PeriodicWrap);
  const Field u = random_field(g, rng);
  const Reflection odd{Site{0}, -1};
  const Field v = symmetrize(u, odd);
  EXPECT_EQ(symmetrize(v, odd), v);
  for (int x = -8; x <= 8; ++x) EXPECT_EQ(v.at(Site{x}), -v.at(Site{-x}));
  EXPECT_THROW(symmetrize(u, Reflection{Site{0}, 0}), std::invalid_argument);
}

TEST(SolverConfig, Validation) {
  SolverConfig c;
  EXPECT_NO_THROW(c.validate());
  c.backtrack = 1.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = SolverConfig{};
  c.tol_grad = 0.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = SolverConfig{};
  c.max_iter = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(Minimize, ConvergesOnTorus) {
  const Model m = torus_model();
  const Field w0 = bump(m.geometry(), 0.0);
  const GroundStateResult r = minimize(m, w0);
  EXPECT_LE(r.grad_residual, 1e-8);
  EXPECT_LE(std::abs(r.nehari_residual), 1e-10);
  EXPECT_GT(r.energy, 0.0);
  EXPECT_NEAR(r.energy, energy(m, r.u), 1e-14);
  EXPECT_TRUE(r.warnings.empty());
  EXPECT_LE(r.boundary_mass, 1e-6);
  ASSERT_FALSE(r.energy_trace.empty());
  for (std::size_t k = 1; k < r.energy_trace.size(); ++k) EXPECT_LE(r.energy_trace[k], r.energy_trace[k - 1]);
  EXPECT_EQ(r.s_history.size(), static_cast<std::size_t>(r.iterations) + 1);
  EXPECT_EQ(r.energy_trace.size(), r.s_history.size());
}

TEST(Minimize, PointwiseEquationAndEnergyIdentity) {
  const Model m = torus_model();
  const GroundStateResult r = minimize(m, bump(m.geometry(), 3.0, 5.0));
  const double bound = 1e-8 * norm(r.u, 2.0) * std::sqrt(static_cast<double>(r.u.size()));
  EXPECT_LE(norm(gradient(m, r.u), kInf), bound);
  EXPECT_LE(std::abs(r.energy - mountain_gap(m, r.u)), 1e-8 * (1.0 + std::abs(r.energy)));
}

TEST(Minimize, MatchesGenericOptimizerOracle) {
  const Model m = torus_model();
  const GroundStateResult r = minimize(m, bump(m.geometry(), 0.0));
  const oracle::GroundOracle ref = oracle::ground_level_torus(64, 0.5, 1.0, 4.0);
  ASSERT_TRUE(ref.usable);
  EXPECT_NEAR(r.energy, ref.energy, 1e-6 * ref.energy);
  // Same level from the quotient: c = (1/2 - 1/p) Q^{p/(p-2)} with Q = ||u||^2 / ||u||_4^2.
  const double q = halpha_norm_sq(m, r.u) / std::sqrt(lp_power(r.u, 4.0));
  EXPECT_NEAR(q, ref.quotient, 1e-6 * ref.quotient);
}

TEST(Minimize, OddAndTranslationCovariance) {
  const Model m = torus_model();
  const Field w0 = bump(m.geometry(), 0.0);
  const GroundStateResult r = minimize(m, w0);
  const GroundStateResult neg = minimize(m, -1.0 * w0);
  EXPECT_NEAR(neg.energy, r.energy, 1e-10);
  EXPECT_LE(norm(neg.u + r.u, kInf), 1e-12 * norm(r.u, kInf));
  const OrbitMatch flipped = orbit_distance(m, r.u, neg.u);
  EXPECT_LE(flipped.distance, 1e-6);
  EXPECT_EQ(flipped.sign, -1);
  const GroundStateResult moved = minimize(m, shift(w0, Site{17}));
  EXPECT_NEAR(moved.energy, r.energy, 1e-10);
  const OrbitMatch match = orbit_distance(m, r.u, moved.u);
  EXPECT_LE(match.distance, 1e-6);
  EXPECT_EQ(match.shift, Site{17});
  EXPECT_EQ(match.sign, 1);
}

TEST(Minimize, ZeroExtendedBoxAndBoundaryWarning) {
  const Model big(LatticeGeometry(1, 32), FractionalOrder(0.5), Potential::constant(1.0), Nonlinearity::pure_power(4.0));
  const GroundStateResult r = minimize(big, bump(big.geometry(), 0.0));
  EXPECT_LE(r.grad_residual, 1e-8);
  EXPECT_GT(r.energy, 0.0);
  // A tiny box with slowly decaying tails keeps mass on the outer shell.
  const Model tiny(LatticeGeometry(1, 2), FractionalOrder(0.2), Potential::constant(0.1), Nonlinearity::pure_power(3.0));
  const GroundStateResult t = minimize(tiny, bump(tiny.geometry(), 0.0, 2.0));
  EXPECT_GT(t.boundary_mass, 1e-6);
  EXPECT_FALSE(t.warnings.empty());
}

TEST(Minimize, ReflectionSymmetricExcitedState) {
  const Model m = torus_model();
  SolverConfig cfg;
  cfg.symmetry = Reflection{Site{0}, -1};
  const Field w0 = bump(m.geometry(), 6.0) - bump(m.geometry(), -6.0);
  const GroundStateResult odd = minimize(m, w0, cfg);
  EXPECT_LE(odd.grad_residual, 1e-8);
  EXPECT_LE(std::abs(odd.nehari_residual), 1e-10);
  for (int x = -64; x <= 64; ++x) EXPECT_EQ(odd.u.at(Site{x}), -odd.u.at(Site{-x}));
  const GroundStateResult ground = minimize(m, bump(m.geometry(), 0.0));
  EXPECT_GT(odd.energy, ground.energy * 1.5);
}

TEST(Minimize, FailureModes) {
  const Model m = torus_model();
  EXPECT_THROW(minimize(m, Field(m.geometry())), std::domain_error);
  SolverConfig cfg;
  cfg.max_iter = 2;
  try {
    minimize(m, bump(m.geometry(), 0.0, 8.0), cfg);
    FAIL() << "expected non-convergence";
  } catch (const NonConvergenceError& e) {
    EXPECT_GT(e.best().energy, 0.0);
    EXPECT_LE(e.best().iterations, 2);
    EXPECT_FALSE(e.best().u.is_zero());
  }
  SolverConfig odd;
  odd.symmetry = Reflection{Site{0}, -1};
  EXPECT_THROW(minimize(m, bump(m.geometry(), 0.0), odd), std::domain_error);
}

TEST(OrbitDistance, ShiftAndSignRecovered) {
  PortableRng rng(67);
  const Model m = torus_model(12);
  const Field u = random_field(m.geometry(), rng);
  for (int y : {0, 5, -11, 12}) {
    const OrbitMatch a = orbit_distance(m, u, shift(u, Site{y}));
    EXPECT_LE(a.distance, 1e-12);
    EXPECT_EQ(a.shift, Site{y});
    EXPECT_EQ(a.sign, 1);
  }
  const OrbitMatch b = orbit_distance(m, u, -1.0 * shift(u, Site{3}));
  EXPECT_LE(b.distance, 1e-12);
  EXPECT_EQ(b.sign, -1);
  EXPECT_EQ(b.shift, Site{3});
  EXPECT_GT(orbit_distance(m, u, -1.0 * u, false).distance, 1e-3);
}

TEST(OrbitDistance, MatchesExhaustiveScan) {
  PortableRng rng(68);
  const Model m1 = torus_model(10);
  const Model m2(LatticeGeometry(2, 3, Boundary::PeriodicWrap), FractionalOrder(0.7), Potential::constant(1.5),
                 Nonlinearity::pure_power(3.0));
  const Model m3(LatticeGeometry(1, 6), FractionalOrder(0.4), Potential::constant(1.0), Nonlinearity::pure_power(4.0));
  for (const Model* m : {&m1, &m2, &m3}) {
    auto nsq = [m](const Field& v) { return halpha_norm_sq(*m, v); };
    for (int i = 0; i < 5; ++i) {
      const Field u1 = random_field(m->geometry(), rng);
      const Field u2 = random_field(m->geometry(), rng);
      for (bool signs : {true, false}) {
        const double ref = oracle::brute_orbit_distance(u1, u2, nsq, signs);
        EXPECT_NEAR(orbit_distance(*m, u1, u2, signs).distance, ref, 1e-10 * (1.0 + ref));
      }
    }
  }
  // Single bump against a two-bump profile: bounded away from zero.
  const Field one = bump(m1.geometry(), 0.0, 1.5);
  const Field two = bump(m1.geometry(), -5.0, 1.5) + bump(m1.geometry(), 5.0, 1.5);
  auto nsq = [&](const Field& v) { return halpha_norm_sq(m1, v); };
  const double ref = oracle::brute_orbit_distance(one, two, nsq, true);
  EXPECT_GT(ref, 0.1);
  EXPECT_NEAR(orbit_distance(m1, one, two).distance, ref, 1e-10);
}

TEST(InitialGuess, DeterministicAndMixed) {
  const LatticeGeometry g(1, 32, Boundary::PeriodicWrap);
  int kinds[4] = {0, 0, 0, 0};
  for (std::size_t i = 0; i < 16; ++i) {
    const InitialGuess a = initial_guess(g, 9, i);
    const InitialGuess b = initial_guess(g, 9, i);
    EXPECT_EQ(a.w, b.w);
    EXPECT_FALSE(a.w.is_zero());
    ++kinds[static_cast<int>(a.kind)];
    if (a.kind == SeedKind::OddPair || a.kind == SeedKind::EvenPair) ASSERT_TRUE(a.symmetry.has_value());
  }
  for (int k : kinds) EXPECT_EQ(k, 4);
  EXPECT_NE(initial_guess(g, 9, 0).w, initial_guess(g, 10, 0).w);
}

TEST(Multistart, SingleStart) {
  const Model m = torus_model(32);
  const SolutionSet s = multistart(m, MultistartConfig{1, 3});
  ASSERT_EQ(s.orbits.size(), 1u);
  EXPECT_EQ(s.orbits[0].multiplicity, 1);
  EXPECT_EQ(s.starts.size(), 1u);
  EXPECT_THROW(multistart(m, MultistartConfig{0, 3}), std::invalid_argument);
}

TEST(Multistart, FindsDistinctOrbitsWithCertificates) {
  const Model m = torus_model();
  const SolutionSet s = multistart(m, MultistartConfig{40, 7});
  ASSERT_GE(s.orbits.size(), 2u);
  for (std::size_t k = 1; k < s.orbits.size(); ++k) EXPECT_LE(s.orbits[k - 1].energy, s.orbits[k].energy);
  for (std::size_t i = 0; i < s.orbits.size(); ++i)
    for (std::size_t j = i + 1; j < s.orbits.size(); ++j)
      EXPECT_GT(orbit_distance(m, s.orbits[i].representative, s.orbits[j].representative).distance, s.dedupe_tol);
  // Shifted copies of the ground state collapse into one orbit.
  EXPECT_GE(s.orbits[0].multiplicity, 2);
  int total = 0;
  for (const auto& o : s.orbits) total += o.multiplicity;
  EXPECT_EQ(static_cast<std::size_t>(total), s.solutions.size());
  EXPECT_DOUBLE_EQ(s.ground_energy(), s.orbits[0].energy);
  const BatchCertificate cert = certify_batch(m, s.solutions);
  EXPECT_TRUE(cert.norm_bound_holds);
  EXPECT_TRUE(cert.lipschitz_holds);
  for (const auto& u : s.solutions) EXPECT_GE(halpha_norm_sq(m, u), 2.0 * cert.c_batch * (1.0 - 1e-8));
}

TEST(Multistart, IndependentOfThreadCount) {
  const Model m = torus_model(32);
  MultistartConfig one{12, 5};
  one.threads = 1;
  MultistartConfig four = one;
  four.threads = 4;
  const SolutionSet a = multistart(m, one);
  const SolutionSet b = multistart(m, four);
  ASSERT_EQ(a.orbits.size(), b.orbits.size());
  for (std::size_t k = 0; k < a.orbits.size(); ++k) {
    EXPECT_EQ(a.orbits[k].energy, b.orbits[k].energy);
    EXPECT_EQ(a.orbits[k].multiplicity, b.orbits[k].multiplicity);
    EXPECT_EQ(a.orbits[k].representative, b.orbits[k].representative);
  }
}

TEST(CertifyBatch, Errors) {
  const Model m = torus_model(8);
  EXPECT_THROW(certify_batch(m, {}), std::invalid_argument);
}
