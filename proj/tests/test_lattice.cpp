#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

#include "fraclat/lattice.hpp"
#include "fraclat/random.hpp"

using namespace fraclat;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST(Geometry, IndexSiteRoundTrip) {
  const LatticeGeometry g(3, 2);
  EXPECT_EQ(g.side(), 5);
  EXPECT_EQ(g.site_count(), 125u);
  for (std::size_t i = 0; i < g.site_count(); ++i) EXPECT_EQ(g.index(g.site(i)), i);
  EXPECT_EQ(g.site(0), (Site{-2, -2, -2}));
  EXPECT_EQ(g.site(124), (Site{2, 2, 2}));
}

TEST(Geometry, RejectsBadShapes) {
  EXPECT_THROW(LatticeGeometry(0, 3), std::invalid_argument);
  EXPECT_THROW(LatticeGeometry(1, 0), std::invalid_argument);
}

TEST(Geometry, LocateHonoursBoundary) {
  const LatticeGeometry zero(1, 3);
  const LatticeGeometry torus(1, 3, Boundary::PeriodicWrap);
  EXPECT_FALSE(zero.locate(Site{4}).has_value());
  ASSERT_TRUE(torus.locate(Site{4}).has_value());
  EXPECT_EQ(*torus.locate(Site{4}), torus.index(Site{-3}));
  EXPECT_EQ(torus.wrap(-4), 3);
  EXPECT_EQ(torus.wrap(10), 3);
}

TEST(Geometry, BoundaryNames) {
  EXPECT_EQ(parse_boundary("zero"), Boundary::ZeroExtended);
  EXPECT_EQ(parse_boundary("periodic"), Boundary::PeriodicWrap);
  EXPECT_EQ(to_string(Boundary::PeriodicWrap), "periodic");
  EXPECT_THROW(parse_boundary("mirror"), std::invalid_argument);
}

TEST(Field, ConstructionValidates) {
  const LatticeGeometry g(1, 1);
  EXPECT_THROW(Field(g, {1.0, 2.0}), std::invalid_argument);
  EXPECT_THROW(Field(g, {1.0, std::nan(""), 0.0}), std::domain_error);
  const Field u(g, {1.0, 2.0, 3.0});
  EXPECT_EQ(u.at(Site{1}), 3.0);
  EXPECT_EQ(u.at(Site{5}), 0.0);
}

TEST(Field, ArithmeticRequiresSameGeometry) {
  Field a(LatticeGeometry(1, 1));
  Field b(LatticeGeometry(1, 2));
  EXPECT_THROW(a += b, std::invalid_argument);
}

TEST(Field, DeltaAndConstant) {
  const LatticeGeometry g(2, 2);
  const Field d = Field::delta(g, Site{1, -1});
  EXPECT_EQ(sum(d.values()), 1.0);
  EXPECT_EQ(d.at(Site{1, -1}), 1.0);
  EXPECT_THROW(Field::delta(g, Site{3, 0}), std::out_of_range);
  EXPECT_EQ(sum(Field::constant(g, 2.0).values()), 50.0);
}

TEST(Norms, HandValues) {
  const LatticeGeometry g(1, 1);
  const Field u(g, {3.0, 0.0, -4.0});
  EXPECT_DOUBLE_EQ(norm(u, 1.0), 7.0);
  EXPECT_DOUBLE_EQ(norm(u, 2.0), 5.0);
  EXPECT_DOUBLE_EQ(norm(u, kInf), 4.0);
  EXPECT_NEAR(norm(u, 3.0), std::cbrt(91.0), 1e-15);
  EXPECT_THROW(norm(u, 0.5), std::domain_error);
}

TEST(Norms, CompensatedSummation) {
  const std::vector<double> xs{1e16, 1.0, -1e16, 1.0};
  EXPECT_EQ(sum(xs, Summation::Compensated), 2.0);
}

TEST(Norms, EmbeddingIsMonotone) {
  PortableRng rng(1);
  const double orders[] = {2.0, 2.5, 3.0, 4.0, 6.0, 10.0, kInf};
  for (int i = 0; i < 100; ++i) {
    const LatticeGeometry g(1 + i % 3, 3);
    const Field u = random_field(g, rng);
    for (int a = 0; a + 1 < 7; ++a) EXPECT_LE(norm(u, orders[a + 1]), norm(u, orders[a]) * (1.0 + 1e-15));
  }
}

TEST(Norms, InterpolationInequality) {
  PortableRng rng(2);
  for (int i = 0; i < 100; ++i) {
    const Field u = random_field(LatticeGeometry(1 + i % 2, 6), rng);
    for (double q : {3.0, 4.0, 6.0}) {
      const auto s = interpolation_check(u, q);
      EXPECT_LE(s.lhs, s.rhs);
    }
  }
  EXPECT_THROW(interpolation_check(Field(LatticeGeometry(1, 1)), 2.0), std::domain_error);
}

TEST(Norms, InterpolationEqualityForDelta) {
  const LatticeGeometry g(1, 2);
  const Field d = 3.0 * Field::delta(g, Site{0});
  const auto s = interpolation_check(d, 4.0);
  EXPECT_DOUBLE_EQ(s.lhs, 81.0);
  EXPECT_DOUBLE_EQ(s.rhs, 81.0);
}

TEST(Norms, BitwiseRepeatable) {
  PortableRng rng(3);
  const Field u = random_field(LatticeGeometry(2, 7), rng);
  for (double q : {1.0, 2.0, 3.0, kInf}) {
    const double a = norm(u, q);
    const double b = norm(u, q);
    EXPECT_EQ(std::memcmp(&a, &b, sizeof a), 0);
  }
}

TEST(Shift, PeriodicRoundTripAndBijection) {
  PortableRng rng(4);
  const LatticeGeometry g(2, 4, Boundary::PeriodicWrap);
  const Field u = random_field(g, rng);
  for (int i = 0; i < 20; ++i) {
    const Site y{rng.integer(-20, 20), rng.integer(-20, 20)};
    const Field v = shift(u, y);
    EXPECT_EQ(shift(v, Site{-y[0], -y[1]}), u);
    std::vector<double> a(u.values().begin(), u.values().end());
    std::vector<double> b(v.values().begin(), v.values().end());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    EXPECT_EQ(a, b);
  }
}

TEST(Shift, ZeroExtendedDropsOutside) {
  const LatticeGeometry g(1, 2);
  const Field u(g, {1.0, 2.0, 3.0, 4.0, 5.0});
  const Field v = shift(u, Site{2});
  EXPECT_EQ(std::vector<double>(v.values().begin(), v.values().end()), (std::vector<double>{0, 0, 1, 2, 3}));
}

TEST(Reflect, AboutOriginAndBond) {
  const LatticeGeometry g(1, 2, Boundary::PeriodicWrap);
  const Field u(g, {1.0, 2.0, 3.0, 4.0, 5.0});
  const Field r0 = reflect(u, Site{0});
  EXPECT_EQ(std::vector<double>(r0.values().begin(), r0.values().end()), (std::vector<double>{5, 4, 3, 2, 1}));
  const Field r1 = reflect(u, Site{1});
  // x -> 1 - x: r1(-2) = u(3) = u(-2) on the torus of side 5.
  EXPECT_EQ(r1.at(Site{-2}), u.at(Site{-2}));
  EXPECT_EQ(r1.at(Site{0}), u.at(Site{1}));
}

TEST(BoundaryMass, OuterShellFraction) {
  const LatticeGeometry g(1, 3);
  Field u(g);
  u[g.index(Site{3})] = 1.0;
  u[g.index(Site{0})] = 1.0;
  EXPECT_DOUBLE_EQ(boundary_mass(u), 0.5);
  EXPECT_EQ(boundary_mass(Field(g)), 0.0);
}
