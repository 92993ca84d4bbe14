#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <random>

#include "sphereflow/sphere.hpp"

namespace sphereflow {
namespace {

const SpherePoint e1{1, 0, 0};
const SpherePoint e2{0, 1, 0};
const SpherePoint e3{0, 0, 1};

SpherePoint random_point(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vec3 v{n(rng), n(rng), n(rng)};
  while (norm(v) < 1e-3) v = Vec3{n(rng), n(rng), n(rng)};
  return SpherePoint(normalized(v));
}

TEST(GeodesicDistance, AxisCases) {
  EXPECT_DOUBLE_EQ(geodesic_distance(e1, e1), 0.0);
  EXPECT_DOUBLE_EQ(geodesic_distance(e1, e1.antipode()), kPi);
  EXPECT_DOUBLE_EQ(geodesic_distance(e1, e2), kPi / 2);
}

TEST(GeodesicDistance, SymmetryAndTriangle) {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 500; ++k) {
    const SpherePoint a = random_point(rng);
    const SpherePoint b = random_point(rng);
    const SpherePoint c = random_point(rng);
    EXPECT_NEAR(geodesic_distance(a, b), geodesic_distance(b, a), 1e-15);
    EXPECT_LE(geodesic_distance(a, c),
              geodesic_distance(a, b) + geodesic_distance(b, c) + 1e-12);
  }
}

TEST(ExpMap, ZeroAndQuarterTurn) {
  const SpherePoint same = exp_map(e1, Vec3{0, 0, 0});
  EXPECT_NEAR(geodesic_distance(same, e1), 0.0, 1e-15);

  const SpherePoint quarter = exp_map(e1, Vec3{0, kPi / 2, 0});
  EXPECT_NEAR(geodesic_distance(quarter, e2), 0.0, 1e-12);
}

// Oracle: walking 0.3 rad from e3 toward e1 is the rotation of e3 about
// the y axis by -0.3 (right-hand rule), written out as an explicit matrix.
TEST(ExpMap, MatchesExplicitRotationMatrix) {
  const double t = 0.3;
  const std::array<std::array<double, 3>, 3> rot{{{std::cos(t), 0, std::sin(t)},
                                                  {0, 1, 0},
                                                  {-std::sin(t), 0, std::cos(t)}}};
  const Vec3 expect{rot[0][2], rot[1][2], rot[2][2]};  // rot * e3
  EXPECT_NEAR(expect.x, std::sin(0.3), 1e-15);

  const SpherePoint got = exp_map(e3, Vec3{0.3, 0, 0});
  EXPECT_NEAR(got.x(), expect.x, 1e-14);
  EXPECT_NEAR(got.y(), expect.y, 1e-14);
  EXPECT_NEAR(got.z(), expect.z, 1e-14);
}

TEST(ExpMap, ResultIsUnit) {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 200; ++k) {
    const SpherePoint p = random_point(rng);
    const Vec3 dir = normalized(cross(p.vec(), random_point(rng).vec() + Vec3{0.1, 0.2, 0.3}));
    std::uniform_real_distribution<double> len(0.0, 3.0);
    const SpherePoint q = exp_map(p, dir * len(rng));
    EXPECT_NEAR(norm(q.vec()), 1.0, 1e-12);
  }
}

TEST(LogMap, TrivialCases) {
  EXPECT_NEAR(log_map(e1, e1).length(), 0.0, 1e-15);

  const TangentVector v = log_map(e1, e2);
  EXPECT_NEAR(v.length(), kPi / 2, 1e-12);
  EXPECT_NEAR(dot(normalized(v.v), e2.vec()), 1.0, 1e-12);
}

TEST(LogMap, AntipodalRaises) {
  EXPECT_THROW(log_map(e1, e1.antipode()), AntipodalPairError);
}

TEST(LogMap, InvertsExpOnRandomPairs) {
  std::mt19937_64 rng(13);
  int tested = 0;
  while (tested < 1000) {
    const SpherePoint p = random_point(rng);
    const SpherePoint q = random_point(rng);
    if (dot(p, q) <= -1.0 + 1e-6) continue;
    ++tested;
    const TangentVector v = log_map(p, q);
    EXPECT_NEAR(std::abs(dot(v.v, p.vec())), 0.0, 1e-12);
    EXPECT_NEAR(v.length(), geodesic_distance(p, q), 1e-12);
    const SpherePoint back = exp_map(p, v);
    EXPECT_LE(geodesic_distance(back, q), 1e-8);
  }
}

TEST(DistanceToGreatCircle, Cases) {
  const GreatCircle equator{e3};
  EXPECT_NEAR(distance_to_great_circle(e3, equator), kPi / 2, 1e-15);
  EXPECT_NEAR(distance_to_great_circle(e1, equator), 0.0, 1e-15);

  const double lat = 0.2;
  const SpherePoint p{std::cos(lat), 0.0, std::sin(lat)};
  EXPECT_NEAR(distance_to_great_circle(p, equator), 0.2, 1e-12);
}

// The circle distance must agree with the minimum over dense samples of
// the circle itself.
TEST(DistanceToGreatCircle, MatchesDenseSampling) {
  std::mt19937_64 rng(17);
  const GreatCircle g{random_point(rng)};
  const Vec3 u = any_orthogonal(g.normal.vec());
  const Vec3 w = cross(g.normal.vec(), u);
  const int samples = 20000;
  const double half_gap = kPi / samples;  // max along-track offset of the best sample
  for (int k = 0; k < 20; ++k) {
    const SpherePoint p = random_point(rng);
    double best = kPi;
    for (int i = 0; i < samples; ++i) {
      const double a = 2 * kPi * i / samples;
      best = std::min(best,
                      geodesic_distance(p, SpherePoint(normalized(u * std::cos(a) + w * std::sin(a)))));
    }
    // sqrt(d^2 + s^2) - d <= s^2 / (2 d): the sampled minimum overshoots
    // by at most this much
    const double tol = 1e-9 + half_gap * half_gap / (2 * std::max(best, half_gap));
    EXPECT_NEAR(distance_to_great_circle(p, g), best, tol);
  }
}

TEST(Rotate, PreservesDistances) {
  std::mt19937_64 rng(19);
  const Vec3 axis = normalized(Vec3{0.3, -0.5, 0.81});
  for (int k = 0; k < 100; ++k) {
    const SpherePoint a = random_point(rng);
    const SpherePoint b = random_point(rng);
    const double angle = 1.234;
    EXPECT_NEAR(geodesic_distance(rotate(a, axis, angle), rotate(b, axis, angle)),
                geodesic_distance(a, b), 1e-12);
  }
}

}  // namespace
}  // namespace sphereflow
