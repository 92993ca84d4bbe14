#include <gtest/gtest.h>

#include <cmath>

#include "sphereflow/generate.hpp"
#include "sphereflow/intersections.hpp"
#include "sphereflow/sphere.hpp"

namespace sphereflow {
namespace {

TEST(IntersectionPoints, TwoGreatCirclesMeetAntipodally) {
  const ClosedSphericalCurve eq = gen_great_circle(GreatCircle{SpherePoint{0, 0, 1}}, 64);
  const ClosedSphericalCurve mer = gen_great_circle(GreatCircle{SpherePoint{0, 1, 0}}, 64);
  const IntersectionSet s = intersection_points(eq, mer);
  ASSERT_EQ(s.points.size(), 2u);
  EXPECT_NEAR(geodesic_distance(s.points[0], s.points[1]), kPi, 1e-6);
}

TEST(IntersectionPoints, DisjointLatitudeCircles) {
  const ClosedSphericalCurve a = gen_latitude_circle(kPi / 3, 64);
  const ClosedSphericalCurve b = gen_latitude_circle(2 * kPi / 3, 64);
  EXPECT_TRUE(intersection_points(a, b).points.empty());
}

// Oracle: the flower crosses the equator once per sign change of its
// vertex latitude around the loop.
TEST(IntersectionPoints, FlowerCrossingsMatchSignChanges) {
  PerturbationSpec spec;
  spec.seed = 3;
  spec.amplitude = 0.2;
  spec.modes = {{3, 0.0}};
  spec.n = 256;
  const ClosedSphericalCurve flower = gen_perturbed_bisector(spec);
  const ClosedSphericalCurve eq = gen_latitude_circle(kPi / 2, 256);

  std::size_t sign_changes = 0;
  for (std::size_t i = 0; i < flower.size(); ++i) {
    const double z0 = flower[i].z();
    const double z1 = flower[flower.next(i)].z();
    if (z0 * z1 < 0) ++sign_changes;
  }
  EXPECT_EQ(sign_changes, 6u);
  EXPECT_EQ(intersection_points(flower, eq).points.size(), 6u);
}

TEST(IntersectionPoints, OverlapRaises) {
  const ClosedSphericalCurve eq = gen_latitude_circle(kPi / 2, 64);
  const ClosedSphericalCurve eq2 = gen_latitude_circle(kPi / 2, 96);
  EXPECT_THROW(intersection_points(eq, eq2), DegenerateIntersectionError);
}

TEST(PointOnLeftSide, EquatorSeparatesPoles) {
  const ClosedSphericalCurve eq = gen_latitude_circle(kPi / 2, 64);
  EXPECT_TRUE(point_on_left_side(SpherePoint{0, 0, 1}, eq));
  EXPECT_FALSE(point_on_left_side(SpherePoint{0, 0, -1}, eq));

  const SpherePoint north_low{std::cos(0.3), 0.0, std::sin(0.3)};
  const SpherePoint south_low{std::cos(0.3), 0.0, -std::sin(0.3)};
  EXPECT_TRUE(point_on_left_side(north_low, eq));
  EXPECT_FALSE(point_on_left_side(south_low, eq));
}

TEST(PointOnLeftSide, SmallCircleRegions) {
  const ClosedSphericalCurve cap = gen_latitude_circle(0.6, 96);
  EXPECT_TRUE(point_on_left_side(SpherePoint{0, 0, 1}, cap));
  EXPECT_FALSE(point_on_left_side(SpherePoint{1, 0, 0}, cap));
  EXPECT_FALSE(point_on_left_side(SpherePoint{0, 0, -1}, cap));
}

}  // namespace
}  // namespace sphereflow
