#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "sphereflow/analysis.hpp"
#include "sphereflow/generate.hpp"
#include "sphereflow/sphere.hpp"

namespace sphereflow {
namespace {

// Brute-force oracle: minimize sum w_i (p_i . n)^2 over a fine direction
// grid, then refine locally.
Vec3 grid_fit_normal(const ClosedSphericalCurve& c) {
  const auto cost = [&](const Vec3& n) {
    double s = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      const double w = 0.5 * (c.edge_length(c.prev(i)) + c.edge_length(i));
      const double d = dot(c[i].vec(), n);
      s += w * d * d;
    }
    return s;
  };
  Vec3 best{0, 0, 1};
  double best_cost = cost(best);
  double span = kPi;
  double ctheta = kPi / 2, cphi = 0.0;
  for (int level = 0; level < 6; ++level) {
    const int steps = 40;
    for (int a = 0; a <= steps; ++a) {
      for (int b = 0; b <= steps; ++b) {
        const double th = ctheta + span * (a - steps / 2) / steps;
        const double ph = cphi + 2 * span * (b - steps / 2) / steps;
        const Vec3 n{std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)};
        const double v = cost(n);
        if (v < best_cost) {
          best_cost = v;
          best = n;
          ctheta = th;
          cphi = ph;
        }
      }
    }
    span /= 8;
  }
  return best;
}

TEST(FitGreatCircle, EquatorAndNearEquatorLatitudes) {
  const GreatCircle eq_fit = fit_great_circle(gen_latitude_circle(kPi / 2, 128));
  EXPECT_NEAR(std::abs(eq_fit.normal.z()), 1.0, 1e-9);
  EXPECT_GT(eq_fit.normal.z(), 0.0);  // left side (north) fixes the sign

  // Horizontal best-fit plane needs tan^2(theta) > 2, i.e. colatitude
  // between ~54.7 and ~125.3 degrees; pi/3 and 2pi/3 sit inside.
  for (const double theta : {kPi / 3, 2 * kPi / 3}) {
    const GreatCircle g = fit_great_circle(gen_latitude_circle(theta, 256));
    EXPECT_NEAR(std::abs(g.normal.z()), 1.0, 1e-9) << theta;
    EXPECT_GT(g.normal.z(), 0.0);
  }
}

TEST(FitGreatCircle, PolarCircleHasNoPreferredPlane) {
  // High-latitude circles are fit best by *vertical* planes, all of them
  // equally, so the two smallest eigenvalues tie.
  EXPECT_THROW(fit_great_circle(gen_latitude_circle(0.4, 128)), DegenerateFitError);
}

TEST(FitGreatCircle, MatchesGridOracleOnPerturbedEquator) {
  PerturbationSpec spec;
  spec.seed = 9;
  spec.amplitude = 0.1;
  spec.modes = {{3, 0.7}, {4, 0.1}};
  spec.n = 128;
  const ClosedSphericalCurve c = gen_perturbed_bisector(spec);
  const GreatCircle fit = fit_great_circle(c);
  EXPECT_LE(geodesic_distance(fit.normal, SpherePoint{0, 0, 1}), 0.15);

  const Vec3 oracle = grid_fit_normal(c);
  const double align = std::abs(dot(fit.normal.vec(), oracle));
  EXPECT_GT(align, std::cos(2e-3));  // same plane up to grid resolution
}

TEST(FitGreatCircle, RotationEquivariant) {
  PerturbationSpec spec;
  spec.seed = 2;
  spec.amplitude = 0.15;
  spec.modes = {{2, 0.3}};
  spec.n = 96;
  const ClosedSphericalCurve c = gen_perturbed_bisector(spec);
  const Vec3 axis = normalized(Vec3{0.2, 0.9, -0.4});
  const double angle = 0.77;
  std::vector<SpherePoint> moved;
  for (const SpherePoint& p : c.vertices()) moved.push_back(rotate(p, axis, angle));
  const GreatCircle base = fit_great_circle(c);
  const GreatCircle rotated = fit_great_circle(ClosedSphericalCurve{std::move(moved)});
  const Vec3 expected = rotate(base.normal.vec(), axis, angle);
  EXPECT_NEAR(std::abs(dot(rotated.normal.vec(), expected)), 1.0, 1e-9);
}

TEST(GageResidual, Cases) {
  EXPECT_LE(gage_residual(gen_latitude_circle(kPi / 2, 128)), 1e-9);
  EXPECT_NEAR(gage_residual(gen_latitude_circle(kPi / 3, 256)), kPi / 2 - kPi / 3, 1e-9);

  PerturbationSpec spec;
  spec.seed = 4;
  spec.amplitude = 0.05;
  spec.modes = {{3, 0.0}};
  spec.n = 256;
  const double r = gage_residual(gen_perturbed_bisector(spec));
  EXPECT_NEAR(r, 0.05, 0.05 * 0.2);  // within 20% of the imposed amplitude
}

TEST(RMultiplicity, BandCases) {
  const GreatCircle g{SpherePoint{0, 0, 1}};
  const ClosedSphericalCurve own = gen_great_circle(g, 128);
  EXPECT_EQ(r_multiplicity(own, g, 0.3).value, 1u);

  const ClosedSphericalCurve orthogonal = gen_great_circle(GreatCircle{SpherePoint{1, 0, 0}}, 128);
  const MultiplicityReport rep = r_multiplicity(orthogonal, g, 0.3);
  EXPECT_EQ(rep.value, 2u);
  EXPECT_GE(rep.components.size(), rep.value);

  const ClosedSphericalCurve tiny_cap = gen_latitude_circle(0.3, 64);
  EXPECT_EQ(r_multiplicity(tiny_cap, g, 0.3).value, 0u);  // entirely outside g + 0.6
}

TEST(RMultiplicity, CurveInsideInnerBandHasValueOne) {
  PerturbationSpec spec;
  spec.seed = 6;
  spec.amplitude = 0.05;
  spec.modes = {{4, 0.2}};
  spec.n = 128;
  const ClosedSphericalCurve c = gen_perturbed_bisector(spec);
  const GreatCircle g{SpherePoint{0, 0, 1}};
  ASSERT_TRUE(curve_in_dilation(c, gen_great_circle(g, 256), 0.1));
  EXPECT_EQ(r_multiplicity(c, g, 0.1).value, 1u);
}

TEST(RMultiplicity, FlowerComponentsMatchSamplingOracle) {
  PerturbationSpec spec;
  spec.seed = 8;
  spec.amplitude = 0.2;
  spec.modes = {{3, 0.0}};
  spec.n = 512;
  const ClosedSphericalCurve flower = gen_perturbed_bisector(spec);
  const GreatCircle g{SpherePoint{0, 0, 1}};
  const double r = 0.05;

  // Sampling oracle: walk finely spaced points, count maximal runs inside
  // the open 2r band that reach the inner band.
  const int samples = 20000;
  std::vector<bool> inside(samples), reach(samples);
  for (int k = 0; k < samples; ++k) {
    // piecewise: sample along vertices (fine enough at n=512)
    const SpherePoint& p = flower[(k * flower.size()) / samples];
    const double lat = std::abs(std::asin(clamp_unit(p.z())));
    inside[k] = lat < 2 * r;
    reach[k] = lat <= r;
  }
  std::size_t oracle = 0;
  int start = -1;
  for (int k = 0; k < samples; ++k) {
    if (inside[k] && !inside[(k + samples - 1) % samples]) start = k;
  }
  ASSERT_GE(start, 0);
  bool run_reach = false;
  bool in_run = false;
  for (int step = 0; step <= samples; ++step) {
    const int k = (start + step) % samples;
    if (step == samples) {
      break;
    }
    if (inside[k]) {
      in_run = true;
      run_reach = run_reach || reach[k];
    } else if (in_run) {
      if (run_reach) ++oracle;
      in_run = false;
      run_reach = false;
    }
  }
  if (in_run && run_reach) ++oracle;

  EXPECT_EQ(r_multiplicity(flower, g, r).value, oracle);
  EXPECT_EQ(oracle, 6u);
}

TEST(RMultiplicity, VertexOnBoundaryRaises) {
  const double r = 0.2;
  const ClosedSphericalCurve on_boundary = gen_latitude_circle(kPi / 2 - 2 * r, 64);
  EXPECT_THROW(r_multiplicity(on_boundary, GreatCircle{SpherePoint{0, 0, 1}}, r),
               BandDegenerateError);
}

// Two bisectors cannot be disjoint, so a bisector always reaches the
// distance-0 set of any great circle and its multiplicity is at least 1.
TEST(RMultiplicity, BisectorsMeetEveryGreatCircleBand) {
  std::mt19937_64 rng(71);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    PerturbationSpec spec;
    spec.seed = seed;
    spec.amplitude = 0.25;
    spec.random_mode_count = 3;
    spec.n = 128;
    const ClosedSphericalCurve c = gen_perturbed_bisector(spec);
    for (int k = 0; k < 8; ++k) {
      const GreatCircle g{SpherePoint(normalized(Vec3{gauss(rng), gauss(rng), gauss(rng)}))};
      double r = 0.2;
      for (int attempt = 0; attempt < 4; ++attempt) {
        try {
          EXPECT_GE(r_multiplicity(c, g, r).value, 1u);
          break;
        } catch (const BandDegenerateError&) {
          r += 1e-9;
        }
      }
    }
  }
}

TEST(RMultiplicity, RejectsBadRadius) {
  const ClosedSphericalCurve eq = gen_latitude_circle(kPi / 2, 64);
  EXPECT_THROW(r_multiplicity(eq, GreatCircle{SpherePoint{0, 0, 1}}, 0.0), std::invalid_argument);
  EXPECT_THROW(r_multiplicity(eq, GreatCircle{SpherePoint{0, 0, 1}}, kPi / 3),
               std::invalid_argument);
}

TEST(IntersectionCount, Cases) {
  const ClosedSphericalCurve eq = gen_great_circle(GreatCircle{SpherePoint{0, 0, 1}}, 96);
  const ClosedSphericalCurve mer = gen_great_circle(GreatCircle{SpherePoint{0, 1, 0}}, 96);
  EXPECT_EQ(intersection_count(eq, mer).count, 2u);

  PerturbationSpec spec;
  spec.seed = 3;
  spec.amplitude = 0.2;
  spec.modes = {{3, 0.0}};
  spec.n = 256;
  const ClosedSphericalCurve flower = gen_perturbed_bisector(spec);
  EXPECT_EQ(intersection_count(flower, gen_latitude_circle(kPi / 2, 256)).count, 6u);

  EXPECT_EQ(intersection_count(gen_latitude_circle(kPi / 3, 64),
                               gen_latitude_circle(2 * kPi / 3, 64))
                .count,
            0u);
}

// Tangential contact (a curve grazing the equator from one side) lands in
// the degeneracy band: counted once per touch point and flagged.
TEST(IntersectionCount, TangentialContactIsFlagged) {
  std::vector<Vec3> pts;
  const std::size_t n = 128;
  for (std::size_t k = 0; k < n; ++k) {
    const double s = 2 * kPi * k / n;
    const double lat = 0.05 * (1.0 + std::cos(2 * s));  // touches 0 at s = pi/2, 3pi/2
    pts.push_back({std::cos(lat) * std::cos(s), std::cos(lat) * std::sin(s), std::sin(lat)});
  }
  const ClosedSphericalCurve grazing = ClosedSphericalCurve::from_vectors(pts);
  const ClosedSphericalCurve eq = gen_latitude_circle(kPi / 2, 128);
  const IntersectionCount ic = intersection_count(grazing, eq);
  EXPECT_TRUE(ic.degenerate);
  EXPECT_EQ(ic.count, 2u);
}

TEST(GaussBonnet, DefectIsAlgebraicallyTiny) {
  PerturbationSpec spec;
  spec.seed = 12;
  spec.amplitude = 0.25;
  spec.modes = {{2, 0.1}, {5, 1.3}};
  spec.n = 128;
  EXPECT_LE(gauss_bonnet_defect(gen_perturbed_bisector(spec)), 1e-12);
  EXPECT_LE(gauss_bonnet_defect(gen_latitude_circle(1.0, 64)), 1e-12);
}

// Closed form on both sides: integral of cot(theta) over the circle is
// 2*pi*cos(theta), and 2*pi - cap area is the same number.
TEST(GaussBonnet, LatitudeCircleMatchesSmoothOracle) {
  const double theta = kPi / 3;
  const double smooth = 2 * kPi * std::cos(theta);
  const double at256 = std::abs(signed_curvature_integral(gen_latitude_circle(theta, 256)) - smooth);
  const double at512 = std::abs(signed_curvature_integral(gen_latitude_circle(theta, 512)) - smooth);
  EXPECT_LE(at256, 1e-3);
  EXPECT_GT(at256 / at512, 3.5);
}

}  // namespace
}  // namespace sphereflow
