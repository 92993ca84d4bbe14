#pragma once

// Transversal intersections between two closed spherical curves.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "sphereflow/curve.hpp"
#include "sphereflow/sphere.hpp"

namespace sphereflow {

struct DegenerateIntersectionError : std::runtime_error {
  DegenerateIntersectionError()
      : std::runtime_error("edge pair is coplanar with overlap; intersection set is not finite") {}
};

struct IntersectionSet {
  std::vector<SpherePoint> points;  // deduplicated within 1e-9
  bool degenerate = false;          // some contact fell inside the tangential band
};

namespace detail {

struct RawIntersections {
  std::vector<SpherePoint> points;
  bool touching = false;
  bool overlap = false;
};

inline void push_dedup(std::vector<SpherePoint>& pts, const Vec3& x, double tol = 1e-9) {
  const SpherePoint p = SpherePoint::unchecked(normalized(x));
  for (const SpherePoint& q : pts) {
    if (geodesic_distance(p, q) <= tol) return;
  }
  pts.push_back(p);
}

inline RawIntersections collect_intersections(const ClosedSphericalCurve& a,
                                              const ClosedSphericalCurve& b) {
  RawIntersections out;
  const std::size_t na = a.size();
  const std::size_t nb = b.size();
  std::vector<ArcCap> caps_b(nb);
  for (std::size_t j = 0; j < nb; ++j) caps_b[j] = arc_cap(b[j], b[b.next(j)], b.edge_length(j));

  for (std::size_t i = 0; i < na; ++i) {
    const ArcCap cap_a = arc_cap(a[i], a[a.next(i)], a.edge_length(i));
    for (std::size_t j = 0; j < nb; ++j) {
      const double reach = cap_a.radius + caps_b[j].radius + 1e-9;
      if (reach < kPi && dot(cap_a.mid, caps_b[j].mid) < std::cos(reach)) continue;
      const ArcHit hit = classify_arcs(a[i].vec(), a[a.next(i)].vec(), b[j].vec(),
                                       b[b.next(j)].vec());
      switch (hit.rel) {
        case ArcRelation::kCrossing:
          push_dedup(out.points, hit.point);
          break;
        case ArcRelation::kTouching:
          push_dedup(out.points, hit.point);
          out.touching = true;
          break;
        case ArcRelation::kOverlap:
          out.overlap = true;
          break;
        case ArcRelation::kDisjoint:
          break;
      }
    }
  }
  return out;
}

}  // namespace detail

// All transversal arc-arc intersections of a and b. Near-tangential
// contacts (triple products inside the 1e-12 band) are included once and
// flag the result as degenerate. A coplanar overlapping edge pair makes
// the intersection set non-finite and raises.
inline IntersectionSet intersection_points(const ClosedSphericalCurve& a,
                                           const ClosedSphericalCurve& b) {
  detail::RawIntersections raw = detail::collect_intersections(a, b);
  if (raw.overlap) {
    throw DegenerateIntersectionError{};
  }
  return IntersectionSet{std::move(raw.points), raw.touching};
}

namespace detail {

// Crossing count of the minor arc p->q against the whole curve; nullopt
// when some contact is tangential (caller should retry with another q).
inline std::optional<std::size_t> arc_crossing_count(const SpherePoint& p, const SpherePoint& q,
                                                     const ClosedSphericalCurve& c) {
  std::size_t crossings = 0;
  std::vector<SpherePoint> seen;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const ArcHit hit = classify_arcs(p.vec(), q.vec(), c[i].vec(), c[c.next(i)].vec());
    if (hit.rel == ArcRelation::kTouching || hit.rel == ArcRelation::kOverlap) {
      return std::nullopt;
    }
    if (hit.rel == ArcRelation::kCrossing) {
      push_dedup(seen, hit.point);
    }
  }
  crossings = seen.size();
  return crossings;
}

}  // namespace detail

// Whether p lies in the region to the left of the oriented curve c,
// decided by crossing parity of a geodesic from p to a witness point
// pushed off an edge midpoint on the curve's left side. The left side of
// the arc a->b is the cross(a, b) hemisphere locally, so the push
// direction is just the edge plane normal. p must not lie on c.
inline bool point_on_left_side(const SpherePoint& p, const ClosedSphericalCurve& c) {
  const double push = std::max(1e-6, 0.25 * c.min_edge_length());
  for (std::size_t attempt = 0; attempt < c.size(); ++attempt) {
    const std::size_t i = (attempt * 7919 + 1) % c.size();  // spread retries around the curve
    const Vec3 mid_raw = c[i].vec() + c[c.next(i)].vec();
    const Vec3 plane = cross(c[i].vec(), c[c.next(i)].vec());
    if (norm(mid_raw) < 1e-9 || norm(plane) < 1e-12) continue;
    const Vec3 mid = normalized(mid_raw);
    const Vec3 w = normalized(mid * std::cos(push) + normalized(plane) * std::sin(push));
    const SpherePoint witness = SpherePoint::unchecked(w);
    if (geodesic_distance(p, witness) >= kPi - 1e-6) continue;  // near-antipodal arc is fragile
    const auto crossings = detail::arc_crossing_count(p, witness, c);
    if (!crossings) continue;
    return *crossings % 2 == 0;
  }
  throw std::runtime_error("point_on_left_side: no clean witness arc found");
}

}  // namespace sphereflow
