#pragma once

// Discrete closed Jordan curves on the unit sphere. A curve is an ordered
// cyclic list of unit vertices; edges are the minor geodesic arcs between
// consecutive vertices. Curves are immutable values.
//
// Orientation convention: traversal order defines "forward"; the left side
// of the curve is the side a positive (counterclockwise as seen from
// outside) turn bends into. The left enclosed area comes from the discrete
// Gauss-Bonnet formula  A_left = 2*pi - sum of signed turning angles, which
// is the single source of truth for area here.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "sphereflow/sphere.hpp"

namespace sphereflow {

struct NonSimpleCurveError : std::runtime_error {
  NonSimpleCurveError() : std::runtime_error("curve is not simple") {}
};

struct OffsetMakesNonSimpleError : std::runtime_error {
  OffsetMakesNonSimpleError()
      : std::runtime_error("no offset in the bracket yields a simple curve") {}
};

struct RootNotBracketedError : std::runtime_error {
  RootNotBracketedError()
      : std::runtime_error("target area is not attained for |offset| <= pi/4") {}
};

class ClosedSphericalCurve {
 public:
  static constexpr std::size_t kMinVertices = 3;
  // Edges must be minor arcs; the quarter-circle edges of an inscribed
  // square sit exactly at pi/2, hence the tolerance.
  static constexpr double kMaxEdge = kPi / 2 + 1e-9;
  static constexpr double kMinEdge = 1e-12;

  explicit ClosedSphericalCurve(std::vector<SpherePoint> vertices)
      : vertices_(std::move(vertices)) {
    const std::size_t n = vertices_.size();
    if (n < kMinVertices) {
      throw std::invalid_argument("curve needs at least 3 vertices");
    }
    edge_len_.resize(n);
    total_len_ = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = i + 1 == n ? 0 : i + 1;
      const double len = geodesic_distance(vertices_[i], vertices_[j]);
      if (len < kMinEdge) {
        throw std::invalid_argument("consecutive vertices coincide");
      }
      if (len > kMaxEdge) {
        throw std::invalid_argument("edge longer than pi/2 (minor arc not unique enough)");
      }
      edge_len_[i] = len;
      total_len_ += len;
    }
  }

  static ClosedSphericalCurve from_vectors(const std::vector<Vec3>& pts) {
    std::vector<SpherePoint> vs;
    vs.reserve(pts.size());
    for (const Vec3& p : pts) vs.emplace_back(p);
    return ClosedSphericalCurve(std::move(vs));
  }

  std::size_t size() const { return vertices_.size(); }
  const SpherePoint& operator[](std::size_t i) const { return vertices_[i]; }
  const std::vector<SpherePoint>& vertices() const { return vertices_; }

  std::size_t next(std::size_t i) const { return i + 1 == vertices_.size() ? 0 : i + 1; }
  std::size_t prev(std::size_t i) const { return i == 0 ? vertices_.size() - 1 : i - 1; }

  // Length of edge i (from vertex i to vertex i+1).
  double edge_length(std::size_t i) const { return edge_len_[i]; }
  double min_edge_length() const { return *std::min_element(edge_len_.begin(), edge_len_.end()); }
  double max_edge_length() const { return *std::max_element(edge_len_.begin(), edge_len_.end()); }
  double total_length_cached() const { return total_len_; }

  ClosedSphericalCurve reversed() const {
    std::vector<SpherePoint> vs(vertices_.rbegin(), vertices_.rend());
    return ClosedSphericalCurve(std::move(vs));
  }

 private:
  std::vector<SpherePoint> vertices_;
  std::vector<double> edge_len_;
  double total_len_ = 0.0;
};

// Areas of the two complementary regions, in steradians.
struct AreaPair {
  double left = 0.0;
  double right = 0.0;
};

namespace detail {

// Unit tangent at a pointing along the minor arc a->b.
inline Vec3 depart_dir(const SpherePoint& a, const SpherePoint& b) {
  return normalized(cross(cross(a.vec(), b.vec()), a.vec()));
}

// Unit tangent at b of the minor arc a->b (direction of travel on arrival).
inline Vec3 arrive_dir(const SpherePoint& a, const SpherePoint& b) {
  return normalized(cross(cross(a.vec(), b.vec()), b.vec()));
}

// Signed angle from u to w in the tangent plane at p, positive
// counterclockwise seen from outside the sphere (a left turn).
inline double signed_angle(const Vec3& u, const Vec3& w, const SpherePoint& p) {
  return std::atan2(dot(cross(u, w), p.vec()), dot(u, w));
}

struct VertexFrame {
  Vec3 u_in;   // arrival direction of the incoming edge
  Vec3 u_out;  // departure direction of the outgoing edge
  double turn; // signed turning angle, left turn positive
};

inline VertexFrame vertex_frame(const ClosedSphericalCurve& c, std::size_t i) {
  const SpherePoint& prev = c[c.prev(i)];
  const SpherePoint& here = c[i];
  const SpherePoint& next = c[c.next(i)];
  VertexFrame f;
  f.u_in = arrive_dir(prev, here);
  f.u_out = depart_dir(here, next);
  f.turn = signed_angle(f.u_in, f.u_out, here);
  return f;
}

inline double turning_sum(const ClosedSphericalCurve& c) {
  double sum = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) sum += vertex_frame(c, i).turn;
  return sum;
}

inline AreaPair enclosed_areas_unchecked(const ClosedSphericalCurve& c) {
  const double left = 2.0 * kPi - turning_sum(c);
  return AreaPair{left, 4.0 * kPi - left};
}

// Unit normal at vertex i pointing to the left of the oriented curve.
inline Vec3 left_normal(const ClosedSphericalCurve& c, std::size_t i) {
  const VertexFrame f = vertex_frame(c, i);
  Vec3 mid = f.u_in + f.u_out;
  const double mn = norm(mid);
  if (mn < 1e-12) {
    throw std::invalid_argument("cusp vertex: incoming and outgoing directions oppose");
  }
  return normalized(cross(c[i].vec(), mid / mn));
}

// ---------------------------------------------------------------------------
// Arc-arc predicates. Sign tests on triple products with a conservative
// degeneracy band; anything inside the band is reported as touching.

enum class ArcRelation { kDisjoint, kCrossing, kTouching, kOverlap };

struct ArcHit {
  ArcRelation rel = ArcRelation::kDisjoint;
  Vec3 point{};
};

inline constexpr double kArcBand = 1e-12;

// Angle of x in the frame (u, w) of a great circle.
inline double circle_angle(const Vec3& x, const Vec3& u, const Vec3& w) {
  return std::atan2(dot(x, w), dot(x, u));
}

// Relation between minor arcs a->b and c->d. Arcs shorter than pi are
// assumed (guaranteed by curve validation).
inline ArcHit classify_arcs(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d,
                            double band = kArcBand) {
  const Vec3 n1 = cross(a, b);
  const Vec3 n2 = cross(c, d);
  const double n1n = norm(n1);
  const double n2n = norm(n2);
  if (n1n < 1e-15 || n2n < 1e-15) {
    return ArcHit{ArcRelation::kTouching, a};  // degenerate edge, be conservative
  }
  const Vec3 line = cross(n1, n2);
  const double ln = norm(line);

  if (ln <= 1e-12 * n1n * n2n) {
    // Same supporting great circle: 1-D interval logic along the circle.
    const Vec3 m = n1 / n1n;
    const Vec3 u = normalized(a - dot(a, m) * m);
    const Vec3 w = cross(m, u);
    double ta0 = 0.0, ta1 = circle_angle(b, u, w);
    double tc0 = circle_angle(c, u, w), tc1 = circle_angle(d, u, w);
    if (std::abs(ta1 - ta0) > kPi) ta1 += ta1 < ta0 ? 2 * kPi : -2 * kPi;
    if (std::abs(tc1 - tc0) > kPi) tc1 += tc1 < tc0 ? 2 * kPi : -2 * kPi;
    const double lo1 = std::min(ta0, ta1), hi1 = std::max(ta0, ta1);
    double lo2 = std::min(tc0, tc1), hi2 = std::max(tc0, tc1);
    for (int shift = -1; shift <= 1; ++shift) {
      const double s = shift * 2 * kPi;
      const double lo = std::max(lo1, lo2 + s);
      const double hi = std::min(hi1, hi2 + s);
      if (hi - lo > band) {
        Vec3 p = u * std::cos(0.5 * (lo + hi)) + w * std::sin(0.5 * (lo + hi));
        return ArcHit{ArcRelation::kOverlap, p};
      }
      if (hi - lo >= -band) {
        Vec3 p = u * std::cos(0.5 * (lo + hi)) + w * std::sin(0.5 * (lo + hi));
        return ArcHit{ArcRelation::kTouching, p};
      }
    }
    return ArcHit{};
  }

  const Vec3 t = line / ln;
  ArcHit touch{};
  for (int sgn = 0; sgn < 2; ++sgn) {
    const Vec3 x = sgn == 0 ? t : -t;
    const double g1 = dot(cross(a, x), n1) / n1n;
    const double g2 = dot(cross(x, b), n1) / n1n;
    const double h1 = dot(cross(c, x), n2) / n2n;
    const double h2 = dot(cross(x, d), n2) / n2n;
    const double on1 = std::min(g1, g2);
    const double on2 = std::min(h1, h2);
    if (on1 > band && on2 > band) {
      return ArcHit{ArcRelation::kCrossing, x};
    }
    if (on1 > -band && on2 > -band) {
      touch = ArcHit{ArcRelation::kTouching, x};
    }
  }
  return touch;
}

// Midpoint and angular radius of the cap covering an arc; used to prune
// pair tests (arcs intersect only if midpoints are within r_i + r_j).
struct ArcCap {
  Vec3 mid;
  double radius;
};

inline ArcCap arc_cap(const SpherePoint& a, const SpherePoint& b, double len) {
  Vec3 s = a.vec() + b.vec();
  const double sn = norm(s);
  ArcCap cap;
  cap.mid = sn > 1e-12 ? s / sn : any_orthogonal(a.vec());
  cap.radius = 0.5 * len;
  return cap;
}

// Candidate non-adjacent edge pairs whose caps come within `margin` of
// overlapping, found with a spatial hash so quasi-uniform curves cost
// O(n) instead of O(n^2).
template <typename Visit>
inline void for_each_near_pair(const ClosedSphericalCurve& c, const std::vector<ArcCap>& caps,
                               double margin, Visit&& visit) {
  const std::size_t n = c.size();
  const auto adjacent = [n](std::size_t i, std::size_t j) {
    const std::size_t d = j - i;  // j > i
    return d == 1 || d == n - 1;
  };
  const auto cap_filter = [&](std::size_t i, std::size_t j) {
    const double reach = caps[i].radius + caps[j].radius + margin + 1e-9;
    if (reach >= kPi) return true;
    return dot(caps[i].mid, caps[j].mid) >= std::cos(reach);
  };

  if (n <= 24) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (!adjacent(i, j) && cap_filter(i, j)) visit(i, j);
      }
    }
    return;
  }

  double max_r = 0.0;
  for (const ArcCap& cap : caps) max_r = std::max(max_r, cap.radius);
  const double cell = std::max(2.0 * max_r + margin, 1e-8);

  const auto cell_key = [cell](const Vec3& p) {
    const auto q = [cell](double v) { return static_cast<std::int64_t>(std::floor(v / cell)); };
    const std::uint64_t ix = static_cast<std::uint64_t>(q(p.x));
    const std::uint64_t iy = static_cast<std::uint64_t>(q(p.y));
    const std::uint64_t iz = static_cast<std::uint64_t>(q(p.z));
    return ix * 0x9E3779B97F4A7C15ull ^ iy * 0xC2B2AE3D27D4EB4Full ^ iz * 0x165667B19E3779F9ull;
  };

  std::vector<std::pair<std::uint64_t, std::uint32_t>> table(n);
  for (std::size_t i = 0; i < n; ++i) table[i] = {cell_key(caps[i].mid), static_cast<std::uint32_t>(i)};
  std::sort(table.begin(), table.end());

  for (std::size_t i = 0; i < n; ++i) {
    const Vec3& m = caps[i].mid;
    for (int dx = -1; dx <= 1; ++dx) {
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dz = -1; dz <= 1; ++dz) {
          const Vec3 probe{m.x + dx * cell, m.y + dy * cell, m.z + dz * cell};
          const std::uint64_t key = cell_key(probe);
          auto it = std::lower_bound(table.begin(), table.end(),
                                     std::make_pair(key, std::uint32_t{0}));
          for (; it != table.end() && it->first == key; ++it) {
            const std::size_t j = it->second;
            if (j <= i) continue;
            if (!adjacent(i, j) && cap_filter(i, j)) visit(i, j);
          }
        }
      }
    }
  }
}

inline bool has_fold_back(const ClosedSphericalCurve& c) {
  for (std::size_t i = 0; i < c.size(); ++i) {
    const VertexFrame f = vertex_frame(c, i);
    if (dot(f.u_in, f.u_out) < 0.0 && norm(cross(f.u_in, f.u_out)) <= kArcBand) {
      return true;
    }
  }
  return false;
}

struct SimplicityScan {
  bool simple = true;
  // Certified lower bound on the distance between any two non-adjacent
  // edge arcs, capped at the scan window. The flow uses it to skip full
  // rescans while the curve provably cannot have crossed itself.
  double separation_bound = 0.0;
};

// One grid pass doubling as the simplicity predicate and the separation
// certificate: pairs whose caps stay `window` apart are at least that far
// from touching.
inline SimplicityScan simplicity_scan(const ClosedSphericalCurve& c, double window) {
  SimplicityScan out;
  out.separation_bound = window;
  if (has_fold_back(c)) {
    out.simple = false;
    out.separation_bound = 0.0;
    return out;
  }

  const std::size_t n = c.size();
  std::vector<ArcCap> caps(n);
  for (std::size_t i = 0; i < n; ++i) {
    caps[i] = arc_cap(c[i], c[c.next(i)], c.edge_length(i));
  }

  for_each_near_pair(c, caps, window, [&](std::size_t i, std::size_t j) {
    if (!out.simple) return;
    const ArcHit hit =
        classify_arcs(c[i].vec(), c[c.next(i)].vec(), c[j].vec(), c[c.next(j)].vec());
    if (hit.rel != ArcRelation::kDisjoint) {
      out.simple = false;
      out.separation_bound = 0.0;
      return;
    }
    if (window > 0.0) {
      const double gap = geodesic_distance(SpherePoint::unchecked(caps[i].mid),
                                           SpherePoint::unchecked(caps[j].mid)) -
                         caps[i].radius - caps[j].radius;
      out.separation_bound = std::max(0.0, std::min(out.separation_bound, gap));
    }
  });
  return out;
}

}  // namespace detail

inline double total_length(const ClosedSphericalCurve& c) { return c.total_length_cached(); }

// True iff no two non-adjacent edges intersect or touch, and no adjacent
// pair folds back on itself. Degeneracies within the 1e-12 band count as
// non-simple: conservative failure keeps the flow honest.
inline bool is_simple(const ClosedSphericalCurve& c) {
  return detail::simplicity_scan(c, 0.0).simple;
}

inline AreaPair enclosed_areas(const ClosedSphericalCurve& c) {
  if (!is_simple(c)) {
    throw NonSimpleCurveError{};
  }
  return detail::enclosed_areas_unchecked(c);
}

inline bool is_bisector(const ClosedSphericalCurve& c, double tol) {
  return std::abs(enclosed_areas(c).left - 2.0 * kPi) <= tol;
}

// n vertices equally spaced in arc length along the geodesic polyline.
// The first output vertex sits at the arc-length position of the first
// input vertex, so the phase is deterministic.
inline ClosedSphericalCurve resample(const ClosedSphericalCurve& c, std::size_t n) {
  if (n < ClosedSphericalCurve::kMinVertices) {
    throw std::invalid_argument("resample: need at least 3 output vertices");
  }
  const std::size_t m = c.size();
  const double total = c.total_length_cached();
  std::vector<SpherePoint> out;
  out.reserve(n);

  std::size_t edge = 0;
  double edge_start = 0.0;  // arc length at the start of `edge`
  for (std::size_t k = 0; k < n; ++k) {
    const double s = total * static_cast<double>(k) / static_cast<double>(n);
    while (edge < m - 1 && s > edge_start + c.edge_length(edge)) {
      edge_start += c.edge_length(edge);
      ++edge;
    }
    const double len = c.edge_length(edge);
    double f = (s - edge_start) / len;
    f = std::clamp(f, 0.0, 1.0);
    const SpherePoint& a = c[edge];
    const SpherePoint& b = c[c.next(edge)];
    if (f <= 0.0) {
      out.push_back(a);
    } else if (f >= 1.0) {
      out.push_back(b);
    } else {
      const double st = std::sin(len);
      const Vec3 p = a.vec() * (std::sin((1.0 - f) * len) / st) + b.vec() * (std::sin(f * len) / st);
      out.push_back(SpherePoint::unchecked(normalized(p)));
    }
  }
  return ClosedSphericalCurve(std::move(out));
}

namespace detail {

// Curvature vectors plus the turning sum and the largest magnitude, all
// from one pass; the flow runs this every step.
struct CurvatureScan {
  std::vector<TangentVector> kappa;
  double turning_sum = 0.0;
  double max_magnitude = 0.0;
};

inline CurvatureScan curvature_scan(const ClosedSphericalCurve& c) {
  const std::size_t n = c.size();
  CurvatureScan out;
  out.kappa.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const VertexFrame f = vertex_frame(c, i);
    const double avg_len = 0.5 * (c.edge_length(c.prev(i)) + c.edge_length(i));
    Vec3 mid = f.u_in + f.u_out;
    const double mn = norm(mid);
    if (mn < 1e-12) {
      throw std::invalid_argument("cusp vertex: curvature undefined");
    }
    const Vec3 left = normalized(cross(c[i].vec(), mid / mn));
    const double mag = std::abs(f.turn) / avg_len;
    out.turning_sum += f.turn;
    out.max_magnitude = std::max(out.max_magnitude, mag);
    out.kappa.push_back(TangentVector{c[i], left * (f.turn / avg_len)});
  }
  return out;
}

}  // namespace detail

// Discrete geodesic curvature vector at each vertex: magnitude is the
// turning angle over the average adjacent edge length, direction is the
// left normal when the turn is positive. The ambient vector is unchanged
// under orientation reversal.
inline std::vector<TangentVector> discrete_curvature(const ClosedSphericalCurve& c) {
  return detail::curvature_scan(c).kappa;
}

inline double max_abs_curvature(const ClosedSphericalCurve& c) {
  return detail::curvature_scan(c).max_magnitude;
}

// Minimum geodesic distance from p to the curve, using closed-form
// projection onto each edge arc (not vertex sampling).
inline double distance_point_to_arc(const SpherePoint& p, const SpherePoint& a,
                                    const SpherePoint& b) {
  const Vec3 nraw = cross(a.vec(), b.vec());
  const double nn = norm(nraw);
  if (nn < 1e-15) {
    return std::min(geodesic_distance(p, a), geodesic_distance(p, b));
  }
  const Vec3 nh = nraw / nn;
  const double sin_lat = dot(p.vec(), nh);
  const Vec3 proj = p.vec() - sin_lat * nh;
  const double pn = norm(proj);
  if (pn < 1e-15) {
    return kPi / 2;  // p is a pole of the supporting circle
  }
  const Vec3 cp = proj / pn;
  if (dot(cross(a.vec(), cp), nh) >= 0.0 && dot(cross(cp, b.vec()), nh) >= 0.0) {
    return std::abs(std::asin(clamp_unit(sin_lat)));
  }
  return std::min(geodesic_distance(p, a), geodesic_distance(p, b));
}

inline double distance_point_to_curve(const SpherePoint& p, const ClosedSphericalCurve& c) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < c.size(); ++i) {
    const SpherePoint& a = c[i];
    const SpherePoint& b = c[c.next(i)];
    // Cheap lower bound: the arc is at least angle(p, mid) - radius away.
    const double r = 0.5 * c.edge_length(i);
    const Vec3 smid = a.vec() + b.vec();
    const double sn = norm(smid);
    if (sn > 1e-12 && best < kPi) {
      const double cmid = dot(p.vec(), smid / sn);
      if (cmid < std::cos(std::min(kPi, best + r))) continue;
    }
    best = std::min(best, distance_point_to_arc(p, a, b));
    if (best == 0.0) break;
  }
  return best;
}

// True iff every point of a (vertices plus edge samples at resolution
// <= delta/4) lies within delta of b.
inline bool curve_in_dilation(const ClosedSphericalCurve& a, const ClosedSphericalCurve& b,
                              double delta) {
  if (delta < 0.0) return false;
  const double step = std::max(delta / 4.0, 1e-6);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const SpherePoint& p = a[i];
    const SpherePoint& q = a[a.next(i)];
    const double len = a.edge_length(i);
    const int pieces = std::max(1, static_cast<int>(std::ceil(len / step)));
    const double st = std::sin(len);
    for (int k = 0; k < pieces; ++k) {
      const double f = static_cast<double>(k) / pieces;
      const Vec3 x = f == 0.0 ? p.vec()
                              : p.vec() * (std::sin((1.0 - f) * len) / st) +
                                    q.vec() * (std::sin(f * len) / st);
      if (distance_point_to_curve(SpherePoint::unchecked(normalized(x)), b) > delta) {
        return false;
      }
    }
  }
  return true;
}

namespace detail {

// Left-offset vertex positions without constructing a validated curve;
// make_bisector evaluates many candidate offsets and only the final one
// needs full validation.
inline std::vector<SpherePoint> offset_vertices(const ClosedSphericalCurve& c, double s) {
  std::vector<SpherePoint> out;
  out.reserve(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    out.push_back(exp_map(c[i], left_normal(c, i) * s));
  }
  return out;
}

inline double turning_sum_points(const std::vector<SpherePoint>& v) {
  const std::size_t n = v.size();
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const SpherePoint& prev = v[(i + n - 1) % n];
    const SpherePoint& here = v[i];
    const SpherePoint& next = v[(i + 1) % n];
    const Vec3 u_in = arrive_dir(prev, here);
    const Vec3 u_out = depart_dir(here, next);
    sum += signed_angle(u_in, u_out, here);
  }
  return sum;
}

}  // namespace detail

// The curve displaced by a common signed geodesic offset along the local
// left normal at every vertex.
inline ClosedSphericalCurve normal_offset(const ClosedSphericalCurve& c, double s) {
  return ClosedSphericalCurve(detail::offset_vertices(c, s));
}

// Offsets the curve uniformly along its left normals so the left area
// becomes 2*pi, with the offset found by bisection over |s| <= pi/4.
inline ClosedSphericalCurve make_bisector(const ClosedSphericalCurve& c) {
  const AreaPair areas0 = enclosed_areas(c);  // also enforces simplicity
  if (areas0.left <= 0.5 || areas0.left >= 4.0 * kPi - 0.5) {
    throw std::invalid_argument("make_bisector: left area too extreme to bracket");
  }
  if (std::abs(areas0.left - 2.0 * kPi) <= 1e-10) {
    return c;
  }

  // Area of the offset candidate; collapsed candidates are treated as
  // continuing the monotone trend so bisection stays bracketed.
  const auto area_at = [&](double s) -> double {
    try {
      const std::vector<SpherePoint> pts = detail::offset_vertices(c, s);
      for (std::size_t i = 0; i < pts.size(); ++i) {
        const std::size_t j = (i + 1) % pts.size();
        const double len = geodesic_distance(pts[i], pts[j]);
        if (len < ClosedSphericalCurve::kMinEdge || len > ClosedSphericalCurve::kMaxEdge) {
          throw std::invalid_argument("collapsed");
        }
      }
      return 2.0 * kPi - detail::turning_sum_points(pts);
    } catch (const std::exception&) {
      return s > 0.0 ? 0.0 : 4.0 * kPi;  // leftward offsets shrink the left region
    }
  };

  // March outward from zero offset and bisect inside the first straddling
  // interval, so the root found is the one nearest the input curve (large
  // offsets can fold the polygon and fake further roots).
  const double f0 = areas0.left - 2.0 * kPi;
  const double dir = f0 > 0.0 ? 1.0 : -1.0;  // leftward offsets shrink the left area
  const int march_steps = 64;
  double s_prev = 0.0;
  double f_prev = f0;
  double lo = 0.0, hi = 0.0;
  bool bracketed = false;
  for (int k = 1; k <= march_steps; ++k) {
    const double s = dir * (kPi / 4.0) * static_cast<double>(k) / march_steps;
    const double f = area_at(s) - 2.0 * kPi;
    if ((f > 0.0) != (f_prev > 0.0) || f == 0.0) {
      lo = s_prev;
      hi = s;
      bracketed = true;
      break;
    }
    s_prev = s;
    f_prev = f;
  }
  if (!bracketed) {
    throw RootNotBracketedError{};
  }
  double root = 0.5 * (lo + hi);
  double f_lo = f_prev;
  for (int iter = 0; iter < 60; ++iter) {
    root = 0.5 * (lo + hi);
    const double f = area_at(root) - 2.0 * kPi;
    if (std::abs(f) <= 1e-12) break;
    if ((f > 0.0) == (f_lo > 0.0)) {
      lo = root;
      f_lo = f;
    } else {
      hi = root;
    }
  }

  std::optional<ClosedSphericalCurve> out;
  try {
    out.emplace(detail::offset_vertices(c, root));
  } catch (const std::invalid_argument&) {
    // bisection converged onto a collapse boundary, not a real root
    throw RootNotBracketedError{};
  }
  if (!is_simple(*out)) {
    throw OffsetMakesNonSimpleError{};
  }
  if (std::abs(detail::enclosed_areas_unchecked(*out).left - 2.0 * kPi) > 1e-8) {
    throw RootNotBracketedError{};
  }
  return *out;
}

}  // namespace sphereflow
