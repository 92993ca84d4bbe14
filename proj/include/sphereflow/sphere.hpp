#pragma once

// Geometry kernel for the round unit 2-sphere: points, tangent vectors,
// great circles, and the exp/log maps between them. Everything is a pure
// function of its inputs; all angles are radians.

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sphereflow {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kUnitTol = 1e-9;

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3() = default;
  constexpr Vec3(double xx, double yy, double zz) : x(xx), y(yy), z(zz) {}

  constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr Vec3 operator-() const { return {-x, -y, -z}; }
  constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
};

constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

inline Vec3 normalized(const Vec3& v) {
  const double n = norm(v);
  if (n == 0.0) {
    throw std::invalid_argument("cannot normalize the zero vector");
  }
  return v / n;
}

inline double clamp_unit(double t) { return t < -1.0 ? -1.0 : (t > 1.0 ? 1.0 : t); }

// A point of the unit sphere. The constructor renormalizes, but rejects
// inputs whose norm is off by more than kUnitTol.
class SpherePoint {
 public:
  SpherePoint() : v_(1.0, 0.0, 0.0) {}

  explicit SpherePoint(const Vec3& v) {
    const double n = norm(v);
    if (std::abs(n - 1.0) > kUnitTol) {
      throw std::invalid_argument("SpherePoint: vector norm " + std::to_string(n) +
                                  " is not unit within tolerance");
    }
    v_ = v / n;
  }

  SpherePoint(double x, double y, double z) : SpherePoint(Vec3{x, y, z}) {}

  // For callers that guarantee unit norm (e.g. exp_map output already
  // renormalized); skips the tolerance check.
  static SpherePoint unchecked(const Vec3& unit) {
    SpherePoint p;
    p.v_ = unit;
    return p;
  }

  const Vec3& vec() const { return v_; }
  double x() const { return v_.x; }
  double y() const { return v_.y; }
  double z() const { return v_.z; }

  SpherePoint antipode() const { return unchecked(-v_); }

 private:
  Vec3 v_;
};

inline double dot(const SpherePoint& a, const SpherePoint& b) { return dot(a.vec(), b.vec()); }

// Tangent vector at a base point; the length of v is the geodesic
// displacement it encodes. Invariant: dot(v, base) == 0 within kUnitTol.
struct TangentVector {
  SpherePoint base;
  Vec3 v;

  double length() const { return norm(v); }
};

// A great circle {p : dot(p, normal) == 0}; normal and -normal denote the
// same circle with opposite orientation.
struct GreatCircle {
  SpherePoint normal;
};

struct AntipodalPairError : std::domain_error {
  AntipodalPairError() : std::domain_error("log_map is undefined for antipodal points") {}
};

// atan2 form of arccos(p . q): same value, but conditioned well near 0 and
// pi where acos of a rounded dot product loses half the digits.
inline double geodesic_distance(const SpherePoint& p, const SpherePoint& q) {
  return std::atan2(norm(cross(p.vec(), q.vec())), dot(p, q));
}

// Follows the geodesic from p with initial velocity v for arc length |v|.
inline SpherePoint exp_map(const SpherePoint& p, const TangentVector& v) {
  const double t = v.length();
  if (t == 0.0) {
    return p;
  }
  const Vec3 dir = v.v / t;
  const Vec3 out = std::cos(t) * p.vec() + std::sin(t) * dir;
  return SpherePoint::unchecked(normalized(out));
}

inline SpherePoint exp_map(const SpherePoint& p, const Vec3& v) {
  return exp_map(p, TangentVector{p, v});
}

// Inverse of exp_map: the tangent vector at p reaching q. Hard error for
// antipodal pairs; callers in the flow never legitimately produce them,
// so surfacing the error catches blowups.
inline TangentVector log_map(const SpherePoint& p, const SpherePoint& q) {
  const double c = dot(p, q);
  if (c <= -1.0 + kUnitTol) {
    throw AntipodalPairError{};
  }
  const double theta = std::acos(clamp_unit(c));
  Vec3 perp = q.vec() - c * p.vec();
  const double pn = norm(perp);
  if (pn < 1e-18 || theta == 0.0) {
    return TangentVector{p, Vec3{0.0, 0.0, 0.0}};
  }
  return TangentVector{p, perp * (theta / pn)};
}

inline double distance_to_great_circle(const SpherePoint& p, const GreatCircle& g) {
  return std::abs(std::asin(clamp_unit(dot(p, g.normal))));
}

// Rotation by angle about a unit axis (Rodrigues). Used by generators and
// equivariance checks.
inline Vec3 rotate(const Vec3& v, const Vec3& unit_axis, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return v * c + cross(unit_axis, v) * s + unit_axis * (dot(unit_axis, v) * (1.0 - c));
}

inline SpherePoint rotate(const SpherePoint& p, const Vec3& unit_axis, double angle) {
  return SpherePoint::unchecked(normalized(rotate(p.vec(), unit_axis, angle)));
}

// Some unit vector orthogonal to v.
inline Vec3 any_orthogonal(const Vec3& v) {
  const double ax = std::abs(v.x), ay = std::abs(v.y), az = std::abs(v.z);
  Vec3 other = ax <= ay && ax <= az ? Vec3{1, 0, 0} : (ay <= az ? Vec3{0, 1, 0} : Vec3{0, 0, 1});
  return normalized(cross(v, other));
}

}  // namespace sphereflow
