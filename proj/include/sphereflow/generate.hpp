#pragma once

// Curve generators: latitude circles, great-circle discretizations, and
// seeded mode-perturbed bisectors. Same seed, same curve, bit for bit.

#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sphereflow/curve.hpp"
#include "sphereflow/sphere.hpp"

namespace sphereflow {

struct GenerationFailedError : std::runtime_error {
  explicit GenerationFailedError(const std::string& why)
      : std::runtime_error("curve generation failed (" + why + "); lower the amplitude") {}
};

// n equally spaced vertices at colatitude theta, traversed eastward so the
// north cap is the left side.
inline ClosedSphericalCurve gen_latitude_circle(double theta, std::size_t n) {
  if (!(theta > 0.0 && theta < kPi)) {
    throw std::invalid_argument("colatitude must be in (0, pi)");
  }
  if (n < 8) {
    throw std::invalid_argument("latitude circle needs n >= 8");
  }
  std::vector<SpherePoint> vs;
  vs.reserve(n);
  const double st = std::sin(theta);
  const double ct = std::cos(theta);
  for (std::size_t k = 0; k < n; ++k) {
    const double az = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(n);
    vs.push_back(SpherePoint::unchecked(Vec3{st * std::cos(az), st * std::sin(az), ct}));
  }
  return ClosedSphericalCurve(std::move(vs));
}

// Discretization of a great circle, oriented so +normal is on the left.
inline ClosedSphericalCurve gen_great_circle(const GreatCircle& g, std::size_t n) {
  if (n < 8) {
    throw std::invalid_argument("great circle needs n >= 8");
  }
  const Vec3 u = any_orthogonal(g.normal.vec());
  const Vec3 w = cross(g.normal.vec(), u);
  std::vector<SpherePoint> vs;
  vs.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double az = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(n);
    vs.push_back(SpherePoint::unchecked(normalized(u * std::cos(az) + w * std::sin(az))));
  }
  return ClosedSphericalCurve(std::move(vs));
}

struct PerturbationSpec {
  std::uint64_t seed = 0;
  double amplitude = 0.0;  // radians, must stay below 0.5
  std::vector<std::pair<int, double>> modes;  // (m >= 2, phase); empty = draw random modes
  int random_mode_count = 0;
  std::size_t n = 256;

  void validate() const {
    if (!(amplitude >= 0.0 && amplitude < 0.5)) {
      throw std::invalid_argument("amplitude must be in [0, 0.5)");
    }
    if (n < 8) {
      throw std::invalid_argument("need n >= 8");
    }
    for (const auto& [m, phase] : modes) {
      (void)phase;
      if (m < 2) {
        throw std::invalid_argument("perturbation modes must have m >= 2");
      }
    }
    if (modes.empty() && amplitude > 0.0 && random_mode_count < 1) {
      throw std::invalid_argument("no modes given and random_mode_count < 1");
    }
  }

  PerturbationSpec with_amplitude(double a) const {
    PerturbationSpec s = *this;
    s.amplitude = a;
    return s;
  }

  std::string describe() const {
    std::ostringstream os;
    os << "seed=" << seed << " amplitude=" << amplitude << " n=" << n << " modes=";
    if (modes.empty()) {
      os << "random:" << random_mode_count;
    } else {
      for (std::size_t i = 0; i < modes.size(); ++i) {
        os << (i ? "," : "") << modes[i].first << ":" << modes[i].second;
      }
    }
    return os.str();
  }
};

namespace detail {

inline std::vector<std::pair<int, double>> resolve_modes(const PerturbationSpec& spec) {
  if (!spec.modes.empty() || spec.amplitude == 0.0) {
    return spec.modes;
  }
  std::mt19937_64 rng(spec.seed);
  std::uniform_int_distribution<int> mode_dist(2, 6);
  std::uniform_real_distribution<double> phase_dist(0.0, 2.0 * kPi);
  std::vector<std::pair<int, double>> modes;
  modes.reserve(static_cast<std::size_t>(spec.random_mode_count));
  for (int k = 0; k < spec.random_mode_count; ++k) {
    modes.emplace_back(mode_dist(rng), phase_dist(rng));
  }
  return modes;
}

}  // namespace detail

// Equator displaced along meridians by a superposition of cosine modes,
// then offset to an exact bisector. Output always passes is_simple and
// is_bisector(1e-8).
inline ClosedSphericalCurve gen_perturbed_bisector(const PerturbationSpec& spec) {
  spec.validate();
  const std::vector<std::pair<int, double>> modes = detail::resolve_modes(spec);

  std::vector<SpherePoint> vs;
  vs.reserve(spec.n);
  for (std::size_t k = 0; k < spec.n; ++k) {
    const double s = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(spec.n);
    double lat = 0.0;
    if (!modes.empty()) {
      for (const auto& [m, phase] : modes) {
        lat += std::cos(m * s + phase);
      }
      lat *= spec.amplitude / static_cast<double>(modes.size());
    }
    const double cl = std::cos(lat), sl = std::sin(lat);
    vs.push_back(SpherePoint::unchecked(
        normalized(Vec3{cl * std::cos(s), cl * std::sin(s), sl})));
  }

  try {
    ClosedSphericalCurve raw(std::move(vs));
    if (!is_simple(raw)) {
      throw GenerationFailedError("perturbed curve self-intersects");
    }
    ClosedSphericalCurve out = make_bisector(raw);
    if (!is_bisector(out, 1e-8)) {
      throw GenerationFailedError("bisector offset did not converge");
    }
    return out;
  } catch (const GenerationFailedError&) {
    throw;
  } catch (const std::exception& e) {
    throw GenerationFailedError(e.what());
  }
}

// What experiments consume: either a latitude circle or a perturbed
// bisector.
struct CurveSpec {
  enum class Kind { kLatitude, kPerturbed };

  Kind kind = Kind::kPerturbed;
  double theta = kPi / 2;  // colatitude, kLatitude only
  std::size_t latitude_n = 256;
  PerturbationSpec perturbed;

  static CurveSpec latitude(double theta, std::size_t n) {
    CurveSpec s;
    s.kind = Kind::kLatitude;
    s.theta = theta;
    s.latitude_n = n;
    return s;
  }

  static CurveSpec perturbed_bisector(PerturbationSpec p) {
    CurveSpec s;
    s.kind = Kind::kPerturbed;
    s.perturbed = std::move(p);
    return s;
  }

  ClosedSphericalCurve generate() const {
    return kind == Kind::kLatitude ? gen_latitude_circle(theta, latitude_n)
                                   : gen_perturbed_bisector(perturbed);
  }

  std::string describe() const {
    if (kind == Kind::kLatitude) {
      std::ostringstream os;
      os << "latitude theta=" << theta << " n=" << latitude_n;
      return os.str();
    }
    return "perturbed " + perturbed.describe();
  }
};

}  // namespace sphereflow
