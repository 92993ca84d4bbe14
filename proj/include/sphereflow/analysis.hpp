#pragma once

// Measurement instruments: best-fit great circle and residual, band
// multiplicity at a great circle, intersection counting, and the
// Gauss-Bonnet consistency defect.

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "sphereflow/curve.hpp"
#include "sphereflow/intersections.hpp"
#include "sphereflow/sphere.hpp"

namespace sphereflow {

struct DegenerateFitError : std::runtime_error {
  DegenerateFitError()
      : std::runtime_error("curve has no preferred plane (two smallest eigenvalues tie)") {}
};

struct BandDegenerateError : std::runtime_error {
  BandDegenerateError()
      : std::runtime_error("a vertex lies on the 2r band boundary; perturb r and retry") {}
};

namespace detail {

struct SymmetricEigen3 {
  std::array<double, 3> values;  // ascending
  std::array<Vec3, 3> vectors;   // matching columns, unit
};

// Cyclic Jacobi rotations; plenty for 3x3 symmetric matrices.
inline SymmetricEigen3 eigen_symmetric3(std::array<std::array<double, 3>, 3> m) {
  std::array<std::array<double, 3>, 3> v{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = std::abs(m[0][1]) + std::abs(m[0][2]) + std::abs(m[1][2]);
    if (off < 1e-15) break;
    for (int p = 0; p < 2; ++p) {
      for (int q = p + 1; q < 3; ++q) {
        if (std::abs(m[p][q]) < 1e-18) continue;
        const double theta = 0.5 * std::atan2(2.0 * m[p][q], m[q][q] - m[p][p]);
        const double c = std::cos(theta), s = std::sin(theta);
        for (int k = 0; k < 3; ++k) {
          const double mkp = m[k][p], mkq = m[k][q];
          m[k][p] = c * mkp - s * mkq;
          m[k][q] = s * mkp + c * mkq;
        }
        for (int k = 0; k < 3; ++k) {
          const double mpk = m[p][k], mqk = m[q][k];
          m[p][k] = c * mpk - s * mqk;
          m[q][k] = s * mpk + c * mqk;
        }
        for (int k = 0; k < 3; ++k) {
          const double vkp = v[k][p], vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }
  std::array<int, 3> order{0, 1, 2};
  std::sort(order.begin(), order.end(), [&](int i, int j) { return m[i][i] < m[j][j]; });
  SymmetricEigen3 out;
  for (int k = 0; k < 3; ++k) {
    out.values[k] = m[order[k]][order[k]];
    out.vectors[k] = normalized(Vec3{v[0][order[k]], v[1][order[k]], v[2][order[k]]});
  }
  return out;
}

}  // namespace detail

// Great circle minimizing the edge-length-weighted sum of squared plane
// distances sum w_i (p_i . n)^2, i.e. the smallest eigenvector of the
// second-moment matrix. The sign is fixed so the curve's left normals
// point into +normal's hemisphere on balance, with a lexicographic
// tie-break, making downstream residuals reproducible.
inline GreatCircle fit_great_circle(const ClosedSphericalCurve& c) {
  std::array<std::array<double, 3>, 3> m{};
  const std::size_t n = c.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double w = 0.5 * (c.edge_length(c.prev(i)) + c.edge_length(i));
    const Vec3 p = c[i].vec();
    const double px[3] = {p.x, p.y, p.z};
    for (int r = 0; r < 3; ++r) {
      for (int col = 0; col < 3; ++col) {
        m[r][col] += w * px[r] * px[col];
      }
    }
  }
  const detail::SymmetricEigen3 eig = detail::eigen_symmetric3(m);
  if (eig.values[1] - eig.values[0] < 1e-12) {
    throw DegenerateFitError{};
  }
  Vec3 normal = eig.vectors[0];

  double side = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = 0.5 * (c.edge_length(c.prev(i)) + c.edge_length(i));
    side += w * dot(detail::left_normal(c, i), normal);
  }
  if (side < -1e-12) {
    normal = -normal;
  } else if (side <= 1e-12) {
    const double lex[3] = {normal.x, normal.y, normal.z};
    for (int k = 0; k < 3; ++k) {
      if (std::abs(lex[k]) > 1e-12) {
        if (lex[k] < 0) normal = -normal;
        break;
      }
    }
  }
  return GreatCircle{SpherePoint::unchecked(normalized(normal))};
}

// Max vertex distance to the fitted circle; equals the Hausdorff distance
// to it up to edge-sampling slack.
inline double gage_residual(const ClosedSphericalCurve& c) {
  const GreatCircle g = fit_great_circle(c);
  double worst = 0.0;
  for (const SpherePoint& p : c.vertices()) {
    worst = std::max(worst, distance_to_great_circle(p, g));
  }
  return worst;
}

struct MultiplicityReport {
  std::size_t value = 0;
  // (start_edge, end_edge) of each maximal sub-arc inside the open 2r band.
  std::vector<std::pair<std::size_t, std::size_t>> components;
};

namespace detail {

// z(s) = dot(gamma(s), n) along edge a->b is R*sin(s + psi); monotone
// pieces split at the extremum, then each level crossing has a closed form.
struct EdgeBandPieces {
  // breakpoints 0 = s_0 < ... < s_k = len, with inside flag and min |z|
  // per piece.
  std::vector<double> breaks;
  std::vector<bool> inside;
  std::vector<double> min_abs_z;
};

inline EdgeBandPieces split_edge_band(const SpherePoint& a, const SpherePoint& b, double len,
                                      const Vec3& n, double c2) {
  const Vec3 d = depart_dir(a, b);
  const double A = dot(a.vec(), n);
  const double B = dot(d, n);
  const double R = std::hypot(A, B);
  const auto z_at = [&](double s) { return A * std::cos(s) + B * std::sin(s); };

  std::vector<double> cuts{0.0, len};
  const double psi = std::atan2(A, B);  // z = R*sin(s + psi)
  for (int k = -2; k <= 2; ++k) {
    const double s_ext = kPi / 2 - psi + k * kPi;
    if (s_ext > 1e-15 && s_ext < len - 1e-15) cuts.push_back(s_ext);
  }
  std::sort(cuts.begin(), cuts.end());

  // Crossings of z = +-c2 on each monotone piece.
  std::vector<double> cross_pts;
  if (R > 0.0) {
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double s0 = cuts[i], s1 = cuts[i + 1];
      const double z0 = z_at(s0), z1 = z_at(s1);
      for (const double level : {c2, -c2}) {
        if ((z0 - level) * (z1 - level) < 0.0) {
          // solve R*sin(s + psi) = level on the monotone piece
          const double base = std::asin(clamp_unit(level / R));
          for (const double cand : {base - psi, kPi - base - psi, base - psi + 2 * kPi,
                                    kPi - base - psi - 2 * kPi, base - psi - 2 * kPi,
                                    kPi - base - psi + 2 * kPi}) {
            if (cand > s0 - 1e-12 && cand < s1 + 1e-12) {
              cross_pts.push_back(std::clamp(cand, s0, s1));
              break;
            }
          }
        }
      }
    }
  }

  EdgeBandPieces out;
  out.breaks = cuts;
  out.breaks.insert(out.breaks.end(), cross_pts.begin(), cross_pts.end());
  std::sort(out.breaks.begin(), out.breaks.end());
  out.breaks.erase(std::unique(out.breaks.begin(), out.breaks.end(),
                               [](double x, double y) { return std::abs(x - y) < 1e-14; }),
                   out.breaks.end());
  if (out.breaks.front() > 0.0) out.breaks.insert(out.breaks.begin(), 0.0);
  if (out.breaks.back() < len) out.breaks.push_back(len);

  for (std::size_t i = 0; i + 1 < out.breaks.size(); ++i) {
    const double s0 = out.breaks[i], s1 = out.breaks[i + 1];
    const double zm = z_at(0.5 * (s0 + s1));
    out.inside.push_back(std::abs(zm) < c2);
    double mn = std::min(std::abs(z_at(s0)), std::abs(z_at(s1)));
    if (z_at(s0) * z_at(s1) < 0.0) mn = 0.0;
    out.min_abs_z.push_back(mn);
  }
  return out;
}

}  // namespace detail

// Number of connected components of the curve inside the open 2r band of
// g that reach the inner r band, with exact band-crossing interpolation
// along edges. Requires 0 < r < pi/4 so the bands stay embedded.
inline MultiplicityReport r_multiplicity(const ClosedSphericalCurve& c, const GreatCircle& g,
                                         double r) {
  if (!(r > 0.0 && r < kPi / 4)) {
    throw std::invalid_argument("r_multiplicity requires 0 < r < pi/4");
  }
  const Vec3 n = g.normal.vec();
  const double c2 = std::sin(2.0 * r);
  const double c1 = std::sin(r);
  const std::size_t nv = c.size();

  for (const SpherePoint& p : c.vertices()) {
    const double lat = std::abs(std::asin(clamp_unit(dot(p.vec(), n))));
    if (std::abs(lat - 2.0 * r) < 1e-12) {
      throw BandDegenerateError{};
    }
  }

  // Cyclic list of sub-arcs with inside flag and inner-band reach.
  struct Piece {
    std::size_t edge;
    bool inside;
    bool reaches_inner;
  };
  std::vector<Piece> pieces;
  for (std::size_t i = 0; i < nv; ++i) {
    const detail::EdgeBandPieces ep =
        detail::split_edge_band(c[i], c[c.next(i)], c.edge_length(i), n, c2);
    for (std::size_t k = 0; k < ep.inside.size(); ++k) {
      pieces.push_back(Piece{i, ep.inside[k], ep.min_abs_z[k] <= c1});
    }
  }

  const std::size_t m = pieces.size();
  bool all_inside = true;
  for (const Piece& p : pieces) all_inside = all_inside && p.inside;
  MultiplicityReport report;
  if (all_inside) {
    report.components.emplace_back(0, nv - 1);
    bool reach = false;
    for (const Piece& p : pieces) reach = reach || p.reaches_inner;
    report.value = reach ? 1 : 0;
    return report;
  }

  // Start the cyclic walk at an outside piece so every component is a
  // contiguous run.
  std::size_t start = 0;
  while (pieces[start].inside) ++start;
  for (std::size_t step = 0; step < m; ++step) {
    const std::size_t cur = (start + step) % m;
    if (!pieces[cur].inside) {
      continue;
    }
    // begin of a component?
    const std::size_t prev = (cur + m - 1) % m;
    if (!pieces[prev].inside) {
      std::size_t end = cur;
      bool reach = pieces[cur].reaches_inner;
      std::size_t scan = cur;
      while (pieces[(scan + 1) % m].inside) {
        scan = (scan + 1) % m;
        reach = reach || pieces[scan].reaches_inner;
        end = scan;
      }
      report.components.emplace_back(pieces[cur].edge, pieces[end].edge);
      if (reach) ++report.value;
    }
  }
  return report;
}

struct IntersectionCount {
  std::size_t count = 0;
  bool degenerate = false;
};

// Cardinality of intersection_points; tangential contacts are counted
// once and flagged, and a coplanar overlap is reported as a flagged count
// rather than raised.
inline IntersectionCount intersection_count(const ClosedSphericalCurve& a,
                                            const ClosedSphericalCurve& b) {
  const detail::RawIntersections raw = detail::collect_intersections(a, b);
  IntersectionCount out;
  out.count = raw.points.size() + (raw.overlap ? 1 : 0);
  out.degenerate = raw.touching || raw.overlap;
  return out;
}

// Total turning reconstituted from the curvature discretization,
// sum_i |kappa_i| * sign_i * mean adjacent edge length.
inline double signed_curvature_integral(const ClosedSphericalCurve& c) {
  const std::vector<TangentVector> kappa = discrete_curvature(c);
  double sum = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double avg_len = 0.5 * (c.edge_length(c.prev(i)) + c.edge_length(i));
    const double sign = dot(kappa[i].v, detail::left_normal(c, i)) >= 0.0 ? 1.0 : -1.0;
    sum += sign * kappa[i].length() * avg_len;
  }
  return sum;
}

// | integral of curvature - (2*pi - A_left) |. Algebraically near zero
// because the same turning angles feed both sides; the interesting use is
// comparing either side against smooth closed forms.
inline double gauss_bonnet_defect(const ClosedSphericalCurve& c) {
  const double lhs = signed_curvature_integral(c);
  const double area_left = enclosed_areas(c).left;
  return std::abs(lhs - (2.0 * kPi - area_left));
}

}  // namespace sphereflow
