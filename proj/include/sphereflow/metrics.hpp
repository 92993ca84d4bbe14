#pragma once

// Curve metrics: Hausdorff distance and discrete Frechet distance for
// closed spherical curves, both over the geodesic (angular) ground
// distance so the same metric is used everywhere.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "sphereflow/curve.hpp"
#include "sphereflow/sphere.hpp"

namespace sphereflow {

inline constexpr double kHausdorffResolution = 1e-3;

namespace detail {

// Points along every edge of c spaced at most `step` apart (includes all
// vertices, excludes each edge's far endpoint).
inline std::vector<SpherePoint> sample_curve(const ClosedSphericalCurve& c, double step) {
  std::vector<SpherePoint> out;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const SpherePoint& a = c[i];
    const SpherePoint& b = c[c.next(i)];
    const double len = c.edge_length(i);
    const int pieces = std::max(1, static_cast<int>(std::ceil(len / step)));
    const double st = std::sin(len);
    for (int k = 0; k < pieces; ++k) {
      if (k == 0) {
        out.push_back(a);
        continue;
      }
      const double f = static_cast<double>(k) / pieces;
      const Vec3 x =
          a.vec() * (std::sin((1.0 - f) * len) / st) + b.vec() * (std::sin(f * len) / st);
      out.push_back(SpherePoint::unchecked(normalized(x)));
    }
  }
  return out;
}

inline double directed_hausdorff(const ClosedSphericalCurve& a, const ClosedSphericalCurve& b,
                                 double step) {
  double worst = 0.0;
  for (const SpherePoint& p : sample_curve(a, step)) {
    worst = std::max(worst, distance_point_to_curve(p, b));
  }
  return worst;
}

}  // namespace detail

inline double hausdorff_distance(const ClosedSphericalCurve& a, const ClosedSphericalCurve& b,
                                 double resolution = kHausdorffResolution) {
  const double step_a = std::min(resolution, a.min_edge_length());
  const double step_b = std::min(resolution, b.min_edge_length());
  return std::max(detail::directed_hausdorff(a, b, step_a),
                  detail::directed_hausdorff(b, a, step_b));
}

// Minimum separation between the two curves' point sets, sampled at the
// given resolution (exact per-arc projection from each sample).
inline double min_curve_separation(const ClosedSphericalCurve& a, const ClosedSphericalCurve& b,
                                   double resolution = kHausdorffResolution) {
  double best = std::numeric_limits<double>::infinity();
  for (const SpherePoint& p : detail::sample_curve(a, std::min(resolution, a.min_edge_length()))) {
    best = std::min(best, distance_point_to_curve(p, b));
  }
  for (const SpherePoint& p : detail::sample_curve(b, std::min(resolution, b.min_edge_length()))) {
    best = std::min(best, distance_point_to_curve(p, a));
  }
  return best;
}

// Optimal coupling found by the discrete Frechet dynamic program.
// alignment pairs index into the original vertex lists of a and b; when
// orientation_flipped is set the b indices run backwards (cyclically).
struct CouplingResult {
  double distance = 0.0;
  std::vector<std::pair<std::size_t, std::size_t>> alignment;
  bool orientation_flipped = false;
};

namespace detail {

// One closed-coupling DP: sequences a[0..na] and w[(s+j) mod nb] for
// j = 0..nb, both wrapping back to their start. dist(i, j) looks up the
// precomputed geodesic distance matrix.
template <typename Dist>
inline double closed_coupling_dp(std::size_t na, std::size_t nb, std::size_t shift,
                                 const Dist& dist, std::vector<double>* table) {
  const std::size_t rows = na + 1;
  const std::size_t cols = nb + 1;
  std::vector<double> local;
  std::vector<double>& dp = table ? *table : local;
  dp.assign(rows * cols, 0.0);
  const auto at = [&](std::size_t i, std::size_t j) -> double& { return dp[i * cols + j]; };

  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const double d = dist(i % na, (shift + j) % nb);
      if (i == 0 && j == 0) {
        at(i, j) = d;
        continue;
      }
      double reach = std::numeric_limits<double>::infinity();
      if (i > 0) reach = std::min(reach, at(i - 1, j));
      if (j > 0) reach = std::min(reach, at(i, j - 1));
      if (i > 0 && j > 0) reach = std::min(reach, at(i - 1, j - 1));
      at(i, j) = std::max(d, reach);
    }
  }
  return at(na, nb);
}

}  // namespace detail

// Discrete Frechet distance for closed curves: minimized over both
// orientations of b and all cyclic shifts of b's start vertex. Cost is
// O(2 * nb * na * nb); pass subsample_to > 0 to resample large curves
// down before coupling.
inline CouplingResult frechet_distance(const ClosedSphericalCurve& a_in,
                                       const ClosedSphericalCurve& b_in,
                                       std::size_t subsample_to = 0) {
  const ClosedSphericalCurve& a =
      (subsample_to > 0 && a_in.size() > subsample_to) ? resample(a_in, subsample_to) : a_in;
  const ClosedSphericalCurve b_fwd =
      (subsample_to > 0 && b_in.size() > subsample_to) ? resample(b_in, subsample_to) : b_in;
  const ClosedSphericalCurve b_rev = b_fwd.reversed();

  const std::size_t na = a.size();
  const std::size_t nb = b_fwd.size();

  double best = std::numeric_limits<double>::infinity();
  std::size_t best_shift = 0;
  bool best_flipped = false;

  std::vector<double> dmat(na * nb);
  for (int orient = 0; orient < 2; ++orient) {
    const ClosedSphericalCurve& b = orient == 0 ? b_fwd : b_rev;
    for (std::size_t i = 0; i < na; ++i) {
      for (std::size_t j = 0; j < nb; ++j) {
        dmat[i * nb + j] = geodesic_distance(a[i], b[j]);
      }
    }
    const auto dist = [&](std::size_t i, std::size_t j) { return dmat[i * nb + j]; };
    for (std::size_t s = 0; s < nb; ++s) {
      const double v = detail::closed_coupling_dp(na, nb, s, dist, nullptr);
      if (v < best) {
        best = v;
        best_shift = s;
        best_flipped = orient == 1;
      }
    }
  }

  // Re-run the winning configuration with a full table and backtrack.
  const ClosedSphericalCurve& b = best_flipped ? b_rev : b_fwd;
  for (std::size_t i = 0; i < na; ++i) {
    for (std::size_t j = 0; j < nb; ++j) {
      dmat[i * nb + j] = geodesic_distance(a[i], b[j]);
    }
  }
  const auto dist = [&](std::size_t i, std::size_t j) { return dmat[i * nb + j]; };
  std::vector<double> table;
  detail::closed_coupling_dp(na, nb, best_shift, dist, &table);
  const std::size_t cols = nb + 1;
  const auto at = [&](std::size_t i, std::size_t j) { return table[i * cols + j]; };

  // Map a working index j back to b_in's vertex numbering.
  const auto orig_index = [&](std::size_t j) -> std::size_t {
    const std::size_t k = (best_shift + j) % nb;
    return best_flipped ? nb - 1 - k : k;
  };

  std::vector<std::pair<std::size_t, std::size_t>> alignment;
  std::size_t i = na, j = nb;
  alignment.emplace_back(i % na, orig_index(j));
  while (i > 0 || j > 0) {
    std::size_t ni = i, nj = j;
    double v = std::numeric_limits<double>::infinity();
    if (i > 0 && j > 0 && at(i - 1, j - 1) <= v) {
      v = at(i - 1, j - 1);
      ni = i - 1;
      nj = j - 1;
    }
    if (i > 0 && at(i - 1, j) < v) {
      v = at(i - 1, j);
      ni = i - 1;
      nj = j;
    }
    if (j > 0 && at(i, j - 1) < v) {
      v = at(i, j - 1);
      ni = i;
      nj = j - 1;
    }
    i = ni;
    j = nj;
    alignment.emplace_back(i % na, orig_index(j));
  }
  std::reverse(alignment.begin(), alignment.end());

  return CouplingResult{best, std::move(alignment), best_flipped};
}

}  // namespace sphereflow
