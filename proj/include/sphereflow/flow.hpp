#pragma once

// Curvature-flow integrator: explicit Euler steps of dGamma/dt = kappa with
// per-step uniform resampling, CFL-limited time steps, singularity
// detection, and intersection tracking between paired evolutions.

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sphereflow/analysis.hpp"
#include "sphereflow/curve.hpp"
#include "sphereflow/intersections.hpp"
#include "sphereflow/sphere.hpp"

namespace sphereflow {

struct NonSimpleAfterStepError : std::runtime_error {
  NonSimpleAfterStepError()
      : std::runtime_error(
            "moved polygon self-intersects (dt too large or impending singularity)") {}
};

struct FlowParams {
  double cfl_factor = 0.25;       // dt = cfl_factor * h_min^2
  std::size_t resample_n = 256;   // vertices after each step
  double t_end = 1.0;
  std::size_t record_every = 50;  // steps between records
  double singular_area = 1e-3;    // stop when a side area drops below, sr
  double max_curvature = 1e3;     // stop when max |kappa| exceeds, 1/rad

  void validate() const {
    if (!(cfl_factor > 0.0 && cfl_factor <= 0.5)) {
      throw std::invalid_argument("cfl_factor must be in (0, 0.5]");
    }
    if (resample_n < 32) {
      throw std::invalid_argument("resample_n must be at least 32");
    }
    if (!(singular_area > 0.0)) {
      throw std::invalid_argument("singular_area must be positive");
    }
    if (!(t_end >= 0.0)) {
      throw std::invalid_argument("t_end must be non-negative");
    }
    if (record_every == 0) {
      throw std::invalid_argument("record_every must be at least 1");
    }
    if (!(max_curvature > 0.0)) {
      throw std::invalid_argument("max_curvature must be positive");
    }
  }
};

struct DiagnosticsRecord {
  double length = 0.0;
  double area_left = 0.0;
  double max_abs_curvature = 0.0;
  double gage_residual = 0.0;  // NaN when the great-circle fit degenerates
};

enum class TerminalKind { kReachedEnd, kSingular, kNonSimple };

struct TerminalStatus {
  TerminalKind kind = TerminalKind::kReachedEnd;
  double time = 0.0;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<ClosedSphericalCurve> curves;
  std::vector<DiagnosticsRecord> diagnostics;
  TerminalStatus terminal_status;

  const ClosedSphericalCurve& final_curve() const { return curves.back(); }
  double final_time() const { return times.back(); }
};

inline double stable_dt(const ClosedSphericalCurve& c, double cfl_factor) {
  const double h = c.min_edge_length();
  return cfl_factor * h * h;
}

// One explicit Euler step: each vertex moves along exp_map by dt times its
// curvature vector, then the polygon is resampled to resample_n vertices.
inline ClosedSphericalCurve flow_step(const ClosedSphericalCurve& c, double dt,
                                      std::size_t resample_n) {
  const std::vector<TangentVector> kappa = discrete_curvature(c);
  std::vector<SpherePoint> moved;
  moved.reserve(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    moved.push_back(exp_map(c[i], kappa[i].v * dt));
  }
  try {
    ClosedSphericalCurve out = resample(ClosedSphericalCurve(std::move(moved)), resample_n);
    if (!is_simple(out)) {
      throw NonSimpleAfterStepError{};
    }
    return out;
  } catch (const std::invalid_argument&) {
    // collapsed edges are the same failure mode as self-intersection here
    throw NonSimpleAfterStepError{};
  }
}

namespace detail {

inline DiagnosticsRecord diagnostics_from_scan(const ClosedSphericalCurve& c,
                                               const CurvatureScan& scan) {
  DiagnosticsRecord d;
  d.length = total_length(c);
  d.area_left = 2.0 * kPi - scan.turning_sum;
  d.max_abs_curvature = scan.max_magnitude;
  try {
    d.gage_residual = gage_residual(c);
  } catch (const DegenerateFitError&) {
    d.gage_residual = std::numeric_limits<double>::quiet_NaN();
  }
  return d;
}

inline bool hits_singularity(const CurvatureScan& scan, const FlowParams& params) {
  const double area_left = 2.0 * kPi - scan.turning_sum;
  if (std::min(area_left, 4.0 * kPi - area_left) < params.singular_area) return true;
  return scan.max_magnitude > params.max_curvature;
}

}  // namespace detail

// Evolves every curve on one shared time grid (dt is the minimum of the
// per-curve CFL bounds each step, so record times coincide exactly). The
// run stops at t_end or at the first terminal event of any curve, in which
// case curves that were still alive report ReachedEnd at the stop time.
//
// Self-intersection checking is amortized: a grid scan certifies a lower
// bound on the separation between non-adjacent arcs, each step spends at
// most 2*(dt*max_kappa + resample corner cut) of it, and the full scan
// reruns only when the budget is gone or a record is due. Crossings
// cannot appear while certified separation remains, so this detects
// exactly what per-step scanning would.
inline std::vector<Trajectory> evolve_shared(const std::vector<ClosedSphericalCurve>& inputs,
                                             const FlowParams& params) {
  params.validate();
  const std::size_t m = inputs.size();
  if (m == 0) {
    throw std::invalid_argument("evolve_shared: no curves");
  }

  std::vector<ClosedSphericalCurve> state;
  state.reserve(m);
  for (const ClosedSphericalCurve& c : inputs) {
    if (!is_simple(c)) {
      throw NonSimpleCurveError{};
    }
    state.push_back(resample(c, params.resample_n));
  }

  std::vector<Trajectory> out(m);
  std::vector<detail::CurvatureScan> scans(m);
  std::vector<double> budget(m, 0.0);

  const auto rescan_simplicity = [&](std::size_t i) {
    const double window = 8.0 * state[i].min_edge_length();
    const detail::SimplicityScan s = detail::simplicity_scan(state[i], window);
    budget[i] = 0.5 * s.separation_bound;
    return s.simple;
  };
  const auto finish = [&](std::size_t who, TerminalKind kind, double when) {
    for (std::size_t k = 0; k < m; ++k) {
      out[k].terminal_status = {k == who ? kind : TerminalKind::kReachedEnd, when};
    }
  };
  const auto record_all = [&](double t) {
    for (std::size_t i = 0; i < m; ++i) {
      out[i].times.push_back(t);
      out[i].curves.push_back(state[i]);
      out[i].diagnostics.push_back(detail::diagnostics_from_scan(state[i], scans[i]));
    }
  };

  for (std::size_t i = 0; i < m; ++i) {
    scans[i] = detail::curvature_scan(state[i]);
    if (!rescan_simplicity(i)) {
      throw NonSimpleCurveError{};
    }
  }

  double t = 0.0;
  record_all(0.0);
  for (std::size_t i = 0; i < m; ++i) {
    if (detail::hits_singularity(scans[i], params)) {
      finish(i, TerminalKind::kSingular, 0.0);
      return out;
    }
  }
  if (params.t_end == 0.0) {
    finish(m, TerminalKind::kReachedEnd, 0.0);
    return out;
  }

  std::size_t steps = 0;
  while (t < params.t_end) {
    double dt = std::numeric_limits<double>::infinity();
    for (const ClosedSphericalCurve& c : state) {
      dt = std::min(dt, stable_dt(c, params.cfl_factor));
    }
    dt = std::min(dt, params.t_end - t);
    const double t_next =
        params.t_end - (t + dt) < 1e-15 * std::max(1.0, params.t_end) ? params.t_end : t + dt;

    for (std::size_t i = 0; i < m; ++i) {
      try {
        std::vector<SpherePoint> moved;
        moved.reserve(state[i].size());
        for (std::size_t v = 0; v < state[i].size(); ++v) {
          moved.push_back(exp_map(state[i][v], scans[i].kappa[v].v * dt));
        }
        ClosedSphericalCurve next =
            resample(ClosedSphericalCurve(std::move(moved)), params.resample_n);
        const double corner_cut =
            0.5 * next.max_edge_length() * next.max_edge_length() * scans[i].max_magnitude;
        budget[i] -= 2.0 * (dt * scans[i].max_magnitude + corner_cut);
        state[i] = std::move(next);
        scans[i] = detail::curvature_scan(state[i]);  // throws on cusp vertices
      } catch (const std::invalid_argument&) {
        finish(i, TerminalKind::kNonSimple, t_next);
        return out;
      }
      if (budget[i] <= 0.0 && !rescan_simplicity(i)) {
        finish(i, TerminalKind::kNonSimple, t_next);
        return out;
      }
    }
    t = t_next;
    ++steps;

    for (std::size_t i = 0; i < m; ++i) {
      if (detail::hits_singularity(scans[i], params)) {
        for (std::size_t k = 0; k < m; ++k) {
          if (!rescan_simplicity(k)) {
            finish(k, TerminalKind::kNonSimple, t);
            return out;
          }
        }
        record_all(t);
        finish(i, TerminalKind::kSingular, t);
        return out;
      }
    }
    if (steps % params.record_every == 0 || t == params.t_end) {
      for (std::size_t i = 0; i < m; ++i) {
        if (!rescan_simplicity(i)) {
          finish(i, TerminalKind::kNonSimple, t);
          return out;
        }
      }
      record_all(t);
    }
  }
  if (out[0].times.back() != params.t_end) {
    record_all(params.t_end);
  }
  finish(m, TerminalKind::kReachedEnd, params.t_end);
  return out;
}

inline Trajectory evolve(const ClosedSphericalCurve& c, const FlowParams& params) {
  return std::move(evolve_shared({c}, params)[0]);
}

inline std::pair<Trajectory, Trajectory> evolve_pair(const ClosedSphericalCurve& a,
                                                     const ClosedSphericalCurve& b,
                                                     const FlowParams& params) {
  std::vector<Trajectory> both = evolve_shared({a, b}, params);
  return {std::move(both[0]), std::move(both[1])};
}

// A tracked intersection point through record times.
struct IntersectionTrack {
  enum class Status { kAlive, kMerged, kLost };

  std::vector<double> times;
  std::vector<SpherePoint> points;
  Status status = Status::kAlive;
  double status_time = 0.0;  // merge/loss time when not alive
};

// Continues intersection points of two trajectories (sharing a time grid)
// by nearest-neighbor matching with rejection radius 10*sqrt(dt_record).
// Unmatched old points end as Merged (their partner was claimed) or Lost;
// unmatched new points start fresh tracks.
inline std::vector<IntersectionTrack> track_intersections(const Trajectory& ta,
                                                          const Trajectory& tb) {
  if (ta.times.size() != tb.times.size()) {
    throw std::invalid_argument("trajectories do not share a time grid");
  }
  std::vector<IntersectionTrack> tracks;

  for (std::size_t k = 0; k < ta.times.size(); ++k) {
    if (std::abs(ta.times[k] - tb.times[k]) > 1e-12) {
      throw std::invalid_argument("trajectories do not share a time grid");
    }
    const double t = ta.times[k];
    const std::vector<SpherePoint> pts = intersection_points(ta.curves[k], tb.curves[k]).points;

    if (k == 0) {
      for (const SpherePoint& p : pts) {
        IntersectionTrack tr;
        tr.times.push_back(t);
        tr.points.push_back(p);
        tracks.push_back(std::move(tr));
      }
      continue;
    }

    const double rho = 10.0 * std::sqrt(ta.times[k] - ta.times[k - 1]);
    std::vector<std::size_t> alive;
    for (std::size_t i = 0; i < tracks.size(); ++i) {
      if (tracks[i].status == IntersectionTrack::Status::kAlive) alive.push_back(i);
    }

    struct Cand {
      double d;
      std::size_t track;
      std::size_t pt;
    };
    std::vector<Cand> cands;
    for (std::size_t ai = 0; ai < alive.size(); ++ai) {
      const SpherePoint& last = tracks[alive[ai]].points.back();
      for (std::size_t pi = 0; pi < pts.size(); ++pi) {
        const double d = geodesic_distance(last, pts[pi]);
        if (d <= rho) cands.push_back({d, alive[ai], pi});
      }
    }
    std::sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) { return x.d < y.d; });

    std::vector<bool> track_used(tracks.size(), false);
    std::vector<bool> pt_used(pts.size(), false);
    for (const Cand& cd : cands) {
      if (track_used[cd.track] || pt_used[cd.pt]) continue;
      track_used[cd.track] = true;
      pt_used[cd.pt] = true;
      tracks[cd.track].times.push_back(t);
      tracks[cd.track].points.push_back(pts[cd.pt]);
    }

    for (std::size_t ai : alive) {
      if (track_used[ai]) continue;
      // had a candidate partner that someone else claimed -> merged
      bool had_candidate = false;
      for (const Cand& cd : cands) {
        if (cd.track == ai) {
          had_candidate = true;
          break;
        }
      }
      tracks[ai].status = had_candidate ? IntersectionTrack::Status::kMerged
                                        : IntersectionTrack::Status::kLost;
      tracks[ai].status_time = t;
    }
    for (std::size_t pi = 0; pi < pts.size(); ++pi) {
      if (pt_used[pi]) continue;
      IntersectionTrack tr;  // new tracks after t=0 are reported, not expected
      tr.times.push_back(t);
      tr.points.push_back(pts[pi]);
      tracks.push_back(std::move(tr));
    }
  }
  return tracks;
}

inline std::size_t alive_track_count(const std::vector<IntersectionTrack>& tracks) {
  std::size_t n = 0;
  for (const IntersectionTrack& t : tracks) {
    if (t.status == IntersectionTrack::Status::kAlive) ++n;
  }
  return n;
}

}  // namespace sphereflow
