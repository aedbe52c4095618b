#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "nanorace/error.hpp"
#include "nanorace/geometry.hpp"
#include "nanorace/rng.hpp"
#include "nanorace/vehicle.hpp"

namespace nanorace {

// Relative pose over one sampling window, from ground truth and from
// onboard odometry.
struct PosePairWindow {
  Pose2 truth_delta;
  Pose2 odom_delta;
  double window_s = 10.0;
};

// Nearest-rank quantile of an unsorted sample, f in (0, 1].
inline double nearest_rank_quantile(std::vector<double> v, double f) {
  if (v.empty()) fail(ErrorCode::empty_input, "quantile of empty sample");
  f = std::clamp(f, 0.0, 1.0);
  const int n = static_cast<int>(v.size());
  int k = static_cast<int>(std::ceil(f * n));
  k = std::clamp(k, 1, n);
  std::nth_element(v.begin(), v.begin() + (k - 1), v.end());
  return v[k - 1];
}

inline double median(std::vector<double> v) {
  if (v.empty()) fail(ErrorCode::empty_input, "median of empty sample");
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  if (n % 2 == 1) return v[n / 2];
  return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Fits per-axis zero-mean Gaussians to windowed odometry errors and rescales
// the stds to per-sqrt-second units.
inline ErrorModel fit_error_model(const std::vector<PosePairWindow>& windows) {
  if (windows.size() < 2)
    fail(ErrorCode::insufficient_data, "need at least 2 windows to fit");
  double sx = 0.0, sy = 0.0, syaw = 0.0;
  for (const auto& w : windows) {
    if (w.window_s <= 0.0)
      fail(ErrorCode::bad_config, "window length must be positive");
    const double ex = w.odom_delta.pos.x - w.truth_delta.pos.x;
    const double ey = w.odom_delta.pos.y - w.truth_delta.pos.y;
    const double eyaw = wrap_angle(w.odom_delta.yaw - w.truth_delta.yaw);
    sx += ex * ex / w.window_s;
    sy += ey * ey / w.window_s;
    syaw += eyaw * eyaw / w.window_s;
  }
  const double n = static_cast<double>(windows.size());
  ErrorModel m;
  m.sigma_x = std::sqrt(sx / n);
  m.sigma_y = std::sqrt(sy / n);
  m.sigma_yaw = std::sqrt(syaw / n);
  return m;
}

// Applies the drift model to a nominal pose series sampled at dt: body-frame
// increments are re-composed with per-step Gaussian noise, so accumulated
// yaw error rotates everything that follows.
inline std::vector<Pose2> corrupt_trajectory(const std::vector<Pose2>& nominal,
                                             const ErrorModel& m, std::uint64_t seed,
                                             double dt) {
  if (dt <= 0.0) fail(ErrorCode::bad_config, "dt must be positive");
  if (m.exactly_zero()) return nominal;  // perfect odometry, bit-exact
  std::vector<Pose2> out;
  out.reserve(nominal.size());
  if (nominal.empty()) return out;
  RngStream rng(seed);
  out.push_back(nominal.front());
  const double root_dt = std::sqrt(dt);
  for (std::size_t i = 1; i < nominal.size(); ++i) {
    Pose2 rel = relative_pose(nominal[i - 1], nominal[i]);
    if (m.stochastic()) {
      rel.pos.x += m.sigma_x * root_dt * rng.gaussian();
      rel.pos.y += m.sigma_y * root_dt * rng.gaussian();
      rel.yaw += m.sigma_yaw * root_dt * rng.gaussian();
    }
    rel.pos.x += m.bias_x * dt;
    rel.pos.y += m.bias_y * dt;
    rel.yaw += m.bias_yaw * dt;
    out.push_back(compose(out.back(), rel));
  }
  return out;
}

// Axis-aligned hull of every point of every trajectory.
inline Rect reference_bbox(const std::vector<std::vector<Pose2>>& trajectories) {
  Rect box{{kInf, kInf}, {-kInf, -kInf}};
  bool any = false;
  for (const auto& traj : trajectories) {
    for (const auto& p : traj) {
      any = true;
      box.min.x = std::min(box.min.x, p.pos.x);
      box.min.y = std::min(box.min.y, p.pos.y);
      box.max.x = std::max(box.max.x, p.pos.x);
      box.max.y = std::max(box.max.y, p.pos.y);
    }
  }
  if (!any) fail(ErrorCode::empty_input, "no points to bound");
  return box;
}

enum class MarginMetric { LINF, L2 };

// Distance from p to the box along the chosen exterior metric; 0 inside.
inline double exterior_distance(Vec2 p, const Rect& box,
                                MarginMetric metric = MarginMetric::LINF) {
  const double dx = std::max({0.0, box.min.x - p.x, p.x - box.max.x});
  const double dy = std::max({0.0, box.min.y - p.y, p.y - box.max.y});
  if (metric == MarginMetric::LINF) return std::max(dx, dy);
  return std::hypot(dx, dy);
}

// Largest exterior distance of the trajectory from the box; 0 when it never
// leaves.
inline double min_safety_margin(const std::vector<Pose2>& traj, const Rect& box,
                                MarginMetric metric = MarginMetric::LINF) {
  double worst = 0.0;
  for (const auto& p : traj)
    worst = std::max(worst, exterior_distance(p.pos, box, metric));
  return worst;
}

struct MarginStats {
  std::vector<double> margins;                    // one per realization
  std::vector<double> thresholds;                 // bands tracked below
  std::vector<std::vector<double>> time_outside;  // [threshold][realization], s
  std::vector<std::vector<int>> crossings;        // [threshold][realization]

  // Fraction of realizations whose margin stays within `thr`.
  double fraction_within(double thr) const {
    if (margins.empty()) fail(ErrorCode::empty_input, "empty margin study");
    std::size_t n = 0;
    for (const double m : margins)
      if (m <= thr) ++n;
    return static_cast<double>(n) / static_cast<double>(margins.size());
  }

  double margin_quantile(double f) const { return nearest_rank_quantile(margins, f); }

  std::size_t threshold_index(double thr) const {
    for (std::size_t i = 0; i < thresholds.size(); ++i)
      if (thresholds[i] == thr) return i;
    fail(ErrorCode::bad_config, "threshold not tracked by the study");
  }
};

// Monte Carlo margin study: n drift-corrupted realizations of the nominal
// trajectory, margins measured against `box` (default: the nominal's own
// bounding box). Realization r uses the rng stream derived from (seed, r),
// so results do not depend on evaluation order.
inline MarginStats margin_study(const std::vector<Pose2>& nominal, const ErrorModel& m,
                                int n, std::uint64_t seed, double dt,
                                std::vector<double> thresholds = {1.0, 2.0},
                                std::optional<Rect> box = std::nullopt,
                                MarginMetric metric = MarginMetric::LINF) {
  if (n < 1) fail(ErrorCode::bad_config, "need n >= 1 realizations");
  if (nominal.empty()) fail(ErrorCode::empty_input, "empty nominal trajectory");
  const Rect ref = box ? *box : reference_bbox({nominal});

  MarginStats stats;
  stats.thresholds = thresholds;
  stats.margins.reserve(n);
  stats.time_outside.assign(thresholds.size(), {});
  stats.crossings.assign(thresholds.size(), {});
  for (auto& v : stats.time_outside) v.reserve(n);
  for (auto& v : stats.crossings) v.reserve(n);

  std::vector<double> ext(nominal.size());
  for (int r = 0; r < n; ++r) {
    const auto traj = corrupt_trajectory(nominal, m, derive_seed(seed, r), dt);
    double worst = 0.0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
      ext[i] = exterior_distance(traj[i].pos, ref, metric);
      worst = std::max(worst, ext[i]);
    }
    stats.margins.push_back(worst);
    for (std::size_t ti = 0; ti < thresholds.size(); ++ti) {
      const double thr = thresholds[ti];
      long outside = 0;
      int crossings = 0;
      bool prev_out = false;
      for (std::size_t i = 0; i < traj.size(); ++i) {
        const bool out = ext[i] > thr;
        if (out) ++outside;
        if (i > 0 && out != prev_out) ++crossings;
        prev_out = out;
      }
      stats.time_outside[ti].push_back(outside * dt);
      stats.crossings[ti].push_back(crossings);
    }
  }
  return stats;
}

// Nominal reference path: laps of a centered square at constant speed with
// instant corner turns, direction alternating every lap.
inline std::vector<Pose2> square_lap_trajectory(double half_side, double speed,
                                                double dt, double duration,
                                                bool first_lap_ccw = true) {
  if (half_side < 0.0 || speed <= 0.0 || dt <= 0.0 || duration <= 0.0)
    fail(ErrorCode::bad_config, "invalid square lap parameters");
  const int n = static_cast<int>(std::llround(duration / dt));
  const double perimeter = 8.0 * half_side;
  std::vector<Pose2> out;
  out.reserve(n + 1);

  const auto corner = [half_side](int i) {
    switch (i & 3) {
      case 0: return Vec2{-half_side, -half_side};
      case 1: return Vec2{half_side, -half_side};
      case 2: return Vec2{half_side, half_side};
      default: return Vec2{-half_side, half_side};
    }
  };
  const auto pose_at = [&](double s, bool ccw) -> Pose2 {
    if (perimeter == 0.0) return {{-half_side, -half_side}, 0.0};
    double u = std::fmod(s, perimeter);
    if (!ccw) u = perimeter - u;
    const int edge = std::min(3, static_cast<int>(u / (2.0 * half_side)));
    const double local = u - edge * 2.0 * half_side;
    const Vec2 a = corner(edge);
    const Vec2 b = corner(edge + 1);
    const Vec2 dir = (b - a) * (1.0 / (2.0 * half_side));
    const Vec2 pos = a + dir * local;
    double yaw = std::atan2(dir.y, dir.x);
    if (!ccw) yaw = wrap_angle(yaw + kPi);
    return {pos, yaw};
  };

  for (int i = 0; i <= n; ++i) {
    const double s = speed * i * dt;
    const bool ccw = perimeter == 0.0
                         ? first_lap_ccw
                         : (static_cast<long>(s / perimeter) % 2 == 0) == first_lap_ccw;
    out.push_back(pose_at(s, ccw));
  }
  return out;
}

}  // namespace nanorace
