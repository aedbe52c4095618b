#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "nanorace/arena.hpp"
#include "nanorace/error.hpp"
#include "nanorace/geometry.hpp"
#include "nanorace/rng.hpp"

namespace nanorace {

enum class PoseGroup : int { RANDOM_SPAWN = 1, SCAN_360 = 2, SQUARE_PATH = 3 };
enum class Split { TRAIN, VAL, TEST };

inline const char* split_name(Split s) {
  switch (s) {
    case Split::TRAIN: return "train";
    case Split::VAL: return "val";
    case Split::TEST: return "test";
  }
  return "?";
}

struct DatasetPlan {
  int random_spawn = 10000;
  int scan_360 = 21000;
  int square_path = 10000;
  double train_frac = 0.7;
  double val_frac = 0.1;
  double test_frac = 0.2;
  double attitude_jitter = deg2rad(5.0);  // pitch/roll/yaw, +-range
  double height_min = 0.45;  // m
  double height_max = 0.55;
  double square_inset = 0.5;  // m inside the mission-area edges
  double ring_radius = 1.5;   // m, 360-scan distance from each obstacle

  void validate() const {
    if (random_spawn < 0 || scan_360 < 0 || square_path < 0)
      fail(ErrorCode::bad_config, "plan counts must be >= 0");
    if (std::abs(train_frac + val_frac + test_frac - 1.0) > 1e-9)
      fail(ErrorCode::bad_config, "split fractions must sum to 1");
    if (train_frac < 0.0 || val_frac < 0.0 || test_frac < 0.0)
      fail(ErrorCode::bad_config, "split fractions must be >= 0");
    if (height_min > height_max) fail(ErrorCode::bad_config, "bad height range");
    if (ring_radius <= 0.0) fail(ErrorCode::bad_config, "ring radius must be positive");
    if (square_inset < 0.0) fail(ErrorCode::bad_config, "square inset must be >= 0");
  }
};

struct PoseSample {
  double x = 0.0, y = 0.0, z = 0.5;
  double yaw = 0.0, pitch = 0.0, roll = 0.0;
  PoseGroup group = PoseGroup::RANDOM_SPAWN;
  Split split = Split::TRAIN;
};

namespace detail {

inline Vec2 shape_anchor(const std::variant<Circle, ThickSegment>& shape) {
  if (const Circle* c = std::get_if<Circle>(&shape)) return c->center;
  const auto& s = std::get<ThickSegment>(shape);
  return (s.p0 + s.p1) * 0.5;
}

// Stratified 70/10/20 assignment: counts are floored for val/test with the
// remainder going to train, membership is decided by ordering a per-group
// deterministic hash of (seed, group, index).
inline std::vector<Split> group_splits(std::size_t count, const DatasetPlan& plan,
                                       std::uint64_t seed, int group_tag) {
  const auto n_val = static_cast<std::size_t>(std::floor(plan.val_frac * count));
  const auto n_test = static_cast<std::size_t>(std::floor(plan.test_frac * count));
  std::vector<std::pair<std::uint64_t, std::size_t>> keyed(count);
  for (std::size_t i = 0; i < count; ++i)
    keyed[i] = {derive_seed(seed, 5, group_tag, i), i};
  std::sort(keyed.begin(), keyed.end());
  std::vector<Split> splits(count, Split::TRAIN);
  for (std::size_t r = 0; r < count; ++r) {
    const std::size_t i = keyed[r].second;
    if (r < n_val)
      splits[i] = Split::VAL;
    else if (r < n_val + n_test)
      splits[i] = Split::TEST;
  }
  return splits;
}

// Point and travel direction on a centered axis-aligned square of the given
// half side, arc-length parameter s, counterclockwise from the SW corner.
inline Pose2 square_point(double half, double s, bool ccw) {
  const double perimeter = 8.0 * half;
  if (perimeter <= 0.0) return {{-half, -half}, 0.0};
  double u = std::fmod(s, perimeter);
  if (u < 0.0) u += perimeter;
  if (!ccw) u = perimeter - u;
  const int edge = std::min(3, static_cast<int>(u / (2.0 * half)));
  const double local = u - edge * 2.0 * half;
  static const Vec2 corners[4] = {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
  const Vec2 a = corners[edge] * half;
  const Vec2 b = corners[(edge + 1) % 4] * half;
  const Vec2 dir = (b - a) * (1.0 / (2.0 * half));
  double yaw = std::atan2(dir.y, dir.x);
  if (!ccw) yaw = wrap_angle(yaw + kPi);
  return {a + dir * local, yaw};
}

}  // namespace detail

// Deterministic pose plan for image collection: uniform spawns across the
// mission area, rings around every obstacle facing it, and an inset square
// flown in both directions. Poses carry attitude jitter and height draws;
// the 70/10/20 split is stratified per group.
inline std::vector<PoseSample> sample_dataset_poses(const Arena& arena,
                                                    const DatasetPlan& plan,
                                                    std::uint64_t seed) {
  plan.validate();
  std::vector<PoseSample> out;
  out.reserve(static_cast<std::size_t>(plan.random_spawn) + plan.scan_360 +
              plan.square_path);

  RngStream spawn_rng(derive_seed(seed, 1));
  for (int i = 0; i < plan.random_spawn; ++i) {
    Vec2 p;
    for (int attempt = 0; attempt < 1000; ++attempt) {
      p = {spawn_rng.uniform(arena.mission.min.x, arena.mission.max.x),
           spawn_rng.uniform(arena.mission.min.y, arena.mission.max.y)};
      if (arena.distance_to_solid(p) > 0.05) break;
    }
    PoseSample s;
    s.x = p.x;
    s.y = p.y;
    s.yaw = spawn_rng.uniform(-kPi, kPi);
    s.group = PoseGroup::RANDOM_SPAWN;
    out.push_back(s);
  }

  // scan targets: every obstacle, then every gate
  std::vector<Vec2> targets;
  for (const auto& ob : arena.obstacles) targets.push_back(detail::shape_anchor(ob.shape));
  for (const auto& g : arena.gates) targets.push_back(g.center);
  if (!targets.empty() && plan.scan_360 > 0) {
    const std::size_t n_targets = targets.size();
    const int base = plan.scan_360 / static_cast<int>(n_targets);
    const int extra = plan.scan_360 % static_cast<int>(n_targets);
    for (std::size_t ti = 0; ti < n_targets; ++ti) {
      const int count = base + (static_cast<int>(ti) < extra ? 1 : 0);
      for (int j = 0; j < count; ++j) {
        const double phi = kTwoPi * j / count;
        PoseSample s;
        s.x = targets[ti].x + plan.ring_radius * std::cos(phi);
        s.y = targets[ti].y + plan.ring_radius * std::sin(phi);
        s.yaw = wrap_angle(phi + kPi);  // face the target
        s.group = PoseGroup::SCAN_360;
        out.push_back(s);
      }
    }
  }

  const double inset_half = std::max(0.0, arena.mission.width() * 0.5 - plan.square_inset);
  const int n_ccw = plan.square_path - plan.square_path / 2;
  const int n_cw = plan.square_path / 2;
  const double perimeter = 8.0 * inset_half;
  for (int j = 0; j < n_ccw; ++j) {
    const Pose2 p = detail::square_point(inset_half, perimeter * j / n_ccw, true);
    out.push_back({p.pos.x, p.pos.y, 0.5, p.yaw, 0.0, 0.0, PoseGroup::SQUARE_PATH,
                   Split::TRAIN});
  }
  for (int j = 0; j < n_cw; ++j) {
    const Pose2 p = detail::square_point(inset_half, perimeter * j / n_cw, false);
    out.push_back({p.pos.x, p.pos.y, 0.5, p.yaw, 0.0, 0.0, PoseGroup::SQUARE_PATH,
                   Split::TRAIN});
  }

  RngStream jitter_rng(derive_seed(seed, 4));
  for (auto& s : out) {
    // scan poses keep their exact facing yaw
    if (s.group != PoseGroup::SCAN_360)
      s.yaw = wrap_angle(s.yaw +
                         jitter_rng.uniform(-plan.attitude_jitter, plan.attitude_jitter));
    s.pitch = jitter_rng.uniform(-plan.attitude_jitter, plan.attitude_jitter);
    s.roll = jitter_rng.uniform(-plan.attitude_jitter, plan.attitude_jitter);
    s.z = jitter_rng.uniform(plan.height_min, plan.height_max);
  }

  // per-group stratified split assignment
  std::size_t offset = 0;
  for (const int tag : {1, 2, 3}) {
    std::size_t count = 0;
    for (const auto& s : out)
      if (static_cast<int>(s.group) == tag) ++count;
    const auto splits = detail::group_splits(count, plan, seed, tag);
    for (std::size_t i = 0; i < count; ++i) out[offset + i].split = splits[i];
    offset += count;
  }
  return out;
}

}  // namespace nanorace
