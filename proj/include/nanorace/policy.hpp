#pragma once

#include <array>
#include <cmath>
#include <utility>

#include "nanorace/error.hpp"
#include "nanorace/geometry.hpp"
#include "nanorace/perception.hpp"
#include "nanorace/rng.hpp"

namespace nanorace {

enum class PolicyKind { BASELINE, POLICY1, POLICY2 };

inline const char* policy_kind_name(PolicyKind k) {
  switch (k) {
    case PolicyKind::BASELINE: return "baseline";
    case PolicyKind::POLICY1: return "policy1";
    case PolicyKind::POLICY2: return "policy2";
  }
  return "?";
}

// Policies 1 and 2 treat the floor outside the mission area (and the walls)
// as an obstacle; the baseline does not.
inline bool policy_ground_aware(PolicyKind k) { return k != PolicyKind::BASELINE; }

enum class Mode { CRUISE, AVOID, SPIN, WP_NAV };

inline const char* mode_name(Mode m) {
  switch (m) {
    case Mode::CRUISE: return "CRUISE";
    case Mode::AVOID: return "AVOID";
    case Mode::SPIN: return "SPIN";
    case Mode::WP_NAV: return "WP_NAV";
  }
  return "?";
}

enum class WpOrder { CW, CCW };
enum class Direction { LEFT, CENTER, RIGHT };

struct PolicyParams {
  PolicyKind kind = PolicyKind::POLICY2;
  double v_target = 1.5;                  // m/s
  double threshold = 0.7;                 // collision-flag threshold on [0,1]
  double turn_rate = deg2rad(90.0);       // avoidance yaw rate, rad/s
  double wp_radius = 0.5;                 // WP visited radius, m
  double spin_rate = deg2rad(90.0);       // rad/s while spinning in place
  double spin_exit_tol = deg2rad(5.0);    // |yaw error| to leave SPIN
  double wp_yaw_gain = 2.0;               // 1/s, heading P-gain in WP_NAV
  double speed_exponent = 1.0;            // v = v_target * (1 - p_center)^e

  void validate() const {
    if (v_target <= 0.0) fail(ErrorCode::bad_config, "v_target must be positive");
    if (!(threshold > 0.0 && threshold < 1.0))
      fail(ErrorCode::bad_config, "threshold out of (0, 1)");
    if (wp_radius <= 0.0) fail(ErrorCode::bad_config, "wp_radius must be positive");
    if (turn_rate <= 0.0 || spin_rate <= 0.0)
      fail(ErrorCode::bad_config, "turn and spin rates must be positive");
    if (speed_exponent <= 0.0)
      fail(ErrorCode::bad_config, "speed_exponent must be positive");
  }
};

struct PolicyState {
  Mode mode = Mode::CRUISE;
  double spin_target_yaw = 0.0;  // valid in SPIN
  double spin_dir = 1.0;         // +1 CCW, -1 CW, valid in SPIN
  int wp_index = 0;              // POLICY2 only
  WpOrder wp_order = WpOrder::CCW;
  std::array<bool, 4> visited{};
  int laps = 0;  // completed visit cycles
};

struct Setpoint {
  double forward_speed = 0.0;  // m/s, >= 0
  double yaw_rate = 0.0;       // rad/s, + is counterclockwise
};

// Argmin of the three collision probabilities; ties prefer going straight,
// then left.
inline Direction select_direction(const SectorProbs& p) {
  Direction best = Direction::CENTER;
  double best_v = p.center;
  if (p.left < best_v) {
    best = Direction::LEFT;
    best_v = p.left;
  }
  if (p.right < best_v) best = Direction::RIGHT;
  return best;
}

// Signed escape rotation: +-(180 deg + U[0 deg, 30 deg]).
inline double spin_delta(RngStream& rng) {
  const double extra = rng.uniform(0.0, deg2rad(30.0));
  return rng.sign() * (kPi + extra);
}

inline double spin_target(double entry_yaw, RngStream& rng) {
  return wrap_angle(entry_yaw + spin_delta(rng));
}

inline int wp_step(int index, WpOrder order) {
  return order == WpOrder::CCW ? (index + 1) % 4 : (index + 3) % 4;
}

// Marks the current WP visited and advances the cycle when the estimated
// position is within wp_radius (inclusive) of it. POLICY2 only.
inline PolicyState wp_update(PolicyState state, const Pose2& est_pose,
                             const std::array<Vec2, 4>& waypoints,
                             const PolicyParams& params) {
  if ((est_pose.pos - waypoints[state.wp_index]).norm() <= params.wp_radius) {
    state.visited[state.wp_index] = true;
    bool all = true;
    for (const bool v : state.visited) all = all && v;
    if (all) {
      state.visited = {};
      ++state.laps;
    }
    state.wp_index = wp_step(state.wp_index, state.wp_order);
  }
  return state;
}

namespace detail {

inline PolicyState enter_spin(PolicyState state, double entry_yaw,
                              const PolicyParams& params, RngStream& rng) {
  const double delta = spin_delta(rng);
  state.spin_dir = delta >= 0.0 ? 1.0 : -1.0;
  state.spin_target_yaw = wrap_angle(entry_yaw + delta);
  state.mode = Mode::SPIN;
  if (params.kind == PolicyKind::POLICY2) {
    state.wp_order = state.wp_order == WpOrder::CCW ? WpOrder::CW : WpOrder::CCW;
    state.wp_index = wp_step(state.wp_index, state.wp_order);
  }
  return state;
}

}  // namespace detail

// One decision tick: thresholded sector flags + estimated pose in, velocity
// setpoint + next state out. Pure given the rng stream.
inline std::pair<Setpoint, PolicyState> policy_step(
    PolicyState state, const SectorProbs& probs, const Pose2& est_pose,
    const std::array<Vec2, 4>& waypoints, const PolicyParams& params,
    RngStream& rng) {
  const double speed =
      params.v_target *
      std::pow(std::clamp(1.0 - probs.center, 0.0, 1.0), params.speed_exponent);

  if (state.mode == Mode::SPIN) {
    const double err = wrap_angle(state.spin_target_yaw - est_pose.yaw);
    if (std::abs(err) >= params.spin_exit_tol)
      return {{0.0, state.spin_dir * params.spin_rate}, state};
    state.mode = params.kind == PolicyKind::POLICY2 ? Mode::WP_NAV : Mode::CRUISE;
  }

  const bool bl = probs.left >= params.threshold;
  const bool bc = probs.center >= params.threshold;
  const bool br = probs.right >= params.threshold;

  if (bl && bc && br) {
    state = detail::enter_spin(state, est_pose.yaw, params, rng);
    return {{0.0, state.spin_dir * params.spin_rate}, state};
  }

  if (bl || bc || br) {
    state.mode = Mode::AVOID;
    double yaw_rate = 0.0;
    if (bl && !br) {
      yaw_rate = -params.turn_rate;  // blocked on the left: turn right
    } else if (br && !bl) {
      yaw_rate = params.turn_rate;  // blocked on the right: turn left
    } else if (bl && br) {
      // both sides blocked, center free: head for the least-blocked sector
      switch (select_direction(probs)) {
        case Direction::LEFT: yaw_rate = params.turn_rate; break;
        case Direction::RIGHT: yaw_rate = -params.turn_rate; break;
        case Direction::CENTER: yaw_rate = 0.0; break;
      }
    } else {
      // center only: turn toward the side with the lower probability
      yaw_rate = probs.left <= probs.right ? params.turn_rate : -params.turn_rate;
    }
    return {{speed, yaw_rate}, state};
  }

  if (params.kind == PolicyKind::POLICY2) {
    state.mode = Mode::WP_NAV;
    const Vec2 to_wp = waypoints[state.wp_index] - est_pose.pos;
    const double bearing = std::atan2(to_wp.y, to_wp.x);
    const double err = wrap_angle(bearing - est_pose.yaw);
    const double yaw_rate =
        std::clamp(params.wp_yaw_gain * err, -params.turn_rate, params.turn_rate);
    return {{speed, yaw_rate}, state};
  }

  state.mode = Mode::CRUISE;
  return {{speed, 0.0}, state};
}

}  // namespace nanorace
