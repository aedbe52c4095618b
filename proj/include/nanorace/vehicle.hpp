#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "nanorace/arena.hpp"
#include "nanorace/error.hpp"
#include "nanorace/geometry.hpp"
#include "nanorace/perception.hpp"
#include "nanorace/policy.hpp"
#include "nanorace/rng.hpp"

namespace nanorace {

struct TrueState {
  Vec2 pos;
  double yaw = 0.0;
  double v = 0.0;  // current forward speed
  bool operator==(const TrueState&) const = default;
};

struct EstState {
  Vec2 pos;
  double yaw = 0.0;
  bool operator==(const EstState&) const = default;

  Pose2 pose() const { return {pos, yaw}; }
};

// Dead-reckoning drift: per-axis Gaussian error rates in units per sqrt
// second, plus deterministic per-second biases.
struct ErrorModel {
  double sigma_x = 0.0;    // m / sqrt(s)
  double sigma_y = 0.0;    // m / sqrt(s)
  double sigma_yaw = 0.0;  // rad / sqrt(s)
  double bias_x = 0.0;     // m / s
  double bias_y = 0.0;     // m / s
  double bias_yaw = 0.0;   // rad / s

  bool stochastic() const { return sigma_x > 0.0 || sigma_y > 0.0 || sigma_yaw > 0.0; }

  bool exactly_zero() const {
    return !stochastic() && bias_x == 0.0 && bias_y == 0.0 && bias_yaw == 0.0;
  }

  void validate() const {
    if (sigma_x < 0.0 || sigma_y < 0.0 || sigma_yaw < 0.0)
      fail(ErrorCode::bad_config, "drift sigmas must be >= 0");
  }

  static ErrorModel zero() { return {}; }

  // Illustrative magnitudes for drift studies (the platform's real fitted
  // values are not published).
  static ErrorModel defaults() {
    ErrorModel m;
    m.sigma_x = 0.05;
    m.sigma_y = 0.05;
    m.sigma_yaw = deg2rad(2.0);
    return m;
  }
};

struct LoopTimings {
  double perception_period = 1.0 / 30.0;  // CNN-substitute decision rate
  double control_period = 1.0 / 100.0;    // low-level loop
  double episode_length = 300.0;          // 5-minute run
  double obstacle_move_period = 30.0;

  void validate() const {
    if (control_period <= 0.0 || perception_period <= 0.0)
      fail(ErrorCode::bad_config, "loop periods must be positive");
    if (perception_period < control_period)
      fail(ErrorCode::bad_config, "perception period must be >= control period");
    if (episode_length <= 0.0)
      fail(ErrorCode::bad_config, "episode length must be positive");
    if (obstacle_move_period <= 0.0)
      fail(ErrorCode::bad_config, "obstacle move period must be positive");
  }
};

// First-order speed lag toward the commanded setpoint, then unicycle
// integration at the new heading.
inline TrueState low_level_step(const TrueState& s, const Setpoint& sp, double dt,
                                double tau_v = 0.3) {
  TrueState n = s;
  const double blend = tau_v > 0.0 ? std::min(1.0, dt / tau_v) : 1.0;
  n.v = s.v + (sp.forward_speed - s.v) * blend;
  n.yaw = wrap_angle(s.yaw + sp.yaw_rate * dt);
  n.pos = s.pos + unit_from_angle(n.yaw) * (n.v * dt);
  return n;
}

// Dead-reckoning update: the true body-frame increment is composed onto the
// estimate with additive Gaussian noise of std sigma*sqrt(dt) per axis, so
// variance accumulates to sigma^2 over one second.
inline EstState estimate_step(const EstState& e, const Pose2& true_delta,
                              const ErrorModel& m, RngStream& rng, double dt) {
  Pose2 rel = true_delta;
  if (m.stochastic()) {
    const double root_dt = std::sqrt(dt);
    rel.pos.x += m.sigma_x * root_dt * rng.gaussian();
    rel.pos.y += m.sigma_y * root_dt * rng.gaussian();
    rel.yaw += m.sigma_yaw * root_dt * rng.gaussian();
  }
  rel.pos.x += m.bias_x * dt;
  rel.pos.y += m.bias_y * dt;
  rel.yaw += m.bias_yaw * dt;
  const Pose2 next = compose(e.pose(), rel);
  return {next.pos, next.yaw};
}

inline SectorProbs low_pass(const SectorProbs& prev, const SectorProbs& next,
                            double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) fail(ErrorCode::bad_config, "alpha out of (0, 1]");
  return {prev.left + alpha * (next.left - prev.left),
          prev.center + alpha * (next.center - prev.center),
          prev.right + alpha * (next.right - prev.right)};
}

enum class EventKind { GATE_PASS, OBSTACLE_MOVED, AREA_EXIT, AREA_ENTER, WALL_CONTACT };

inline const char* event_kind_name(EventKind k) {
  switch (k) {
    case EventKind::GATE_PASS: return "GATE_PASS";
    case EventKind::OBSTACLE_MOVED: return "OBSTACLE_MOVED";
    case EventKind::AREA_EXIT: return "AREA_EXIT";
    case EventKind::AREA_ENTER: return "AREA_ENTER";
    case EventKind::WALL_CONTACT: return "WALL_CONTACT";
  }
  return "?";
}

struct Event {
  double t = 0.0;
  EventKind kind = EventKind::AREA_EXIT;
  std::string detail;
};

struct StepRow {
  double t = 0.0;
  TrueState truth;
  EstState est;
  SectorProbs probs;  // filtered probabilities driving the policy
  Setpoint setpoint;
  Mode mode = Mode::CRUISE;
  bool operator==(const StepRow&) const = default;
};

struct RunRecord {
  std::vector<StepRow> rows;  // one per control step, t strictly increasing
  std::vector<Event> events;
  std::vector<double> wp_visit_times;  // POLICY2 bookkeeping
  std::uint64_t seed = 0;
};

struct EpisodeConfig {
  PolicyParams policy;
  SensorGeometry sensor;
  ErrorModel drift;
  LoopTimings timings;
  double perception_noise_sigma = 0.0;
  double filter_alpha = 0.3;
  double tau_v = 0.3;
  double drone_radius = 0.05;
  double contact_penalty_s = 10.0;
  bool wire_path = true;  // run probabilities through the UART byte codec
  bool has_start = false;
  Pose2 start;  // default: first waypoint, facing the second

  void validate() const {
    policy.validate();
    sensor.validate();
    drift.validate();
    timings.validate();
    if (perception_noise_sigma < 0.0)
      fail(ErrorCode::bad_config, "perception noise sigma must be >= 0");
    if (!(filter_alpha > 0.0 && filter_alpha <= 1.0))
      fail(ErrorCode::bad_config, "filter alpha out of (0, 1]");
    if (drone_radius < 0.0) fail(ErrorCode::bad_config, "drone radius must be >= 0");
    if (contact_penalty_s < 0.0)
      fail(ErrorCode::bad_config, "contact penalty must be >= 0");
  }
};

inline Pose2 default_start_pose(const Arena& arena) {
  const Vec2 p = arena.waypoints[0];
  const Vec2 to_next = arena.waypoints[1] - p;
  const double yaw = (to_next.x == 0.0 && to_next.y == 0.0)
                         ? 0.0
                         : std::atan2(to_next.y, to_next.x);
  return {p, yaw};
}

// Simulates one episode: perception/decision at the perception rate,
// kinematics at the control rate, one movable obstacle relocated every
// obstacle_move_period. A contact with a solid surface freezes the drone
// for contact_penalty_s, then forces an escape spin.
inline RunRecord run_episode(const Arena& initial_arena, const EpisodeConfig& cfg,
                             std::uint64_t seed) {
  cfg.validate();
  Arena arena = initial_arena;
  const bool ground_aware = policy_ground_aware(cfg.policy.kind);
  const double dt = cfg.timings.control_period;
  const int n_steps = static_cast<int>(std::llround(cfg.timings.episode_length / dt));

  RngStream policy_rng(derive_seed(seed, 1));
  RngStream obstacle_rng(derive_seed(seed, 2));
  RngStream drift_rng(derive_seed(seed, 3));
  RngStream noise_rng(derive_seed(seed, 4));

  const Pose2 start = cfg.has_start ? cfg.start : default_start_pose(arena);
  TrueState truth{start.pos, start.yaw, 0.0};
  EstState est{start.pos, start.yaw};
  PolicyState pstate;
  pstate.mode = cfg.policy.kind == PolicyKind::POLICY2 ? Mode::WP_NAV : Mode::CRUISE;
  SectorProbs filtered;
  Setpoint setpoint;

  RunRecord rec;
  rec.seed = seed;
  rec.rows.reserve(n_steps + 1);
  rec.rows.push_back({0.0, truth, est, filtered, setpoint, pstate.mode});

  bool inside = in_mission_area(arena, truth.pos);
  bool holding = false;
  double hold_until = 0.0;
  double next_perception = 0.0;
  double next_move = cfg.timings.obstacle_move_period;
  bool any_movable = false;
  for (const auto& ob : arena.obstacles) any_movable = any_movable || ob.movable;
  const double half_dt = dt * 0.5;

  for (int k = 0; k < n_steps; ++k) {
    const double t = k * dt;

    if (any_movable && t >= next_move - half_dt) {
      try {
        arena = move_dynamic_obstacle(arena, truth.pos, obstacle_rng);
        rec.events.push_back({t, EventKind::OBSTACLE_MOVED, ""});
      } catch (const Error& e) {
        if (e.code() != ErrorCode::placement_failed) throw;
        // keep the previous layout
      }
      next_move += cfg.timings.obstacle_move_period;
    }

    if (holding && t >= hold_until) {
      holding = false;
      const double delta = spin_delta(policy_rng);
      pstate.spin_dir = delta >= 0.0 ? 1.0 : -1.0;
      pstate.spin_target_yaw = wrap_angle(truth.yaw + delta);
      pstate.mode = Mode::SPIN;
      setpoint = {0.0, pstate.spin_dir * cfg.policy.spin_rate};
    }

    if (t >= next_perception - half_dt) {
      if (!holding) {
        SectorProbs raw =
            sector_soft_probs(arena, {truth.pos, truth.yaw}, cfg.sensor, ground_aware);
        if (cfg.perception_noise_sigma > 0.0)
          raw = perception_noise(raw, cfg.perception_noise_sigma, noise_rng);
        if (cfg.wire_path) raw = dequantize(decode_frame(encode_frame(quantize(raw))));
        filtered = low_pass(filtered, raw, cfg.filter_alpha);
        if (cfg.policy.kind == PolicyKind::POLICY2) {
          const int before = pstate.wp_index;
          pstate = wp_update(pstate, est.pose(), arena.waypoints, cfg.policy);
          if (pstate.wp_index != before) rec.wp_visit_times.push_back(t);
        }
        auto [sp, ns] = policy_step(pstate, filtered, est.pose(), arena.waypoints,
                                    cfg.policy, policy_rng);
        setpoint = sp;
        pstate = ns;
      }
      next_perception += cfg.timings.perception_period;
    }

    const TrueState prev = truth;
    if (holding) {
      truth.v = 0.0;
    } else {
      truth = low_level_step(truth, setpoint, dt, cfg.tau_v);
      if (arena.distance_to_solid(truth.pos) <= cfg.drone_radius) {
        const double tc = t + dt;
        truth = prev;
        truth.v = 0.0;
        holding = true;
        hold_until = tc + cfg.contact_penalty_s;
        rec.events.push_back({tc, EventKind::WALL_CONTACT, ""});
      }
    }

    if (cfg.drift.exactly_zero()) {
      est = {truth.pos, truth.yaw};  // perfect odometry, bit-exact
    } else {
      est = estimate_step(est, relative_pose({prev.pos, prev.yaw}, {truth.pos, truth.yaw}),
                          cfg.drift, drift_rng, dt);
    }

    const double t_next = (k + 1) * dt;
    if (truth.pos != prev.pos) {
      for (std::size_t g = 0; g < arena.gates.size(); ++g) {
        if (gate_pass(arena.gates[g], prev.pos, truth.pos))
          rec.events.push_back({t_next, EventKind::GATE_PASS, std::to_string(g)});
      }
    }
    const bool now_inside = in_mission_area(arena, truth.pos);
    if (now_inside != inside) {
      rec.events.push_back(
          {t_next, now_inside ? EventKind::AREA_ENTER : EventKind::AREA_EXIT, ""});
      inside = now_inside;
    }

    rec.rows.push_back({t_next, truth, est, filtered, setpoint, pstate.mode});
  }
  return rec;
}

// --- derived run metrics

inline double total_distance(const RunRecord& rec) {
  double d = 0.0;
  for (std::size_t i = 1; i < rec.rows.size(); ++i)
    d += (rec.rows[i].truth.pos - rec.rows[i - 1].truth.pos).norm();
  return d;
}

// Fraction of flight time spent outside the mission area (per-step, using
// the step's end position).
inline double outside_fraction(const RunRecord& rec, const Arena& arena) {
  if (rec.rows.size() < 2) return 0.0;
  std::size_t outside = 0;
  for (std::size_t i = 1; i < rec.rows.size(); ++i)
    if (!in_mission_area(arena, rec.rows[i].truth.pos)) ++outside;
  return static_cast<double>(outside) / static_cast<double>(rec.rows.size() - 1);
}

}  // namespace nanorace
