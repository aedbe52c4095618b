#pragma once

#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

#include <json.hpp>

#include "nanorace/arena.hpp"
#include "nanorace/augment.hpp"
#include "nanorace/dataset.hpp"
#include "nanorace/error.hpp"
#include "nanorace/policy.hpp"
#include "nanorace/vehicle.hpp"

namespace nanorace {

using json = nlohmann::json;

namespace detail {

inline void check_keys(const json& j, const char* where,
                       std::initializer_list<const char*> allowed) {
  if (!j.is_object()) fail(ErrorCode::bad_config, std::string(where) + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) fail(ErrorCode::bad_config, "unknown key '" + key + "' in " + where);
  }
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    fail(ErrorCode::bad_config, std::string("bad value for '") + key + "'");
  }
}

inline Vec2 vec2_from(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    fail(ErrorCode::bad_config, std::string(what) + " must be [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline json vec2_to(Vec2 v) { return json::array({v.x, v.y}); }

}  // namespace detail

// --- arena -----------------------------------------------------------------

inline json arena_config_to_json(const ArenaConfig& c) {
  json obstacles = json::array();
  for (const auto& ob : c.obstacles) {
    json o;
    if (const Circle* circ = std::get_if<Circle>(&ob.shape)) {
      o["type"] = "circle";
      o["params"] = {{"center", detail::vec2_to(circ->center)}, {"radius", circ->radius}};
    } else {
      const auto& s = std::get<ThickSegment>(ob.shape);
      o["type"] = "segment";
      o["params"] = {{"p0", detail::vec2_to(s.p0)},
                     {"p1", detail::vec2_to(s.p1)},
                     {"thickness", s.thickness}};
    }
    o["movable"] = ob.movable;
    obstacles.push_back(o);
  }
  json gates = json::array();
  for (const auto& g : c.gates) {
    gates.push_back({{"center", detail::vec2_to(g.center)},
                     {"angle_deg", rad2deg(g.angle)},
                     {"width", g.width},
                     {"post_length", g.post_length},
                     {"post_thickness", g.post_thickness}});
  }
  return {{"outer", c.outer_size},
          {"mission", c.mission_size},
          {"wp_half_side", c.wp_half_side},
          {"obstacles", obstacles},
          {"gates", gates}};
}

inline ArenaConfig arena_config_from_json(const json& j) {
  detail::check_keys(j, "arena", {"outer", "mission", "wp_half_side", "obstacles", "gates"});
  ArenaConfig c = ArenaConfig::bare();
  c.outer_size = detail::get_or(j, "outer", 10.0);
  c.mission_size = detail::get_or(j, "mission", 8.0);
  c.wp_half_side = detail::get_or(j, "wp_half_side", 3.0);
  if (j.contains("obstacles")) {
    for (const auto& o : j.at("obstacles")) {
      detail::check_keys(o, "obstacle", {"type", "params", "movable"});
      const std::string type = detail::get_or<std::string>(o, "type", "");
      const json& p = o.contains("params") ? o.at("params") : json::object();
      Obstacle ob;
      if (type == "circle") {
        detail::check_keys(p, "circle params", {"center", "radius"});
        ob.shape = Circle{detail::vec2_from(p.at("center"), "center"),
                          detail::get_or(p, "radius", 0.15)};
      } else if (type == "segment") {
        detail::check_keys(p, "segment params", {"p0", "p1", "thickness"});
        ob.shape = ThickSegment{detail::vec2_from(p.at("p0"), "p0"),
                                detail::vec2_from(p.at("p1"), "p1"),
                                detail::get_or(p, "thickness", 0.05)};
      } else {
        fail(ErrorCode::bad_config, "obstacle type must be 'circle' or 'segment'");
      }
      ob.movable = detail::get_or(o, "movable", false);
      c.obstacles.push_back(ob);
    }
  }
  if (j.contains("gates")) {
    for (const auto& gj : j.at("gates")) {
      detail::check_keys(gj, "gate",
                         {"center", "angle_deg", "width", "post_length", "post_thickness"});
      Gate g;
      g.center = detail::vec2_from(gj.at("center"), "gate center");
      g.angle = deg2rad(detail::get_or(gj, "angle_deg", 0.0));
      g.width = detail::get_or(gj, "width", 1.0);
      g.post_length = detail::get_or(gj, "post_length", 0.25);
      g.post_thickness = detail::get_or(gj, "post_thickness", 0.05);
      c.gates.push_back(g);
    }
  }
  return c;
}

// --- vehicle / policy -------------------------------------------------------

inline json error_model_to_json(const ErrorModel& m) {
  return {{"sigma_x", m.sigma_x},         {"sigma_y", m.sigma_y},
          {"sigma_yaw_deg", rad2deg(m.sigma_yaw)},
          {"bias_x", m.bias_x},           {"bias_y", m.bias_y},
          {"bias_yaw_deg", rad2deg(m.bias_yaw)}};
}

inline ErrorModel error_model_from_json(const json& j) {
  detail::check_keys(j, "error model",
                     {"sigma_x", "sigma_y", "sigma_yaw_deg", "bias_x", "bias_y",
                      "bias_yaw_deg"});
  ErrorModel m;
  m.sigma_x = detail::get_or(j, "sigma_x", 0.0);
  m.sigma_y = detail::get_or(j, "sigma_y", 0.0);
  m.sigma_yaw = deg2rad(detail::get_or(j, "sigma_yaw_deg", 0.0));
  m.bias_x = detail::get_or(j, "bias_x", 0.0);
  m.bias_y = detail::get_or(j, "bias_y", 0.0);
  m.bias_yaw = deg2rad(detail::get_or(j, "bias_yaw_deg", 0.0));
  m.validate();
  return m;
}

inline PolicyKind policy_kind_from_string(const std::string& s) {
  if (s == "baseline") return PolicyKind::BASELINE;
  if (s == "policy1") return PolicyKind::POLICY1;
  if (s == "policy2") return PolicyKind::POLICY2;
  fail(ErrorCode::bad_config, "unknown policy kind '" + s + "'");
}

inline json policy_params_to_json(const PolicyParams& p) {
  return {{"kind", policy_kind_name(p.kind)},
          {"v_target", p.v_target},
          {"threshold", p.threshold},
          {"turn_rate_deg", rad2deg(p.turn_rate)},
          {"wp_radius", p.wp_radius},
          {"spin_rate_deg", rad2deg(p.spin_rate)},
          {"spin_exit_tol_deg", rad2deg(p.spin_exit_tol)},
          {"wp_yaw_gain", p.wp_yaw_gain},
          {"speed_exponent", p.speed_exponent}};
}

inline PolicyParams policy_params_from_json(const json& j) {
  detail::check_keys(j, "policy",
                     {"kind", "v_target", "threshold", "turn_rate_deg", "wp_radius",
                      "spin_rate_deg", "spin_exit_tol_deg", "wp_yaw_gain",
                      "speed_exponent"});
  PolicyParams p;
  p.kind = policy_kind_from_string(
      detail::get_or<std::string>(j, "kind", policy_kind_name(p.kind)));
  p.v_target = detail::get_or(j, "v_target", p.v_target);
  p.threshold = detail::get_or(j, "threshold", p.threshold);
  p.turn_rate = deg2rad(detail::get_or(j, "turn_rate_deg", rad2deg(p.turn_rate)));
  p.wp_radius = detail::get_or(j, "wp_radius", p.wp_radius);
  p.spin_rate = deg2rad(detail::get_or(j, "spin_rate_deg", rad2deg(p.spin_rate)));
  p.spin_exit_tol =
      deg2rad(detail::get_or(j, "spin_exit_tol_deg", rad2deg(p.spin_exit_tol)));
  p.wp_yaw_gain = detail::get_or(j, "wp_yaw_gain", p.wp_yaw_gain);
  p.speed_exponent = detail::get_or(j, "speed_exponent", p.speed_exponent);
  p.validate();
  return p;
}

inline json sensor_geometry_to_json(const SensorGeometry& g) {
  return {{"fov_deg", rad2deg(g.fov)},
          {"n_rays", g.n_rays},
          {"d_max", g.d_max},
          {"pixel_fraction", g.pixel_fraction},
          {"max_range", g.max_range}};
}

inline SensorGeometry sensor_geometry_from_json(const json& j) {
  detail::check_keys(j, "sensor",
                     {"fov_deg", "n_rays", "d_max", "pixel_fraction", "max_range"});
  SensorGeometry g;
  g.fov = deg2rad(detail::get_or(j, "fov_deg", rad2deg(g.fov)));
  g.n_rays = detail::get_or(j, "n_rays", g.n_rays);
  g.d_max = detail::get_or(j, "d_max", g.d_max);
  g.pixel_fraction = detail::get_or(j, "pixel_fraction", g.pixel_fraction);
  g.max_range = detail::get_or(j, "max_range", g.max_range);
  g.validate();
  return g;
}

inline json loop_timings_to_json(const LoopTimings& t) {
  return {{"perception_period", t.perception_period},
          {"control_period", t.control_period},
          {"episode_length", t.episode_length},
          {"obstacle_move_period", t.obstacle_move_period}};
}

inline LoopTimings loop_timings_from_json(const json& j) {
  detail::check_keys(j, "timings",
                     {"perception_period", "control_period", "episode_length",
                      "obstacle_move_period"});
  LoopTimings t;
  t.perception_period = detail::get_or(j, "perception_period", t.perception_period);
  t.control_period = detail::get_or(j, "control_period", t.control_period);
  t.episode_length = detail::get_or(j, "episode_length", t.episode_length);
  t.obstacle_move_period =
      detail::get_or(j, "obstacle_move_period", t.obstacle_move_period);
  t.validate();
  return t;
}

inline json episode_config_to_json(const EpisodeConfig& c) {
  json j = {{"policy", policy_params_to_json(c.policy)},
            {"sensor", sensor_geometry_to_json(c.sensor)},
            {"drift", error_model_to_json(c.drift)},
            {"timings", loop_timings_to_json(c.timings)},
            {"perception_noise_sigma", c.perception_noise_sigma},
            {"filter_alpha", c.filter_alpha},
            {"tau_v", c.tau_v},
            {"drone_radius", c.drone_radius},
            {"contact_penalty_s", c.contact_penalty_s},
            {"wire_path", c.wire_path}};
  if (c.has_start)
    j["start"] = {{"x", c.start.pos.x}, {"y", c.start.pos.y}, {"yaw_deg", rad2deg(c.start.yaw)}};
  return j;
}

inline EpisodeConfig episode_config_from_json(const json& j) {
  detail::check_keys(j, "episode",
                     {"policy", "sensor", "drift", "timings", "perception_noise_sigma",
                      "filter_alpha", "tau_v", "drone_radius", "contact_penalty_s",
                      "wire_path", "start"});
  EpisodeConfig c;
  if (j.contains("policy")) c.policy = policy_params_from_json(j.at("policy"));
  if (j.contains("sensor")) c.sensor = sensor_geometry_from_json(j.at("sensor"));
  if (j.contains("drift")) c.drift = error_model_from_json(j.at("drift"));
  if (j.contains("timings")) c.timings = loop_timings_from_json(j.at("timings"));
  c.perception_noise_sigma =
      detail::get_or(j, "perception_noise_sigma", c.perception_noise_sigma);
  c.filter_alpha = detail::get_or(j, "filter_alpha", c.filter_alpha);
  c.tau_v = detail::get_or(j, "tau_v", c.tau_v);
  c.drone_radius = detail::get_or(j, "drone_radius", c.drone_radius);
  c.contact_penalty_s = detail::get_or(j, "contact_penalty_s", c.contact_penalty_s);
  c.wire_path = detail::get_or(j, "wire_path", c.wire_path);
  if (j.contains("start")) {
    detail::check_keys(j.at("start"), "start", {"x", "y", "yaw_deg"});
    c.has_start = true;
    c.start.pos = {detail::get_or(j.at("start"), "x", 0.0),
                   detail::get_or(j.at("start"), "y", 0.0)};
    c.start.yaw = deg2rad(detail::get_or(j.at("start"), "yaw_deg", 0.0));
  }
  c.validate();
  return c;
}

// --- augmentation / dataset --------------------------------------------------

inline json aug_params_to_json(const AugParams& p) {
  return {{"motion_blur", {{"length", p.motion_blur_length}, {"angle_deg", rad2deg(p.motion_blur_angle)}}},
          {"gaussian_blur", {{"sigma", p.gaussian_sigma}}},
          {"noise", {{"sigma", p.noise_sigma}}},
          {"exposure",
           {{"gain", p.gain},
            {"gamma", p.gamma},
            {"range", json::array({p.range_lo, p.range_hi})},
            {"vignette_strength", p.vignette}}}};
}

inline AugParams aug_params_from_json(const json& j) {
  detail::check_keys(j, "augment params",
                     {"motion_blur", "gaussian_blur", "noise", "exposure"});
  AugParams p;
  if (j.contains("motion_blur")) {
    const json& m = j.at("motion_blur");
    detail::check_keys(m, "motion_blur", {"length", "angle_deg"});
    p.motion_blur_length = detail::get_or(m, "length", 0.0);
    p.motion_blur_angle = deg2rad(detail::get_or(m, "angle_deg", 0.0));
  }
  if (j.contains("gaussian_blur")) {
    detail::check_keys(j.at("gaussian_blur"), "gaussian_blur", {"sigma"});
    p.gaussian_sigma = detail::get_or(j.at("gaussian_blur"), "sigma", 0.0);
  }
  if (j.contains("noise")) {
    detail::check_keys(j.at("noise"), "noise", {"sigma"});
    p.noise_sigma = detail::get_or(j.at("noise"), "sigma", 0.0);
  }
  if (j.contains("exposure")) {
    const json& e = j.at("exposure");
    detail::check_keys(e, "exposure", {"gain", "gamma", "range", "vignette_strength"});
    p.gain = detail::get_or(e, "gain", 1.0);
    p.gamma = detail::get_or(e, "gamma", 1.0);
    if (e.contains("range")) {
      const json& r = e.at("range");
      if (!r.is_array() || r.size() != 2)
        fail(ErrorCode::bad_config, "exposure range must be [lo, hi]");
      p.range_lo = r[0].get<double>();
      p.range_hi = r[1].get<double>();
    }
    p.vignette = detail::get_or(e, "vignette_strength", 0.0);
  }
  p.validate();
  return p;
}

inline json dataset_plan_to_json(const DatasetPlan& p) {
  return {{"random_spawn", p.random_spawn},
          {"scan_360", p.scan_360},
          {"square_path", p.square_path},
          {"split", json::array({p.train_frac, p.val_frac, p.test_frac})},
          {"attitude_jitter_deg", rad2deg(p.attitude_jitter)},
          {"height", json::array({p.height_min, p.height_max})},
          {"square_inset", p.square_inset},
          {"ring_radius", p.ring_radius}};
}

inline DatasetPlan dataset_plan_from_json(const json& j) {
  detail::check_keys(j, "dataset plan",
                     {"random_spawn", "scan_360", "square_path", "split",
                      "attitude_jitter_deg", "height", "square_inset", "ring_radius"});
  DatasetPlan p;
  p.random_spawn = detail::get_or(j, "random_spawn", p.random_spawn);
  p.scan_360 = detail::get_or(j, "scan_360", p.scan_360);
  p.square_path = detail::get_or(j, "square_path", p.square_path);
  if (j.contains("split")) {
    const json& s = j.at("split");
    if (!s.is_array() || s.size() != 3)
      fail(ErrorCode::bad_config, "split must be [train, val, test]");
    p.train_frac = s[0].get<double>();
    p.val_frac = s[1].get<double>();
    p.test_frac = s[2].get<double>();
  }
  p.attitude_jitter =
      deg2rad(detail::get_or(j, "attitude_jitter_deg", rad2deg(p.attitude_jitter)));
  if (j.contains("height")) {
    const json& hgt = j.at("height");
    if (!hgt.is_array() || hgt.size() != 2)
      fail(ErrorCode::bad_config, "height must be [min, max]");
    p.height_min = hgt[0].get<double>();
    p.height_max = hgt[1].get<double>();
  }
  p.square_inset = detail::get_or(j, "square_inset", p.square_inset);
  p.ring_radius = detail::get_or(j, "ring_radius", p.ring_radius);
  p.validate();
  return p;
}

// --- file helpers -------------------------------------------------------------

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io_error, "cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    fail(ErrorCode::bad_config, "invalid JSON in " + path + ": " + e.what());
  }
  return j;
}

inline void save_json_file(const std::string& path, const json& j) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) fail(ErrorCode::io_error, "cannot open " + path + " for writing");
  out << j.dump(2) << "\n";
}

}  // namespace nanorace
