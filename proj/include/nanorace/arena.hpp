#pragma once

#include <array>
#include <cmath>
#include <string>
#include <variant>
#include <vector>

#include "nanorace/error.hpp"
#include "nanorace/geometry.hpp"
#include "nanorace/rng.hpp"

namespace nanorace {

// Codes double as segmentation-raster class codes.
enum class SurfaceClass : int {
  NONE = 0,
  OBSTACLE = 1,
  GATE_FRAME = 2,
  WALL = 3,
  OUT_OF_AREA_GROUND = 4,
};

inline const char* surface_class_name(SurfaceClass c) {
  switch (c) {
    case SurfaceClass::NONE: return "NONE";
    case SurfaceClass::OBSTACLE: return "OBSTACLE";
    case SurfaceClass::GATE_FRAME: return "GATE_FRAME";
    case SurfaceClass::WALL: return "WALL";
    case SurfaceClass::OUT_OF_AREA_GROUND: return "OUT_OF_AREA_GROUND";
  }
  return "?";
}

struct Obstacle {
  std::variant<Circle, ThickSegment> shape;
  bool movable = false;
  SurfaceClass cls = SurfaceClass::OBSTACLE;

  static Obstacle pole(Vec2 center, double radius, bool movable = true) {
    return {Circle{center, radius}, movable, SurfaceClass::OBSTACLE};
  }
  static Obstacle panel(Vec2 center, double length, double angle,
                        double thickness = 0.05, bool movable = true) {
    const Vec2 u = unit_from_angle(angle) * (length * 0.5);
    return {ThickSegment{center - u, center + u, thickness}, movable,
            SurfaceClass::OBSTACLE};
  }
};

struct Gate {
  Vec2 center;
  double angle = 0.0;        // direction of the opening segment
  double width = 1.0;        // opening span between inner post endpoints
  double post_length = 0.25;
  double post_thickness = 0.05;

  ThickSegment opening() const {
    const Vec2 u = unit_from_angle(angle) * (width * 0.5);
    return {center - u, center + u, 0.0};
  }
  std::array<ThickSegment, 2> posts() const {
    const Vec2 u = unit_from_angle(angle);
    const Vec2 a = center - u * (width * 0.5);
    const Vec2 b = center + u * (width * 0.5);
    return {ThickSegment{a, a - u * post_length, post_thickness},
            ThickSegment{b, b + u * post_length, post_thickness}};
  }
};

struct Hit {
  double distance = kInf;
  SurfaceClass cls = SurfaceClass::NONE;
};

struct ArenaConfig {
  double outer_size = 10.0;
  double mission_size = 8.0;
  double wp_half_side = 3.0;
  std::vector<Obstacle> obstacles;
  std::vector<Gate> gates;

  // Competition-style layout: two poles, three panels (1 / 1.5 / 3 m wide)
  // and two static gates.
  static ArenaConfig standard() {
    ArenaConfig c;
    c.obstacles = {
        Obstacle::pole({-2.0, 2.0}, 0.15),
        Obstacle::pole({2.5, -1.5}, 0.15),
        Obstacle::panel({0.0, -2.5}, 1.0, 0.0),
        Obstacle::panel({2.5, 2.0}, 1.5, deg2rad(90.0)),
        Obstacle::panel({-2.0, -0.5}, 3.0, deg2rad(45.0)),
    };
    c.gates = {
        Gate{{0.0, 1.5}, 0.0},
        Gate{{2.0, 0.5}, deg2rad(90.0)},
    };
    return c;
  }

  static ArenaConfig bare() { return ArenaConfig{}; }
};

namespace detail {

struct Surface {
  std::variant<Circle, ThickSegment> shape;
  SurfaceClass cls;
};

inline std::optional<double> ray_surface(Vec2 o, Vec2 d, const Surface& s) {
  if (const Circle* c = std::get_if<Circle>(&s.shape)) return ray_circle(o, d, *c);
  return ray_thick_segment(o, d, std::get<ThickSegment>(s.shape));
}

inline double surface_distance(Vec2 p, const std::variant<Circle, ThickSegment>& shape) {
  if (const Circle* c = std::get_if<Circle>(&shape))
    return dist_point_circle_surface(p, *c);
  return dist_point_thick_segment_surface(p, std::get<ThickSegment>(shape));
}

inline double shape_shape_distance(const std::variant<Circle, ThickSegment>& a,
                                   const std::variant<Circle, ThickSegment>& b) {
  const auto* ca = std::get_if<Circle>(&a);
  const auto* cb = std::get_if<Circle>(&b);
  if (ca && cb) return (ca->center - cb->center).norm() - ca->radius - cb->radius;
  if (ca) {
    const auto& s = std::get<ThickSegment>(b);
    return dist_point_segment(ca->center, s.p0, s.p1) - ca->radius - s.thickness * 0.5;
  }
  if (cb) {
    const auto& s = std::get<ThickSegment>(a);
    return dist_point_segment(cb->center, s.p0, s.p1) - cb->radius - s.thickness * 0.5;
  }
  const auto& sa = std::get<ThickSegment>(a);
  const auto& sb = std::get<ThickSegment>(b);
  return dist_segment_segment(sa.p0, sa.p1, sb.p0, sb.p1) -
         sa.thickness * 0.5 - sb.thickness * 0.5;
}

}  // namespace detail

class Arena {
 public:
  Rect outer;
  Rect mission;
  double wp_half_side = 3.0;
  std::array<Vec2, 4> waypoints{};  // corners of the WP square, CCW from SW
  std::vector<Obstacle> obstacles;
  std::vector<Gate> gates;

  const std::vector<detail::Surface>& solid_surfaces() const { return solids_; }
  const std::array<ThickSegment, 4>& fence_segments() const { return fence_; }

  // Distance from p to the nearest solid surface (obstacles, gate frames,
  // walls). Negative when p is inside a shape or beyond the walls.
  double distance_to_solid(Vec2 p) const {
    double best = kInf;
    for (const auto& s : solids_) {
      if (s.cls == SurfaceClass::WALL) continue;
      best = std::min(best, detail::surface_distance(p, s.shape));
    }
    const double wall = std::min(
        std::min(p.x - outer.min.x, outer.max.x - p.x),
        std::min(p.y - outer.min.y, outer.max.y - p.y));
    return std::min(best, wall);
  }

  void rebuild_surfaces() {
    solids_.clear();
    for (const auto& ob : obstacles) solids_.push_back({ob.shape, ob.cls});
    for (const auto& g : gates)
      for (const auto& post : g.posts())
        solids_.push_back({post, SurfaceClass::GATE_FRAME});
    const auto rect_edges = [](const Rect& r) {
      const Vec2 a{r.min.x, r.min.y}, b{r.max.x, r.min.y};
      const Vec2 c{r.max.x, r.max.y}, d{r.min.x, r.max.y};
      return std::array<ThickSegment, 4>{
          ThickSegment{a, b, 0.0}, ThickSegment{b, c, 0.0},
          ThickSegment{c, d, 0.0}, ThickSegment{d, a, 0.0}};
    };
    for (const auto& e : rect_edges(outer))
      solids_.push_back({e, SurfaceClass::WALL});
    fence_ = rect_edges(mission);
  }

 private:
  std::vector<detail::Surface> solids_;
  std::array<ThickSegment, 4> fence_{};
};

inline Arena build_arena(const ArenaConfig& cfg) {
  if (cfg.outer_size <= 0.0 || cfg.mission_size <= 0.0)
    fail(ErrorCode::invalid_geometry, "arena dimensions must be positive");
  if (cfg.wp_half_side < 0.0)
    fail(ErrorCode::invalid_geometry, "wp_half_side must be non-negative");
  if (cfg.mission_size > cfg.outer_size)
    fail(ErrorCode::invalid_geometry, "mission area must fit inside outer bounds");
  if (2.0 * cfg.wp_half_side > cfg.mission_size)
    fail(ErrorCode::invalid_geometry, "WP square must fit inside mission area");

  Arena a;
  a.outer = Rect::centered({0, 0}, cfg.outer_size, cfg.outer_size);
  a.mission = Rect::centered({0, 0}, cfg.mission_size, cfg.mission_size);
  a.wp_half_side = cfg.wp_half_side;
  const double h = cfg.wp_half_side;
  a.waypoints = {Vec2{-h, -h}, Vec2{h, -h}, Vec2{h, h}, Vec2{-h, h}};

  for (const auto& ob : cfg.obstacles) {
    if (const Circle* c = std::get_if<Circle>(&ob.shape)) {
      if (c->radius <= 0.0)
        fail(ErrorCode::invalid_geometry, "obstacle radius must be positive");
    } else {
      const auto& s = std::get<ThickSegment>(ob.shape);
      if ((s.p1 - s.p0).norm() <= 0.0)
        fail(ErrorCode::invalid_geometry, "segment obstacle must have positive length");
      if (s.thickness < 0.0)
        fail(ErrorCode::invalid_geometry, "segment thickness must be non-negative");
    }
  }
  for (const auto& g : cfg.gates) {
    if (g.width <= 0.0) fail(ErrorCode::invalid_geometry, "gate width must be positive");
    if (g.post_length < 0.0 || g.post_thickness < 0.0)
      fail(ErrorCode::invalid_geometry, "gate post dimensions must be non-negative");
  }

  a.obstacles = cfg.obstacles;
  a.gates = cfg.gates;
  a.rebuild_surfaces();
  return a;
}

inline bool in_mission_area(const Arena& arena, Vec2 p) {
  return arena.mission.contains(p);
}

inline Hit ray_cast_dir(const Arena& arena, Vec2 origin, Vec2 dir,
                        double max_range, bool ground_aware) {
  Hit best;
  for (const auto& s : arena.solid_surfaces()) {
    if (const auto t = detail::ray_surface(origin, dir, s); t && *t < best.distance) {
      best.distance = *t;
      best.cls = s.cls;
    }
  }
  if (ground_aware) {
    for (const auto& e : arena.fence_segments()) {
      if (const auto t = ray_segment(origin, dir, e.p0, e.p1); t && *t < best.distance) {
        best.distance = *t;
        best.cls = SurfaceClass::OUT_OF_AREA_GROUND;
      }
    }
  }
  if (!(best.distance <= max_range)) return Hit{};  // nothing in range
  return best;
}

inline Hit ray_cast(const Arena& arena, Vec2 origin, double angle,
                    double max_range, bool ground_aware) {
  return ray_cast_dir(arena, origin, unit_from_angle(angle), max_range, ground_aware);
}

// True iff the motion segment p_prev -> p_next crosses the gate opening
// (either direction).
inline bool gate_pass(const Gate& gate, Vec2 p_prev, Vec2 p_next) {
  const ThickSegment o = gate.opening();
  return segments_properly_cross(p_prev, p_next, o.p0, o.p1);
}

namespace detail {

inline bool shape_inside_rect(const std::variant<Circle, ThickSegment>& shape,
                              const Rect& r) {
  if (const Circle* c = std::get_if<Circle>(&shape)) {
    return c->center.x - c->radius >= r.min.x && c->center.x + c->radius <= r.max.x &&
           c->center.y - c->radius >= r.min.y && c->center.y + c->radius <= r.max.y;
  }
  const auto& s = std::get<ThickSegment>(shape);
  const double t = s.thickness * 0.5;
  const double lo_x = std::min(s.p0.x, s.p1.x) - t, hi_x = std::max(s.p0.x, s.p1.x) + t;
  const double lo_y = std::min(s.p0.y, s.p1.y) - t, hi_y = std::max(s.p0.y, s.p1.y) + t;
  return lo_x >= r.min.x && hi_x <= r.max.x && lo_y >= r.min.y && hi_y <= r.max.y;
}

inline std::variant<Circle, ThickSegment> reposed_shape(
    const std::variant<Circle, ThickSegment>& shape, Vec2 center, double angle) {
  if (const Circle* c = std::get_if<Circle>(&shape)) return Circle{center, c->radius};
  const auto& s = std::get<ThickSegment>(shape);
  const double half = (s.p1 - s.p0).norm() * 0.5;
  const Vec2 u = unit_from_angle(angle) * half;
  return ThickSegment{center - u, center + u, s.thickness};
}

// Solid shapes that a placement must not overlap: all obstacles except
// `skip_index`, plus gate posts.
inline bool overlaps_existing(const Arena& arena,
                              const std::variant<Circle, ThickSegment>& shape,
                              std::size_t skip_index) {
  for (std::size_t i = 0; i < arena.obstacles.size(); ++i) {
    if (i == skip_index) continue;
    if (shape_shape_distance(shape, arena.obstacles[i].shape) <= 0.0) return true;
  }
  for (const auto& g : arena.gates)
    for (const auto& post : g.posts())
      if (shape_shape_distance(shape, std::variant<Circle, ThickSegment>{post}) <= 0.0)
        return true;
  return false;
}

}  // namespace detail

// Relocates one uniformly chosen movable obstacle to a uniform pose inside
// the mission area, keeping >= min_clearance between its surface and the
// drone's true position and no overlap with other solids. Throws
// PLACEMENT_FAILED after max_attempts rejections (caller keeps the previous
// layout) and NO_MOVABLE when nothing can move.
inline Arena move_dynamic_obstacle(const Arena& arena, Vec2 drone_pos, RngStream& rng,
                                   double min_clearance = 1.0, int max_attempts = 1000) {
  std::vector<std::size_t> movable;
  for (std::size_t i = 0; i < arena.obstacles.size(); ++i)
    if (arena.obstacles[i].movable) movable.push_back(i);
  if (movable.empty()) fail(ErrorCode::no_movable, "no movable obstacle in arena");

  const std::size_t idx = movable[rng.uniform_index(movable.size())];
  const auto& current = arena.obstacles[idx].shape;
  const bool is_segment = std::holds_alternative<ThickSegment>(current);

  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    const Vec2 c{rng.uniform(arena.mission.min.x, arena.mission.max.x),
                 rng.uniform(arena.mission.min.y, arena.mission.max.y)};
    const double angle = is_segment ? rng.uniform(-kPi, kPi) : 0.0;
    const auto candidate = detail::reposed_shape(current, c, angle);
    if (!detail::shape_inside_rect(candidate, arena.mission)) continue;
    if (detail::surface_distance(drone_pos, candidate) < min_clearance) continue;
    if (detail::overlaps_existing(arena, candidate, idx)) continue;

    Arena next = arena;
    next.obstacles[idx].shape = candidate;
    next.rebuild_surfaces();
    return next;
  }
  fail(ErrorCode::placement_failed, "could not place obstacle after max attempts");
}

// Re-draws every obstacle and gate pose uniformly inside the mission area
// (initial-layout randomization for batch experiments).
inline Arena randomize_layout(const Arena& arena, Vec2 start_pos, RngStream& rng,
                              double min_clearance = 1.0, int max_attempts = 1000) {
  Arena next = arena;
  next.obstacles.clear();
  next.gates.clear();
  next.rebuild_surfaces();

  for (const auto& g : arena.gates) {
    Gate placed = g;
    bool ok = false;
    for (int attempt = 0; attempt < max_attempts && !ok; ++attempt) {
      placed.center = {rng.uniform(next.mission.min.x, next.mission.max.x),
                       rng.uniform(next.mission.min.y, next.mission.max.y)};
      placed.angle = rng.uniform(-kPi, kPi);
      ok = true;
      for (const auto& post : placed.posts()) {
        const std::variant<Circle, ThickSegment> shape{post};
        if (!detail::shape_inside_rect(shape, next.mission) ||
            detail::surface_distance(start_pos, shape) < min_clearance ||
            detail::overlaps_existing(next, shape, SIZE_MAX)) {
          ok = false;
          break;
        }
      }
    }
    if (!ok) fail(ErrorCode::placement_failed, "could not place gate");
    next.gates.push_back(placed);
    next.rebuild_surfaces();
  }

  for (const auto& ob : arena.obstacles) {
    const bool is_segment = std::holds_alternative<ThickSegment>(ob.shape);
    bool ok = false;
    Obstacle placed = ob;
    for (int attempt = 0; attempt < max_attempts && !ok; ++attempt) {
      const Vec2 c{rng.uniform(next.mission.min.x, next.mission.max.x),
                   rng.uniform(next.mission.min.y, next.mission.max.y)};
      const double angle = is_segment ? rng.uniform(-kPi, kPi) : 0.0;
      placed.shape = detail::reposed_shape(ob.shape, c, angle);
      ok = detail::shape_inside_rect(placed.shape, next.mission) &&
           detail::surface_distance(start_pos, placed.shape) >= min_clearance &&
           !detail::overlaps_existing(next, placed.shape, SIZE_MAX);
    }
    if (!ok) fail(ErrorCode::placement_failed, "could not place obstacle");
    next.obstacles.push_back(placed);
    next.rebuild_surfaces();
  }
  return next;
}

}  // namespace nanorace
