#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace nanorace {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline double deg2rad(double d) { return d * kPi / 180.0; }
inline double rad2deg(double r) { return r * 180.0 / kPi; }

// Normalize an angle to (-pi, pi].
inline double wrap_angle(double a) {
  double r = std::remainder(a, kTwoPi);
  if (r <= -kPi) r += kTwoPi;
  return r;
}

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator-() const { return {-x, -y}; }
  bool operator==(const Vec2&) const = default;

  double dot(Vec2 o) const { return x * o.x + y * o.y; }
  double cross(Vec2 o) const { return x * o.y - y * o.x; }
  double norm2() const { return x * x + y * y; }
  double norm() const { return std::sqrt(norm2()); }
  Vec2 rotated(double a) const {
    const double c = std::cos(a), s = std::sin(a);
    return {c * x - s * y, s * x + c * y};
  }
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }

inline Vec2 unit_from_angle(double a) { return {std::cos(a), std::sin(a)}; }

struct Pose2 {
  Vec2 pos;
  double yaw = 0.0;
  bool operator==(const Pose2&) const = default;
};

// rel expressed in the body frame of `base`; result is base advanced by rel.
inline Pose2 compose(const Pose2& base, const Pose2& rel) {
  return {base.pos + rel.pos.rotated(base.yaw), wrap_angle(base.yaw + rel.yaw)};
}

// Inverse of compose: the body-frame increment taking `from` to `to`.
inline Pose2 relative_pose(const Pose2& from, const Pose2& to) {
  const Vec2 d = to.pos - from.pos;
  return {d.rotated(-from.yaw), wrap_angle(to.yaw - from.yaw)};
}

struct Rect {
  Vec2 min;
  Vec2 max;

  bool contains(Vec2 p) const {  // boundary counts as inside
    return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y;
  }
  Vec2 center() const { return {(min.x + max.x) * 0.5, (min.y + max.y) * 0.5}; }
  double width() const { return max.x - min.x; }
  double height() const { return max.y - min.y; }

  static Rect centered(Vec2 c, double w, double h) {
    return {{c.x - w * 0.5, c.y - h * 0.5}, {c.x + w * 0.5, c.y + h * 0.5}};
  }
};

struct Circle {
  Vec2 center;
  double radius = 0.0;
};

// Segment with a physical thickness; geometrically a capsule of radius
// thickness/2 around the spine p0-p1.
struct ThickSegment {
  Vec2 p0;
  Vec2 p1;
  double thickness = 0.0;
};

// --- ray intersections; rays are (origin, unit dir), returns nearest t >= 0.

inline std::optional<double> ray_circle(Vec2 o, Vec2 d, const Circle& c) {
  const Vec2 oc = o - c.center;
  const double b = d.dot(oc);
  const double q = oc.norm2() - c.radius * c.radius;
  const double disc = b * b - q;
  if (disc < 0.0) return std::nullopt;
  const double s = std::sqrt(disc);
  double t = -b - s;
  if (t < 0.0) t = -b + s;  // origin inside: exit point
  if (t < 0.0) return std::nullopt;
  return t;
}

// Thin segment a-b.
inline std::optional<double> ray_segment(Vec2 o, Vec2 d, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double denom = d.cross(ab);
  if (denom == 0.0) return std::nullopt;  // parallel or degenerate
  const Vec2 ao = a - o;
  const double t = ao.cross(ab) / denom;
  const double s = ao.cross(d) / denom;
  if (t < 0.0 || s < 0.0 || s > 1.0) return std::nullopt;
  return t;
}

inline std::optional<double> ray_thick_segment(Vec2 o, Vec2 d, const ThickSegment& seg) {
  const double r = seg.thickness * 0.5;
  if (r <= 0.0) return ray_segment(o, d, seg.p0, seg.p1);
  const Vec2 ab = seg.p1 - seg.p0;
  const double len = ab.norm();
  double best = kInf;
  const auto keep = [&best](std::optional<double> t) {
    if (t && *t < best) best = *t;
  };
  keep(ray_circle(o, d, {seg.p0, r}));
  keep(ray_circle(o, d, {seg.p1, r}));
  if (len > 0.0) {
    const Vec2 n = Vec2{-ab.y, ab.x} * (r / len);
    keep(ray_segment(o, d, seg.p0 + n, seg.p1 + n));
    keep(ray_segment(o, d, seg.p0 - n, seg.p1 - n));
  }
  if (!std::isfinite(best)) return std::nullopt;
  return best;
}

// --- distances

inline double dist_point_segment(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double l2 = ab.norm2();
  if (l2 == 0.0) return (p - a).norm();
  const double t = std::clamp((p - a).dot(ab) / l2, 0.0, 1.0);
  return (p - (a + ab * t)).norm();
}

inline double dist_point_circle_surface(Vec2 p, const Circle& c) {
  return (p - c.center).norm() - c.radius;  // negative inside
}

inline double dist_point_thick_segment_surface(Vec2 p, const ThickSegment& s) {
  return dist_point_segment(p, s.p0, s.p1) - s.thickness * 0.5;
}

inline double dist_segment_segment(Vec2 a0, Vec2 a1, Vec2 b0, Vec2 b1) {
  // proper intersection => 0
  const auto orient = [](Vec2 p, Vec2 q, Vec2 r) { return (q - p).cross(r - p); };
  const double d1 = orient(b0, b1, a0), d2 = orient(b0, b1, a1);
  const double d3 = orient(a0, a1, b0), d4 = orient(a0, a1, b1);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
      ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
    return 0.0;
  return std::min(std::min(dist_point_segment(a0, b0, b1), dist_point_segment(a1, b0, b1)),
                  std::min(dist_point_segment(b0, a0, a1), dist_point_segment(b1, a0, a1)));
}

// True iff the open interiors of segments p0-p1 and q0-q1 cross. Touching at
// an endpoint or collinear overlap does not count.
inline bool segments_properly_cross(Vec2 p0, Vec2 p1, Vec2 q0, Vec2 q1) {
  const auto orient = [](Vec2 a, Vec2 b, Vec2 c) { return (b - a).cross(c - a); };
  const double d1 = orient(q0, q1, p0);
  const double d2 = orient(q0, q1, p1);
  const double d3 = orient(p0, p1, q0);
  const double d4 = orient(p0, p1, q1);
  return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
         ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

// Length of the part of segment p-q lying inside rect (Liang-Barsky).
inline double clipped_length_in_rect(Vec2 p, Vec2 q, const Rect& r) {
  const Vec2 d = q - p;
  double t0 = 0.0, t1 = 1.0;
  const auto clip = [&](double denom, double num) {
    if (denom == 0.0) return num >= 0.0;  // parallel: keep iff inside this slab
    const double t = num / denom;
    if (denom < 0.0) {
      if (t > t1) return false;
      if (t > t0) t0 = t;
    } else {
      if (t < t0) return false;
      if (t < t1) t1 = t;
    }
    return true;
  };
  if (!clip(-d.x, p.x - r.min.x)) return 0.0;
  if (!clip(d.x, r.max.x - p.x)) return 0.0;
  if (!clip(-d.y, p.y - r.min.y)) return 0.0;
  if (!clip(d.y, r.max.y - p.y)) return 0.0;
  if (t1 < t0) return 0.0;
  return d.norm() * (t1 - t0);
}

}  // namespace nanorace
