#pragma once

#include <cmath>
#include <vector>

#include "nanorace/arena.hpp"
#include "nanorace/error.hpp"
#include "nanorace/geometry.hpp"
#include "nanorace/vehicle.hpp"

namespace nanorace {

struct ScoreInput {
  double distance_m = 0.0;  // in-area traveled distance
  int gate_passes = 0;
  int alpha_env = 1;   // 1 | 5 | 10
  int alpha_comp = 1;  // 1 | 5
};

// Competition score: (distance + 10 * gates) * alpha_env * alpha_comp.
inline double score(const ScoreInput& s) {
  if (s.alpha_env != 1 && s.alpha_env != 5 && s.alpha_env != 10)
    fail(ErrorCode::invalid_multiplier, "alpha_env must be 1, 5 or 10");
  if (s.alpha_comp != 1 && s.alpha_comp != 5)
    fail(ErrorCode::invalid_multiplier, "alpha_comp must be 1 or 5");
  if (s.distance_m < 0.0 || s.gate_passes < 0)
    fail(ErrorCode::bad_config, "distance and gate passes must be >= 0");
  return (s.distance_m + 10.0 * s.gate_passes) * s.alpha_env * s.alpha_comp;
}

// Sum of per-step displacement lengths clipped to the mission square;
// segments crossing the boundary contribute only their inside portion.
inline double in_area_distance_points(const std::vector<Vec2>& pts, const Arena& arena) {
  double d = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i)
    d += clipped_length_in_rect(pts[i - 1], pts[i], arena.mission);
  return d;
}

inline double in_area_distance(const RunRecord& rec, const Arena& arena) {
  double d = 0.0;
  for (std::size_t i = 1; i < rec.rows.size(); ++i)
    d += clipped_length_in_rect(rec.rows[i - 1].truth.pos, rec.rows[i].truth.pos,
                                arena.mission);
  return d;
}

// Number of gate-opening crossings along the recorded true trajectory;
// both directions count, each crossing counts once.
inline int count_gate_passes_points(const std::vector<Vec2>& pts, const Arena& arena) {
  int n = 0;
  for (std::size_t i = 1; i < pts.size(); ++i)
    for (const auto& g : arena.gates)
      if (gate_pass(g, pts[i - 1], pts[i])) ++n;
  return n;
}

inline int count_gate_passes(const RunRecord& rec, const Arena& arena) {
  int n = 0;
  for (std::size_t i = 1; i < rec.rows.size(); ++i)
    for (const auto& g : arena.gates)
      if (gate_pass(g, rec.rows[i - 1].truth.pos, rec.rows[i].truth.pos)) ++n;
  return n;
}

}  // namespace nanorace
