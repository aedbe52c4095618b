#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "nanorace/arena.hpp"
#include "nanorace/error.hpp"
#include "nanorace/geometry.hpp"
#include "nanorace/rng.hpp"

namespace nanorace {

struct SectorProbs {
  double left = 0.0;
  double center = 0.0;
  double right = 0.0;
  bool operator==(const SectorProbs&) const = default;
};

struct SectorProbsQ8 {
  std::uint8_t left = 0;
  std::uint8_t center = 0;
  std::uint8_t right = 0;
  bool operator==(const SectorProbsQ8&) const = default;
};

struct SectorLabels {
  int left = 0;
  int center = 0;
  int right = 0;
  bool operator==(const SectorLabels&) const = default;
};

struct SensorGeometry {
  double fov = deg2rad(87.0);
  int n_rays = 162;            // one per deployed image column
  double d_max = 2.0;          // collision distance threshold, meters
  double pixel_fraction = 0.10;
  double max_range = 100.0;

  void validate() const {
    if (n_rays < 3 || n_rays % 3 != 0)
      fail(ErrorCode::bad_config, "n_rays must be >= 3 and divisible by 3");
    if (!(fov > 0.0 && fov < kPi)) fail(ErrorCode::bad_config, "fov out of (0, pi)");
    if (d_max <= 0.0) fail(ErrorCode::bad_config, "d_max must be positive");
    if (!(pixel_fraction > 0.0 && pixel_fraction <= 1.0))
      fail(ErrorCode::bad_config, "pixel_fraction out of (0, 1]");
  }
};

// Bearing of ray i relative to the heading; i = 0 is the leftmost ray
// (largest bearing). Written so that offsets for i and n-1-i are exact
// negations, which keeps mirror symmetry bit-exact.
inline double ray_bearing_offset(const SensorGeometry& g, int i) {
  return (static_cast<double>(g.n_rays - 1) * 0.5 - i) * (g.fov / g.n_rays);
}

namespace detail {

// Unit vector at yaw + offset with sin/cos evaluated on |offset| so that
// mirrored rays are exact reflections.
inline Vec2 ray_direction(double yaw, double offset) {
  const double ao = std::abs(offset);
  const double c = std::cos(ao);
  const double s = std::copysign(std::sin(ao), offset);
  const double cy = std::cos(yaw), sy = std::sin(yaw);
  return {cy * c - sy * s, sy * c + cy * s};
}

// Smallest k in [1, n] with k/n >= f, robust to floating rounding of f*n.
inline int fraction_rank(int n, double f) {
  int k = static_cast<int>(std::ceil(f * static_cast<double>(n)));
  k = std::clamp(k, 1, n);
  while (k > 1 && static_cast<double>(k - 1) / n >= f) --k;
  while (k < n && static_cast<double>(k) / n < f) ++k;
  return k;
}

// kth smallest (1-based) of an unsorted distance buffer.
inline double kth_smallest(std::vector<double>& v, int k) {
  std::nth_element(v.begin(), v.begin() + (k - 1), v.end());
  return v[k - 1];
}

}  // namespace detail

// Per-sector obstacle-class hit distances for a pose; sector 0 = left third
// (largest bearings), 1 = center, 2 = right. Rays hitting nothing in range
// contribute +inf.
inline std::array<std::vector<double>, 3> sector_ray_distances(
    const Arena& arena, const Pose2& pose, const SensorGeometry& geom,
    bool ground_aware) {
  geom.validate();
  const int per = geom.n_rays / 3;
  std::array<std::vector<double>, 3> out;
  for (auto& v : out) v.reserve(per);
  for (int i = 0; i < geom.n_rays; ++i) {
    const Vec2 dir = detail::ray_direction(pose.yaw, ray_bearing_offset(geom, i));
    const Hit h = ray_cast_dir(arena, pose.pos, dir, geom.max_range, ground_aware);
    out[i / per].push_back(h.cls == SurfaceClass::NONE ? kInf : h.distance);
  }
  return out;
}

// Binary collision label for one sector given its ray hit distances:
// 1 iff at least fraction f of the rays hit at distance <= d_max
// (both comparisons inclusive).
inline int sector_label_from_distances(std::vector<double> dists,
                                       const SensorGeometry& geom) {
  const int k = detail::fraction_rank(static_cast<int>(dists.size()),
                                      geom.pixel_fraction);
  return detail::kth_smallest(dists, k) <= geom.d_max ? 1 : 0;
}

// Graded collision probability for one sector: with d_f the nearest-rank
// f-quantile of the hit distances, p = clamp(1 - d_f / d_max, 0, 1).
inline double sector_soft_prob_from_distances(std::vector<double> dists,
                                              const SensorGeometry& geom) {
  const int k = detail::fraction_rank(static_cast<int>(dists.size()),
                                      geom.pixel_fraction);
  const double df = detail::kth_smallest(dists, k);
  if (!std::isfinite(df)) return 0.0;
  return std::clamp(1.0 - df / geom.d_max, 0.0, 1.0);
}

inline SectorLabels sector_labels(const Arena& arena, const Pose2& pose,
                                  const SensorGeometry& geom, bool ground_aware) {
  auto d = sector_ray_distances(arena, pose, geom, ground_aware);
  return {sector_label_from_distances(std::move(d[0]), geom),
          sector_label_from_distances(std::move(d[1]), geom),
          sector_label_from_distances(std::move(d[2]), geom)};
}

inline SectorProbs sector_soft_probs(const Arena& arena, const Pose2& pose,
                                     const SensorGeometry& geom, bool ground_aware) {
  auto d = sector_ray_distances(arena, pose, geom, ground_aware);
  return {sector_soft_prob_from_distances(std::move(d[0]), geom),
          sector_soft_prob_from_distances(std::move(d[1]), geom),
          sector_soft_prob_from_distances(std::move(d[2]), geom)};
}

// --- 8-bit wire representation

inline std::uint8_t quantize_channel(double p) {
  const double clamped = std::clamp(p, 0.0, 1.0);
  return static_cast<std::uint8_t>(std::lround(clamped * 255.0));
}

inline SectorProbsQ8 quantize(const SectorProbs& p) {
  return {quantize_channel(p.left), quantize_channel(p.center),
          quantize_channel(p.right)};
}

inline SectorProbs dequantize(const SectorProbsQ8& q) {
  return {q.left / 255.0, q.center / 255.0, q.right / 255.0};
}

inline constexpr std::uint8_t kFrameHeader = 0xAA;
inline constexpr std::size_t kFrameSize = 5;

// [0xAA, left, center, right, left ^ center ^ right]
inline std::array<std::uint8_t, kFrameSize> encode_frame(const SectorProbsQ8& q) {
  const std::uint8_t checksum = q.left ^ q.center ^ q.right;
  return {kFrameHeader, q.left, q.center, q.right, checksum};
}

inline SectorProbsQ8 decode_frame(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kFrameSize)
    fail(ErrorCode::short_frame, "frame needs 5 bytes");
  if (bytes[0] != kFrameHeader)
    fail(ErrorCode::bad_header, "bad frame header byte");
  const std::uint8_t checksum = bytes[1] ^ bytes[2] ^ bytes[3];
  if (checksum != bytes[4])
    fail(ErrorCode::bad_checksum, "frame checksum mismatch");
  return {bytes[1], bytes[2], bytes[3]};
}

// Gaussian perturbation of the three channels, clamped to [0,1].
// sigma = 0 is the identity and consumes no randomness.
inline SectorProbs perception_noise(const SectorProbs& p, double sigma, RngStream& rng) {
  if (sigma < 0.0) fail(ErrorCode::bad_config, "noise sigma must be >= 0");
  if (sigma == 0.0) return p;
  const auto jitter = [&](double v) {
    return std::clamp(v + rng.gaussian(0.0, sigma), 0.0, 1.0);
  };
  return {jitter(p.left), jitter(p.center), jitter(p.right)};
}

}  // namespace nanorace
