#pragma once

#include <cstdint>
#include <vector>

#include "nanorace/arena.hpp"
#include "nanorace/error.hpp"
#include "nanorace/perception.hpp"
#include "nanorace/pgm.hpp"

namespace nanorace {

// Per-pixel depth in millimeters (16-bit PGM on disk).
struct DepthRaster {
  int width = 0;
  int height = 0;
  std::vector<std::uint16_t> mm;

  double meters(int x, int y) const {
    return mm[static_cast<std::size_t>(y) * width + x] / 1000.0;
  }
};

// Per-pixel surface class codes (8-bit PGM on disk; values = SurfaceClass).
struct SegRaster {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> cls;

  SurfaceClass at(int x, int y) const {
    return static_cast<SurfaceClass>(cls[static_cast<std::size_t>(y) * width + x]);
  }
};

inline bool is_obstacle_class(SurfaceClass c, bool ground_aware) {
  switch (c) {
    case SurfaceClass::OBSTACLE:
    case SurfaceClass::GATE_FRAME:
    case SurfaceClass::WALL:
      return true;
    case SurfaceClass::OUT_OF_AREA_GROUND:
      return ground_aware;
    default:
      return false;
  }
}

// Collision labels from a rendered depth/segmentation pair: the image is cut
// into three equal vertical thirds (left / center / right) and a third is
// labeled 1 iff at least pixel_fraction of its pixels belong to an
// obstacle-class surface at depth <= d_max (both bounds inclusive).
inline SectorLabels label_from_rasters(const DepthRaster& depth, const SegRaster& seg,
                                       const SensorGeometry& geom,
                                       bool ground_aware = false) {
  if (depth.width != seg.width || depth.height != seg.height)
    fail(ErrorCode::dimension_mismatch, "depth and segmentation sizes differ");
  if (depth.width <= 0 || depth.height <= 0)
    fail(ErrorCode::dimension_mismatch, "raster dimensions must be positive");
  if (depth.width % 3 != 0)
    fail(ErrorCode::dimension_mismatch, "raster width must be divisible by 3");

  const int third = depth.width / 3;
  const long pixels_per_third = static_cast<long>(third) * depth.height;
  SectorLabels out;
  int* labels[3] = {&out.left, &out.center, &out.right};
  for (int s = 0; s < 3; ++s) {
    long count = 0;
    for (int y = 0; y < depth.height; ++y)
      for (int x = s * third; x < (s + 1) * third; ++x)
        if (is_obstacle_class(seg.at(x, y), ground_aware) &&
            depth.meters(x, y) <= geom.d_max)
          ++count;
    *labels[s] =
        (static_cast<double>(count) / pixels_per_third >= geom.pixel_fraction) ? 1 : 0;
  }
  return out;
}

inline DepthRaster depth_from_pgm(const PgmImage& img) {
  if (img.maxval != 65535)
    fail(ErrorCode::bad_header, "depth raster must be a 16-bit PGM (millimeters)");
  return {img.width, img.height, img.samples};
}

inline PgmImage depth_to_pgm(const DepthRaster& d) {
  return {d.width, d.height, 65535, d.mm};
}

inline SegRaster seg_from_pgm(const PgmImage& img) {
  if (img.maxval != 255)
    fail(ErrorCode::bad_header, "segmentation raster must be an 8-bit PGM");
  SegRaster s{img.width, img.height, {}};
  s.cls.reserve(img.samples.size());
  for (const auto v : img.samples) {
    if (v > 4) fail(ErrorCode::bad_header, "segmentation class code out of range");
    s.cls.push_back(static_cast<std::uint8_t>(v));
  }
  return s;
}

inline PgmImage seg_to_pgm(const SegRaster& s) {
  PgmImage img{s.width, s.height, 255, {}};
  img.samples.assign(s.cls.begin(), s.cls.end());
  return img;
}

}  // namespace nanorace
