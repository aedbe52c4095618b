#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "nanorace/error.hpp"
#include "nanorace/pgm.hpp"
#include "nanorace/rng.hpp"

namespace nanorace {

struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // row-major

  std::uint8_t at(int x, int y) const {
    return pixels[static_cast<std::size_t>(y) * width + x];
  }
  std::uint8_t& at(int x, int y) {
    return pixels[static_cast<std::size_t>(y) * width + x];
  }
  static GrayImage filled(int w, int h, std::uint8_t v) {
    return {w, h, std::vector<std::uint8_t>(static_cast<std::size_t>(w) * h, v)};
  }
};

inline GrayImage gray_from_pgm(const PgmImage& img) {
  if (img.maxval != 255) fail(ErrorCode::bad_header, "expected an 8-bit PGM");
  GrayImage g{img.width, img.height, {}};
  g.pixels.assign(img.samples.begin(), img.samples.end());
  return g;
}

inline PgmImage gray_to_pgm(const GrayImage& g) {
  PgmImage img{g.width, g.height, 255, {}};
  img.samples.assign(g.pixels.begin(), g.pixels.end());
  return img;
}

struct AugParams {
  double motion_blur_length = 0.0;  // px; <= 1 disables
  double motion_blur_angle = 0.0;   // rad
  double gaussian_sigma = 0.0;      // px
  double noise_sigma = 0.0;         // intensity units
  double gain = 1.0;
  double gamma = 1.0;
  double range_lo = 0.0;   // output window, intensity units
  double range_hi = 255.0;
  double vignette = 0.0;   // [0, 1]

  void validate() const {
    if (motion_blur_length < 0.0 || gaussian_sigma < 0.0 || noise_sigma < 0.0)
      fail(ErrorCode::bad_config, "blur/noise magnitudes must be >= 0");
    if (gamma <= 0.0 || gain <= 0.0) fail(ErrorCode::bad_config, "gain and gamma must be positive");
    if (!(range_lo < range_hi)) fail(ErrorCode::bad_config, "range_lo must be < range_hi");
    if (vignette < 0.0 || vignette > 1.0) fail(ErrorCode::bad_config, "vignette out of [0, 1]");
  }
};

namespace detail {

inline double sample_clamped(const std::vector<double>& buf, int w, int h, int x, int y) {
  x = std::clamp(x, 0, w - 1);
  y = std::clamp(y, 0, h - 1);
  return buf[static_cast<std::size_t>(y) * w + x];
}

inline void motion_blur(std::vector<double>& buf, int w, int h, double length,
                        double angle) {
  const int taps = static_cast<int>(std::lround(length));
  if (taps <= 1) return;
  const double cx = std::cos(angle), sy = std::sin(angle);
  std::vector<int> ox(taps), oy(taps);
  for (int k = 0; k < taps; ++k) {
    const double off = k - (taps - 1) * 0.5;
    ox[k] = static_cast<int>(std::lround(off * cx));
    oy[k] = static_cast<int>(std::lround(off * sy));
  }
  std::vector<double> out(buf.size());
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int k = 0; k < taps; ++k)
        acc += sample_clamped(buf, w, h, x + ox[k], y + oy[k]);
      out[static_cast<std::size_t>(y) * w + x] = acc / taps;
    }
  buf.swap(out);
}

inline void gaussian_blur(std::vector<double>& buf, int w, int h, double sigma) {
  if (sigma <= 0.0) return;
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> kernel(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    kernel[i + radius] = std::exp(-0.5 * (i * i) / (sigma * sigma));
    sum += kernel[i + radius];
  }
  for (auto& k : kernel) k /= sum;

  std::vector<double> tmp(buf.size());
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i)
        acc += kernel[i + radius] * sample_clamped(buf, w, h, x + i, y);
      tmp[static_cast<std::size_t>(y) * w + x] = acc;
    }
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i)
        acc += kernel[i + radius] * tmp[static_cast<std::size_t>(std::clamp(y + i, 0, h - 1)) * w + x];
      buf[static_cast<std::size_t>(y) * w + x] = acc;
    }
}

}  // namespace detail

// Photometric augmentation in a fixed stage order: motion blur, Gaussian
// blur, exposure (gain/gamma/output window with radial vignetting), then
// additive Gaussian noise. Identity parameters reproduce the input exactly,
// and only the noise stage consumes randomness.
inline GrayImage augment(const GrayImage& img, const AugParams& p, std::uint64_t seed) {
  p.validate();
  const int w = img.width, h = img.height;
  std::vector<double> buf(img.pixels.begin(), img.pixels.end());

  detail::motion_blur(buf, w, h, p.motion_blur_length, p.motion_blur_angle);
  detail::gaussian_blur(buf, w, h, p.gaussian_sigma);

  const double cx = (w - 1) * 0.5, cy = (h - 1) * 0.5;
  const double d2_max = cx * cx + cy * cy;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      double vig = 1.0;
      if (p.vignette > 0.0 && d2_max > 0.0) {
        const double d2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
        vig = 1.0 - p.vignette * (d2 / d2_max);
      }
      const double v = std::pow(p.gain * vig * (buf[i] / 255.0), p.gamma);
      buf[i] = p.range_lo + (p.range_hi - p.range_lo) * v;
    }

  if (p.noise_sigma > 0.0) {
    RngStream rng(seed);
    for (auto& v : buf) v += rng.gaussian(0.0, p.noise_sigma);
  }

  GrayImage out{w, h, std::vector<std::uint8_t>(buf.size())};
  for (std::size_t i = 0; i < buf.size(); ++i) {
    const double v = std::clamp(buf[i], 0.0, 255.0);
    out.pixels[i] = static_cast<std::uint8_t>(std::lround(v));
  }
  return out;
}

// Bilinear resize with half-pixel centers; the camera-pipeline default is
// 162x162.
inline GrayImage resize_gray(const GrayImage& img, int out_w = 162, int out_h = 162) {
  if (out_w <= 0 || out_h <= 0) fail(ErrorCode::bad_config, "output size must be positive");
  if (img.width <= 0 || img.height <= 0)
    fail(ErrorCode::bad_config, "input image is empty");
  GrayImage out{out_w, out_h, std::vector<std::uint8_t>(
                                  static_cast<std::size_t>(out_w) * out_h)};
  const double sx = static_cast<double>(img.width) / out_w;
  const double sy = static_cast<double>(img.height) / out_h;
  for (int y = 0; y < out_h; ++y) {
    const double fy = (y + 0.5) * sy - 0.5;
    const int y0 = std::clamp(static_cast<int>(std::floor(fy)), 0, img.height - 1);
    const int y1 = std::min(y0 + 1, img.height - 1);
    const double wy = std::clamp(fy - y0, 0.0, 1.0);
    for (int x = 0; x < out_w; ++x) {
      const double fx = (x + 0.5) * sx - 0.5;
      const int x0 = std::clamp(static_cast<int>(std::floor(fx)), 0, img.width - 1);
      const int x1 = std::min(x0 + 1, img.width - 1);
      const double wx = std::clamp(fx - x0, 0.0, 1.0);
      const double top = img.at(x0, y0) + wx * (img.at(x1, y0) - img.at(x0, y0));
      const double bot = img.at(x0, y1) + wx * (img.at(x1, y1) - img.at(x0, y1));
      out.at(x, y) = static_cast<std::uint8_t>(
          std::lround(std::clamp(top + wy * (bot - top), 0.0, 255.0)));
    }
  }
  return out;
}

}  // namespace nanorace
