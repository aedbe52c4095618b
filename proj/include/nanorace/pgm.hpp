#pragma once

#include <cctype>
#include <cstdint>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "nanorace/error.hpp"

namespace nanorace {

// Binary PGM (P5) with maxval 255 (8-bit payloads) or 65535 (16-bit,
// big-endian sample order). Comments are tolerated on read, never written.
struct PgmImage {
  int width = 0;
  int height = 0;
  int maxval = 255;
  std::vector<std::uint16_t> samples;  // row-major
};

namespace detail {

inline int pgm_read_int(std::span<const std::uint8_t> bytes, std::size_t& pos) {
  // skip whitespace and '#' comments
  while (pos < bytes.size()) {
    const char c = static_cast<char>(bytes[pos]);
    if (c == '#') {
      while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      ++pos;
    } else {
      break;
    }
  }
  if (pos >= bytes.size() || !std::isdigit(bytes[pos]))
    fail(ErrorCode::bad_header, "expected integer in PGM header");
  long v = 0;
  while (pos < bytes.size() && std::isdigit(bytes[pos])) {
    v = v * 10 + (bytes[pos] - '0');
    if (v > 1 << 30) fail(ErrorCode::bad_header, "PGM header value too large");
    ++pos;
  }
  return static_cast<int>(v);
}

}  // namespace detail

inline PgmImage read_pgm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5')
    fail(ErrorCode::bad_magic, "not a binary PGM (P5) stream");
  std::size_t pos = 2;
  PgmImage img;
  img.width = detail::pgm_read_int(bytes, pos);
  img.height = detail::pgm_read_int(bytes, pos);
  img.maxval = detail::pgm_read_int(bytes, pos);
  if (img.width <= 0 || img.height <= 0)
    fail(ErrorCode::bad_header, "PGM dimensions must be positive");
  if (img.maxval != 255 && img.maxval != 65535)
    fail(ErrorCode::bad_header, "PGM maxval must be 255 or 65535");
  if (pos >= bytes.size() ||
      !std::isspace(static_cast<unsigned char>(bytes[pos])))
    fail(ErrorCode::bad_header, "missing whitespace after PGM maxval");
  ++pos;  // exactly one whitespace byte before raster data

  const std::size_t count = static_cast<std::size_t>(img.width) * img.height;
  const std::size_t stride = img.maxval > 255 ? 2 : 1;
  if (bytes.size() - pos < count * stride)
    fail(ErrorCode::truncated, "PGM raster data truncated");
  img.samples.resize(count);
  if (stride == 1) {
    for (std::size_t i = 0; i < count; ++i) img.samples[i] = bytes[pos + i];
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      img.samples[i] = static_cast<std::uint16_t>(
          (bytes[pos + 2 * i] << 8) | bytes[pos + 2 * i + 1]);
    }
  }
  return img;
}

inline std::vector<std::uint8_t> write_pgm(const PgmImage& img) {
  if (img.maxval != 255 && img.maxval != 65535)
    fail(ErrorCode::bad_header, "PGM maxval must be 255 or 65535");
  if (img.samples.size() != static_cast<std::size_t>(img.width) * img.height)
    fail(ErrorCode::dimension_mismatch, "sample count does not match dimensions");
  std::string header = "P5\n" + std::to_string(img.width) + " " +
                       std::to_string(img.height) + "\n" +
                       std::to_string(img.maxval) + "\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  if (img.maxval == 255) {
    for (const auto s : img.samples) out.push_back(static_cast<std::uint8_t>(s));
  } else {
    for (const auto s : img.samples) {
      out.push_back(static_cast<std::uint8_t>(s >> 8));
      out.push_back(static_cast<std::uint8_t>(s & 0xFF));
    }
  }
  return out;
}

inline PgmImage read_pgm_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io_error, "cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return read_pgm(bytes);
}

inline void write_pgm_file(const std::string& path, const PgmImage& img) {
  const auto bytes = write_pgm(img);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::io_error, "cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

}  // namespace nanorace
