#include <catch2/catch_amalgamated.hpp>

#include "nanorace/pgm.hpp"
#include "nanorace/rasters.hpp"
#include "nanorace/rng.hpp"

using namespace nanorace;

namespace {

// independent pixel-counting oracle
SectorLabels raster_oracle(const DepthRaster& d, const SegRaster& s,
                           const SensorGeometry& g, bool aware) {
  const int third = d.width / 3;
  SectorLabels out;
  int* l[3] = {&out.left, &out.center, &out.right};
  for (int sec = 0; sec < 3; ++sec) {
    long hit = 0, total = 0;
    for (int y = 0; y < d.height; ++y)
      for (int x = sec * third; x < (sec + 1) * third; ++x) {
        ++total;
        const int code = static_cast<int>(s.at(x, y));
        const bool obstacle =
            code == 1 || code == 2 || code == 3 || (aware && code == 4);
        if (obstacle && d.meters(x, y) <= g.d_max) ++hit;
      }
    *l[sec] = (static_cast<double>(hit) / total >= g.pixel_fraction) ? 1 : 0;
  }
  return out;
}

}  // namespace

TEST_CASE("label_from_rasters canonical cases") {
  const SensorGeometry g;
  SECTION("all-sky -> (0,0,0)") {
    const DepthRaster d{324, 324, std::vector<std::uint16_t>(324 * 324, 65535)};
    const SegRaster s{324, 324, std::vector<std::uint8_t>(324 * 324, 0)};
    CHECK(label_from_rasters(d, s, g) == SectorLabels{0, 0, 0});
  }
  SECTION("left third 15% obstacle pixels at 1.5 m -> (1,0,0)") {
    DepthRaster d{324, 324, std::vector<std::uint16_t>(324 * 324, 65535)};
    SegRaster s{324, 324, std::vector<std::uint8_t>(324 * 324, 0)};
    const long npix = 108 * 324;
    long painted = 0;
    for (int y = 0; y < 324 && painted < npix * 15 / 100; ++y)
      for (int x = 0; x < 108 && painted < npix * 15 / 100; ++x) {
        s.cls[static_cast<std::size_t>(y) * 324 + x] = 1;
        d.mm[static_cast<std::size_t>(y) * 324 + x] = 1500;
        ++painted;
      }
    CHECK(label_from_rasters(d, s, g) == SectorLabels{1, 0, 0});
  }
  SECTION("inclusive boundary: minimal count at exactly 2.0 m") {
    // 108x324 third = 34992 px; smallest count with count/npix >= 0.10 is 3500
    DepthRaster d{324, 324, std::vector<std::uint16_t>(324 * 324, 65535)};
    SegRaster s{324, 324, std::vector<std::uint8_t>(324 * 324, 0)};
    long painted = 0;
    for (int y = 0; y < 324 && painted < 3500; ++y)
      for (int x = 108; x < 216 && painted < 3500; ++x) {
        s.cls[static_cast<std::size_t>(y) * 324 + x] = 2;  // gate frames count
        d.mm[static_cast<std::size_t>(y) * 324 + x] = 2000;
        ++painted;
      }
    CHECK(label_from_rasters(d, s, g) == SectorLabels{0, 1, 0});
    // one pixel fewer drops below 10%
    s.cls[static_cast<std::size_t>(0) * 324 + 108] = 0;
    CHECK(label_from_rasters(d, s, g) == SectorLabels{0, 0, 0});
    // one millimeter beyond d_max does not count
    s.cls[static_cast<std::size_t>(0) * 324 + 108] = 2;
    d.mm[static_cast<std::size_t>(0) * 324 + 108] = 2001;
    CHECK(label_from_rasters(d, s, g) == SectorLabels{0, 0, 0});
  }
  SECTION("dimension mismatch") {
    const DepthRaster d{6, 4, std::vector<std::uint16_t>(24, 0)};
    const SegRaster s{6, 5, std::vector<std::uint8_t>(30, 0)};
    CHECK_THROWS_MATCHES(label_from_rasters(d, s, g), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                           return e.code() == ErrorCode::dimension_mismatch;
                         }));
    const DepthRaster d2{7, 4, std::vector<std::uint16_t>(28, 0)};
    const SegRaster s2{7, 4, std::vector<std::uint8_t>(28, 0)};
    CHECK_THROWS_AS(label_from_rasters(d2, s2, g), Error);  // width % 3 != 0
  }
}

TEST_CASE("label_from_rasters matches the pixel oracle on random rasters") {
  RngStream rng(51);
  const SensorGeometry g;
  for (int rep = 0; rep < 200; ++rep) {
    const int w = 3 * (1 + static_cast<int>(rng.uniform_index(20)));
    const int h = 1 + static_cast<int>(rng.uniform_index(40));
    DepthRaster d{w, h, std::vector<std::uint16_t>(static_cast<std::size_t>(w) * h)};
    SegRaster s{w, h, std::vector<std::uint8_t>(static_cast<std::size_t>(w) * h)};
    for (std::size_t i = 0; i < d.mm.size(); ++i) {
      d.mm[i] = static_cast<std::uint16_t>(rng.uniform_index(4001));  // 0..4 m
      s.cls[i] = static_cast<std::uint8_t>(rng.uniform_index(5));
    }
    const bool aware = rng.uniform() < 0.5;
    CHECK(label_from_rasters(d, s, g, aware) == raster_oracle(d, s, g, aware));
  }
}

TEST_CASE("PGM parser and writer") {
  SECTION("1x1 zero image") {
    const PgmImage img{1, 1, 255, {0}};
    const auto bytes = write_pgm(img);
    const std::string expected = "P5\n1 1\n255\n";
    REQUIRE(bytes.size() == expected.size() + 1);
    CHECK(std::string(bytes.begin(), bytes.begin() + expected.size()) == expected);
    CHECK(bytes.back() == 0x00);
  }
  SECTION("roundtrip is lossless for random 8- and 16-bit images") {
    RngStream rng(52);
    for (int rep = 0; rep < 50; ++rep) {
      PgmImage img;
      img.width = 1 + static_cast<int>(rng.uniform_index(40));
      img.height = 1 + static_cast<int>(rng.uniform_index(40));
      img.maxval = rng.uniform() < 0.5 ? 255 : 65535;
      const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
      img.samples.resize(n);
      for (auto& v : img.samples)
        v = static_cast<std::uint16_t>(rng.uniform_index(img.maxval + 1));
      const PgmImage back = read_pgm(write_pgm(img));
      CHECK(back.width == img.width);
      CHECK(back.height == img.height);
      CHECK(back.maxval == img.maxval);
      CHECK(back.samples == img.samples);
    }
  }
  SECTION("comments are tolerated on read") {
    const std::string text = "P5\n# a comment\n2 1\n# another\n255\nAB";
    const PgmImage img =
        read_pgm(std::vector<std::uint8_t>(text.begin(), text.end()));
    CHECK(img.width == 2);
    CHECK(img.samples[0] == 'A');
  }
  SECTION("bad magic") {
    const std::string text = "P6\n1 1\n255\nX";
    CHECK_THROWS_MATCHES(read_pgm(std::vector<std::uint8_t>(text.begin(), text.end())),
                         Error, Catch::Matchers::Predicate<Error>([](const Error& e) {
                           return e.code() == ErrorCode::bad_magic;
                         }));
  }
  SECTION("truncated raster") {
    const std::string text = "P5\n4 4\n255\nAB";
    CHECK_THROWS_MATCHES(read_pgm(std::vector<std::uint8_t>(text.begin(), text.end())),
                         Error, Catch::Matchers::Predicate<Error>([](const Error& e) {
                           return e.code() == ErrorCode::truncated;
                         }));
  }
  SECTION("unsupported maxval") {
    const std::string text = "P5\n1 1\n100\nX";
    CHECK_THROWS_MATCHES(read_pgm(std::vector<std::uint8_t>(text.begin(), text.end())),
                         Error, Catch::Matchers::Predicate<Error>([](const Error& e) {
                           return e.code() == ErrorCode::bad_header;
                         }));
  }
}
