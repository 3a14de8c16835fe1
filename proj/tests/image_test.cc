/* Copyright 2026 The imverify Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "imverify/image.hpp"
#include "test_util.hpp"

namespace imverify {
namespace {

TEST(RoundCoord, Identity) { EXPECT_EQ(round_coord(0.0, 0.0), (Coord{0, 0})); }

TEST(RoundCoord, RotatedUnitVectorRoundsUp) {
  EXPECT_EQ(round_coord(std::sqrt(3.0) / 2, 0.5), (Coord{1, 1}));
}

TEST(RoundCoord, TiesGoTowardPositiveInfinity) {
  EXPECT_EQ(round_coord(-0.5, 2.4), (Coord{0, 2}));
  EXPECT_EQ(round_coord(-1.5, 2.5), (Coord{-1, 3}));
  EXPECT_EQ(round_coord(-2.6, -0.49), (Coord{-3, 0}));
}

TEST(RoundCoord, IdempotentOnIntegers) {
  for (int i = -5; i <= 5; ++i) {
    for (int j = -5; j <= 5; ++j) {
      const Coord c = round_coord(i, j);
      EXPECT_EQ(c, (Coord{i, j}));
      EXPECT_EQ(round_coord(c.i, c.j), c);
    }
  }
}

TEST(ClampPixel, Examples) {
  EXPECT_EQ(clamp_pixel(128.0), 128);
  EXPECT_EQ(clamp_pixel(300.2), 255);
  EXPECT_EQ(clamp_pixel(-7), 0);
  EXPECT_EQ(clamp_pixel(254.5), 255);
  EXPECT_EQ(clamp_pixel(0.49), 0);
}

TEST(ClampPixel, Idempotent) {
  for (double v = -20; v < 280; v += 0.25) {
    const auto once = clamp_pixel(v);
    EXPECT_EQ(clamp_pixel(once), once) << v;
  }
}

TEST(ImageTest, RejectsInvalidShapes) {
  EXPECT_THROW(Image(0, 3, 1, {}), DomainError);
  EXPECT_THROW(Image(2, 2, 2, std::vector<std::uint8_t>(8)), DomainError);
  EXPECT_THROW(Image(2, 2, 1, std::vector<std::uint8_t>(3)), DomainError);
  EXPECT_NO_THROW(Image(2, 2, 3, std::vector<std::uint8_t>(12)));
}

TEST(ImageTest, RowMajorInterleavedLayout) {
  Image img(3, 2, 3, std::vector<std::uint8_t>(18));
  img.at(2, 1, 1) = 9;
  EXPECT_EQ(img.pixels()[(1 * 3 + 2) * 3 + 1], 9);
}

TEST(DigestTest, EqualImagesEqualDigests) {
  const Image a = testing::random_image(7, 5, 3, 1);
  const Image b = a;
  EXPECT_EQ(a, b);
  EXPECT_EQ(image_digest(a), image_digest(b));
}

TEST(DigestTest, OnePixelChangeChangesDigest) {
  const Image a = testing::random_image(8, 8, 1, 2);
  Image b = a;
  b.at(3, 4) = static_cast<std::uint8_t>(b.at(3, 4) + 1);
  EXPECT_NE(a, b);
  EXPECT_NE(image_digest(a), image_digest(b));
}

TEST(DigestTest, ShapeIsPartOfTheDigest) {
  const Image a = Image::filled(4, 2, 1, 0);
  const Image b = Image::filled(2, 4, 1, 0);
  const Image c = Image::filled(8, 1, 1, 0);
  std::set<std::string> seen{to_hex(image_digest(a)), to_hex(image_digest(b)),
                             to_hex(image_digest(c))};
  EXPECT_EQ(seen.size(), 3u);
}

TEST(DigestTest, StableForBlackPixel) {
  const auto d = to_hex(image_digest(Image::filled(1, 1, 1, 0)));
  EXPECT_EQ(d, to_hex(image_digest(Image::filled(1, 1, 1, 0))));
  // SHA-256 of the 12-byte header (1, 1, 1 little-endian) and one zero byte.
  EXPECT_EQ(d, "c705fdce94b04877ccbcedcd6c9c660ea5848505b4eb2dd44c1dd4691fc230f7");
}

TEST(DigestTest, HexRoundTrip) {
  const auto d = image_digest(testing::random_image(3, 3, 1, 9));
  EXPECT_EQ(digest_from_hex(to_hex(d)), d);
  EXPECT_THROW(digest_from_hex("abc"), DomainError);
}

TEST(PngTest, RoundTripGrayAndRgb) {
  const auto dir = testing::scratch_dir("png");
  for (int ch : {1, 3}) {
    const Image img = testing::random_image(13, 7, ch, static_cast<std::uint64_t>(ch));
    const auto path = dir / ("img" + std::to_string(ch) + ".png");
    write_png(img, path);
    EXPECT_EQ(read_png(path), img);
  }
}

TEST(PngTest, MissingFileThrows) {
  EXPECT_THROW(read_png("/nonexistent/none.png"), std::exception);
}

}  // namespace
}  // namespace imverify
