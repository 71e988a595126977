// Copyright 2026 The TDM Pipeline Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <random>

#include <gtest/gtest.h>

#include "tdm/error.hpp"
#include "tdm/geometry.hpp"
#include "tdm/pnm.hpp"
#include "tdm/raster.hpp"

namespace tdm {
namespace {

TEST(ClampBox, ClipsNegativeCorner) {
  EXPECT_EQ(clamp_box({-5, -5, 10, 10}, 100, 100), (BoundingBox{0, 0, 10, 10}));
}

TEST(ClampBox, InsideBoxUnchanged) {
  EXPECT_EQ(clamp_box({10, 10, 20, 20}, 100, 100), (BoundingBox{10, 10, 20, 20}));
}

TEST(ClampBox, FullyOutsideCollapsesToBorder) {
  const BoundingBox b = clamp_box({200, 200, 300, 300}, 100, 100);
  EXPECT_EQ(b, (BoundingBox{100, 100, 100, 100}));
  EXPECT_EQ(box_area(b), 0.0);
}

TEST(ClampBox, IdempotentAndNeverGrows) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> coord(-50.0, 150.0);
  for (int i = 0; i < 1000; ++i) {
    double x0 = coord(rng), x1 = coord(rng), y0 = coord(rng), y1 = coord(rng);
    if (x0 > x1) std::swap(x0, x1);
    if (y0 > y1) std::swap(y0, y1);
    const BoundingBox b{x0, y0, x1, y1};
    const BoundingBox once = clamp_box(b, 100, 80);
    EXPECT_EQ(clamp_box(once, 100, 80), once);
    EXPECT_LE(box_area(once), box_area(b));
    EXPECT_TRUE(once.is_valid());
    EXPECT_GE(once.x_min, 0.0);
    EXPECT_LE(once.x_max, 100.0);
    EXPECT_LE(once.y_max, 80.0);
  }
}

TEST(BoxArea, Examples) {
  EXPECT_EQ(box_area({0, 0, 10, 10}), 100.0);
  EXPECT_EQ(box_area({5, 5, 5, 9}), 0.0);
  EXPECT_DOUBLE_EQ(box_area({1.5, 2.0, 4.0, 6.0}), 10.0);
}

TEST(InnerPixelRect, RoundsInward) {
  EXPECT_EQ(inner_pixel_rect({0, 0, 10, 10}), (PixelRect{0, 0, 10, 10}));
  EXPECT_EQ(inner_pixel_rect({0.4, 1.5, 9.6, 3.0}), (PixelRect{1, 2, 8, 1}));
  EXPECT_TRUE(inner_pixel_rect({2.2, 2.2, 2.8, 9}).empty());
}

TEST(Frame, RejectsWrongBufferLength) {
  EXPECT_THROW(Frame(0, 0, 4, 4, 1, std::vector<std::uint8_t>(15)), ValidationError);
  EXPECT_THROW(Frame(0, 0, 4, 4, 3, std::vector<std::uint8_t>(16)), ValidationError);
  EXPECT_THROW(Frame(0, 0, 4, 4, 2, std::vector<std::uint8_t>(32)), ValidationError);
  EXPECT_NO_THROW(Frame(0, 0, 4, 4, 3, std::vector<std::uint8_t>(48)));
}

TEST(MaskToGlobal, PlacesMaskAtOffset) {
  const MaskRaster m = MaskRaster::filled({0, 0, 2, 2});
  const BinaryRaster g = mask_to_global(m, 4, 4);
  EXPECT_EQ(g.popcount(), 4u);
  EXPECT_EQ(g.at(0, 0), 1);
  EXPECT_EQ(g.at(1, 1), 1);
  EXPECT_EQ(g.at(2, 0), 0);
}

TEST(MaskToGlobal, ZeroMaskGivesZeroRaster) {
  const BinaryRaster g = mask_to_global(MaskRaster::filled({1, 1, 2, 2}, 0), 4, 4);
  EXPECT_EQ(g.popcount(), 0u);
}

TEST(MaskToGlobal, DropsOutOfFrameBits) {
  const BinaryRaster g = mask_to_global(MaskRaster::filled({2, 2, 3, 3}), 4, 4);
  EXPECT_EQ(g.popcount(), 4u);
  for (int y = 2; y < 4; ++y) {
    for (int x = 2; x < 4; ++x) EXPECT_EQ(g.at(x, y), 1);
  }
}

TEST(MaskToGlobal, FullyOutsideThrows) {
  EXPECT_THROW(mask_to_global(MaskRaster::filled({10, 10, 2, 2}), 4, 4), ValidationError);
}

TEST(MaskToGlobal, PreservesPopcountWhenInside) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    const int w = 1 + rng() % 6, h = 1 + rng() % 6;
    MaskRaster m = MaskRaster::filled({int(rng() % (17 - w)), int(rng() % (13 - h)), w, h}, 0);
    for (auto& b : m.bits) b = rng() % 2;
    EXPECT_EQ(mask_to_global(m, 16, 12).popcount(), m.popcount());
  }
}

TEST(CropMask, KeepsIntersection) {
  const auto c = crop_mask(MaskRaster::filled({0, 0, 10, 10}), {5, 5, 10, 10});
  ASSERT_TRUE(c.has_value());
  EXPECT_EQ(c->rect(), (PixelRect{5, 5, 5, 5}));
  EXPECT_FALSE(crop_mask(MaskRaster::filled({0, 0, 2, 2}), {5, 5, 1, 1}).has_value());
}

TEST(Pnm, DecodesHeaderWithComment) {
  std::string bytes = "P5\n# made by hand\n2 2\n255\n";
  bytes += std::string("\x01\x02\x03\x04", 4);
  const Frame f = decode_pnm(bytes, "inline");
  EXPECT_EQ(f.width(), 2);
  EXPECT_EQ(f.channels(), 1);
  EXPECT_EQ(f.at(1, 1), 4);
}

TEST(Pnm, EncodeDecodeRgb) {
  std::vector<std::uint8_t> px(3 * 4 * 2);
  for (std::size_t i = 0; i < px.size(); ++i) px[i] = static_cast<std::uint8_t>(i * 7);
  const Frame f(0, 0, 4, 2, 3, px);
  EXPECT_EQ(decode_pnm(encode_pnm(f), "x").pixels().size(), px.size());
  EXPECT_TRUE(std::equal(px.begin(), px.end(), decode_pnm(encode_pnm(f), "x").pixels().begin()));
}

TEST(Pnm, TruncatedDataNamesTheFile) {
  const std::string bytes = "P5\n4 4\n255\n" + std::string(10, '\0');
  try {
    decode_pnm(bytes, "broken.pgm");
    FAIL() << "expected IoError";
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("broken.pgm"), std::string::npos);
  }
}

TEST(Pnm, RejectsOtherFormats) {
  EXPECT_THROW(decode_pnm("P2\n1 1\n255\n0", "a"), IoError);
  EXPECT_THROW(decode_pnm("P5\n1 1\n65535\n00", "a"), IoError);
}

}  // namespace
}  // namespace tdm
