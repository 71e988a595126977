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
#include <algorithm>
#include <array>
#include <map>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "tdm/conditions.hpp"
#include "tdm/error.hpp"

namespace tdm::conditions {
namespace {

Frame gray(int w, int h, std::vector<std::uint8_t> px) {
  return Frame(0, 0.0, w, h, 1, std::move(px));
}

Frame constant(int w, int h, std::uint8_t v) {
  return gray(w, h, std::vector<std::uint8_t>(static_cast<std::size_t>(w) * h, v));
}

Frame noise(int w, int h, int lo, int hi, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::uint8_t> px(static_cast<std::size_t>(w) * h);
  for (auto& p : px) p = static_cast<std::uint8_t>(lo + rng() % (hi - lo + 1));
  return gray(w, h, px);
}

std::vector<int> as_ints(const Frame& f) {
  return {f.pixels().begin(), f.pixels().end()};
}

TEST(ToGrayscale, Examples) {
  const Frame g = noise(5, 4, 0, 255, 1);
  EXPECT_EQ(to_grayscale(g), g);
  const Frame rgb(3, 1.0, 2, 1, 3, {255, 255, 255, 100, 150, 200});
  const Frame out = to_grayscale(rgb);
  EXPECT_EQ(out.channels(), 1);
  EXPECT_EQ(out.id(), 3u);
  EXPECT_EQ(out.at(0, 0), 255);
  EXPECT_EQ(out.at(1, 0), 141);
}

TEST(LaplacianVariance, Examples) {
  EXPECT_EQ(laplacian_variance(constant(6, 6, 77)), 0.0);

  std::vector<std::uint8_t> dot(25, 0);
  dot[12] = 255;
  // Interior responses: -1020 at the centre, 255 at its four neighbours, 0 at
  // the corners. Mean 0, so the variance is (1020^2 + 4 * 255^2) / 9.
  EXPECT_DOUBLE_EQ(laplacian_variance(gray(5, 5, dot)), (1020.0 * 1020 + 4 * 255.0 * 255) / 9);
  EXPECT_DOUBLE_EQ(laplacian_variance(gray(5, 5, dot)), 144500.0);

  std::vector<std::uint8_t> board(64);
  for (int y = 0; y < 8; ++y) {
    for (int x = 0; x < 8; ++x) board[y * 8 + x] = ((x + y) % 2) ? 255 : 0;
  }
  const Frame cb = gray(8, 8, board);
  EXPECT_DOUBLE_EQ(laplacian_variance(cb), oracle::naive_laplacian_variance(as_ints(cb), 8, 8));
  EXPECT_DOUBLE_EQ(laplacian_variance(cb), 1040400.0);
}

TEST(LaplacianVariance, MatchesNaiveOracle) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const int w = 3 + static_cast<int>(seed % 13), h = 3 + static_cast<int>(seed % 7);
    const Frame f = noise(w, h, 0, 255, seed);
    EXPECT_NEAR(laplacian_variance(f), oracle::naive_laplacian_variance(as_ints(f), w, h),
                1e-6);
  }
}

TEST(LaplacianVariance, InvariantUnderConstantOffset) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Frame f = noise(16, 12, 0, 200, seed);
    std::vector<std::uint8_t> shifted(f.pixels().begin(), f.pixels().end());
    for (auto& p : shifted) p = static_cast<std::uint8_t>(p + 55);
    EXPECT_NEAR(laplacian_variance(f), laplacian_variance(gray(16, 12, shifted)), 1e-9);
  }
}

TEST(LaplacianVariance, Errors) {
  EXPECT_THROW(laplacian_variance(constant(2, 5, 0)), ValidationError);
  EXPECT_THROW(laplacian_variance(Frame(0, 0, 4, 4, 3, std::vector<std::uint8_t>(48))),
               ValidationError);
}

TEST(ExposureClass, Examples) {
  const ConditionThresholds t;
  EXPECT_EQ(exposure_class(constant(4, 4, 30), t), Exposure::kUnderexposed);
  EXPECT_EQ(exposure_class(constant(4, 4, 220), t), Exposure::kOverexposed);
  EXPECT_EQ(exposure_class(constant(4, 4, 128), t), Exposure::kNormal);
  EXPECT_EQ(exposure_class(constant(4, 4, 40), t), Exposure::kNormal);
  EXPECT_EQ(exposure_class(constant(4, 4, 200), t), Exposure::kNormal);
  EXPECT_EQ(exposure_class(constant(4, 4, 39), t), Exposure::kUnderexposed);
  EXPECT_EQ(exposure_class(constant(4, 4, 201), t), Exposure::kOverexposed);
}

TEST(ExposureClass, MonotoneInBrightness) {
  const ConditionThresholds t;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Frame f = noise(10, 10, 0, 60, seed);
    int prev = static_cast<int>(exposure_class(f, t));
    for (int step = 0; step < 20; ++step) {
      std::vector<std::uint8_t> px(f.pixels().begin(), f.pixels().end());
      for (auto& p : px) p = static_cast<std::uint8_t>(std::min(255, p + 10));
      f = gray(10, 10, px);
      const int cls = static_cast<int>(exposure_class(f, t));
      EXPECT_GE(cls, prev);
      prev = cls;
    }
  }
}

TEST(SmallObjectFlag, Examples) {
  const ConditionThresholds t;
  EXPECT_TRUE(small_object_flag({{0, 0, 10, 10}}, 100, 100, t));
  EXPECT_FALSE(small_object_flag({{0, 0, 20, 20}}, 100, 100, t));
  EXPECT_TRUE(small_object_flag({{0, 0, 10, 10}, {0, 0, 100, 50}}, 100, 100, t));
  EXPECT_FALSE(small_object_flag({}, 100, 100, t));
  ConditionThresholds all = t;
  all.small_object_rule = SmallObjectRule::kAll;
  EXPECT_FALSE(small_object_flag({{0, 0, 10, 10}, {0, 0, 100, 50}}, 100, 100, all));
  EXPECT_THROW(small_object_flag({}, 0, 100, t), ValidationError);
}

TEST(OcclusionFlag, Examples) {
  const ConditionThresholds t;
  EXPECT_FALSE(occlusion_flag({{0, 0, 10, 10}}, t));
  EXPECT_TRUE(occlusion_flag({{0, 0, 10, 10}, {0, 0, 10, 10}}, t));
  EXPECT_FALSE(occlusion_flag({{0, 0, 10, 10}, {5, 5, 15, 15}}, t));
  // IoU exactly 0.5 is not enough.
  EXPECT_FALSE(occlusion_flag({{0, 0, 10, 10}, {0, 0, 10, 5}}, t));
}

AnnotationRecord record(int w, int h, std::vector<BoundingBox> boxes) {
  AnnotationRecord r;
  r.image_id = "r";
  r.file = "r.pgm";
  r.width = w;
  r.height = h;
  r.group_id = "g";
  r.gt_boxes = std::move(boxes);
  return r;
}

TEST(Categorize, Examples) {
  const ConditionThresholds t;
  ConditionTags tags = categorize(constant(100, 100, 128), record(100, 100, {{25, 25, 75, 75}}), t);
  EXPECT_EQ(tags.names(), std::vector<std::string>{"blurred"});

  tags = categorize(constant(100, 100, 30),
                    record(100, 100, {{20, 20, 60, 60}, {20, 20, 60, 60}}), t);
  EXPECT_EQ(tags.names(), (std::vector<std::string>{"blurred", "underexposed", "occluded"}));

  tags = categorize(noise(100, 100, 78, 178, 4), record(100, 100, {{25, 30, 75, 50}}), t);
  EXPECT_TRUE(tags.normal());
}

TEST(Categorize, GrayscaleConversionAndDeterminism) {
  std::vector<std::uint8_t> rgb(20 * 20 * 3, 10);
  const Frame f(0, 0, 20, 20, 3, rgb);
  const auto rec = record(20, 20, {{0, 0, 20, 20}});
  const ConditionTags a = categorize(f, rec, {});
  EXPECT_TRUE(a.underexposed);
  EXPECT_EQ(a, categorize(f, rec, {}));
}

TEST(Categorize, DimensionMismatch) {
  EXPECT_THROW(categorize(constant(10, 10, 0), record(10, 11, {}), {}), ValidationError);
}

ImageEvaluation evaluate(std::string id, ConditionTags tags, std::vector<Detection> dets,
                         std::vector<BoundingBox> gts) {
  ImageEvaluation e;
  e.image_id = std::move(id);
  e.tags = tags;
  e.match = metrics::match_detections(dets, gts, 0.5);
  e.dets = std::move(dets);
  e.gts = std::move(gts);
  return e;
}

TEST(ErrorBreakdown, Examples) {
  EXPECT_TRUE(error_breakdown({}).empty());

  auto rows = error_breakdown({evaluate("a", {}, {{{0, 0, 10, 10}, 0.9, 0}}, {{0, 0, 10, 10}})});
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].condition, "normal");
  EXPECT_EQ(rows[0].tp, 1u);
  EXPECT_EQ(rows[0].fp, 0u);
  EXPECT_EQ(rows[0].fn, 0u);
  EXPECT_DOUBLE_EQ(rows[0].precision, 1.0);
  EXPECT_DOUBLE_EQ(rows[0].recall, 1.0);
  EXPECT_DOUBLE_EQ(rows[0].map50.value(), 1.0);

  ConditionTags occ;
  occ.occluded = true;
  rows = error_breakdown({evaluate("b", occ, {}, {{0, 0, 10, 10}})});
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].condition, "occluded");
  EXPECT_EQ(rows[0].fn, 1u);
  EXPECT_DOUBLE_EQ(rows[0].recall, 0.0);
}

TEST(ErrorBreakdown, NoGroundTruthLeavesMapEmpty) {
  auto rows = error_breakdown({evaluate("a", {}, {{{0, 0, 1, 1}, 0.4, 0}}, {})});
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].fp, 1u);
  EXPECT_FALSE(rows[0].map50.has_value());
  EXPECT_NE(breakdown_csv(rows).find(",nan\n"), std::string::npos);
}

std::vector<ImageEvaluation> mixed_set(std::uint64_t seed, bool single_tag) {
  std::mt19937_64 rng(seed);
  std::vector<ImageEvaluation> out;
  for (int i = 0; i < 10; ++i) {
    ConditionTags tags;
    const int pick = static_cast<int>(rng() % 6);
    if (single_tag) {
      bool* flags[] = {&tags.blurred, &tags.underexposed, &tags.overexposed,
                       &tags.small_object, &tags.occluded};
      if (pick < 5) *flags[pick] = true;
    } else {
      tags.blurred = rng() % 2;
      tags.small_object = rng() % 3 == 0;
      tags.occluded = rng() % 3 == 0;
      tags.overexposed = rng() % 4 == 0;
    }
    std::vector<BoundingBox> gts;
    std::vector<Detection> dets;
    const int n_gt = static_cast<int>(1 + rng() % 3);
    for (int g = 0; g < n_gt; ++g) {
      const double x = 20.0 * g;
      gts.push_back({x, 0, x + 10, 10});
      if (rng() % 3 != 0) dets.push_back({{x + double(rng() % 4), 0, x + 10, 10}, 0.5, 0});
    }
    if (rng() % 2) dets.push_back({{90, 90, 95, 95}, 0.3, 0});
    out.push_back(evaluate("img" + std::to_string(i), tags, dets, gts));
  }
  return out;
}

TEST(ErrorBreakdown, MatchesNaiveRetally) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto set = mixed_set(seed, false);
    std::map<std::string, std::array<std::size_t, 4>> expect;  // images, tp, fp, fn
    for (const auto& e : set) {
      std::vector<std::string> names = e.tags.names();
      if (names.empty()) names.push_back("normal");
      std::size_t tp = 0;
      for (const auto& f : e.match.flags) tp += f.is_tp;
      for (const auto& n : names) {
        auto& row = expect[n];
        row[0] += 1;
        row[1] += tp;
        row[2] += e.dets.size() - tp;
        row[3] += e.gts.size() - tp;
      }
    }
    const auto rows = error_breakdown(set);
    ASSERT_EQ(rows.size(), expect.size());
    for (const auto& r : rows) {
      const auto& want = expect.at(r.condition);
      EXPECT_EQ(r.images, want[0]);
      EXPECT_EQ(r.tp, want[1]);
      EXPECT_EQ(r.fp, want[2]);
      EXPECT_EQ(r.fn, want[3]);
      EXPECT_DOUBLE_EQ(r.precision, metrics::prf1(r.tp, r.fp, r.fn).precision);
      metrics::ImageDetections dets;
      metrics::ImageBoxes gts;
      for (const auto& e : set) {
        std::vector<std::string> names = e.tags.names();
        if (names.empty()) names.push_back("normal");
        if (std::find(names.begin(), names.end(), r.condition) == names.end()) continue;
        dets[e.image_id] = e.dets;
        gts[e.image_id] = e.gts;
      }
      EXPECT_NEAR(r.map50.value(), oracle::sweep_ap(dets, gts, 0.5), 1e-9);
    }
  }
}

TEST(ErrorBreakdown, SingleTagBucketsPartitionTruePositives) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto set = mixed_set(seed, true);
    std::size_t total = 0, bucketed = 0;
    for (const auto& e : set) total += e.match.tp;
    for (const auto& r : error_breakdown(set)) bucketed += r.tp;
    EXPECT_EQ(total, bucketed);
  }
}

TEST(BreakdownCsv, Format) {
  auto rows = error_breakdown({evaluate("a", {}, {{{0, 0, 10, 10}, 0.9, 0}}, {{0, 0, 10, 10}})});
  EXPECT_EQ(breakdown_csv(rows),
            "condition,images,tp,fp,fn,precision,recall,map50\n"
            "normal,1,1,0,0,1.000000,1.000000,1.000000\n");
}

TEST(ConditionThresholdsTest, Validate) {
  EXPECT_NO_THROW(ConditionThresholds{}.validate());
  ConditionThresholds t;
  t.dark_mean = 210;
  EXPECT_THROW(t.validate(), ValidationError);
  t = {};
  t.small_object_area_frac = 1.0;
  EXPECT_THROW(t.validate(), ValidationError);
  t = {};
  t.occlusion_iou = 0.0;
  EXPECT_THROW(t.validate(), ValidationError);
}

}  // namespace
}  // namespace tdm::conditions
