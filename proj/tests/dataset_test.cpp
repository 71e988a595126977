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
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "json.hpp"
#include "tdm/conditions.hpp"
#include "tdm/dataset.hpp"
#include "tdm/error.hpp"
#include "tdm/pnm.hpp"
#include "temp_dir.hpp"

namespace tdm::dataset {
namespace {

AnnotationRecord rec(std::string id, std::string group, int w = 100, int h = 100,
                     std::vector<BoundingBox> boxes = {}) {
  AnnotationRecord r;
  r.image_id = std::move(id);
  r.file = r.image_id + ".pgm";
  r.width = w;
  r.height = h;
  r.group_id = std::move(group);
  r.gt_boxes = std::move(boxes);
  return r;
}

Manifest manifest(Split s, std::size_t n, const std::string& group_prefix) {
  Manifest m;
  m.split = s;
  for (std::size_t i = 0; i < n; ++i) {
    m.records.push_back(rec(group_prefix + std::to_string(i), group_prefix + std::to_string(i / 4)));
  }
  return m;
}

TEST(SplitCheck, DisjointGroupsAtTargetRatio) {
  const auto r = split_check(manifest(Split::kTrain, 32000, "tr"), manifest(Split::kVal, 4000, "va"),
                             manifest(Split::kTest, 4000, "te"));
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.counts, (std::array<std::size_t, 3>{32000, 4000, 4000}));
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(r.deviations[i], 0.0, 1e-12);
    EXPECT_FALSE(r.ratio_flags[i]);
  }
  EXPECT_NEAR(r.fractions[0] + r.fractions[1] + r.fractions[2], 1.0, 1e-9);
}

TEST(SplitCheck, SharedGroupIsALeak) {
  Manifest train = manifest(Split::kTrain, 8, "tr");
  Manifest test = manifest(Split::kTest, 1, "te");
  train.records.push_back(rec("x1", "v7"));
  test.records.push_back(rec("x2", "v7"));
  const auto r = split_check(train, manifest(Split::kVal, 1, "va"), test);
  EXPECT_FALSE(r.passed());
  EXPECT_EQ(r.leaks, std::vector<std::string>{"v7"});
  const auto j = nlohmann::json::parse(split_report_json(r));
  EXPECT_EQ(j["leaks"], nlohmann::json::array({"v7"}));
  EXPECT_TRUE(j["fractions"].contains("train"));
  EXPECT_TRUE(j["fractions"].contains("val"));
  EXPECT_TRUE(j["fractions"].contains("test"));
}

TEST(SplitCheck, EmptyTestSplitIsFlagged) {
  const auto r = split_check(manifest(Split::kTrain, 9, "tr"), manifest(Split::kVal, 1, "va"),
                             Manifest{Split::kTest, {}});
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.fractions[2], 0.0);
  EXPECT_NEAR(r.deviations[2], -0.10, 1e-12);
  EXPECT_TRUE(r.ratio_flags[2]);
}

TEST(Histograms, Examples) {
  Manifest m;
  m.records = {rec("a", "g", 100, 100, {{0, 0, 1, 1}}), rec("b", "g", 100, 100, {{0, 0, 1, 1}}),
               rec("c", "g", 100, 100, {{0, 0, 1, 1}, {2, 2, 3, 3}})};
  EXPECT_EQ(instance_histogram(m), (std::map<std::size_t, std::size_t>{{1, 2}, {2, 1}}));
  EXPECT_TRUE(instance_histogram(Manifest{}).empty());

  m.records = {rec("a", "g", 1920, 1080), rec("b", "g", 1920, 1080), rec("c", "g", 1920, 1440)};
  const std::map<std::pair<int, int>, std::size_t> want{{{1920, 1080}, 2}, {{1920, 1440}, 1}};
  EXPECT_EQ(resolution_histogram(m), want);
  EXPECT_TRUE(resolution_histogram(Manifest{}).empty());
}

Manifest random_manifest(std::uint64_t seed, std::size_t n) {
  std::mt19937_64 rng(seed);
  const std::pair<int, int> sizes[] = {{1920, 1080}, {1920, 1440}, {640, 480}, {100, 100}};
  Manifest m;
  for (std::size_t i = 0; i < n; ++i) {
    const auto [w, h] = sizes[rng() % 4];
    std::vector<BoundingBox> boxes;
    const std::size_t k = rng() % 6;
    for (std::size_t b = 0; b < k; ++b) {
      const double x = double(rng() % w), y = double(rng() % h);
      boxes.push_back({x, y, std::min<double>(w, x + 1 + rng() % 50),
                       std::min<double>(h, y + 1 + rng() % 50)});
    }
    m.records.push_back(rec("i" + std::to_string(i), "g", w, h, boxes));
  }
  return m;
}

TEST(Histograms, MatchNaiveRecount) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Manifest m = random_manifest(seed, 100);
    const auto inst = instance_histogram(m);
    const auto res = resolution_histogram(m);
    std::size_t total = 0;
    for (auto [k, count] : inst) {
      std::size_t naive = 0;
      for (const auto& r : m.records) naive += r.gt_boxes.size() == k;
      EXPECT_EQ(count, naive);
      total += count;
    }
    EXPECT_EQ(total, m.records.size());
    for (auto [wh, count] : res) {
      std::size_t naive = 0;
      for (const auto& r : m.records) naive += r.width == wh.first && r.height == wh.second;
      EXPECT_EQ(count, naive);
    }
  }
}

TEST(Histograms, PermutationInvariant) {
  Manifest m = random_manifest(4, 60);
  const auto inst = instance_histogram(m);
  const auto res = resolution_histogram(m);
  const auto heat = spatial_heatmap(m, 8);
  std::mt19937_64 rng(1);
  std::shuffle(m.records.begin(), m.records.end(), rng);
  EXPECT_EQ(instance_histogram(m), inst);
  EXPECT_EQ(resolution_histogram(m), res);
  EXPECT_EQ(spatial_heatmap(m, 8).counts, heat.counts);
}

TEST(Heatmap, Examples) {
  Manifest m;
  m.records = {rec("a", "g", 100, 100, {{40, 40, 60, 60}})};
  auto h = spatial_heatmap(m, 2);
  EXPECT_EQ(h.at(1, 1), 1u);
  EXPECT_EQ(h.total(), 1u);

  m.records = {rec("a", "g", 100, 80, {{100, 80, 100, 80}})};
  h = spatial_heatmap(m, 4);
  EXPECT_EQ(h.at(3, 3), 1u);
  EXPECT_EQ(h.total(), 1u);

  // Rows follow y.
  m.records = {rec("a", "g", 100, 100, {{0, 80, 10, 90}})};
  h = spatial_heatmap(m, 2);
  EXPECT_EQ(h.at(1, 0), 1u);
}

TEST(Heatmap, ConservesBoxCount) {
  const Manifest m = random_manifest(9, 400);
  std::size_t boxes = 0;
  for (const auto& r : m.records) boxes += r.gt_boxes.size();
  ASSERT_GE(boxes, 800u);
  for (std::size_t g : {1u, 3u, 32u}) {
    const auto h = spatial_heatmap(m, g);
    EXPECT_EQ(h.counts.size(), g * g);
    EXPECT_EQ(h.total(), boxes);
  }
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

TEST(Fixture, DeterministicFilesAndManifests) {
  testing::TempDir a, b;
  FixtureOptions opts;
  opts.n_images = 24;
  const Fixture fa = synthetic_fixture(opts, a.path());
  const Fixture fb = synthetic_fixture(opts, b.path());
  EXPECT_EQ(fa.train, fb.train);
  EXPECT_EQ(fa.test, fb.test);
  std::size_t files = 0;
  for (const auto& e : std::filesystem::recursive_directory_iterator(a.path())) {
    if (!e.is_regular_file()) continue;
    const auto rel = std::filesystem::relative(e.path(), a.path());
    EXPECT_EQ(slurp(e.path()), slurp(b.path() / rel)) << rel;
    ++files;
  }
  EXPECT_EQ(files, 24u + 3u);
}

TEST(Fixture, GroupAtomicSplitSizes) {
  testing::TempDir dir;
  const Fixture f = synthetic_fixture({}, dir.path());
  EXPECT_EQ(f.train.records.size(), 80u);
  EXPECT_EQ(f.val.records.size(), 12u);
  EXPECT_EQ(f.test.records.size(), 8u);
  const auto r = split_check(f.train, f.val, f.test);
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(f.train.split, Split::kTrain);
  EXPECT_EQ(f.test.split, Split::kTest);
}

TEST(Fixture, NeverLeaks) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    for (std::size_t n : {3u, 10u, 37u}) {
      testing::TempDir dir;
      FixtureOptions opts;
      opts.seed = seed;
      opts.n_images = n;
      opts.width = 48;
      opts.height = 36;
      const Fixture f = synthetic_fixture(opts, dir.path());
      EXPECT_EQ(f.train.records.size() + f.val.records.size() + f.test.records.size(), n);
      EXPECT_TRUE(split_check(f.train, f.val, f.test).passed());
    }
  }
}

TEST(Fixture, TagsMatchCategorizeAndCoverEveryCondition) {
  testing::TempDir dir;
  const Fixture f = synthetic_fixture({}, dir.path());
  std::set<std::string> seen;
  std::size_t dark = 0;
  for (const Manifest* m : {&f.train, &f.val, &f.test}) {
    for (const auto& r : m->records) {
      const Frame img = read_pnm(dir / r.file);
      const ConditionTags tags = conditions::categorize(img, r, {});
      ASSERT_TRUE(r.condition_tags.has_value());
      EXPECT_EQ(tags, *r.condition_tags) << r.image_id;
      for (const auto& n : tags.names()) seen.insert(n);
      if (tags.normal()) seen.insert("normal");
      if (r.condition_tags->underexposed) {
        ++dark;
        EXPECT_EQ(conditions::exposure_class(img, {}), conditions::Exposure::kUnderexposed);
        EXPECT_EQ(r.capture_period, CapturePeriod::kNight);
      }
    }
  }
  EXPECT_GT(dark, 0u);
  EXPECT_EQ(seen, (std::set<std::string>{"blurred", "underexposed", "overexposed",
                                         "small_object", "occluded", "normal"}));
}

TEST(Fixture, RejectsTooFewImages) {
  testing::TempDir dir;
  FixtureOptions opts;
  opts.n_images = 2;
  EXPECT_THROW(synthetic_fixture(opts, dir.path()), ValidationError);
}

}  // namespace
}  // namespace tdm::dataset
