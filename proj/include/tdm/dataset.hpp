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
#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "tdm/manifest.hpp"

namespace tdm::dataset {

inline constexpr std::array<double, 3> kTargetFractions = {0.80, 0.10, 0.10};

struct SplitReport {
  // Indexed train, val, test.
  std::array<std::size_t, 3> counts{};
  std::array<double, 3> fractions{};
  std::array<double, 3> deviations{};
  // True where |deviation| exceeds the tolerance passed to split_check.
  std::array<bool, 3> ratio_flags{};
  // Group ids present in more than one split, sorted.
  std::vector<std::string> leaks;

  bool passed() const { return leaks.empty(); }
};

SplitReport split_check(const Manifest& train, const Manifest& val,
                        const Manifest& test, double ratio_tolerance = 0.05);

std::string split_report_json(const SplitReport& r);

std::map<std::size_t, std::size_t> instance_histogram(const Manifest& m);
std::map<std::pair<int, int>, std::size_t> resolution_histogram(
    const Manifest& m);

struct Heatmap {
  std::size_t grid = 32;
  // Row-major grid x grid; rows follow y, columns follow x.
  std::vector<std::size_t> counts;

  std::size_t at(std::size_t row, std::size_t col) const {
    return counts[row * grid + col];
  }
  std::size_t total() const;
};

// Bins normalized ground-truth box centers; centers on the far edge land in
// the last cell, centers outside the image are skipped.
Heatmap spatial_heatmap(const Manifest& m, std::size_t grid = 32);

struct FixtureOptions {
  std::uint64_t seed = 1;
  std::size_t n_images = 100;
  int width = 128;
  int height = 96;
  // Share of images rendered under one of the five special conditions.
  double condition_fraction = 0.5;
  std::size_t group_size = 4;
};

struct Fixture {
  Manifest train;
  Manifest val;
  Manifest test;
};

// Writes images/img_NNNNN.pgm plus train.json, val.json and test.json under
// out_dir. Deterministic in the options. Throws IoError when the directory
// cannot be written.
Fixture synthetic_fixture(const FixtureOptions& opts,
                          const std::filesystem::path& out_dir);

}  // namespace tdm::dataset
