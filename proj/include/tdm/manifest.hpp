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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tdm/geometry.hpp"

namespace tdm {

enum class Split { kTrain, kVal, kTest };
enum class CapturePeriod { kDay, kDuskDawn, kNight };

std::string_view to_string(Split s);
std::string_view to_string(CapturePeriod p);
Split parse_split(std::string_view s);
CapturePeriod parse_capture_period(std::string_view s);

// Image-condition flags. An empty set means the image is "normal".
// Underexposed and overexposed are mutually exclusive.
struct ConditionTags {
  bool blurred = false;
  bool underexposed = false;
  bool overexposed = false;
  bool small_object = false;
  bool occluded = false;

  bool normal() const {
    return !(blurred || underexposed || overexposed || small_object ||
             occluded);
  }
  // Tag names in canonical order; empty when normal.
  std::vector<std::string> names() const;
  // Inverse of names(); throws ValidationError on unknown or contradictory
  // names ("normal" is accepted and sets nothing).
  static ConditionTags from_names(const std::vector<std::string>& names);

  bool operator==(const ConditionTags&) const = default;
};

struct AnnotationRecord {
  std::string image_id;
  std::string file;
  int width = 0;
  int height = 0;
  std::string group_id;
  std::vector<BoundingBox> gt_boxes;
  std::optional<ConditionTags> condition_tags;
  std::optional<CapturePeriod> capture_period;

  bool operator==(const AnnotationRecord&) const = default;
};

struct Manifest {
  Split split = Split::kTrain;
  std::vector<AnnotationRecord> records;

  bool operator==(const Manifest&) const = default;
};

struct ParsedManifest {
  Manifest manifest;
  // Number of ground-truth boxes that had to be clamped into image bounds.
  std::size_t clamped_boxes = 0;
};

// Parses the manifest JSON document. Throws ParseError (with line/column) on
// malformed text and ValidationError on schema or invariant violations.
ParsedManifest parse_manifest(std::string_view text);
std::string serialize_manifest(const Manifest& m);

ParsedManifest load_manifest(const std::string& path);
void save_manifest(const std::string& path, const Manifest& m);

}  // namespace tdm
