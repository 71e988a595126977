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
#include "tdm/manifest.hpp"

#include <array>
#include <fstream>
#include <iterator>
#include <unordered_set>

#include "json.hpp"
#include "tdm/error.hpp"

namespace tdm {

using Json = nlohmann::ordered_json;

namespace {

constexpr std::string_view kTagNames[] = {"blurred", "underexposed",
                                          "overexposed", "small_object",
                                          "occluded"};

std::pair<std::size_t, std::size_t> line_column(std::string_view text,
                                                std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  const std::size_t end = std::min(byte == 0 ? 0 : byte - 1, text.size());
  for (std::size_t i = 0; i < end; ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

const Json& require(const Json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw ValidationError(where + ": missing \"" + key + "\"");
  }
  return *it;
}

std::string require_string(const Json& obj, const char* key,
                           const std::string& where) {
  const Json& v = require(obj, key, where);
  if (!v.is_string()) {
    throw ValidationError(where + ": \"" + key + "\" must be a string");
  }
  return v.get<std::string>();
}

int require_dimension(const Json& obj, const char* key,
                      const std::string& where) {
  const Json& v = require(obj, key, where);
  if (!v.is_number_integer()) {
    throw ValidationError(where + ": \"" + key + "\" must be an integer");
  }
  const auto value = v.get<long long>();
  if (value < 1 || value > 1'000'000) {
    throw ValidationError(where + ": \"" + key + "\" must be a positive pixel count, got " +
                          std::to_string(value));
  }
  return static_cast<int>(value);
}

BoundingBox parse_box(const Json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 4) {
    throw ValidationError(where + ": box must be [xmin,ymin,xmax,ymax]");
  }
  std::array<double, 4> c{};
  for (std::size_t i = 0; i < 4; ++i) {
    if (!v[i].is_number()) {
      throw ValidationError(where + ": box coordinates must be numbers");
    }
    c[i] = v[i].get<double>();
  }
  BoundingBox b{c[0], c[1], c[2], c[3]};
  if (!b.is_valid()) {
    throw ValidationError(where + ": box corners out of order");
  }
  return b;
}

AnnotationRecord parse_record(const Json& r, std::size_t index,
                              std::size_t& clamped) {
  const std::string where = "records[" + std::to_string(index) + "]";
  if (!r.is_object()) throw ValidationError(where + ": must be an object");
  AnnotationRecord rec;
  rec.image_id = require_string(r, "image_id", where);
  if (rec.image_id.empty()) throw ValidationError(where + ": empty image_id");
  rec.file = require_string(r, "file", where);
  rec.width = require_dimension(r, "width", where);
  rec.height = require_dimension(r, "height", where);
  rec.group_id = require_string(r, "group_id", where);

  if (auto it = r.find("capture_period"); it != r.end() && !it->is_null()) {
    if (!it->is_string()) {
      throw ValidationError(where + ": capture_period must be a string");
    }
    rec.capture_period = parse_capture_period(it->get<std::string>());
  }
  if (auto it = r.find("condition_tags"); it != r.end() && !it->is_null()) {
    if (!it->is_array()) {
      throw ValidationError(where + ": condition_tags must be an array");
    }
    std::vector<std::string> names;
    for (const auto& n : *it) {
      if (!n.is_string()) {
        throw ValidationError(where + ": condition_tags entries must be strings");
      }
      names.push_back(n.get<std::string>());
    }
    rec.condition_tags = ConditionTags::from_names(names);
  }

  const Json& boxes = require(r, "gt_boxes", where);
  if (!boxes.is_array()) throw ValidationError(where + ": gt_boxes must be an array");
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    const BoundingBox raw = parse_box(boxes[i], where + ".gt_boxes[" + std::to_string(i) + "]");
    const BoundingBox fixed = clamp_box(raw, rec.width, rec.height);
    if (!(fixed == raw)) ++clamped;
    rec.gt_boxes.push_back(fixed);
  }
  return rec;
}

}  // namespace

std::string_view to_string(Split s) {
  switch (s) {
    case Split::kTrain: return "train";
    case Split::kVal: return "val";
    case Split::kTest: return "test";
  }
  return "train";
}

std::string_view to_string(CapturePeriod p) {
  switch (p) {
    case CapturePeriod::kDay: return "day";
    case CapturePeriod::kDuskDawn: return "dusk_dawn";
    case CapturePeriod::kNight: return "night";
  }
  return "day";
}

Split parse_split(std::string_view s) {
  if (s == "train") return Split::kTrain;
  if (s == "val") return Split::kVal;
  if (s == "test") return Split::kTest;
  throw ValidationError("unknown split \"" + std::string(s) + "\"");
}

CapturePeriod parse_capture_period(std::string_view s) {
  if (s == "day") return CapturePeriod::kDay;
  if (s == "dusk_dawn") return CapturePeriod::kDuskDawn;
  if (s == "night") return CapturePeriod::kNight;
  throw ValidationError("unknown capture_period \"" + std::string(s) + "\"");
}

std::vector<std::string> ConditionTags::names() const {
  std::vector<std::string> out;
  const bool flags[] = {blurred, underexposed, overexposed, small_object,
                        occluded};
  for (std::size_t i = 0; i < std::size(flags); ++i) {
    if (flags[i]) out.emplace_back(kTagNames[i]);
  }
  return out;
}

ConditionTags ConditionTags::from_names(const std::vector<std::string>& names) {
  ConditionTags t;
  for (const auto& n : names) {
    if (n == "blurred") t.blurred = true;
    else if (n == "underexposed") t.underexposed = true;
    else if (n == "overexposed") t.overexposed = true;
    else if (n == "small_object") t.small_object = true;
    else if (n == "occluded") t.occluded = true;
    else if (n != "normal") throw ValidationError("unknown condition tag \"" + n + "\"");
  }
  if (t.underexposed && t.overexposed) {
    throw ValidationError("condition tags underexposed and overexposed are exclusive");
  }
  return t;
}

ParsedManifest parse_manifest(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    const auto [line, column] = line_column(text, e.byte);
    throw ParseError("malformed manifest JSON", line, column);
  }
  if (!doc.is_object()) throw ValidationError("manifest must be a JSON object");

  ParsedManifest out;
  out.manifest.split = parse_split(require_string(doc, "split", "manifest"));
  const Json& records = require(doc, "records", "manifest");
  if (!records.is_array()) throw ValidationError("manifest: records must be an array");

  std::unordered_set<std::string> seen;
  out.manifest.records.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    AnnotationRecord rec = parse_record(records[i], i, out.clamped_boxes);
    if (!seen.insert(rec.image_id).second) {
      throw ValidationError("duplicate image_id \"" + rec.image_id + "\"");
    }
    out.manifest.records.push_back(std::move(rec));
  }
  return out;
}

std::string serialize_manifest(const Manifest& m) {
  Json doc;
  doc["split"] = std::string(to_string(m.split));
  Json records = Json::array();
  for (const auto& r : m.records) {
    Json rec;
    rec["image_id"] = r.image_id;
    rec["file"] = r.file;
    rec["width"] = r.width;
    rec["height"] = r.height;
    rec["group_id"] = r.group_id;
    if (r.capture_period) rec["capture_period"] = std::string(to_string(*r.capture_period));
    if (r.condition_tags) rec["condition_tags"] = r.condition_tags->names();
    Json boxes = Json::array();
    for (const auto& b : r.gt_boxes) {
      boxes.push_back({b.x_min, b.y_min, b.x_max, b.y_max});
    }
    rec["gt_boxes"] = std::move(boxes);
    records.push_back(std::move(rec));
  }
  doc["records"] = std::move(records);
  return doc.dump(1) + "\n";
}

ParsedManifest load_manifest(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw IoError(path + ": cannot open manifest");
  std::string text((std::istreambuf_iterator<char>(file)),
                   std::istreambuf_iterator<char>());
  try {
    return parse_manifest(text);
  } catch (const ParseError& e) {
    throw ParseError(path + ": malformed manifest JSON", e.line(), e.column());
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

void save_manifest(const std::string& path, const Manifest& m) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError(path + ": cannot open for writing");
  file << serialize_manifest(m);
  if (!file) throw IoError(path + ": write failed");
}

}  // namespace tdm
