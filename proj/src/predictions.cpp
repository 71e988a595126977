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
#include "tdm/predictions.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iterator>

#include "json.hpp"
#include "tdm/error.hpp"

namespace tdm {

using Json = nlohmann::ordered_json;

PredictionSet parse_predictions(std::string_view text,
                                const std::string& default_model) {
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError("malformed predictions JSON", line, column);
  }
  if (!doc.is_object() || !doc.contains("predictions") || !doc["predictions"].is_array()) {
    throw ValidationError("predictions file needs a \"predictions\" array");
  }

  PredictionSet out;
  out.model = default_model;
  if (auto it = doc.find("model"); it != doc.end()) {
    if (!it->is_string()) throw ValidationError("\"model\" must be a string");
    out.model = it->get<std::string>();
  }
  const auto& entries = doc["predictions"];
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    const std::string where = "predictions[" + std::to_string(i) + "]";
    if (!e.is_object() || !e.contains("image_id") || !e["image_id"].is_string()) {
      throw ValidationError(where + ": needs a string image_id");
    }
    const std::string id = e["image_id"].get<std::string>();
    if (out.detections.count(id) != 0) {
      throw ValidationError(where + ": image_id \"" + id + "\" listed twice");
    }
    auto& dets = out.detections[id];
    if (!e.contains("boxes") || !e["boxes"].is_array()) {
      throw ValidationError(where + ": needs a \"boxes\" array");
    }
    for (const auto& b : e["boxes"]) {
      const auto& box = b.contains("box") ? b["box"] : Json();
      if (!box.is_array() || box.size() != 4 ||
          !std::all_of(box.begin(), box.end(), [](const Json& v) { return v.is_number(); })) {
        throw ValidationError(where + ": box must be [xmin,ymin,xmax,ymax]");
      }
      Detection d;
      d.box = {box[0].get<double>(), box[1].get<double>(), box[2].get<double>(),
               box[3].get<double>()};
      if (!d.box.is_valid()) throw ValidationError(where + ": box corners out of order");
      if (!b.contains("score") || !b["score"].is_number()) {
        throw ValidationError(where + ": missing numeric score");
      }
      d.score = b["score"].get<double>();
      if (!(d.score >= 0.0 && d.score <= 1.0)) {
        throw ValidationError(where + ": score outside [0, 1]");
      }
      if (auto c = b.find("class_id"); c != b.end()) {
        if (!c->is_number_integer() || c->get<long long>() < 0) {
          throw ValidationError(where + ": class_id must be a non-negative integer");
        }
        d.class_id = c->get<int>();
      }
      dets.push_back(d);
    }
  }
  return out;
}

PredictionSet load_predictions(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw IoError(path + ": cannot open predictions");
  std::string text((std::istreambuf_iterator<char>(file)), std::istreambuf_iterator<char>());
  return parse_predictions(text, std::filesystem::path(path).stem().string());
}

std::string serialize_predictions(const PredictionSet& p) {
  Json doc;
  doc["model"] = p.model;
  Json entries = Json::array();
  for (const auto& [id, dets] : p.detections) {
    Json boxes = Json::array();
    for (const auto& d : dets) {
      boxes.push_back({{"box", {d.box.x_min, d.box.y_min, d.box.x_max, d.box.y_max}},
                       {"score", d.score},
                       {"class_id", d.class_id}});
    }
    entries.push_back({{"image_id", id}, {"boxes", std::move(boxes)}});
  }
  doc["predictions"] = std::move(entries);
  return doc.dump(1) + "\n";
}

}  // namespace tdm
