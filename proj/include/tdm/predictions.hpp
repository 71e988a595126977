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

#include <string>
#include <string_view>

#include "tdm/metrics.hpp"

namespace tdm {

// Detector output for a set of images, as read from a predictions file:
//   {"model": str?, "predictions": [{"image_id": str,
//     "boxes": [{"box": [xmin,ymin,xmax,ymax], "score": float,
//                "class_id": int}]}]}
struct PredictionSet {
  std::string model;
  metrics::ImageDetections detections;
};

// Throws ParseError on malformed JSON and ValidationError on schema
// violations (bad boxes, scores outside [0,1], repeated image ids).
PredictionSet parse_predictions(std::string_view text,
                                const std::string& default_model = "model");
PredictionSet load_predictions(const std::string& path);
std::string serialize_predictions(const PredictionSet& p);

}  // namespace tdm
