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

namespace tdm {

// Axis-aligned box in continuous pixel coordinates. Right and bottom edges are
// exclusive when rasterized.
struct BoundingBox {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  double center_x() const { return 0.5 * (x_min + x_max); }
  double center_y() const { return 0.5 * (y_min + y_max); }

  // True when the corners are finite and ordered.
  bool is_valid() const;

  bool operator==(const BoundingBox&) const = default;
};

struct Detection {
  BoundingBox box;
  double score = 0.0;
  int class_id = 0;

  bool operator==(const Detection&) const = default;
};

// Integer pixel rectangle [x, x + width) x [y, y + height).
struct PixelRect {
  int x = 0;
  int y = 0;
  int width = 0;
  int height = 0;

  bool empty() const { return width <= 0 || height <= 0; }
  long long area() const { return empty() ? 0 : 1LL * width * height; }
  bool contains(int px, int py) const {
    return px >= x && px < x + width && py >= y && py < y + height;
  }

  bool operator==(const PixelRect&) const = default;
};

double box_area(const BoundingBox& b);

// Clamps every coordinate into [0,w] x [0,h]. Boxes fully outside the image
// collapse onto the nearest border with zero area. Requires w, h >= 1.
BoundingBox clamp_box(const BoundingBox& b, int w, int h);

// Pixels whose unit squares lie entirely inside the box (inner rounding).
PixelRect inner_pixel_rect(const BoundingBox& b);

PixelRect intersect(const PixelRect& a, const PixelRect& b);

}  // namespace tdm
