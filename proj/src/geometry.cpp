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
#include "tdm/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tdm {

namespace {

int to_pixel(double v) {
  constexpr double kLo = std::numeric_limits<int>::min() / 2;
  constexpr double kHi = std::numeric_limits<int>::max() / 2;
  return static_cast<int>(std::clamp(v, kLo, kHi));
}

}  // namespace

bool BoundingBox::is_valid() const {
  return std::isfinite(x_min) && std::isfinite(y_min) &&
         std::isfinite(x_max) && std::isfinite(y_max) && x_min <= x_max &&
         y_min <= y_max;
}

double box_area(const BoundingBox& b) {
  return std::max(0.0, b.x_max - b.x_min) * std::max(0.0, b.y_max - b.y_min);
}

BoundingBox clamp_box(const BoundingBox& b, int w, int h) {
  const double fw = w;
  const double fh = h;
  return {std::clamp(b.x_min, 0.0, fw), std::clamp(b.y_min, 0.0, fh),
          std::clamp(b.x_max, 0.0, fw), std::clamp(b.y_max, 0.0, fh)};
}

PixelRect inner_pixel_rect(const BoundingBox& b) {
  const int x0 = to_pixel(std::ceil(b.x_min));
  const int y0 = to_pixel(std::ceil(b.y_min));
  const int x1 = to_pixel(std::floor(b.x_max));
  const int y1 = to_pixel(std::floor(b.y_max));
  return {x0, y0, std::max(0, x1 - x0), std::max(0, y1 - y0)};
}

PixelRect intersect(const PixelRect& a, const PixelRect& b) {
  const int x0 = std::max(a.x, b.x);
  const int y0 = std::max(a.y, b.y);
  const int x1 = std::min(a.x + a.width, b.x + b.width);
  const int y1 = std::min(a.y + a.height, b.y + b.height);
  return {x0, y0, std::max(0, x1 - x0), std::max(0, y1 - y0)};
}

}  // namespace tdm
