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
#include "tdm/pipeline/sources.hpp"

#include <algorithm>

#include "internal/rng.hpp"
#include "tdm/error.hpp"
#include "tdm/pipeline/backends.hpp"
#include "tdm/pnm.hpp"

namespace tdm::pipeline {

namespace fs = std::filesystem;

DirectoryFrameSource::DirectoryFrameSource(
    const fs::path& dir, std::optional<std::pair<int, int>> expected_dims)
    : expected_dims_(expected_dims) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw IoError(dir.string() + ": not a readable directory");
  }
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    if (!entry.is_regular_file()) continue;
    const auto ext = entry.path().extension().string();
    if (ext == ".pgm" || ext == ".ppm") files_.push_back(entry.path());
  }
  if (ec) throw IoError(dir.string() + ": " + ec.message());
  std::sort(files_.begin(), files_.end(), [](const fs::path& a, const fs::path& b) {
    return a.filename().string() < b.filename().string();
  });
}

std::optional<Frame> DirectoryFrameSource::next() {
  if (cursor_ >= files_.size()) return std::nullopt;
  const std::uint64_t id = cursor_;
  const fs::path& path = files_[cursor_++];
  Frame f = read_pnm(path, id, static_cast<double>(id) * kNominalFrameIntervalMs);
  if (expected_dims_ && (f.width() != expected_dims_->first ||
                         f.height() != expected_dims_->second)) {
    throw IoError(path.string() + ": unexpected dimensions " +
                  std::to_string(f.width()) + "x" + std::to_string(f.height()));
  }
  return f;
}

SyntheticFrameSource::SyntheticFrameSource(std::uint64_t seed, std::size_t count,
                                           int width, int height)
    : seed_(seed), count_(count), width_(width), height_(height) {
  if (width < 1 || height < 1) {
    throw ValidationError("synthetic frames need width and height >= 1");
  }
}

std::optional<Frame> SyntheticFrameSource::next() {
  if (cursor_ >= count_) return std::nullopt;
  const std::uint64_t id = cursor_++;
  auto rng = internal::keyed_rng(seed_, id, 0x5eed);
  std::vector<std::uint8_t> px(static_cast<std::size_t>(width_) * height_);
  for (int y = 0; y < height_; ++y) {
    for (int x = 0; x < width_; ++x) {
      const int base = 60 + (80 * x) / width_;
      px[static_cast<std::size_t>(y) * width_ + x] =
          static_cast<std::uint8_t>(base + internal::uniform_int(rng, -20, 20));
    }
  }
  // Draw the scene the stub detector will report for the same seed.
  for (const auto& b : synthetic_scene(seed_, id, width_, height_)) {
    const PixelRect r = inner_pixel_rect(b);
    for (int y = r.y; y < r.y + r.height; ++y) {
      for (int x = r.x; x < r.x + r.width; ++x) {
        px[static_cast<std::size_t>(y) * width_ + x] =
            static_cast<std::uint8_t>(200 + internal::uniform_int(rng, 0, 40));
      }
    }
  }
  return Frame(id, static_cast<double>(id) * kNominalFrameIntervalMs, width_,
               height_, 1, std::move(px), "synthetic");
}

std::vector<Frame> drain(FrameSource& source) {
  std::vector<Frame> out;
  while (auto f = source.next()) out.push_back(std::move(*f));
  return out;
}

}  // namespace tdm::pipeline
