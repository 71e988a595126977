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
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tdm/raster.hpp"

namespace tdm::pipeline {

// Pull-based frame producer. next() returns nullopt at end-of-stream.
class FrameSource {
 public:
  virtual ~FrameSource() = default;
  virtual std::optional<Frame> next() = 0;
};

inline constexpr double kNominalFrameIntervalMs = 1000.0 / 30.0;

// Reads every *.pgm / *.ppm file of a directory in lexicographic filename
// order, assigning ids 0, 1, 2, ... Files are decoded lazily, so frames
// preceding a corrupt file are still delivered before the IoError.
class DirectoryFrameSource : public FrameSource {
 public:
  explicit DirectoryFrameSource(
      const std::filesystem::path& dir,
      std::optional<std::pair<int, int>> expected_dims = std::nullopt);

  std::optional<Frame> next() override;
  const std::vector<std::filesystem::path>& files() const { return files_; }

 private:
  std::vector<std::filesystem::path> files_;
  std::optional<std::pair<int, int>> expected_dims_;
  std::size_t cursor_ = 0;
};

// Deterministic grayscale frames from a seeded PRNG; identical seeds give
// bit-identical streams.
class SyntheticFrameSource : public FrameSource {
 public:
  SyntheticFrameSource(std::uint64_t seed, std::size_t count, int width,
                       int height);

  std::optional<Frame> next() override;

 private:
  std::uint64_t seed_;
  std::size_t count_;
  int width_;
  int height_;
  std::size_t cursor_ = 0;
};

// Replays a fixed list of frames.
class VectorFrameSource : public FrameSource {
 public:
  explicit VectorFrameSource(std::vector<Frame> frames)
      : frames_(std::move(frames)) {}

  std::optional<Frame> next() override {
    if (cursor_ >= frames_.size()) return std::nullopt;
    return frames_[cursor_++];
  }

 private:
  std::vector<Frame> frames_;
  std::size_t cursor_ = 0;
};

std::vector<Frame> drain(FrameSource& source);

}  // namespace tdm::pipeline
