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
#include <string>
#include <string_view>
#include <vector>

#include "tdm/raster.hpp"

namespace tdm {

// Binary PGM (P5) and PPM (P6) with maxval 255. Comments in the header are
// skipped. Truncated or malformed data raises IoError naming `label`.
Frame decode_pnm(std::string_view bytes, const std::string& label,
                 std::uint64_t id = 0, double timestamp_ms = 0.0);
Frame read_pnm(const std::filesystem::path& path, std::uint64_t id = 0,
               double timestamp_ms = 0.0);

// P5 for 1-channel frames, P6 for 3-channel frames.
std::string encode_pnm(const Frame& frame);
void write_pnm(const std::filesystem::path& path, const Frame& frame);

}  // namespace tdm
