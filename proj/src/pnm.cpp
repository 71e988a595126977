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
#include "tdm/pnm.hpp"

#include <cctype>
#include <fstream>
#include <iterator>
#include <sstream>

#include "tdm/error.hpp"

namespace tdm {

namespace {

class HeaderReader {
 public:
  HeaderReader(std::string_view bytes, const std::string& label)
      : bytes_(bytes), label_(label) {}

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const char c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  int read_int(const char* field) {
    skip_space_and_comments();
    long long value = 0;
    std::size_t digits = 0;
    while (pos_ < bytes_.size() &&
           std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > 1'000'000) fail(std::string("implausible ") + field);
      ++pos_;
      ++digits;
    }
    if (digits == 0) fail(std::string("missing ") + field);
    return static_cast<int>(value);
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw IoError(label_ + ": " + what);
  }

  std::size_t pos_ = 0;
  std::string_view bytes_;
  const std::string& label_;
};

}  // namespace

Frame decode_pnm(std::string_view bytes, const std::string& label,
                 std::uint64_t id, double timestamp_ms) {
  HeaderReader in(bytes, label);
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '6')) {
    in.fail("not a binary PGM/PPM file");
  }
  const int channels = bytes[1] == '5' ? 1 : 3;
  in.pos_ = 2;
  const int width = in.read_int("width");
  const int height = in.read_int("height");
  const int maxval = in.read_int("maxval");
  if (width < 1 || height < 1) in.fail("dimensions must be >= 1");
  if (maxval != 255) in.fail("only maxval 255 is supported");
  if (in.pos_ >= bytes.size() ||
      !std::isspace(static_cast<unsigned char>(bytes[in.pos_]))) {
    in.fail("truncated header");
  }
  ++in.pos_;
  const auto expected = static_cast<std::size_t>(width) * height * channels;
  if (bytes.size() - in.pos_ < expected) {
    in.fail("truncated pixel data (" + std::to_string(bytes.size() - in.pos_) +
            " of " + std::to_string(expected) + " bytes)");
  }
  std::vector<std::uint8_t> pixels(bytes.begin() + in.pos_,
                                   bytes.begin() + in.pos_ + expected);
  return Frame(id, timestamp_ms, width, height, channels, std::move(pixels),
               label);
}

Frame read_pnm(const std::filesystem::path& path, std::uint64_t id,
               double timestamp_ms) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw IoError(path.string() + ": cannot open");
  std::string bytes((std::istreambuf_iterator<char>(file)),
                    std::istreambuf_iterator<char>());
  if (file.bad()) throw IoError(path.string() + ": read failed");
  return decode_pnm(bytes, path.string(), id, timestamp_ms);
}

std::string encode_pnm(const Frame& frame) {
  std::ostringstream os;
  os << (frame.channels() == 1 ? "P5" : "P6") << '\n'
     << frame.width() << ' ' << frame.height() << "\n255\n";
  std::string out = os.str();
  const auto px = frame.pixels();
  out.append(reinterpret_cast<const char*>(px.data()), px.size());
  return out;
}

void write_pnm(const std::filesystem::path& path, const Frame& frame) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError(path.string() + ": cannot open for writing");
  const std::string bytes = encode_pnm(frame);
  file.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!file) throw IoError(path.string() + ": write failed");
}

}  // namespace tdm
