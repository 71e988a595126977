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
#include "tdm/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "internal/rng.hpp"
#include "json.hpp"
#include "tdm/error.hpp"
#include "tdm/pnm.hpp"

namespace tdm::dataset {

namespace fs = std::filesystem;

SplitReport split_check(const Manifest& train, const Manifest& val,
                        const Manifest& test, double ratio_tolerance) {
  SplitReport r;
  const Manifest* splits[] = {&train, &val, &test};
  std::map<std::string, std::set<int>> groups;
  std::size_t total = 0;
  for (int s = 0; s < 3; ++s) {
    r.counts[s] = splits[s]->records.size();
    total += r.counts[s];
    for (const auto& rec : splits[s]->records) groups[rec.group_id].insert(s);
  }
  for (int s = 0; s < 3; ++s) {
    r.fractions[s] = total == 0 ? 0.0 : static_cast<double>(r.counts[s]) / total;
    r.deviations[s] = r.fractions[s] - kTargetFractions[s];
    r.ratio_flags[s] = std::abs(r.deviations[s]) > ratio_tolerance;
  }
  for (const auto& [gid, where] : groups) {
    if (where.size() > 1) r.leaks.push_back(gid);
  }
  return r;
}

std::string split_report_json(const SplitReport& r) {
  nlohmann::ordered_json j;
  j["passed"] = r.passed();
  j["leaks"] = r.leaks;
  const char* names[] = {"train", "val", "test"};
  for (int s = 0; s < 3; ++s) {
    j["counts"][names[s]] = r.counts[s];
    j["fractions"][names[s]] = r.fractions[s];
    j["deviations"][names[s]] = r.deviations[s];
    j["ratio_flags"][names[s]] = r.ratio_flags[s];
  }
  return j.dump(2) + "\n";
}

std::map<std::size_t, std::size_t> instance_histogram(const Manifest& m) {
  std::map<std::size_t, std::size_t> h;
  for (const auto& rec : m.records) ++h[rec.gt_boxes.size()];
  return h;
}

std::map<std::pair<int, int>, std::size_t> resolution_histogram(const Manifest& m) {
  std::map<std::pair<int, int>, std::size_t> h;
  for (const auto& rec : m.records) ++h[{rec.width, rec.height}];
  return h;
}

std::size_t Heatmap::total() const {
  std::size_t t = 0;
  for (auto c : counts) t += c;
  return t;
}

Heatmap spatial_heatmap(const Manifest& m, std::size_t grid) {
  if (grid < 1) throw ValidationError("heatmap grid must be >= 1");
  Heatmap h;
  h.grid = grid;
  h.counts.assign(grid * grid, 0);
  const double g = static_cast<double>(grid);
  for (const auto& rec : m.records) {
    for (const auto& b : rec.gt_boxes) {
      const double cx = b.center_x() / rec.width;
      const double cy = b.center_y() / rec.height;
      if (!(cx >= 0.0 && cx <= 1.0 && cy >= 0.0 && cy <= 1.0)) continue;
      const auto col = std::min(grid - 1, static_cast<std::size_t>(std::floor(cx * g)));
      const auto row = std::min(grid - 1, static_cast<std::size_t>(std::floor(cy * g)));
      ++h.counts[row * grid + col];
    }
  }
  return h;
}

namespace {

enum class Kind { kNormal, kBlurred, kDark, kBright, kSmall, kOccluded };

constexpr Kind kSpecialKinds[] = {Kind::kBlurred, Kind::kDark, Kind::kBright,
                                  Kind::kSmall, Kind::kOccluded};

Kind kind_for(std::size_t index, double condition_fraction) {
  const auto specials = static_cast<std::size_t>(
      std::clamp(std::lround(condition_fraction * 10.0), 0L, 10L));
  const std::size_t slot = index % 10;
  return slot < specials ? kSpecialKinds[slot % 5] : Kind::kNormal;
}

BoundingBox regular_box(std::mt19937_64& rng, int w, int h, int x_lo, int x_hi) {
  const int bw = internal::uniform_int(rng, w / 5, w / 4);
  const int bh = internal::uniform_int(rng, h / 5, h / 4);
  const int x = internal::uniform_int(rng, x_lo, std::max(x_lo, x_hi - bw));
  const int y = internal::uniform_int(rng, 0, h - bh);
  return {static_cast<double>(x), static_cast<double>(y), static_cast<double>(x + bw),
          static_cast<double>(y + bh)};
}

struct RenderedImage {
  std::vector<std::uint8_t> pixels;
  std::vector<BoundingBox> boxes;
  ConditionTags tags;
  CapturePeriod period = CapturePeriod::kDay;
};

RenderedImage render_image(std::uint64_t seed, std::size_t index, Kind kind, int w, int h) {
  auto rng = internal::keyed_rng(seed, index, 0xf1c7);
  RenderedImage img;
  img.pixels.resize(static_cast<std::size_t>(w) * h);

  switch (kind) {
    case Kind::kNormal:
      img.boxes.push_back(regular_box(rng, w, h, 0, w / 2));
      if (internal::uniform_int(rng, 0, 1) == 1) {
        img.boxes.push_back(regular_box(rng, w, h, w / 2, w));
      }
      break;
    case Kind::kSmall: {
      const int bw = std::max(2, w / 12);
      const int bh = std::max(2, h / 12);
      const int x = internal::uniform_int(rng, 0, w - bw);
      const int y = internal::uniform_int(rng, 0, h - bh);
      img.boxes.push_back({double(x), double(y), double(x + bw), double(y + bh)});
      img.tags.small_object = true;
      break;
    }
    case Kind::kOccluded: {
      const BoundingBox a = regular_box(rng, w, h, 0, w - 2);
      const BoundingBox b{a.x_min + 2, a.y_min + 1, std::min<double>(a.x_max + 2, w),
                          std::min<double>(a.y_max + 1, h)};
      img.boxes = {a, b};
      img.tags.occluded = true;
      break;
    }
    default:
      img.boxes.push_back(regular_box(rng, w, h, 0, w));
      break;
  }

  // Background and object intensity ranges per kind.
  int bg_lo = 78, bg_hi = 178, obj_lo = 190, obj_hi = 240;
  switch (kind) {
    case Kind::kBlurred:
      bg_lo = bg_hi = obj_lo = obj_hi = 128;
      img.tags.blurred = true;
      img.period = CapturePeriod::kDuskDawn;
      break;
    case Kind::kDark:
      bg_lo = obj_lo = 18;
      bg_hi = obj_hi = 42;
      img.tags.underexposed = true;
      img.period = CapturePeriod::kNight;
      break;
    case Kind::kBright:
      bg_lo = obj_lo = 208;
      bg_hi = obj_hi = 232;
      img.tags.overexposed = true;
      break;
    default:
      break;
  }
  for (auto& p : img.pixels) {
    p = static_cast<std::uint8_t>(internal::uniform_int(rng, bg_lo, bg_hi));
  }
  for (const auto& b : img.boxes) {
    const PixelRect r = inner_pixel_rect(b);
    for (int y = r.y; y < r.y + r.height; ++y) {
      for (int x = r.x; x < r.x + r.width; ++x) {
        img.pixels[static_cast<std::size_t>(y) * w + x] =
            static_cast<std::uint8_t>(internal::uniform_int(rng, obj_lo, obj_hi));
      }
    }
  }
  return img;
}

std::string numbered(const char* prefix, std::size_t n, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s%0*zu", prefix, digits, n);
  return buf;
}

}  // namespace

Fixture synthetic_fixture(const FixtureOptions& opts, const fs::path& out_dir) {
  if (opts.n_images < 3) throw ValidationError("fixture needs at least 3 images");
  if (opts.width < 32 || opts.height < 32) {
    throw ValidationError("fixture images must be at least 32x32");
  }
  if (opts.group_size < 1) throw ValidationError("fixture group size must be >= 1");
  if (!(opts.condition_fraction >= 0.0 && opts.condition_fraction <= 1.0)) {
    throw ValidationError("condition fraction must lie in [0, 1]");
  }

  std::error_code ec;
  fs::create_directories(out_dir / "images", ec);
  if (ec) throw IoError(out_dir.string() + ": " + ec.message());

  const std::size_t groups = (opts.n_images + opts.group_size - 1) / opts.group_size;
  const auto round_half_up = [](double v) { return static_cast<std::size_t>(std::floor(v + 0.5)); };
  const std::size_t train_groups = std::min(groups, round_half_up(0.8 * groups));
  const std::size_t val_groups = std::min(groups - train_groups, round_half_up(0.1 * groups));

  Fixture fx;
  fx.train.split = Split::kTrain;
  fx.val.split = Split::kVal;
  fx.test.split = Split::kTest;

  for (std::size_t i = 0; i < opts.n_images; ++i) {
    const Kind kind = kind_for(i, opts.condition_fraction);
    RenderedImage img = render_image(opts.seed, i, kind, opts.width, opts.height);

    AnnotationRecord rec;
    rec.image_id = numbered("img_", i, 5);
    rec.file = "images/" + rec.image_id + ".pgm";
    rec.width = opts.width;
    rec.height = opts.height;
    const std::size_t g = i / opts.group_size;
    rec.group_id = numbered("vid_", g, 4);
    rec.gt_boxes = img.boxes;
    rec.condition_tags = img.tags;
    rec.capture_period = img.period;

    write_pnm(out_dir / rec.file,
              Frame(i, 0.0, opts.width, opts.height, 1, std::move(img.pixels)));

    Manifest& target = g < train_groups ? fx.train
                       : g < train_groups + val_groups ? fx.val
                                                       : fx.test;
    target.records.push_back(std::move(rec));
  }

  save_manifest((out_dir / "train.json").string(), fx.train);
  save_manifest((out_dir / "val.json").string(), fx.val);
  save_manifest((out_dir / "test.json").string(), fx.test);
  return fx;
}

}  // namespace tdm::dataset
