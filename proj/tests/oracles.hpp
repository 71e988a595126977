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
// Reference implementations used only by tests. They deliberately share no
// code with the library paths they check.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "tdm/geometry.hpp"

namespace tdm::oracle {

inline double box_iou(const BoundingBox& a, const BoundingBox& b) {
  const double x0 = std::max(a.x_min, b.x_min);
  const double y0 = std::max(a.y_min, b.y_min);
  const double x1 = std::min(a.x_max, b.x_max);
  const double y1 = std::min(a.y_max, b.y_max);
  const double inter = (x1 > x0 && y1 > y0) ? (x1 - x0) * (y1 - y0) : 0.0;
  const double area_a = (a.x_max - a.x_min) * (a.y_max - a.y_min);
  const double area_b = (b.x_max - b.x_min) * (b.y_max - b.y_min);
  const double uni = area_a + area_b - inter;
  return uni > 0 ? inter / uni : 0.0;
}

// Number of true positives when only detections scoring >= threshold are
// kept, using the greedy score-ordered rule.
inline std::size_t greedy_tp(const std::vector<Detection>& dets,
                             const std::vector<BoundingBox>& gts, double threshold,
                             double tau, std::size_t* kept_out) {
  std::vector<std::pair<double, std::size_t>> kept;
  for (std::size_t i = 0; i < dets.size(); ++i) {
    if (dets[i].score >= threshold) kept.push_back({dets[i].score, i});
  }
  // Descending score, input order among ties.
  std::sort(kept.begin(), kept.end(), [](auto& a, auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  std::vector<int> used(gts.size(), 0);
  std::size_t tp = 0;
  for (auto [score, i] : kept) {
    int best = -1;
    double best_iou = -1;
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (used[g]) continue;
      const double o = box_iou(dets[i].box, gts[g]);
      if (o > best_iou) {
        best_iou = o;
        best = static_cast<int>(g);
      }
    }
    if (best >= 0 && best_iou >= tau) {
      used[best] = 1;
      ++tp;
    }
  }
  *kept_out = kept.size();
  return tp;
}

// AP by sweeping every distinct score threshold and integrating the
// precision envelope P(r) = max{precision at any point with recall >= r}.
inline double sweep_ap(const std::map<std::string, std::vector<Detection>>& dets,
                       const std::map<std::string, std::vector<BoundingBox>>& gts,
                       double tau) {
  std::size_t total_gt = 0;
  for (auto& [k, v] : gts) total_gt += v.size();
  std::set<double> thresholds;
  for (auto& [k, v] : dets) {
    for (auto& d : v) thresholds.insert(d.score);
  }
  std::vector<std::pair<double, double>> points;  // (recall, precision)
  for (double s : thresholds) {
    std::size_t tp = 0, kept = 0;
    for (auto& [k, v] : dets) {
      auto it = gts.find(k);
      const std::vector<BoundingBox> none;
      std::size_t n = 0;
      tp += greedy_tp(v, it == gts.end() ? none : it->second, s, tau, &n);
      kept += n;
    }
    points.push_back({double(tp) / double(total_gt), double(tp) / double(kept)});
  }
  std::set<double> recalls;
  for (auto& p : points) recalls.insert(p.first);
  double ap = 0, prev = 0;
  for (double r : recalls) {
    double env = 0;
    for (auto& p : points) {
      if (p.first >= r) env = std::max(env, p.second);
    }
    ap += (r - prev) * env;
    prev = r;
  }
  return ap;
}

// Step-by-step CIoU loss.
inline double ciou_terms(const BoundingBox& p, const BoundingBox& g) {
  const double iou = box_iou(p, g);
  const double pcx = (p.x_min + p.x_max) / 2, pcy = (p.y_min + p.y_max) / 2;
  const double gcx = (g.x_min + g.x_max) / 2, gcy = (g.y_min + g.y_max) / 2;
  const double rho2 = (pcx - gcx) * (pcx - gcx) + (pcy - gcy) * (pcy - gcy);
  const double ex0 = std::min(p.x_min, g.x_min), ex1 = std::max(p.x_max, g.x_max);
  const double ey0 = std::min(p.y_min, g.y_min), ey1 = std::max(p.y_max, g.y_max);
  const double c2 = (ex1 - ex0) * (ex1 - ex0) + (ey1 - ey0) * (ey1 - ey0);
  const double pw = p.x_max - p.x_min, ph = p.y_max - p.y_min;
  const double gw = g.x_max - g.x_min, gh = g.y_max - g.y_min;
  const double ap = ph == 0 ? std::numbers::pi / 2 : std::atan(pw / ph);
  const double ag = gh == 0 ? std::numbers::pi / 2 : std::atan(gw / gh);
  const double v = 4 / (std::numbers::pi * std::numbers::pi) * (ag - ap) * (ag - ap);
  const double alpha = (iou == 1 && v == 0) ? 0 : v / ((1 - iou) + v);
  return 1 - (iou - (c2 > 0 ? rho2 / c2 : 0) - alpha * v);
}

// Naive 4-neighbour Laplacian variance over interior pixels.
inline double naive_laplacian_variance(const std::vector<int>& px, int w, int h) {
  std::vector<double> r;
  for (int y = 1; y < h - 1; ++y) {
    for (int x = 1; x < w - 1; ++x) {
      const int c = px[y * w + x];
      r.push_back(px[(y - 1) * w + x] + px[(y + 1) * w + x] + px[y * w + x - 1] +
                  px[y * w + x + 1] - 4 * c);
    }
  }
  double mean = 0;
  for (double v : r) mean += v;
  mean /= r.size();
  double var = 0;
  for (double v : r) var += (v - mean) * (v - mean);
  return var / r.size();
}

// Random detection instance on a coarse grid so overlaps and score ties occur.
struct ApInstance {
  std::map<std::string, std::vector<Detection>> dets;
  std::map<std::string, std::vector<BoundingBox>> gts;
};

inline BoundingBox grid_box(std::mt19937_64& rng) {
  const double x = double(rng() % 8), y = double(rng() % 8);
  const double w = 1 + double(rng() % 5), h = 1 + double(rng() % 5);
  return {x, y, x + w, y + h};
}

inline ApInstance random_ap_instance(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  ApInstance inst;
  const std::size_t images = 1 + rng() % 3;
  const std::size_t n_gt = 1 + rng() % 10;
  const std::size_t n_det = rng() % 21;
  for (std::size_t i = 0; i < n_gt; ++i) {
    inst.gts["img" + std::to_string(rng() % images)].push_back(grid_box(rng));
  }
  for (std::size_t i = 0; i < n_det; ++i) {
    const std::string key = "img" + std::to_string(rng() % images);
    auto& gts = inst.gts[key];
    BoundingBox b = grid_box(rng);
    if (!gts.empty() && rng() % 2 == 0) {
      // Perturb a ground-truth box to get partial overlaps.
      b = gts[rng() % gts.size()];
      b.x_min += double(rng() % 3) - 1;
      b.x_max += double(rng() % 3);
    }
    inst.dets[key].push_back({b, double(1 + rng() % 9) / 10.0, 0});
  }
  return inst;
}

}  // namespace tdm::oracle
