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
#include "tdm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>

#include "tdm/error.hpp"

namespace tdm::metrics {

namespace {

double aspect_angle(double w, double h) {
  // atan(w/h) with its h -> 0 limit.
  if (h == 0.0) return std::numbers::pi / 2.0;
  return std::atan(w / h);
}

void check_tau(double tau) {
  if (!(tau > 0.0 && tau <= 1.0)) {
    throw DomainError("IoU threshold must lie in (0, 1], got " +
                      std::to_string(tau));
  }
}

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

double iou(const BoundingBox& a, const BoundingBox& b) {
  const double iw = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
  const double ih = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
  const double inter = (iw > 0.0 && ih > 0.0) ? iw * ih : 0.0;
  const double uni = box_area(a) + box_area(b) - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

double ciou_loss(const BoundingBox& pred, const BoundingBox& gt) {
  const double overlap = iou(pred, gt);

  const double dx = pred.center_x() - gt.center_x();
  const double dy = pred.center_y() - gt.center_y();
  const double center_dist_sq = dx * dx + dy * dy;

  const double cw = std::max(pred.x_max, gt.x_max) - std::min(pred.x_min, gt.x_min);
  const double ch = std::max(pred.y_max, gt.y_max) - std::min(pred.y_min, gt.y_min);
  const double diag_sq = cw * cw + ch * ch;
  const double distance_term = diag_sq > 0.0 ? center_dist_sq / diag_sq : 0.0;

  const double angle_diff = aspect_angle(gt.width(), gt.height()) -
                            aspect_angle(pred.width(), pred.height());
  const double v = 4.0 / (std::numbers::pi * std::numbers::pi) * angle_diff * angle_diff;
  const double denom = (1.0 - overlap) + v;
  const double alpha = denom > 0.0 ? v / denom : 0.0;

  return 1.0 - (overlap - distance_term - alpha * v);
}

double bce(double p, int y) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw DomainError("bce: probability outside [0, 1]");
  }
  if (y != 0 && y != 1) throw DomainError("bce: label must be 0 or 1");
  const double q = std::clamp(p, kBceEpsilon, 1.0 - kBceEpsilon);
  return y == 1 ? -std::log(q) : -std::log(1.0 - q);
}

double composite_loss(const LossWeights& w, double l_iou, double l_cls,
                      double l_obj) {
  for (double v : {w.lambda_iou, w.lambda_cls, w.lambda_obj, l_iou, l_cls, l_obj}) {
    if (!std::isfinite(v) || v < 0.0) {
      throw DomainError("composite_loss: weights and terms must be finite and >= 0");
    }
  }
  return w.lambda_iou * l_iou + w.lambda_cls * l_cls + w.lambda_obj * l_obj;
}

MatchOutcome match_detections(std::span<const Detection> dets,
                              std::span<const BoundingBox> gts, double tau) {
  check_tau(tau);
  std::vector<std::size_t> order(dets.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return dets[a].score > dets[b].score;
  });

  MatchOutcome out;
  out.flags.reserve(dets.size());
  std::vector<bool> claimed(gts.size(), false);
  for (std::size_t idx : order) {
    double best = -1.0;
    std::size_t best_gt = gts.size();
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (claimed[g]) continue;
      const double o = iou(dets[idx].box, gts[g]);
      if (o > best) {
        best = o;
        best_gt = g;
      }
    }
    const bool hit = best_gt < gts.size() && best >= tau;
    if (hit) {
      claimed[best_gt] = true;
      ++out.tp;
    } else {
      ++out.fp;
    }
    out.flags.push_back({dets[idx].score, hit, idx});
  }
  out.fn = gts.size() - out.tp;
  return out;
}

PrecisionRecallF1 prf1(std::size_t tp, std::size_t fp, std::size_t fn) {
  PrecisionRecallF1 r;
  r.precision = ratio(tp, tp + fp);
  r.recall = ratio(tp, tp + fn);
  r.f1 = f1_score(r.precision, r.recall);
  return r;
}

PrecisionRecallF1 prf1(const MatchOutcome& m) { return prf1(m.tp, m.fp, m.fn); }

double f1_score(double precision, double recall) {
  const double sum = precision + recall;
  return sum > 0.0 ? 2.0 * precision * recall / sum : 0.0;
}

double average_precision(const ImageDetections& dets, const ImageBoxes& gts,
                         double tau) {
  check_tau(tau);
  std::size_t total_gt = 0;
  for (const auto& [id, boxes] : gts) total_gt += boxes.size();
  if (total_gt == 0) {
    throw ValidationError("average precision is undefined without ground truth");
  }

  struct Pooled {
    double score;
    bool tp;
  };
  std::vector<Pooled> pooled;
  static const std::vector<BoundingBox> kNone;
  for (const auto& [id, image_dets] : dets) {
    auto it = gts.find(id);
    const auto& image_gts = it == gts.end() ? kNone : it->second;
    const MatchOutcome m = match_detections(image_dets, image_gts, tau);
    for (const auto& f : m.flags) pooled.push_back({f.score, f.is_tp});
  }
  std::stable_sort(pooled.begin(), pooled.end(),
                   [](const Pooled& a, const Pooled& b) { return a.score > b.score; });

  // One (recall, precision) point per block of equal scores.
  std::vector<double> recall;
  std::vector<double> precision;
  std::size_t tp = 0;
  std::size_t fp = 0;
  for (std::size_t i = 0; i < pooled.size(); ++i) {
    pooled[i].tp ? ++tp : ++fp;
    if (i + 1 == pooled.size() || pooled[i + 1].score != pooled[i].score) {
      recall.push_back(ratio(tp, total_gt));
      precision.push_back(ratio(tp, tp + fp));
    }
  }

  double ap = 0.0;
  double envelope = 0.0;
  for (std::size_t k = recall.size(); k-- > 0;) {
    envelope = std::max(envelope, precision[k]);
    const double prev = k == 0 ? 0.0 : recall[k - 1];
    ap += (recall[k] - prev) * envelope;
  }
  return ap;
}

MapSuite map_suite(const ImageDetections& dets, const ImageBoxes& gts) {
  MapSuite s;
  s.map50 = average_precision(dets, gts, 0.50);
  s.map75 = average_precision(dets, gts, 0.75);
  s.map95 = average_precision(dets, gts, 0.95);
  double sum = 0.0;
  for (int k = 0; k < 10; ++k) sum += average_precision(dets, gts, 0.50 + 0.05 * k);
  s.map50_95 = sum / 10.0;
  return s;
}

MapSuite map_suite(const ImageDetections& dets, const ImageLabeledBoxes& gts) {
  std::set<int> classes;
  for (const auto& [id, boxes] : gts) {
    for (const auto& b : boxes) classes.insert(b.class_id);
  }
  if (classes.empty()) {
    throw ValidationError("average precision is undefined without ground truth");
  }
  MapSuite mean;
  for (int c : classes) {
    ImageDetections class_dets;
    ImageBoxes class_gts;
    for (const auto& [id, list] : dets) {
      auto& bucket = class_dets[id];
      for (const auto& d : list) {
        if (d.class_id == c) bucket.push_back(d);
      }
    }
    for (const auto& [id, list] : gts) {
      auto& bucket = class_gts[id];
      for (const auto& b : list) {
        if (b.class_id == c) bucket.push_back(b.box);
      }
    }
    const MapSuite s = map_suite(class_dets, class_gts);
    mean.map50 += s.map50;
    mean.map75 += s.map75;
    mean.map95 += s.map95;
    mean.map50_95 += s.map50_95;
  }
  const double n = static_cast<double>(classes.size());
  mean.map50 /= n;
  mean.map75 /= n;
  mean.map95 /= n;
  mean.map50_95 /= n;
  return mean;
}

ConfusionMatrix::ConfusionMatrix(std::size_t classes)
    : classes_(classes), counts_(classes * classes, 0) {
  if (classes == 0) throw ValidationError("confusion matrix needs >= 1 class");
}

ConfusionMatrix::ConfusionMatrix(std::size_t classes,
                                 std::vector<std::uint64_t> counts)
    : classes_(classes), counts_(std::move(counts)) {
  if (classes == 0 || counts_.size() != classes * classes) {
    throw ValidationError("confusion matrix must be square and non-empty");
  }
}

std::uint64_t ConfusionMatrix::row_sum(std::size_t i) const {
  std::uint64_t s = 0;
  for (std::size_t j = 0; j < classes_; ++j) s += (*this)(i, j);
  return s;
}

std::uint64_t ConfusionMatrix::col_sum(std::size_t j) const {
  std::uint64_t s = 0;
  for (std::size_t i = 0; i < classes_; ++i) s += (*this)(i, j);
  return s;
}

ConfusionMatrix confusion_matrix(const LabelRaster& pred, const LabelRaster& gt,
                                 std::size_t classes) {
  if (pred.width != gt.width || pred.height != gt.height ||
      pred.labels.size() != gt.labels.size() ||
      pred.labels.size() != static_cast<std::size_t>(pred.width) * pred.height) {
    throw ValidationError("confusion_matrix: raster shapes differ");
  }
  ConfusionMatrix cm(classes);
  for (std::size_t i = 0; i < gt.labels.size(); ++i) {
    const std::size_t t = gt.labels[i];
    const std::size_t p = pred.labels[i];
    if (t >= classes || p >= classes) {
      throw ValidationError("confusion_matrix: label out of range at pixel " +
                            std::to_string(i));
    }
    ++cm(t, p);
  }
  return cm;
}

double mpla(const ConfusionMatrix& cm, std::vector<std::size_t>* excluded) {
  double sum = 0.0;
  std::size_t included = 0;
  for (std::size_t i = 0; i < cm.classes(); ++i) {
    const std::uint64_t row = cm.row_sum(i);
    if (row == 0) {
      if (excluded != nullptr) excluded->push_back(i);
      continue;
    }
    sum += static_cast<double>(cm(i, i)) / static_cast<double>(row);
    ++included;
  }
  if (included == 0) throw ValidationError("mpla: every class row is empty");
  return sum / static_cast<double>(included);
}

double miou(const ConfusionMatrix& cm, std::vector<std::size_t>* excluded) {
  double sum = 0.0;
  std::size_t included = 0;
  for (std::size_t i = 0; i < cm.classes(); ++i) {
    const std::uint64_t uni = cm.row_sum(i) + cm.col_sum(i) - cm(i, i);
    if (uni == 0) {
      if (excluded != nullptr) excluded->push_back(i);
      continue;
    }
    sum += static_cast<double>(cm(i, i)) / static_cast<double>(uni);
    ++included;
  }
  if (included == 0) throw ValidationError("miou: every class union is empty");
  return sum / static_cast<double>(included);
}

double mask_iou(const BinaryRaster& a, const BinaryRaster& b) {
  if (a.width != b.width || a.height != b.height || a.bits.size() != b.bits.size()) {
    throw ValidationError("mask_iou: raster shapes differ");
  }
  std::size_t inter = 0;
  std::size_t uni = 0;
  for (std::size_t i = 0; i < a.bits.size(); ++i) {
    const bool x = a.bits[i] != 0;
    const bool y = b.bits[i] != 0;
    inter += (x && y) ? 1 : 0;
    uni += (x || y) ? 1 : 0;
  }
  return ratio(inter, uni);
}

}  // namespace tdm::metrics
