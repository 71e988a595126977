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
#include <map>
#include <span>
#include <string>
#include <vector>

#include "tdm/geometry.hpp"
#include "tdm/raster.hpp"

namespace tdm::metrics {

// ---------------------------------------------------------------------------
// Box overlap and losses
// ---------------------------------------------------------------------------

// Intersection over union; 0 when both boxes have zero area.
double iou(const BoundingBox& a, const BoundingBox& b);

// Complete-IoU regression loss 1 - (IoU - rho^2/c^2 - alpha*v).
double ciou_loss(const BoundingBox& pred, const BoundingBox& gt);

inline constexpr double kBceEpsilon = 1e-7;

// Binary cross-entropy with the prediction clamped to [eps, 1 - eps].
// Throws DomainError unless 0 <= p <= 1 and y is 0 or 1.
double bce(double p, int y);

struct LossWeights {
  double lambda_iou = 1.0;
  double lambda_cls = 1.0;
  double lambda_obj = 1.0;
};

// lambda_iou * l_iou + lambda_cls * l_cls + lambda_obj * l_obj. The
// objectness term is taken as an opaque non-negative value.
double composite_loss(const LossWeights& w, double l_iou, double l_cls,
                      double l_obj);

// ---------------------------------------------------------------------------
// Detection matching and detection metrics
// ---------------------------------------------------------------------------

struct ScoredFlag {
  double score = 0.0;
  bool is_tp = false;
  // Position of the detection in the caller's input.
  std::size_t index = 0;
};

struct MatchOutcome {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  // One entry per detection, in descending score order (ties: input order).
  std::vector<ScoredFlag> flags;
};

// Greedy one-to-one matching. Detections are visited by descending score and
// each claims the unmatched ground truth of highest IoU (lowest index on ties)
// when that IoU is >= tau.
MatchOutcome match_detections(std::span<const Detection> dets,
                              std::span<const BoundingBox> gts, double tau);

struct PrecisionRecallF1 {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// 0/0 is reported as 0 for each quantity.
PrecisionRecallF1 prf1(const MatchOutcome& m);
PrecisionRecallF1 prf1(std::size_t tp, std::size_t fp, std::size_t fn);
double f1_score(double precision, double recall);

using ImageDetections = std::map<std::string, std::vector<Detection>>;
using ImageBoxes = std::map<std::string, std::vector<BoundingBox>>;

// All-point interpolated average precision over detections pooled across
// images. Detections with equal scores enter the precision/recall curve as
// one block. Images missing from `dets` have no detections; detections for
// images absent from `gts` are false positives. Throws ValidationError when
// there is no ground truth at all.
double average_precision(const ImageDetections& dets, const ImageBoxes& gts,
                         double tau);

struct MapSuite {
  double map50 = 0.0;
  double map75 = 0.0;
  double map95 = 0.0;
  // Mean AP over tau = 0.50, 0.55, ..., 0.95.
  double map50_95 = 0.0;
};

// Class-agnostic suite: every detection competes for every ground truth.
MapSuite map_suite(const ImageDetections& dets, const ImageBoxes& gts);

struct LabeledBox {
  BoundingBox box;
  int class_id = 0;
};
using ImageLabeledBoxes = std::map<std::string, std::vector<LabeledBox>>;

// Per-class AP averaged over the classes present in the ground truth.
MapSuite map_suite(const ImageDetections& dets, const ImageLabeledBoxes& gts);

// ---------------------------------------------------------------------------
// Pixel metrics
// ---------------------------------------------------------------------------

struct LabelRaster {
  int width = 0;
  int height = 0;
  std::vector<std::uint16_t> labels;
};

// Square count matrix; entry (i, j) counts pixels of ground-truth class i
// predicted as class j.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(std::size_t classes);
  ConfusionMatrix(std::size_t classes, std::vector<std::uint64_t> counts);

  std::size_t classes() const { return classes_; }
  std::uint64_t operator()(std::size_t truth, std::size_t pred) const {
    return counts_[truth * classes_ + pred];
  }
  std::uint64_t& operator()(std::size_t truth, std::size_t pred) {
    return counts_[truth * classes_ + pred];
  }
  std::uint64_t row_sum(std::size_t i) const;
  std::uint64_t col_sum(std::size_t j) const;

  bool operator==(const ConfusionMatrix&) const = default;

 private:
  std::size_t classes_;
  std::vector<std::uint64_t> counts_;
};

ConfusionMatrix confusion_matrix(const LabelRaster& pred,
                                 const LabelRaster& gt, std::size_t classes);

// Mean per-class pixel accuracy. Classes with no ground-truth pixels are left
// out of the mean and appended to `excluded` when given.
double mpla(const ConfusionMatrix& cm,
            std::vector<std::size_t>* excluded = nullptr);

// Mean per-class IoU. Classes whose union is empty are left out of the mean.
double miou(const ConfusionMatrix& cm,
            std::vector<std::size_t>* excluded = nullptr);

// Pixel IoU of two frame-sized binary rasters; 0 when both are empty.
double mask_iou(const BinaryRaster& a, const BinaryRaster& b);

}  // namespace tdm::metrics
