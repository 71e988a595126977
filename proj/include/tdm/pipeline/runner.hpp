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

#include <chrono>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "tdm/pipeline/backends.hpp"
#include "tdm/pipeline/merge.hpp"
#include "tdm/pipeline/sources.hpp"

namespace tdm::pipeline {

std::string_view to_string(Mode m);
// Accepts "sequential", "pipelined", "parallel-independent" (or with '_').
Mode parse_mode(std::string_view s);

struct PipelineConfig {
  Mode mode = Mode::kPipelined;
  std::size_t queue_capacity = 4;
  std::size_t warmup_frames = 10;
  double det_latency_ms = 0.0;
  double seg_latency_ms = 0.0;
  double jitter_ms = 0.0;
  std::uint64_t seed = 0;
  bool render_overlays = false;
  std::chrono::milliseconds watchdog_timeout{30000};

  // Throws ValidationError on capacity 0, negative latencies, or jitter above
  // the smaller non-zero-stage latency.
  void validate() const;
};

// Per-frame stage timestamps in milliseconds since run start.
struct StageTimings {
  std::uint64_t frame_id = 0;
  double ingest_ts = 0.0;
  double det_start = 0.0;
  double det_end = 0.0;
  double seg_start = 0.0;
  double seg_end = 0.0;
  double post_end = 0.0;
};

struct LatencyStats {
  double mean = 0.0;
  double median = 0.0;
  double p95 = 0.0;
};

struct RunReport {
  std::size_t frames_processed = 0;
  double wall_ms = 0.0;
  double fps = 0.0;
  LatencyStats det_ms;
  LatencyStats seg_ms;
  LatencyStats e2e_ms;
  std::size_t ordering_violations = 0;
  // One entry per inter-stage queue; empty for sequential runs.
  std::vector<std::size_t> max_queue_depth;

  std::size_t overall_max_queue_depth() const;
};

struct RunResult {
  // Empty when a sink consumed the frames.
  std::vector<AnnotatedFrame> frames;
  std::vector<StageTimings> timings;
  RunReport report;
};

// Receives annotated frames in ascending id order.
using FrameSink = std::function<void(AnnotatedFrame&&)>;

// Single-threaded baseline: detect, segment, merge, one frame at a time.
// kParallelIndependent uses promptless segmentation; other modes prompt the
// segmenter with the detection boxes.
RunResult run_sequential(const PipelineConfig& cfg, FrameSource& source,
                         Detector& detector, Segmenter& segmenter,
                         const FrameSink& sink = {});

// Four workers (ingest, detect, segment, post-process) joined by bounded
// queues of cfg.queue_capacity. Any worker failure cancels every queue and is
// rethrown as StageError; lack of progress for cfg.watchdog_timeout raises
// WatchdogError. cfg.mode must not be kSequential.
RunResult run_threaded(const PipelineConfig& cfg, FrameSource& source,
                       Detector& detector, Segmenter& segmenter,
                       const FrameSink& sink = {});

// Dispatches on cfg.mode.
RunResult run(const PipelineConfig& cfg, FrameSource& source,
              Detector& detector, Segmenter& segmenter,
              const FrameSink& sink = {});

// Builds the report from timings ordered by emission.
RunReport summarize(const std::vector<StageTimings>& timings,
                    std::size_t warmup_frames, double wall_ms,
                    std::size_t ordering_violations,
                    std::vector<std::size_t> max_queue_depth);

LatencyStats latency_stats(std::vector<double> samples);

// JSON object with exactly the documented report keys.
std::string report_json(const RunReport& r);
std::string report_csv(const RunReport& r);

}  // namespace tdm::pipeline
