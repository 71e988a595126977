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
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "tdm/error.hpp"
#include "tdm/pipeline/runner.hpp"

namespace tdm::pipeline {

std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::kSequential: return "sequential";
    case Mode::kPipelined: return "pipelined";
    case Mode::kParallelIndependent: return "parallel-independent";
  }
  return "pipelined";
}

Mode parse_mode(std::string_view s) {
  if (s == "sequential") return Mode::kSequential;
  if (s == "pipelined") return Mode::kPipelined;
  if (s == "parallel-independent" || s == "parallel_independent") {
    return Mode::kParallelIndependent;
  }
  throw ValidationError("unknown mode \"" + std::string(s) + "\"");
}

void PipelineConfig::validate() const {
  if (queue_capacity < 1) throw ValidationError("queue capacity must be >= 1");
  for (double v : {det_latency_ms, seg_latency_ms, jitter_ms}) {
    if (!std::isfinite(v) || v < 0.0) {
      throw ValidationError("stage latencies and jitter must be finite and >= 0");
    }
  }
  double smallest = 0.0;
  if (det_latency_ms > 0.0 && seg_latency_ms > 0.0) {
    smallest = std::min(det_latency_ms, seg_latency_ms);
  } else {
    smallest = std::max(det_latency_ms, seg_latency_ms);
  }
  if (smallest > 0.0 && jitter_ms > smallest) {
    throw ValidationError("jitter must not exceed the smaller stage latency");
  }
  if (watchdog_timeout.count() <= 0) {
    throw ValidationError("watchdog timeout must be positive");
  }
}

std::size_t RunReport::overall_max_queue_depth() const {
  std::size_t m = 0;
  for (auto d : max_queue_depth) m = std::max(m, d);
  return m;
}

LatencyStats latency_stats(std::vector<double> samples) {
  LatencyStats s;
  if (samples.empty()) return s;
  std::sort(samples.begin(), samples.end());
  const std::size_t n = samples.size();
  double sum = 0.0;
  for (double v : samples) sum += v;
  s.mean = sum / static_cast<double>(n);
  s.median = n % 2 == 1 ? samples[n / 2] : 0.5 * (samples[n / 2 - 1] + samples[n / 2]);
  // Nearest-rank percentile.
  const auto rank = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(n)));
  s.p95 = samples[std::max<std::size_t>(rank, 1) - 1];
  return s;
}

RunReport summarize(const std::vector<StageTimings>& timings,
                    std::size_t warmup_frames, double wall_ms,
                    std::size_t ordering_violations,
                    std::vector<std::size_t> max_queue_depth) {
  RunReport r;
  r.frames_processed = timings.size();
  r.wall_ms = wall_ms;
  r.ordering_violations = ordering_violations;
  r.max_queue_depth = std::move(max_queue_depth);

  std::vector<double> det, seg, e2e;
  for (const auto& t : timings) {
    det.push_back(t.det_end - t.det_start);
    seg.push_back(t.seg_end - t.seg_start);
    e2e.push_back(t.post_end - t.ingest_ts);
  }
  r.det_ms = latency_stats(std::move(det));
  r.seg_ms = latency_stats(std::move(seg));
  r.e2e_ms = latency_stats(std::move(e2e));

  const std::size_t n = timings.size();
  if (n > warmup_frames && warmup_frames > 0) {
    const double span = timings[n - 1].post_end - timings[warmup_frames - 1].post_end;
    if (span > 0.0) r.fps = static_cast<double>(n - warmup_frames) * 1000.0 / span;
  } else if (n > 0) {
    // No warm-up window to exclude: measure from the first ingest.
    const double span = n > warmup_frames ? timings[n - 1].post_end - timings[0].ingest_ts
                                          : wall_ms;
    if (span > 0.0) r.fps = static_cast<double>(n) * 1000.0 / span;
  }
  return r;
}

std::string report_json(const RunReport& r) {
  nlohmann::ordered_json j;
  j["frames_processed"] = r.frames_processed;
  j["wall_ms"] = r.wall_ms;
  j["fps"] = r.fps;
  j["det_ms_mean"] = r.det_ms.mean;
  j["det_ms_p95"] = r.det_ms.p95;
  j["seg_ms_mean"] = r.seg_ms.mean;
  j["seg_ms_p95"] = r.seg_ms.p95;
  j["e2e_ms_mean"] = r.e2e_ms.mean;
  j["e2e_ms_p95"] = r.e2e_ms.p95;
  j["ordering_violations"] = r.ordering_violations;
  j["max_queue_depth"] = r.overall_max_queue_depth();
  return j.dump(2) + "\n";
}

std::string report_csv(const RunReport& r) {
  std::ostringstream os;
  os << "frames_processed,wall_ms,fps,det_ms_mean,det_ms_p95,seg_ms_mean,"
        "seg_ms_p95,e2e_ms_mean,e2e_ms_p95,ordering_violations,max_queue_depth\n";
  char buf[256];
  std::snprintf(buf, sizeof buf, "%zu,%.3f,%.4f,%.3f,%.3f,%.3f,%.3f,%.3f,%.3f,%zu,%zu\n",
                r.frames_processed, r.wall_ms, r.fps, r.det_ms.mean, r.det_ms.p95,
                r.seg_ms.mean, r.seg_ms.p95, r.e2e_ms.mean, r.e2e_ms.p95,
                r.ordering_violations, r.overall_max_queue_depth());
  os << buf;
  return os.str();
}

}  // namespace tdm::pipeline
