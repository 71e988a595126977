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
#include <atomic>
#include <chrono>
#include <map>
#include <memory>
#include <mutex>
#include <thread>

#include "tdm/error.hpp"
#include "tdm/pipeline/bounded_queue.hpp"
#include "tdm/pipeline/runner.hpp"

namespace tdm::pipeline {

namespace {

using Clock = std::chrono::steady_clock;

class RunClock {
 public:
  double now_ms() const {
    return std::chrono::duration<double, std::milli>(Clock::now() - start_).count();
  }

 private:
  Clock::time_point start_ = Clock::now();
};

// Unit of work passed between threaded stages.
struct Work {
  std::shared_ptr<const Frame> frame;
  std::size_t seq = 0;
  StageTimings timings;
  std::vector<Detection> dets;
  std::vector<MaskRaster> masks;
};

// Re-emits frames in ingest order and counts ordering defects.
class OrderedEmitter {
 public:
  OrderedEmitter(const RunClock& clock, const FrameSink& sink, RunResult& result)
      : clock_(clock), sink_(sink), result_(result) {}

  void accept(std::size_t seq, AnnotatedFrame af, StageTimings t) {
    if (seq < next_seq_ || pending_.count(seq) != 0) {
      ++violations_;
      return;
    }
    pending_.emplace(seq, std::make_pair(std::move(af), t));
    while (!pending_.empty() && pending_.begin()->first == next_seq_) {
      auto node = pending_.extract(pending_.begin());
      emit(std::move(node.mapped().first), node.mapped().second);
      ++next_seq_;
    }
  }

  // Frames still waiting for a predecessor at shutdown are out of order.
  std::size_t violations() const { return violations_ + pending_.size(); }

 private:
  void emit(AnnotatedFrame af, StageTimings t) {
    if (last_id_ && af.frame_id <= *last_id_) ++violations_;
    last_id_ = af.frame_id;
    t.post_end = clock_.now_ms();
    result_.timings.push_back(t);
    if (sink_) {
      sink_(std::move(af));
    } else {
      result_.frames.push_back(std::move(af));
    }
  }

  const RunClock& clock_;
  const FrameSink& sink_;
  RunResult& result_;
  std::map<std::size_t, std::pair<AnnotatedFrame, StageTimings>> pending_;
  std::size_t next_seq_ = 0;
  std::optional<std::uint64_t> last_id_;
  std::size_t violations_ = 0;
};

AnnotatedFrame finish_frame(const PipelineConfig& cfg, const Frame& f,
                            const std::vector<Detection>& dets,
                            const std::vector<MaskRaster>& masks) {
  AnnotatedFrame af = merge(f, dets, masks, cfg.mode);
  if (cfg.render_overlays) af.overlay = render_overlay(af, f);
  return af;
}

// First failure wins; later ones are consequences of the cancellation.
class FailureLatch {
 public:
  bool record(const std::string& stage, std::uint64_t frame_id,
              const std::string& what) {
    std::lock_guard lock(mu_);
    if (error_) return false;
    error_.emplace(stage, frame_id, what);
    failed_.store(true);
    return true;
  }
  bool failed() const { return failed_.load(); }
  void rethrow() const {
    std::lock_guard lock(mu_);
    if (error_) throw *error_;
  }

 private:
  mutable std::mutex mu_;
  std::optional<StageError> error_;
  std::atomic<bool> failed_{false};
};

}  // namespace

RunResult run_sequential(const PipelineConfig& cfg, FrameSource& source,
                         Detector& detector, Segmenter& segmenter,
                         const FrameSink& sink) {
  cfg.validate();
  RunClock clock;
  RunResult result;
  OrderedEmitter emitter(clock, sink, result);
  std::optional<std::uint64_t> last_source_id;
  std::size_t source_violations = 0;

  for (std::size_t seq = 0;; ++seq) {
    std::optional<Frame> frame;
    try {
      frame = source.next();
    } catch (const std::exception& e) {
      throw StageError("ingest", seq, e.what());
    }
    if (!frame) break;
    const std::uint64_t id = frame->id();
    if (last_source_id && id <= *last_source_id) ++source_violations;
    last_source_id = id;

    StageTimings t;
    t.frame_id = id;
    t.ingest_ts = clock.now_ms();

    std::vector<Detection> dets;
    t.det_start = clock.now_ms();
    try {
      dets = detector.detect(*frame);
    } catch (const std::exception& e) {
      throw StageError("detect", id, e.what());
    }
    t.det_end = clock.now_ms();

    std::vector<MaskRaster> masks;
    t.seg_start = clock.now_ms();
    try {
      masks = cfg.mode == Mode::kParallelIndependent
                  ? segmenter.segment_full(*frame)
                  : segmenter.segment(*frame, prompt_boxes(*frame, dets));
    } catch (const std::exception& e) {
      throw StageError("segment", id, e.what());
    }
    t.seg_end = clock.now_ms();

    try {
      emitter.accept(seq, finish_frame(cfg, *frame, dets, masks), t);
    } catch (const std::exception& e) {
      throw StageError("post", id, e.what());
    }
  }
  result.report = summarize(result.timings, cfg.warmup_frames, clock.now_ms(),
                            emitter.violations() + source_violations, {});
  return result;
}

RunResult run_threaded(const PipelineConfig& cfg, FrameSource& source,
                       Detector& detector, Segmenter& segmenter,
                       const FrameSink& sink) {
  cfg.validate();
  if (cfg.mode == Mode::kSequential) {
    throw ValidationError("run_threaded needs mode pipelined or parallel-independent");
  }
  const bool independent = cfg.mode == Mode::kParallelIndependent;

  RunClock clock;
  RunResult result;
  OrderedEmitter emitter(clock, sink, result);
  FailureLatch failure;
  std::atomic<std::uint64_t> progress{0};
  std::atomic<std::size_t> source_violations{0};

  using Queue = BoundedQueue<Work>;
  Queue to_detect(cfg.queue_capacity, &progress);
  Queue to_segment(cfg.queue_capacity, &progress);
  Queue detected(cfg.queue_capacity, &progress);   // independent mode only
  Queue to_post(cfg.queue_capacity, &progress);
  std::vector<Queue*> queues = {&to_detect, &to_segment, &to_post};
  if (independent) queues.push_back(&detected);

  auto cancel_all = [&] {
    for (Queue* q : queues) q->cancel();
  };
  auto fail = [&](const std::string& stage, std::uint64_t id, const std::string& what) {
    failure.record(stage, id, what);
    cancel_all();
  };

  auto ingest = [&] {
    std::optional<std::uint64_t> last_id;
    for (std::size_t seq = 0; !failure.failed(); ++seq) {
      std::optional<Frame> frame;
      try {
        frame = source.next();
      } catch (const std::exception& e) {
        fail("ingest", seq, e.what());
        break;
      }
      if (!frame) break;
      if (last_id && frame->id() <= *last_id) ++source_violations;
      last_id = frame->id();

      Work w;
      w.seq = seq;
      w.timings.frame_id = frame->id();
      w.frame = std::make_shared<const Frame>(std::move(*frame));
      w.timings.ingest_ts = clock.now_ms();
      progress.fetch_add(1);
      if (independent) {
        // Both branches see the same immutable frame.
        if (!to_detect.push(w)) break;
        if (!to_segment.push(std::move(w))) break;
      } else if (!to_detect.push(std::move(w))) {
        break;
      }
    }
    to_detect.close();
    if (independent) to_segment.close();
  };

  auto detect = [&] {
    Queue& out = independent ? detected : to_segment;
    while (auto w = to_detect.pop()) {
      w->timings.det_start = clock.now_ms();
      try {
        w->dets = detector.detect(*w->frame);
      } catch (const std::exception& e) {
        fail("detect", w->timings.frame_id, e.what());
        break;
      }
      w->timings.det_end = clock.now_ms();
      progress.fetch_add(1);
      if (!out.push(std::move(*w))) break;
    }
    out.close();
  };

  auto segment = [&] {
    while (auto w = to_segment.pop()) {
      w->timings.seg_start = clock.now_ms();
      try {
        w->masks = independent ? segmenter.segment_full(*w->frame)
                               : segmenter.segment(*w->frame, prompt_boxes(*w->frame, w->dets));
      } catch (const std::exception& e) {
        fail("segment", w->timings.frame_id, e.what());
        break;
      }
      w->timings.seg_end = clock.now_ms();
      progress.fetch_add(1);
      if (!to_post.push(std::move(*w))) break;
    }
    to_post.close();
  };

  auto post = [&] {
    while (true) {
      auto w = to_post.pop();
      if (!w) break;
      if (independent) {
        auto d = detected.pop();
        if (!d) break;
        if (d->seq != w->seq) {
          fail("post", w->timings.frame_id, "detector and segmenter outputs out of step");
          break;
        }
        w->dets = std::move(d->dets);
        w->timings.det_start = d->timings.det_start;
        w->timings.det_end = d->timings.det_end;
      }
      try {
        emitter.accept(w->seq, finish_frame(cfg, *w->frame, w->dets, w->masks), w->timings);
      } catch (const std::exception& e) {
        fail("post", w->timings.frame_id, e.what());
        break;
      }
      progress.fetch_add(1);
    }
  };

  std::mutex done_mu;
  std::condition_variable done_cv;
  std::size_t done = 0;
  auto worker = [&](auto body) {
    return std::thread([&, body] {
      body();
      {
        std::lock_guard lock(done_mu);
        ++done;
      }
      done_cv.notify_all();
    });
  };

  std::vector<std::thread> threads;
  threads.push_back(worker(ingest));
  threads.push_back(worker(detect));
  threads.push_back(worker(segment));
  threads.push_back(worker(post));

  // Watchdog: the caller thread waits for the workers and trips when no
  // queue or stage activity has been observed for the configured timeout.
  bool watchdog_fired = false;
  {
    std::uint64_t seen = progress.load();
    auto last_change = Clock::now();
    const auto poll = std::min<std::chrono::milliseconds>(
        std::chrono::milliseconds(100), cfg.watchdog_timeout);
    std::unique_lock lock(done_mu);
    while (!done_cv.wait_for(lock, poll, [&] { return done == threads.size(); })) {
      const std::uint64_t now_seen = progress.load();
      if (now_seen != seen) {
        seen = now_seen;
        last_change = Clock::now();
      } else if (Clock::now() - last_change >= cfg.watchdog_timeout) {
        watchdog_fired = true;
        lock.unlock();
        failure.record("watchdog", 0, "no progress");
        cancel_all();
        lock.lock();
        done_cv.wait(lock, [&] { return done == threads.size(); });
        break;
      }
    }
  }
  for (auto& t : threads) t.join();

  if (watchdog_fired) {
    throw WatchdogError("pipeline made no progress for " +
                        std::to_string(cfg.watchdog_timeout.count()) + " ms");
  }
  failure.rethrow();

  std::vector<std::size_t> depths;
  for (Queue* q : queues) depths.push_back(q->max_depth());
  result.report = summarize(result.timings, cfg.warmup_frames, clock.now_ms(),
                            emitter.violations() + source_violations.load(),
                            std::move(depths));
  return result;
}

RunResult run(const PipelineConfig& cfg, FrameSource& source, Detector& detector,
              Segmenter& segmenter, const FrameSink& sink) {
  if (cfg.mode == Mode::kSequential) {
    return run_sequential(cfg, source, detector, segmenter, sink);
  }
  return run_threaded(cfg, source, detector, segmenter, sink);
}

}  // namespace tdm::pipeline
