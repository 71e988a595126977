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
#include "tdm/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "tdm/conditions.hpp"
#include "tdm/dataset.hpp"
#include "tdm/error.hpp"
#include "tdm/manifest.hpp"
#include "tdm/pipeline/runner.hpp"
#include "tdm/pnm.hpp"
#include "tdm/predictions.hpp"

namespace tdm::cli {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

enum class Format { kJson, kCsv };

struct GlobalOptions {
  std::string format = "json";
  std::uint64_t seed = 0;

  Format fmt() const { return format == "csv" ? Format::kCsv : Format::kJson; }
};

std::string fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError(path + ": cannot open for writing");
  file << text;
  if (!file) throw IoError(path + ": write failed");
}

// ---------------------------------------------------------------------------
// run / bench
// ---------------------------------------------------------------------------

struct PipelineOptions {
  std::string mode = "pipelined";
  std::size_t queue_capacity = 4;
  double det_latency_ms = 0.0;
  double seg_latency_ms = 0.0;
  double jitter_ms = 0.0;
  std::size_t warmup = 10;
  std::optional<std::size_t> frames;
  std::string source = "synthetic";
  int width = 160;
  int height = 120;
  long watchdog_ms = 30000;
  std::string emit_overlays;
  std::string report;
};

void add_pipeline_flags(CLI::App* cmd, PipelineOptions& o) {
  cmd->add_option("--mode", o.mode, "sequential|pipelined|parallel-independent");
  cmd->add_option("--queue-capacity", o.queue_capacity, "Bounded queue capacity");
  cmd->add_option("--det-latency-ms", o.det_latency_ms, "Stub detector delay");
  cmd->add_option("--seg-latency-ms", o.seg_latency_ms, "Stub segmenter delay");
  cmd->add_option("--jitter-ms", o.jitter_ms, "Uniform +/- jitter on stub delays");
  cmd->add_option("--warmup", o.warmup, "Frames excluded from FPS");
  cmd->add_option("--frames", o.frames, "Frame count (synthetic) or cap (directory)");
  cmd->add_option("--source", o.source, "Directory of PGM/PPM files, or 'synthetic'");
  cmd->add_option("--width", o.width, "Synthetic frame width");
  cmd->add_option("--height", o.height, "Synthetic frame height");
  cmd->add_option("--watchdog-ms", o.watchdog_ms, "Abort after this long without progress");
  cmd->add_option("--report", o.report, "Write the run report (.json or .csv)");
}

class CappedSource : public pipeline::FrameSource {
 public:
  CappedSource(std::unique_ptr<pipeline::FrameSource> inner, std::optional<std::size_t> cap)
      : inner_(std::move(inner)), cap_(cap) {}
  std::optional<Frame> next() override {
    if (cap_ && served_ >= *cap_) return std::nullopt;
    auto f = inner_->next();
    if (f) ++served_;
    return f;
  }

 private:
  std::unique_ptr<pipeline::FrameSource> inner_;
  std::optional<std::size_t> cap_;
  std::size_t served_ = 0;
};

std::unique_ptr<pipeline::FrameSource> open_source(const PipelineOptions& o,
                                                   std::uint64_t seed) {
  if (o.source == "synthetic") {
    return std::make_unique<pipeline::SyntheticFrameSource>(seed, o.frames.value_or(100),
                                                            o.width, o.height);
  }
  return std::make_unique<CappedSource>(
      std::make_unique<pipeline::DirectoryFrameSource>(o.source), o.frames);
}

pipeline::PipelineConfig make_config(const PipelineOptions& o, pipeline::Mode mode,
                                     std::uint64_t seed) {
  pipeline::PipelineConfig cfg;
  cfg.mode = mode;
  cfg.queue_capacity = o.queue_capacity;
  cfg.warmup_frames = o.warmup;
  cfg.det_latency_ms = o.det_latency_ms;
  cfg.seg_latency_ms = o.seg_latency_ms;
  cfg.jitter_ms = o.jitter_ms;
  cfg.seed = seed;
  cfg.watchdog_timeout = std::chrono::milliseconds(o.watchdog_ms);
  cfg.validate();
  return cfg;
}

pipeline::RunResult execute(const pipeline::PipelineConfig& cfg, const PipelineOptions& o,
                            const pipeline::FrameSink& sink = {}) {
  auto source = open_source(o, cfg.seed);
  pipeline::StubDetector detector(cfg.seed, cfg.det_latency_ms, cfg.jitter_ms);
  pipeline::StubSegmenter segmenter(cfg.seed, cfg.seg_latency_ms, cfg.jitter_ms);
  return pipeline::run(cfg, *source, detector, segmenter, sink);
}

void write_report(const std::string& path, const pipeline::RunReport& r) {
  const bool csv = fs::path(path).extension() == ".csv";
  write_text_file(path, csv ? pipeline::report_csv(r) : pipeline::report_json(r));
}

const MaskRaster* mask_of(const pipeline::AnnotatedFrame& af, std::size_t det) {
  for (std::size_t i = 0; i < af.masks.size(); ++i) {
    if (af.mask_owner[i] == det) return &af.masks[i];
  }
  return nullptr;
}

int cmd_run(const GlobalOptions& g, const PipelineOptions& o, std::ostream& out,
            std::ostream& err) {
  auto cfg = make_config(o, pipeline::parse_mode(o.mode), g.seed);
  cfg.render_overlays = !o.emit_overlays.empty();
  if (cfg.render_overlays) {
    std::error_code ec;
    fs::create_directories(o.emit_overlays, ec);
    if (ec) throw IoError(o.emit_overlays + ": " + ec.message());
  }

  Json frames = Json::array();
  std::ostringstream csv;
  csv << "frame_id,det_index,xmin,ymin,xmax,ymax,score,class_id,mask_x,mask_y,"
         "mask_w,mask_h,mask_pixels\n";
  auto sink = [&](pipeline::AnnotatedFrame&& af) {
    if (af.overlay) {
      char name[64];
      std::snprintf(name, sizeof name, "frame_%06llu.ppm",
                    static_cast<unsigned long long>(af.frame_id));
      write_pnm(fs::path(o.emit_overlays) / name, *af.overlay);
    }
    Json dets = Json::array();
    for (std::size_t k = 0; k < af.detections.size(); ++k) {
      const Detection& d = af.detections[k];
      const MaskRaster* m = mask_of(af, k);
      Json jd = {{"box", {d.box.x_min, d.box.y_min, d.box.x_max, d.box.y_max}},
                 {"score", d.score},
                 {"class_id", d.class_id}};
      jd["mask"] = m == nullptr ? Json(nullptr)
                                : Json{{"x", m->offset_x}, {"y", m->offset_y},
                                       {"width", m->width}, {"height", m->height},
                                       {"pixels", m->popcount()}};
      dets.push_back(std::move(jd));
      csv << af.frame_id << ',' << k << ',' << d.box.x_min << ',' << d.box.y_min << ','
          << d.box.x_max << ',' << d.box.y_max << ',' << d.score << ',' << d.class_id << ',';
      if (m != nullptr) {
        csv << m->offset_x << ',' << m->offset_y << ',' << m->width << ',' << m->height
            << ',' << m->popcount() << '\n';
      } else {
        csv << ",,,,\n";
      }
    }
    frames.push_back({{"frame_id", af.frame_id}, {"detections", std::move(dets)}});
  };

  const auto result = execute(cfg, o, sink);
  if (!o.report.empty()) write_report(o.report, result.report);
  err << "run: mode=" << pipeline::to_string(cfg.mode)
      << " frames=" << result.report.frames_processed << " fps=" << fixed(result.report.fps, 2)
      << " ordering_violations=" << result.report.ordering_violations << "\n";

  if (g.fmt() == Format::kCsv) {
    out << csv.str();
  } else {
    Json doc;
    doc["mode"] = std::string(pipeline::to_string(cfg.mode));
    doc["frames"] = std::move(frames);
    out << doc.dump(1) << "\n";
  }
  return result.report.ordering_violations == 0 ? kOk : kValidationFailure;
}

int cmd_bench(const GlobalOptions& g, const PipelineOptions& o, const std::string& modes,
              std::ostream& out, std::ostream& err) {
  std::vector<pipeline::Mode> threaded;
  std::stringstream ss(modes);
  for (std::string item; std::getline(ss, item, ',');) {
    const auto m = pipeline::parse_mode(item);
    if (m == pipeline::Mode::kSequential) {
      throw ValidationError("--modes lists threaded modes; sequential always runs");
    }
    threaded.push_back(m);
  }
  if (threaded.empty()) throw ValidationError("--modes is empty");

  const bool unreliable = std::max(o.det_latency_ms, o.seg_latency_ms) < 1.0;
  struct Row {
    pipeline::Mode mode;
    pipeline::RunReport report;
  };
  std::vector<Row> rows;
  rows.push_back({pipeline::Mode::kSequential,
                  execute(make_config(o, pipeline::Mode::kSequential, g.seed), o).report});
  for (auto m : threaded) rows.push_back({m, execute(make_config(o, m, g.seed), o).report});

  const double base = rows.front().report.fps;
  auto speedup = [&](const Row& r) { return base > 0.0 ? r.report.fps / base : 0.0; };
  const std::string note = unreliable ? "unreliable: sub-ms stages" : "";

  bool ordered = true;
  for (const auto& r : rows) {
    ordered = ordered && r.report.ordering_violations == 0;
    err << "bench: " << pipeline::to_string(r.mode) << " fps=" << fixed(r.report.fps, 2)
        << " speedup=" << fixed(speedup(r), 3) << "\n";
  }

  Json doc;
  doc["det_latency_ms"] = o.det_latency_ms;
  doc["seg_latency_ms"] = o.seg_latency_ms;
  doc["rows"] = Json::array();
  std::ostringstream csv;
  csv << "mode,frames,fps,speedup,e2e_ms_mean,e2e_ms_p95,ordering_violations,max_queue_depth,note\n";
  for (const auto& r : rows) {
    doc["rows"].push_back({{"mode", std::string(pipeline::to_string(r.mode))},
                           {"frames", r.report.frames_processed},
                           {"fps", r.report.fps},
                           {"speedup", speedup(r)},
                           {"e2e_ms_mean", r.report.e2e_ms.mean},
                           {"e2e_ms_p95", r.report.e2e_ms.p95},
                           {"ordering_violations", r.report.ordering_violations},
                           {"max_queue_depth", r.report.overall_max_queue_depth()},
                           {"note", note}});
    csv << pipeline::to_string(r.mode) << ',' << r.report.frames_processed << ','
        << fixed(r.report.fps, 4) << ',' << fixed(speedup(r), 4) << ','
        << fixed(r.report.e2e_ms.mean, 3) << ',' << fixed(r.report.e2e_ms.p95, 3) << ','
        << r.report.ordering_violations << ',' << r.report.overall_max_queue_depth() << ','
        << note << '\n';
  }
  doc["speedup"] = speedup(rows[1]);
  doc["note"] = note;
  const std::string text = g.fmt() == Format::kCsv ? csv.str() : doc.dump(2) + "\n";
  if (!o.report.empty()) write_text_file(o.report, text);
  out << text;
  return ordered ? kOk : kValidationFailure;
}

// ---------------------------------------------------------------------------
// metrics / analyze
// ---------------------------------------------------------------------------

metrics::ImageBoxes ground_truth(const Manifest& m) {
  metrics::ImageBoxes gts;
  for (const auto& r : m.records) gts[r.image_id] = r.gt_boxes;
  return gts;
}

// Throws ValidationError listing prediction ids absent from the manifest.
void check_known_ids(const PredictionSet& p, const metrics::ImageBoxes& gts) {
  std::vector<std::string> unknown;
  for (const auto& [id, dets] : p.detections) {
    if (gts.count(id) == 0) unknown.push_back(id);
  }
  if (unknown.empty()) return;
  std::string list;
  for (const auto& id : unknown) list += (list.empty() ? "" : ", ") + id;
  throw ValidationError(p.model + ": predictions for unknown image_id(s): " + list);
}

metrics::ImageDetections above(const metrics::ImageDetections& dets, double threshold) {
  metrics::ImageDetections out;
  for (const auto& [id, list] : dets) {
    auto& kept = out[id];
    for (const auto& d : list) {
      if (d.score >= threshold) kept.push_back(d);
    }
  }
  return out;
}

int cmd_metrics(const GlobalOptions& g, const std::vector<std::string>& prediction_files,
                const std::string& manifest_path, double score_threshold, bool sweep,
                std::ostream& out) {
  const Manifest manifest = load_manifest(manifest_path).manifest;
  const auto gts = ground_truth(manifest);

  Json doc;
  doc["rows"] = Json::array();
  std::ostringstream csv;
  csv << "model,map50,map75,map95,precision,recall,f1" << (sweep ? ",map50_95" : "") << "\n";
  for (const auto& path : prediction_files) {
    const PredictionSet p = load_predictions(path);
    check_known_ids(p, gts);
    const auto suite = metrics::map_suite(p.detections, gts);

    std::size_t tp = 0, fp = 0, fn = 0;
    const auto kept = above(p.detections, score_threshold);
    for (const auto& [id, boxes] : gts) {
      auto it = kept.find(id);
      const std::vector<Detection> none;
      const auto m = metrics::match_detections(it == kept.end() ? none : it->second, boxes, 0.5);
      tp += m.tp;
      fp += m.fp;
      fn += m.fn;
    }
    const auto prf = metrics::prf1(tp, fp, fn);

    Json row = {{"model", p.model},   {"map50", suite.map50},         {"map75", suite.map75},
                {"map95", suite.map95}, {"precision", prf.precision}, {"recall", prf.recall},
                {"f1", prf.f1}};
    if (sweep) row["map50_95"] = suite.map50_95;
    doc["rows"].push_back(std::move(row));
    csv << p.model << ',' << fixed(suite.map50) << ',' << fixed(suite.map75) << ','
        << fixed(suite.map95) << ',' << fixed(prf.precision) << ',' << fixed(prf.recall) << ','
        << fixed(prf.f1);
    if (sweep) csv << ',' << fixed(suite.map50_95);
    csv << '\n';
  }
  out << (g.fmt() == Format::kCsv ? csv.str() : doc.dump(2) + "\n");
  return kOk;
}

int cmd_analyze(const GlobalOptions& g, const std::string& manifest_path,
                const std::string& images_dir, const std::string& predictions_path,
                const conditions::ConditionThresholds& t, std::ostream& out) {
  t.validate();
  const Manifest manifest = load_manifest(manifest_path).manifest;
  const auto gts = ground_truth(manifest);
  PredictionSet preds;
  if (!predictions_path.empty()) {
    preds = load_predictions(predictions_path);
    check_known_ids(preds, gts);
  }

  std::vector<conditions::ImageEvaluation> evals;
  evals.reserve(manifest.records.size());
  for (const auto& rec : manifest.records) {
    const Frame image = read_pnm(fs::path(images_dir) / rec.file);
    conditions::ImageEvaluation e;
    e.image_id = rec.image_id;
    e.tags = conditions::categorize(image, rec, t);
    auto it = preds.detections.find(rec.image_id);
    if (it != preds.detections.end()) e.dets = it->second;
    e.gts = rec.gt_boxes;
    e.match = metrics::match_detections(e.dets, e.gts, 0.5);
    evals.push_back(std::move(e));
  }
  const auto rows = conditions::error_breakdown(evals);

  if (g.fmt() == Format::kCsv) {
    out << conditions::breakdown_csv(rows);
    return kOk;
  }
  Json doc;
  doc["rows"] = Json::array();
  for (const auto& r : rows) {
    doc["rows"].push_back({{"condition", r.condition},
                           {"images", r.images},
                           {"tp", r.tp},
                           {"fp", r.fp},
                           {"fn", r.fn},
                           {"precision", r.precision},
                           {"recall", r.recall},
                           {"map50", r.map50 ? Json(*r.map50) : Json(nullptr)}});
  }
  out << doc.dump(2) << "\n";
  return kOk;
}

// ---------------------------------------------------------------------------
// dataset / fixture
// ---------------------------------------------------------------------------

Manifest combined(const std::vector<std::string>& paths) {
  Manifest all;
  for (const auto& p : paths) {
    Manifest m = load_manifest(p).manifest;
    all.split = m.split;
    for (auto& r : m.records) all.records.push_back(std::move(r));
  }
  return all;
}

int cmd_dataset_stats(const GlobalOptions& g, const std::vector<std::string>& manifests,
                      const std::string& histogram, std::ostream& out) {
  const Manifest m = combined(manifests);
  const auto instances = dataset::instance_histogram(m);
  const auto resolutions = dataset::resolution_histogram(m);
  if (g.fmt() == Format::kCsv) {
    out << "value,count\n";
    if (histogram == "resolutions") {
      for (const auto& [wh, n] : resolutions) out << wh.first << 'x' << wh.second << ',' << n << '\n';
    } else {
      for (const auto& [k, n] : instances) out << k << ',' << n << '\n';
    }
    return kOk;
  }
  Json doc;
  doc["images"] = m.records.size();
  doc["instances"] = Json::array();
  for (const auto& [k, n] : instances) doc["instances"].push_back({{"value", k}, {"count", n}});
  doc["resolutions"] = Json::array();
  for (const auto& [wh, n] : resolutions) {
    doc["resolutions"].push_back({{"width", wh.first}, {"height", wh.second}, {"count", n}});
  }
  out << doc.dump(2) << "\n";
  return kOk;
}

int cmd_dataset_heatmap(const GlobalOptions& g, const std::vector<std::string>& manifests,
                        std::size_t grid, std::ostream& out) {
  const auto h = dataset::spatial_heatmap(combined(manifests), grid);
  if (g.fmt() == Format::kCsv) {
    out << "row,col,count\n";
    for (std::size_t r = 0; r < h.grid; ++r) {
      for (std::size_t c = 0; c < h.grid; ++c) out << r << ',' << c << ',' << h.at(r, c) << '\n';
    }
    return kOk;
  }
  Json doc;
  doc["grid"] = h.grid;
  doc["total"] = h.total();
  doc["counts"] = Json::array();
  for (std::size_t r = 0; r < h.grid; ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < h.grid; ++c) row.push_back(h.at(r, c));
    doc["counts"].push_back(std::move(row));
  }
  out << doc.dump() << "\n";
  return kOk;
}

int cmd_split_check(const GlobalOptions& g, const std::string& train, const std::string& val,
                    const std::string& test, double tolerance, std::ostream& out,
                    std::ostream& err) {
  const auto report = dataset::split_check(load_manifest(train).manifest,
                                           load_manifest(val).manifest,
                                           load_manifest(test).manifest, tolerance);
  if (g.fmt() == Format::kCsv) {
    const char* names[] = {"train", "val", "test"};
    out << "split,count,fraction,deviation,flagged\n";
    for (int s = 0; s < 3; ++s) {
      out << names[s] << ',' << report.counts[s] << ',' << fixed(report.fractions[s]) << ','
          << fixed(report.deviations[s]) << ',' << (report.ratio_flags[s] ? 1 : 0) << '\n';
    }
  } else {
    out << dataset::split_report_json(report);
  }
  for (const auto& gid : report.leaks) err << "split-check: group " << gid << " leaks across splits\n";
  return report.passed() ? kOk : kValidationFailure;
}

int cmd_fixture(const GlobalOptions& g, dataset::FixtureOptions opts, const std::string& out_dir,
                std::ostream& out) {
  opts.seed = g.seed;
  const auto fx = dataset::synthetic_fixture(opts, out_dir);
  if (g.fmt() == Format::kCsv) {
    out << "split,count\ntrain," << fx.train.records.size() << "\nval," << fx.val.records.size()
        << "\ntest," << fx.test.records.size() << "\n";
  } else {
    Json doc = {{"out", out_dir},
                {"train", fx.train.records.size()},
                {"val", fx.val.records.size()},
                {"test", fx.test.records.size()}};
    out << doc.dump(2) << "\n";
  }
  return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-stage detection/segmentation pipeline runtime and evaluation tools", "tdm"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--format", g.format, "Machine output format")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--seed", g.seed, "Seed for synthetic data and stub backends");

  PipelineOptions run_opts;
  auto* run = app.add_subcommand("run", "Run the pipeline once");
  add_pipeline_flags(run, run_opts);
  run->add_option("--emit-overlays", run_opts.emit_overlays, "Directory for overlay PPMs");

  PipelineOptions bench_opts;
  std::string bench_modes = "pipelined";
  auto* bench = app.add_subcommand("bench", "Compare sequential and threaded throughput");
  add_pipeline_flags(bench, bench_opts);
  bench->add_option("--modes", bench_modes, "Comma-separated threaded modes to compare");

  std::vector<std::string> prediction_files;
  std::string metrics_manifest;
  double score_threshold = 0.0;
  bool sweep = false;
  auto* met = app.add_subcommand("metrics", "Detection metrics per predictions file");
  met->add_option("--predictions", prediction_files, "Predictions JSON (repeatable)")->required();
  met->add_option("--manifest", metrics_manifest, "Ground-truth manifest")->required();
  met->add_option("--score-threshold", score_threshold, "Minimum score for P/R/F1");
  met->add_flag("--sweep", sweep, "Add the mAP over IoU 0.50:0.95 column");

  std::string an_manifest, an_images, an_predictions;
  conditions::ConditionThresholds thresholds;
  std::string small_rule = "any";
  auto* analyze = app.add_subcommand("analyze", "Per-condition error breakdown");
  analyze->add_option("--manifest", an_manifest, "Ground-truth manifest")->required();
  analyze->add_option("--images", an_images, "Directory the manifest file paths are relative to")
      ->required();
  analyze->add_option("--predictions", an_predictions, "Predictions JSON");
  analyze->add_option("--blur-threshold", thresholds.blur_laplacian_var);
  analyze->add_option("--dark", thresholds.dark_mean);
  analyze->add_option("--bright", thresholds.bright_mean);
  analyze->add_option("--small-frac", thresholds.small_object_area_frac);
  analyze->add_option("--occlusion-iou", thresholds.occlusion_iou);
  analyze->add_option("--small-rule", small_rule)->check(CLI::IsMember({"any", "all"}));

  auto* ds = app.add_subcommand("dataset", "Dataset audits");
  ds->require_subcommand(1);
  std::vector<std::string> stats_manifests;
  std::string histogram = "instances";
  auto* stats = ds->add_subcommand("stats", "Instance and resolution histograms");
  stats->add_option("--manifest", stats_manifests, "Manifest (repeatable)")->required();
  stats->add_option("--histogram", histogram, "CSV histogram to emit")
      ->check(CLI::IsMember({"instances", "resolutions"}));
  std::vector<std::string> heat_manifests;
  std::size_t grid = 32;
  auto* heat = ds->add_subcommand("heatmap", "Spatial heatmap of box centers");
  heat->add_option("--manifest", heat_manifests, "Manifest (repeatable)")->required();
  heat->add_option("--grid", grid, "Cells per side");
  std::string split_train, split_val, split_test;
  double tolerance = 0.05;
  auto* split = ds->add_subcommand("split-check", "Group leakage and split ratios");
  split->add_option("--train", split_train)->required();
  split->add_option("--val", split_val)->required();
  split->add_option("--test", split_test)->required();
  split->add_option("--tolerance", tolerance, "Allowed |fraction - target|");

  dataset::FixtureOptions fx_opts;
  std::string fx_out;
  auto* fixture = app.add_subcommand("fixture", "Generate a synthetic dataset fixture");
  fixture->add_option("--n", fx_opts.n_images, "Image count");
  fixture->add_option("--width", fx_opts.width);
  fixture->add_option("--height", fx_opts.height);
  fixture->add_option("--condition-fraction", fx_opts.condition_fraction);
  fixture->add_option("--out", fx_out, "Output directory")->required();

  for (auto* sub : {run, bench, met, analyze, ds, fixture}) sub->fallthrough();
  for (auto* sub : {stats, heat, split}) sub->fallthrough();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "tdm: " << e.what() << "\n" << app.help();
    return kValidationFailure;
  }

  try {
    if (*run) return cmd_run(g, run_opts, out, err);
    if (*bench) return cmd_bench(g, bench_opts, bench_modes, out, err);
    if (*met) return cmd_metrics(g, prediction_files, metrics_manifest, score_threshold, sweep, out);
    if (*analyze) {
      thresholds.small_object_rule = small_rule == "all" ? conditions::SmallObjectRule::kAll
                                                          : conditions::SmallObjectRule::kAny;
      return cmd_analyze(g, an_manifest, an_images, an_predictions, thresholds, out);
    }
    if (*stats) return cmd_dataset_stats(g, stats_manifests, histogram, out);
    if (*heat) return cmd_dataset_heatmap(g, heat_manifests, grid, out);
    if (*split) return cmd_split_check(g, split_train, split_val, split_test, tolerance, out, err);
    if (*fixture) return cmd_fixture(g, fx_opts, fx_out, out);
  } catch (const ValidationError& e) {
    err << "tdm: " << e.what() << "\n";
    return kValidationFailure;
  } catch (const std::exception& e) {
    err << "tdm: " << e.what() << "\n";
    return kRuntimeError;
  }
  err << app.help();
  return kValidationFailure;
}

}  // namespace tdm::cli
