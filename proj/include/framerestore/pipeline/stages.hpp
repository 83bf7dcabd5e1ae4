#ifndef FRAMERESTORE_PIPELINE_STAGES_HPP
#define FRAMERESTORE_PIPELINE_STAGES_HPP

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "framerestore/core/errors.hpp"
#include "framerestore/core/image.hpp"
#include "framerestore/core/manifest.hpp"
#include "framerestore/core/png_io.hpp"
#include "framerestore/core/split.hpp"
#include "framerestore/degrade/corpus.hpp"
#include "framerestore/gan/engine.hpp"
#include "framerestore/gan/translate.hpp"
#include "framerestore/metrics/average_precision.hpp"
#include "framerestore/metrics/blob_detector.hpp"
#include "framerestore/metrics/matching.hpp"
#include "framerestore/metrics/report.hpp"
#include "framerestore/pipeline/config.hpp"
#include "framerestore/pipeline/figures.hpp"
#include "framerestore/synth/scenes.hpp"

namespace framerestore::pipeline {

namespace fs = std::filesystem;

// A pipeline run owns one output tree.
struct OutputLayout {
  fs::path root;

  fs::path scenes() const { return root / "scenes"; }
  fs::path corpus() const { return root / "corpus"; }
  fs::path manifests() const { return root / "manifests"; }
  fs::path checkpoints() const { return root / "checkpoints"; }
  fs::path translated() const { return root / "translated"; }
  fs::path detections() const { return root / "detections"; }
  fs::path reports() const { return root / "reports"; }
  fs::path figures() const { return root / "figures"; }
};

inline OutputLayout layout_for(const PipelineConfig& config) {
  return OutputLayout{config.paths.out_root};
}

// Consumed artifacts carry the hash of the config that produced them; a
// mismatch is reported (stderr, machine-readable) but is not fatal.
inline void warn_on_hash_mismatch(const std::optional<std::string>& artifact_hash,
                                  const std::string& current_hash, const std::string& artifact) {
  if (artifact_hash && *artifact_hash != current_hash) {
    nlohmann::json warning{{"warning",
                            {{"type", "config_hash_mismatch"},
                             {"artifact", artifact},
                             {"artifact_hash", *artifact_hash},
                             {"current_hash", current_hash}}}};
    std::cerr << warning.dump() << "\n";
  }
}

// ---------------------------------------------------------------------------
// Individual stages. Each is idempotent given identical config + seed.
// ---------------------------------------------------------------------------

inline DatasetManifest stage_synthetic(const PipelineConfig& config) {
  auto layout = layout_for(config);
  DatasetManifest manifest = synth::generate_scene_corpus(config.synthetic, layout.scenes());
  manifest.config_hash = config.hash();
  save_manifest(manifest, layout.scenes() / "manifest.json");
  return manifest;
}

struct DegradeResult {
  degrade::PairedCorpus corpus;
  DatasetManifest combined;  // clean + degraded twins
};

inline DegradeResult stage_degrade(const PipelineConfig& config, const DatasetManifest& clean) {
  auto layout = layout_for(config);
  warn_on_hash_mismatch(clean.config_hash, config.hash(), "clean manifest '" + clean.name + "'");
  degrade::SpecSampler sampler{config.degrade.sampler};
  DegradeResult result;
  result.corpus = degrade::build_paired_corpus(clean, sampler, layout.corpus(),
                                               config.degrade.seed);
  result.corpus.degraded.config_hash = config.hash();
  save_manifest(result.corpus.degraded, layout.corpus() / "degraded_manifest.json");

  result.combined.name = clean.name + "+degraded";
  result.combined.config_hash = config.hash();
  result.combined.records = clean.records;
  for (const auto& r : result.corpus.degraded.records) result.combined.records.push_back(r);
  save_manifest(result.combined, layout.corpus() / "combined_manifest.json");
  return result;
}

inline SplitResult stage_split(const PipelineConfig& config, const DatasetManifest& manifest) {
  auto layout = layout_for(config);
  warn_on_hash_mismatch(manifest.config_hash, config.hash(), "manifest '" + manifest.name + "'");
  SplitResult split = patient_wise_split(manifest, config.split.ratios, config.split.seed);
  std::error_code ec;
  fs::create_directories(layout.manifests(), ec);
  if (ec) throw DataError("stage_split: cannot create " + layout.manifests().string());
  for (auto* part : {&split.train, &split.val, &split.test}) part->config_hash = config.hash();
  save_manifest(split.train, layout.manifests() / "train.json");
  save_manifest(split.val, layout.manifests() / "val.json");
  save_manifest(split.test, layout.manifests() / "test.json");
  return split;
}

inline fs::path latest_checkpoint(const PipelineConfig& config) {
  auto layout = layout_for(config);
  std::vector<fs::path> dirs;
  if (fs::exists(layout.checkpoints()))
    for (const auto& entry : fs::directory_iterator(layout.checkpoints()))
      if (entry.is_directory() && entry.path().filename().string().starts_with("epoch_"))
        dirs.push_back(entry.path());
  if (dirs.empty())
    throw ConfigError("no checkpoint found under " + layout.checkpoints().string() +
                      " (run the train stage first)");
  std::sort(dirs.begin(), dirs.end());
  return dirs.back();
}

// Trains A (uninformative) vs B (informative) on the train split. Re-running
// with a finished checkpoint series is a no-op; a partial series resumes.
inline gan::FitResult stage_train(const PipelineConfig& config, const SplitResult& split,
                                  const std::function<void(int, const gan::LossRecord&)>& on_epoch = {}) {
  auto layout = layout_for(config);
  DatasetManifest domain_a = split.train.filtered(kQualityUninformative);
  DatasetManifest domain_b = split.train.filtered(kQualityInformative);
  if (domain_a.empty() || domain_b.empty())
    throw DataError("stage_train: train split must contain both uninformative and informative frames");

  gan::CycleGanEngine engine(config.gan.generator, config.gan.discriminator, config.gan.weights,
                             config.gan.train);
  // Resume from the last finished epoch when one exists.
  if (fs::exists(layout.checkpoints())) {
    std::vector<fs::path> dirs;
    for (const auto& entry : fs::directory_iterator(layout.checkpoints()))
      if (entry.is_directory() && entry.path().filename().string().starts_with("epoch_"))
        dirs.push_back(entry.path());
    if (!dirs.empty()) {
      std::sort(dirs.begin(), dirs.end());
      engine.load_checkpoint(dirs.back());
    }
  }
  auto tensors_a = gan::load_domain_tensors(domain_a);
  auto tensors_b = gan::load_domain_tensors(domain_b);
  return gan::fit(engine, tensors_a, tensors_b, layout.checkpoints(), on_epoch);
}

struct TranslateResult {
  DatasetManifest manifest;  // uninformative records rewritten to translated paths
  gan::TranslationReport report;
};

// Applies G_AB from the latest checkpoint to every uninformative record and
// writes the results (plus a manifest) under translated/.
inline TranslateResult stage_translate(const PipelineConfig& config,
                                       const DatasetManifest& manifest,
                                       std::optional<fs::path> checkpoint = std::nullopt) {
  auto layout = layout_for(config);
  warn_on_hash_mismatch(manifest.config_hash, config.hash(), "manifest '" + manifest.name + "'");
  fs::path ckpt = checkpoint.value_or(fs::path{});
  if (ckpt.empty()) ckpt = latest_checkpoint(config);

  gan::CycleGanEngine probe(config.gan.generator, config.gan.discriminator, config.gan.weights,
                            config.gan.train);
  gan::ResnetGenerator translator =
      gan::load_translator(ckpt, config.gan.generator, probe.config_hash());

  std::vector<FrameRecord> to_translate;
  for (const auto& r : manifest.records)
    if (r.uninformative()) to_translate.push_back(r);

  TranslateResult result;
  auto [translated, report] = gan::translate_records(translator, to_translate, layout.translated());
  result.report = report;
  result.manifest.name = manifest.name + "/translated";
  result.manifest.config_hash = config.hash();
  result.manifest.records = std::move(translated);
  save_manifest(result.manifest, layout.translated() / "manifest.json");
  return result;
}

// Frame-by-frame detector inputs for a manifest (reads every image).
inline std::vector<metrics::FrameDetections> detect_frames(const PipelineConfig& config,
                                                           const DatasetManifest& manifest,
                                                           std::map<std::string, std::vector<Detection>>* by_frame = nullptr) {
  std::vector<metrics::FrameDetections> frames;
  frames.reserve(manifest.size());
  for (const auto& record : manifest.records) {
    ImageTensor img = to_unit(read_png(record.path));
    metrics::FrameDetections frame;
    frame.detections = metrics::toy_blob_detector(img, config.metrics.detector_threshold,
                                                  config.metrics.detector_channel);
    frame.ground_truths = record.gt_boxes;
    if (by_frame) (*by_frame)[record.frame_id] = frame.detections;
    frames.push_back(std::move(frame));
  }
  return frames;
}

// Detections from a file, joined against the manifest's ground truth.
inline std::vector<metrics::FrameDetections> frames_from_detection_file(
    const DatasetManifest& manifest, const fs::path& detections_path) {
  auto by_frame = metrics::load_detections(detections_path);
  std::vector<metrics::FrameDetections> frames;
  frames.reserve(manifest.size());
  for (const auto& record : manifest.records) {
    metrics::FrameDetections frame;
    auto it = by_frame.find(record.frame_id);
    if (it != by_frame.end()) frame.detections = it->second;
    frame.ground_truths = record.gt_boxes;
    frames.push_back(std::move(frame));
  }
  return frames;
}

inline metrics::RunMetrics evaluate_frames(const PipelineConfig& config,
                                           const std::vector<metrics::FrameDetections>& frames) {
  auto prf = metrics::precision_recall_f1(frames, config.metrics.conf_thresh,
                                          config.metrics.iou_thresh);
  auto maps = metrics::map_range(frames);
  return metrics::RunMetrics{100.0 * prf.precision, 100.0 * prf.recall, 100.0 * prf.f1,
                             100.0 * maps.map50, 100.0 * maps.map5095};
}

// Runs the detector (or ingests a detection file) over a manifest and writes
// detections/<tag>.txt (+ sidecar meta) and reports/<tag>.json.
inline metrics::MetricsReport stage_detect_eval(const PipelineConfig& config,
                                                const DatasetManifest& manifest,
                                                const std::string& tag,
                                                std::optional<fs::path> detections_file = std::nullopt) {
  auto layout = layout_for(config);
  warn_on_hash_mismatch(manifest.config_hash, config.hash(), "manifest '" + manifest.name + "'");
  std::error_code ec;
  fs::create_directories(layout.detections(), ec);
  fs::create_directories(layout.reports(), ec);

  std::vector<metrics::FrameDetections> frames;
  if (detections_file) {
    frames = frames_from_detection_file(manifest, *detections_file);
  } else {
    std::map<std::string, std::vector<Detection>> by_frame;
    frames = detect_frames(config, manifest, &by_frame);
    metrics::save_detections(by_frame, layout.detections() / (tag + ".txt"));
    nlohmann::json meta{{"config_hash", config.hash()},
                        {"manifest", manifest.name},
                        {"n_frames", manifest.size()},
                        {"detector", "toy_blob"},
                        {"detector_threshold", config.metrics.detector_threshold},
                        {"detector_channel", config.metrics.detector_channel}};
    std::ofstream out(layout.detections() / (tag + ".txt.meta.json"));
    out << meta.dump(2) << "\n";
  }

  std::vector<metrics::RunMetrics> runs = {evaluate_frames(config, frames)};
  auto report = metrics::aggregate_runs(runs, "single evaluation run");
  nlohmann::json rj = metrics::report_to_json(report);
  rj["config_hash"] = config.hash();
  rj["manifest"] = manifest.name;
  std::ofstream out(layout.reports() / (tag + ".json"));
  if (!out) throw DataError("stage_detect_eval: cannot write report " + tag + ".json");
  out << rj.dump(2) << "\n";
  return report;
}

struct ComparisonResult {
  metrics::MetricsReport raw;
  metrics::MetricsReport translated;
  std::string table;
  std::vector<metrics::MetricDelta> deltas;
};

inline ComparisonResult stage_report(const PipelineConfig& config, const fs::path& raw_path,
                                     const fs::path& translated_path) {
  auto layout = layout_for(config);
  ComparisonResult result;
  result.raw = metrics::load_report(raw_path);
  result.translated = metrics::load_report(translated_path);
  result.table = metrics::render_comparison(result.raw, result.translated);
  result.deltas = metrics::compare_reports(result.raw, result.translated);

  std::error_code ec;
  fs::create_directories(layout.reports(), ec);
  std::ofstream table_out(layout.reports() / "comparison.txt");
  table_out << result.table;
  nlohmann::json dj = nlohmann::json::object();
  for (const auto& d : result.deltas) dj[d.name] = d.delta;
  nlohmann::json cj{{"deltas", dj}, {"config_hash", config.hash()}};
  std::ofstream json_out(layout.reports() / "comparison.json");
  json_out << cj.dump(2) << "\n";
  return result;
}

namespace detail {

// Pairing of clean to degraded frames, when the degrade stage ran.
inline std::map<std::string, std::string> degraded_to_clean(const PipelineConfig& config) {
  std::map<std::string, std::string> out;
  auto path = layout_for(config).corpus() / "pairs.csv";
  if (fs::exists(path))
    for (const auto& pair : degrade::load_pairing_table(path)) out[pair.degraded_id] = pair.clean_id;
  return out;
}

inline void write_scenario_figures(const PipelineConfig& config, const DatasetManifest& test,
                                   const std::map<std::string, FrameRecord>& translated_by_id,
                                   const std::map<std::string, std::vector<Detection>>& detections,
                                   const DatasetManifest& combined) {
  auto layout = layout_for(config);
  std::error_code ec;
  fs::create_directories(layout.figures(), ec);
  auto pairing = degraded_to_clean(config);
  int emitted = 0;
  for (const auto& record : test.records) {
    if (!record.uninformative() || emitted >= 6) continue;
    std::vector<ImageU8> panels;
    if (auto it = pairing.find(record.frame_id); it != pairing.end())
      if (const FrameRecord* clean = combined.find(it->second)) panels.push_back(read_png(clean->path));
    panels.push_back(read_png(record.path));
    const FrameRecord* shown = &record;
    if (auto it = translated_by_id.find(record.frame_id); it != translated_by_id.end()) {
      panels.push_back(read_png(it->second.path));
      shown = &it->second;
    }
    ImageU8 overlay = read_png(shown->path);
    for (const auto& box : record.gt_boxes) draw_box(overlay, box, kGroundTruthColor);
    if (auto it = detections.find(record.frame_id); it != detections.end())
      for (const auto& d : it->second)
        if (d.confidence >= config.metrics.conf_thresh) draw_box(overlay, d.box, kDetectionColor);
    panels.push_back(std::move(overlay));
    write_png(layout.figures() / ("strip_" + record.frame_id + ".png"),
              compose_strip(panels));
    ++emitted;
  }
}

}  // namespace detail

// The two experimental scenarios. Raw evaluates the untouched test frames;
// translated first replaces every uninformative frame (train and test alike)
// with its G_AB translation, then evaluates the test split. The scenario
// choice is recorded in the emitted report.
inline metrics::MetricsReport run_scenario(const PipelineConfig& config,
                                           const DatasetManifest& combined) {
  auto layout = layout_for(config);
  SplitResult split = stage_split(config, combined);
  if (split.test.empty())
    throw DataError("run_scenario: test split is empty (patient-atomic fill left no patient for "
                    "test; use more patients or different ratios)");
  DatasetManifest eval_manifest = split.test;
  std::map<std::string, FrameRecord> translated_by_id;

  if (config.scenario == "translated") {
    // Checkpoint must exist before any compute.
    fs::path ckpt = latest_checkpoint(config);
    DatasetManifest to_translate;
    to_translate.name = combined.name + "/uninformative";
    to_translate.config_hash = combined.config_hash;
    for (const auto* part : {&split.train, &split.val, &split.test})
      for (const auto& r : part->records)
        if (r.uninformative()) to_translate.records.push_back(r);
    TranslateResult translated = stage_translate(config, to_translate, ckpt);
    for (const auto& r : translated.manifest.records) translated_by_id[r.frame_id] = r;
    for (auto& r : eval_manifest.records)
      if (auto it = translated_by_id.find(r.frame_id); it != translated_by_id.end())
        r.path = it->second.path;
  }

  std::map<std::string, std::vector<Detection>> by_frame;
  auto frames = detect_frames(config, eval_manifest, &by_frame);
  std::vector<metrics::RunMetrics> runs = {evaluate_frames(config, frames)};
  auto report = metrics::aggregate_runs(runs, "single evaluation run");

  std::error_code ec;
  fs::create_directories(layout.reports(), ec);
  fs::create_directories(layout.detections(), ec);
  metrics::save_detections(by_frame, layout.detections() / (config.scenario + ".txt"));
  nlohmann::json rj = metrics::report_to_json(report);
  rj["config_hash"] = config.hash();
  rj["scenario"] = config.scenario;
  rj["translated_frames_replaced"] =
      config.scenario == "translated" ? "train and test uninformative frames" : "none";
  std::ofstream out(layout.reports() / (config.scenario + ".json"));
  if (!out) throw DataError("run_scenario: cannot write report");
  out << rj.dump(2) << "\n";

  detail::write_scenario_figures(config, split.test, translated_by_id, by_frame, combined);
  return report;
}

struct E2eSummary {
  double psnr_degraded_median = 0.0;
  double psnr_translated_median = 0.0;
  double psnr_gain_db = 0.0;
  double f1_degraded = 0.0;    // percent
  double f1_translated = 0.0;  // percent
  double f1_gain_pp = 0.0;
  metrics::MetricsReport raw_report;
  metrics::MetricsReport translated_report;
  std::size_t n_test_pairs = 0;
};

inline nlohmann::json e2e_summary_to_json(const E2eSummary& s) {
  return {{"psnr_db",
           {{"degraded_median", s.psnr_degraded_median},
            {"translated_median", s.psnr_translated_median},
            {"gain", s.psnr_gain_db}}},
          {"toy_detector_f1_percent",
           {{"degraded", s.f1_degraded},
            {"translated", s.f1_translated},
            {"gain", s.f1_gain_pp}}},
          {"n_test_pairs", s.n_test_pairs},
          {"scenario_reports",
           {{"raw", metrics::report_to_json(s.raw_report)},
            {"translated", metrics::report_to_json(s.translated_report)}}}};
}

namespace detail {

inline double median(std::vector<double> values) {
  if (values.empty()) throw DataError("median: empty");
  std::sort(values.begin(), values.end());
  std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace detail

// Full synthetic loop from an empty directory: scenes -> paired degradation
// -> patient-wise split -> training -> translation -> both scenario reports,
// plus the paired oracles the synthetic corpus makes possible (PSNR against
// the clean twin; toy-detector F1 on degraded vs translated test frames).
inline E2eSummary stage_e2e(const PipelineConfig& config,
                            const std::function<void(const std::string&)>& log = {}) {
  auto layout = layout_for(config);
  auto say = [&](const std::string& msg) {
    if (log) log(msg);
  };

  say("generating " + std::to_string(config.synthetic.n_scenes) + " synthetic scenes");
  DatasetManifest clean = stage_synthetic(config);
  say("degrading (paired corpus)");
  DegradeResult degraded = stage_degrade(config, clean);
  SplitResult split = stage_split(config, degraded.combined);
  say("training on " + std::to_string(split.train.filtered(kQualityUninformative).size()) +
      " uninformative / " + std::to_string(split.train.filtered(kQualityInformative).size()) +
      " informative train frames");
  stage_train(config, split, [&](int epoch, const gan::LossRecord& means) {
    say("epoch " + std::to_string(epoch) + " total_generator=" +
        std::to_string(means.total_generator));
  });

  say("evaluating scenario raw");
  PipelineConfig raw_config = config;
  raw_config.scenario = "raw";
  E2eSummary summary;
  summary.raw_report = run_scenario(raw_config, degraded.combined);
  say("evaluating scenario translated");
  PipelineConfig translated_config = config;
  translated_config.scenario = "translated";
  summary.translated_report = run_scenario(translated_config, degraded.combined);
  stage_report(config, layout.reports() / "raw.json", layout.reports() / "translated.json");

  // Paired oracles on the test split.
  DatasetManifest translated_manifest = load_manifest(layout.translated() / "manifest.json");
  std::map<std::string, FrameRecord> translated_by_id;
  for (const auto& r : translated_manifest.records) translated_by_id[r.frame_id] = r;

  DatasetManifest degraded_test = split.test.filtered(kQualityUninformative);
  DatasetManifest translated_test = degraded_test;
  for (auto& r : translated_test.records) {
    auto it = translated_by_id.find(r.frame_id);
    if (it == translated_by_id.end())
      throw DataError("stage_e2e: test frame " + r.frame_id + " was never translated");
    r.path = it->second.path;
  }

  auto pairing = detail::degraded_to_clean(config);
  std::vector<double> psnr_degraded, psnr_translated;
  for (std::size_t i = 0; i < degraded_test.records.size(); ++i) {
    const auto& deg = degraded_test.records[i];
    auto clean_it = pairing.find(deg.frame_id);
    if (clean_it == pairing.end()) continue;
    const FrameRecord* clean_record = degraded.combined.find(clean_it->second);
    if (!clean_record) continue;
    ImageTensor clean_img = to_unit(read_png(clean_record->path));
    psnr_degraded.push_back(psnr(to_unit(read_png(deg.path)), clean_img));
    psnr_translated.push_back(psnr(to_unit(read_png(translated_test.records[i].path)), clean_img));
  }
  summary.n_test_pairs = psnr_degraded.size();
  summary.psnr_degraded_median = detail::median(psnr_degraded);
  summary.psnr_translated_median = detail::median(psnr_translated);
  summary.psnr_gain_db = summary.psnr_translated_median - summary.psnr_degraded_median;

  auto degraded_frames = detect_frames(config, degraded_test);
  auto translated_frames = detect_frames(config, translated_test);
  summary.f1_degraded =
      100.0 * metrics::precision_recall_f1(degraded_frames, config.metrics.conf_thresh,
                                           config.metrics.iou_thresh)
                  .f1;
  summary.f1_translated =
      100.0 * metrics::precision_recall_f1(translated_frames, config.metrics.conf_thresh,
                                           config.metrics.iou_thresh)
                  .f1;
  summary.f1_gain_pp = summary.f1_translated - summary.f1_degraded;

  nlohmann::json sj = e2e_summary_to_json(summary);
  sj["config_hash"] = config.hash();
  std::ofstream out(layout.reports() / "e2e_summary.json");
  if (!out) throw DataError("stage_e2e: cannot write e2e_summary.json");
  out << sj.dump(2) << "\n";
  say("e2e summary: PSNR gain " + std::to_string(summary.psnr_gain_db) + " dB, F1 gain " +
      std::to_string(summary.f1_gain_pp) + " pp");
  return summary;
}

}  // namespace framerestore::pipeline

#endif
