// framerestore: batch pipeline for restoring artifact-degraded endoscopy-style
// frames with unpaired adversarial translation, plus the detection-metrics
// harness for measuring the downstream effect.
//
//   framerestore <subcommand> --config <path> [--seed N] [--out DIR] [--bench]
//   subcommands: degrade | split | train | translate | detect-eval | report |
//                e2e-synthetic
//
// Exit codes: 0 success, 2 config error, 3 data error, 4 numeric failure.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "framerestore/framerestore.hpp"

namespace fr = framerestore;
namespace fp = framerestore::pipeline;
namespace fs = std::filesystem;

namespace {

struct CommonArgs {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "pipeline config (YAML or JSON)");
  cmd->add_option("--seed", args.seed, "override the global seed");
  cmd->add_option("--out", args.out_dir, "override paths.out_root");
}

fp::PipelineConfig resolve_config(const CommonArgs& args) {
  nlohmann::json j = nlohmann::json::object();
  if (!args.config_path.empty()) j = fp::load_config_source(args.config_path);
  if (args.seed) j["seed"] = *args.seed;
  if (args.out_dir) j["paths"]["out_root"] = *args.out_dir;
  auto config = fp::PipelineConfig::from_json(j);
  fp::apply_deterministic_env(config);
  return config;
}

fr::DatasetManifest load_input_manifest(const fp::PipelineConfig& config,
                                        const std::string& explicit_path) {
  if (!explicit_path.empty()) return fr::load_manifest(explicit_path);
  fs::path from_data = config.paths.data_root / "manifest.json";
  if (fs::exists(from_data)) return fr::load_manifest(from_data);
  throw fr::DataError("no manifest given and " + from_data.string() +
                      " does not exist (pass --manifest)");
}

fr::DatasetManifest load_combined_manifest(const fp::PipelineConfig& config,
                                           const std::string& explicit_path) {
  if (!explicit_path.empty()) return fr::load_manifest(explicit_path);
  auto layout = fp::layout_for(config);
  fs::path combined = layout.corpus() / "combined_manifest.json";
  if (fs::exists(combined)) return fr::load_manifest(combined);
  return load_input_manifest(config, "");
}

int run(int argc, char** argv) {
  CLI::App app{"unpaired frame restoration pipeline with detection evaluation"};
  app.require_subcommand(1);

  CommonArgs args;
  std::string manifest_path, detections_path, checkpoint_path, tag = "eval";
  std::string raw_report_path, translated_report_path;
  bool bench = false;

  auto* degrade_cmd =
      app.add_subcommand("degrade", "build the paired degraded corpus from a clean manifest");
  add_common(degrade_cmd, args);
  degrade_cmd->add_option("--manifest", manifest_path, "clean input manifest");

  auto* split_cmd = app.add_subcommand("split", "patient-wise train/val/test split");
  add_common(split_cmd, args);
  split_cmd->add_option("--manifest", manifest_path, "manifest to split");

  auto* train_cmd = app.add_subcommand("train", "train the translation engine on the train split");
  add_common(train_cmd, args);

  auto* translate_cmd =
      app.add_subcommand("translate", "translate uninformative frames with the latest checkpoint");
  add_common(translate_cmd, args);
  translate_cmd->add_option("--manifest", manifest_path, "manifest whose uninformative frames to translate");
  translate_cmd->add_option("--checkpoint", checkpoint_path, "checkpoint directory (default: latest)");
  translate_cmd->add_flag("--bench", bench, "report per-frame throughput");

  auto* detect_cmd = app.add_subcommand(
      "detect-eval", "evaluate detections for the configured scenario (or an explicit manifest)");
  add_common(detect_cmd, args);
  detect_cmd->add_option("--manifest", manifest_path, "evaluate this manifest directly");
  detect_cmd->add_option("--detections", detections_path,
                         "ingest a detection file instead of running the toy detector");
  detect_cmd->add_option("--tag", tag, "output name for detections/report files");

  auto* report_cmd = app.add_subcommand("report", "compare two report JSONs");
  add_common(report_cmd, args);
  report_cmd->add_option("--raw", raw_report_path, "raw-scenario report JSON")->required();
  report_cmd->add_option("--translated", translated_report_path, "translated-scenario report JSON")
      ->required();

  auto* e2e_cmd = app.add_subcommand(
      "e2e-synthetic", "full synthetic loop: scenes, degradation, training, translation, reports");
  add_common(e2e_cmd, args);

  CLI11_PARSE(app, argc, argv);

  if (degrade_cmd->parsed()) {
    auto config = resolve_config(args);
    auto clean = load_input_manifest(config, manifest_path);
    auto result = fp::stage_degrade(config, clean);
    std::cout << "degraded " << result.corpus.pairs.size() << " frames -> "
              << (fp::layout_for(config).corpus()).string() << "\n";
    return 0;
  }
  if (split_cmd->parsed()) {
    auto config = resolve_config(args);
    auto manifest = load_combined_manifest(config, manifest_path);
    auto split = fp::stage_split(config, manifest);
    std::cout << "split sizes: train=" << split.train.size() << " val=" << split.val.size()
              << " test=" << split.test.size() << " -> "
              << fp::layout_for(config).manifests().string() << "\n";
    return 0;
  }
  if (train_cmd->parsed()) {
    auto config = resolve_config(args);
    auto layout = fp::layout_for(config);
    fs::path train_manifest = layout.manifests() / "train.json";
    if (!fs::exists(train_manifest))
      throw fr::DataError("missing " + train_manifest.string() + " (run `framerestore split` first)");
    fr::SplitResult split;
    split.train = fr::load_manifest(train_manifest);
    split.val = fr::load_manifest(layout.manifests() / "val.json");
    split.test = fr::load_manifest(layout.manifests() / "test.json");
    auto result = fp::stage_train(config, split, [](int epoch, const fr::gan::LossRecord& means) {
      std::cout << "epoch " << epoch << ": total_generator=" << means.total_generator
                << " disc_a=" << means.disc_a << " disc_b=" << means.disc_b << std::endl;
    });
    std::cout << "checkpoints: " << result.checkpoints.size() << " under "
              << layout.checkpoints().string() << "\n";
    return 0;
  }
  if (translate_cmd->parsed()) {
    auto config = resolve_config(args);
    auto layout = fp::layout_for(config);
    fr::DatasetManifest manifest;
    if (!manifest_path.empty()) {
      manifest = fr::load_manifest(manifest_path);
    } else if (fs::exists(layout.manifests() / "test.json")) {
      manifest = fr::load_manifest(layout.manifests() / "test.json");
    } else {
      manifest = load_combined_manifest(config, "");
    }
    std::optional<fs::path> ckpt;
    if (!checkpoint_path.empty()) ckpt = checkpoint_path;
    auto result = fp::stage_translate(config, manifest, ckpt);
    std::cout << "translated " << result.report.n_frames << " frames -> "
              << layout.translated().string() << "\n";
    if (bench) {
      std::cout << fr::gan::translation_report_to_json(result.report).dump(2) << "\n";
      if (result.report.fps_compute)
        std::cout << "throughput: " << *result.report.fps_compute << " fps compute, "
                  << *result.report.fps_total << " fps including I/O\n";
      std::cout << "reference: 14 fps (Titan Xp baseline)\n";
    }
    return 0;
  }
  if (detect_cmd->parsed()) {
    auto config = resolve_config(args);
    if (!manifest_path.empty() || !detections_path.empty()) {
      auto manifest = fr::load_manifest(manifest_path.empty()
                                            ? (fp::layout_for(config).manifests() / "test.json").string()
                                            : manifest_path);
      std::optional<fs::path> detections;
      if (!detections_path.empty()) detections = detections_path;
      auto report = fp::stage_detect_eval(config, manifest, tag, detections);
      std::cout << fr::metrics::report_to_json(report).dump(2) << "\n";
    } else {
      auto combined = load_combined_manifest(config, "");
      auto report = fp::run_scenario(config, combined);
      std::cout << "scenario " << config.scenario << ":\n"
                << fr::metrics::report_to_json(report).dump(2) << "\n";
    }
    return 0;
  }
  if (report_cmd->parsed()) {
    auto config = resolve_config(args);
    auto comparison = fp::stage_report(config, raw_report_path, translated_report_path);
    std::cout << comparison.table;
    return 0;
  }
  if (e2e_cmd->parsed()) {
    auto config = resolve_config(args);
    auto summary = fp::stage_e2e(config, [](const std::string& msg) {
      std::cout << msg << std::endl;
    });
    std::cout << fp::e2e_summary_to_json(summary).dump(2) << "\n";
    return 0;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const fr::ConfigError& e) {
    nlohmann::json err{{"error", {{"type", "config"}, {"message", e.what()}, {"exit_code", 2}}}};
    std::cerr << err.dump() << "\n";
    return 2;
  } catch (const fr::DataError& e) {
    nlohmann::json err{{"error", {{"type", "data"}, {"message", e.what()}, {"exit_code", 3}}}};
    std::cerr << err.dump() << "\n";
    return 3;
  } catch (const fr::NumericError& e) {
    nlohmann::json err{{"error", {{"type", "numeric"}, {"message", e.what()}, {"exit_code", 4}}}};
    std::cerr << err.dump() << "\n";
    return 4;
  } catch (const std::exception& e) {
    nlohmann::json err{{"error", {{"type", "internal"}, {"message", e.what()}, {"exit_code", 1}}}};
    std::cerr << err.dump() << "\n";
    return 1;
  }
}
