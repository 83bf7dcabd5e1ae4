#ifndef FRAMERESTORE_GAN_TRANSLATE_HPP
#define FRAMERESTORE_GAN_TRANSLATE_HPP

#include <torch/torch.h>

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "framerestore/core/errors.hpp"
#include "framerestore/core/image.hpp"
#include "framerestore/core/manifest.hpp"
#include "framerestore/core/png_io.hpp"
#include "framerestore/gan/engine.hpp"
#include "framerestore/gan/networks.hpp"
#include "framerestore/gan/tensor_bridge.hpp"

namespace framerestore::gan {

// Loads the A->B generator from a checkpoint, enforcing the architecture hash
// before touching any image.
inline ResnetGenerator load_translator(const std::filesystem::path& checkpoint_dir,
                                       GeneratorConfig gen_config,
                                       const std::string& expected_config_hash) {
  nlohmann::json manifest = CycleGanEngine::read_checkpoint_manifest(checkpoint_dir);
  std::string stored = manifest.at("config_hash").get<std::string>();
  if (stored != expected_config_hash)
    throw ConfigError("translate: checkpoint " + checkpoint_dir.string() + " hash " + stored +
                      " does not match the configured architecture " + expected_config_hash);
  ResnetGenerator generator(gen_config);
  torch::load(generator, (checkpoint_dir / "g_ab.pt").string());
  generator->eval();
  return generator;
}

struct TranslationReport {
  std::size_t n_frames = 0;
  double compute_seconds = 0.0;
  double io_seconds = 0.0;
  // Omitted when no frames were processed.
  std::optional<double> fps_compute;
  std::optional<double> fps_total;
};

inline nlohmann::json translation_report_to_json(const TranslationReport& r) {
  nlohmann::json j{{"n_frames", r.n_frames},
                   {"compute_seconds", r.compute_seconds},
                   {"io_seconds", r.io_seconds}};
  if (r.fps_compute) j["fps_compute"] = *r.fps_compute;
  if (r.fps_total) j["fps_total"] = *r.fps_total;
  return j;
}

// Applies G_AB to every record, writes 8-bit PNGs under out_dir, and returns
// the rewritten records plus a timing report with compute and I/O separated.
inline std::pair<std::vector<FrameRecord>, TranslationReport> translate_records(
    ResnetGenerator& generator, const std::vector<FrameRecord>& records,
    const std::filesystem::path& out_dir) {
  namespace chrono = std::chrono;
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw DataError("translate: cannot create " + out_dir.string());

  torch::NoGradGuard no_grad;
  TranslationReport report;
  std::vector<FrameRecord> translated;
  translated.reserve(records.size());
  double compute = 0.0, io = 0.0;
  for (const auto& record : records) {
    auto t0 = chrono::steady_clock::now();
    ImageU8 raster = read_png(record.path);
    auto t1 = chrono::steady_clock::now();
    torch::Tensor input = image_to_tensor(normalize(raster)).unsqueeze(0);
    torch::Tensor output = generator->forward(input);
    ImageU8 restored = denormalize(tensor_to_image(output));
    auto t2 = chrono::steady_clock::now();
    FrameRecord out = record;
    out.path = out_dir / (record.frame_id + ".png");
    write_png(out.path, restored);
    auto t3 = chrono::steady_clock::now();
    io += chrono::duration<double>(t1 - t0).count() + chrono::duration<double>(t3 - t2).count();
    compute += chrono::duration<double>(t2 - t1).count();
    translated.push_back(std::move(out));
  }
  report.n_frames = records.size();
  report.compute_seconds = compute;
  report.io_seconds = io;
  if (!records.empty() && compute > 0.0) {
    report.fps_compute = static_cast<double>(records.size()) / compute;
    report.fps_total = static_cast<double>(records.size()) / (compute + io);
  }
  return {std::move(translated), report};
}

}  // namespace framerestore::gan

#endif
