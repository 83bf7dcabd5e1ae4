#ifndef FRAMERESTORE_SYNTH_SCENES_HPP
#define FRAMERESTORE_SYNTH_SCENES_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <string>
#include <vector>

#include "framerestore/core/errors.hpp"
#include "framerestore/core/image.hpp"
#include "framerestore/core/manifest.hpp"
#include "framerestore/core/png_io.hpp"
#include "framerestore/core/rng.hpp"

namespace framerestore::synth {

// Desk-scale stand-in for real endoscopy footage: smooth tissue-like
// backgrounds with one bright elliptical "polyp" per frame. The polyp is the
// only region whose red channel clears 0.5, which keeps the toy blob
// detector's behavior easy to reason about: clean frames are detectable,
// dimmed or color-shifted ones are not.
struct SceneConfig {
  int n_scenes = 200;
  int image_size = 64;
  int n_patients = 20;
  std::uint64_t seed = 11;
};

struct Scene {
  ImageTensor image;  // [0,1] display scale
  BoundingBox polyp_box;
};

inline Scene generate_scene(int image_size, std::uint64_t scene_seed,
                            std::uint64_t patient_seed) {
  if (image_size < 16) throw ConfigError("generate_scene: image_size must be >= 16");
  std::mt19937_64 patient_rng(patient_seed);
  // Patient-level palette so the patient-wise split groups alike frames.
  double red_base = draw_range(patient_rng, 0.26, 0.36);
  double green_base = draw_range(patient_rng, 0.40, 0.52);
  double blue_base = draw_range(patient_rng, 0.42, 0.56);

  std::mt19937_64 rng(scene_seed);
  Scene scene;
  scene.image = ImageTensor(image_size, image_size);

  // Low-frequency shading: three random cosine waves per channel group.
  struct Wave {
    double fx, fy, phase, amp;
  };
  std::vector<Wave> waves;
  for (int k = 0; k < 3; ++k)
    waves.push_back({draw_range(rng, 0.5, 2.5), draw_range(rng, 0.5, 2.5),
                     draw_range(rng, 0.0, 2.0 * std::numbers::pi),
                     draw_range(rng, 0.01, 0.035)});

  for (int y = 0; y < image_size; ++y)
    for (int x = 0; x < image_size; ++x) {
      double shade = 0.0;
      for (const auto& w : waves)
        shade += w.amp * std::cos(2.0 * std::numbers::pi *
                                      (w.fx * x + w.fy * y) / image_size +
                                  w.phase);
      double grain = draw_range(rng, -0.01, 0.01);
      scene.image.at(y, x, 0) = static_cast<float>(std::clamp(red_base + shade + grain, 0.0, 0.43));
      scene.image.at(y, x, 1) = static_cast<float>(std::clamp(green_base + shade + grain, 0.0, 1.0));
      scene.image.at(y, x, 2) = static_cast<float>(std::clamp(blue_base + shade + grain, 0.0, 1.0));
    }

  // One polyp: bright soft-edged rotated ellipse.
  double min_axis = 5.0, max_axis = std::min(10.0, image_size / 6.0);
  double ax = draw_range(rng, min_axis, max_axis);
  double ay = draw_range(rng, min_axis, max_axis);
  double rot = draw_range(rng, 0.0, std::numbers::pi);
  double margin = std::max(ax, ay) + 2.0;
  double cx = draw_range(rng, margin, image_size - margin);
  double cy = draw_range(rng, margin, image_size - margin);
  float polyp[3] = {static_cast<float>(draw_range(rng, 0.82, 0.93)),
                    static_cast<float>(draw_range(rng, 0.45, 0.58)),
                    static_cast<float>(draw_range(rng, 0.40, 0.52))};

  double cos_r = std::cos(rot);
  double sin_r = std::sin(rot);
  constexpr double softness = 0.18;
  for (int y = 0; y < image_size; ++y)
    for (int x = 0; x < image_size; ++x) {
      double px = (x + 0.5) - cx;
      double py = (y + 0.5) - cy;
      double u = (px * cos_r + py * sin_r) / ax;
      double v = (-px * sin_r + py * cos_r) / ay;
      double r = std::sqrt(u * u + v * v);
      if (r >= 1.0) continue;
      double t = std::clamp((1.0 - r) / softness, 0.0, 1.0);
      double alpha = t * t * (3.0 - 2.0 * t);
      for (int c = 0; c < 3; ++c) {
        double blended = alpha * polyp[c] + (1.0 - alpha) * scene.image.at(y, x, c);
        scene.image.at(y, x, c) = static_cast<float>(blended);
      }
    }

  // Tight analytic bounds of the rotated ellipse.
  double hx = std::sqrt(ax * ax * cos_r * cos_r + ay * ay * sin_r * sin_r);
  double hy = std::sqrt(ax * ax * sin_r * sin_r + ay * ay * cos_r * cos_r);
  scene.polyp_box = BoundingBox{cx - hx, cy - hy, cx + hx, cy + hy}.clipped(image_size, image_size);
  return scene;
}

// Writes n_scenes PNGs under out_dir/frames and returns the manifest (all
// frames informative; patient ids p00, p01, ...).
inline DatasetManifest generate_scene_corpus(const SceneConfig& config,
                                             const std::filesystem::path& out_dir) {
  if (config.n_scenes < 1 || config.n_patients < 1)
    throw ConfigError("generate_scene_corpus: n_scenes and n_patients must be >= 1");
  if (config.n_patients > config.n_scenes)
    throw ConfigError("generate_scene_corpus: more patients than scenes");
  std::error_code ec;
  std::filesystem::create_directories(out_dir / "frames", ec);
  if (ec)
    throw DataError("generate_scene_corpus: cannot create " + (out_dir / "frames").string());

  DatasetManifest manifest;
  manifest.name = "synthetic";
  manifest.seed_note = "synthetic scenes seed=" + std::to_string(config.seed);

  int frames_per_patient = (config.n_scenes + config.n_patients - 1) / config.n_patients;
  for (int i = 0; i < config.n_scenes; ++i) {
    int patient_index = i / frames_per_patient;
    char patient_id[16];
    std::snprintf(patient_id, sizeof(patient_id), "p%02d", patient_index);
    char frame_id[32];
    std::snprintf(frame_id, sizeof(frame_id), "%s_f%03d", patient_id, i);

    Scene scene = generate_scene(config.image_size, derive_seed(config.seed, frame_id),
                                 derive_seed(config.seed, patient_id));
    FrameRecord record;
    record.frame_id = frame_id;
    record.patient_id = patient_id;
    record.quality = kQualityInformative;
    record.gt_boxes = {scene.polyp_box};
    record.path = out_dir / "frames" / (std::string(frame_id) + ".png");
    write_png(record.path, to_bytes(scene.image));
    manifest.records.push_back(std::move(record));
  }
  return manifest;
}

}  // namespace framerestore::synth

#endif
