#ifndef FRAMERESTORE_DEGRADE_SAMPLER_HPP
#define FRAMERESTORE_DEGRADE_SAMPLER_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "framerestore/core/errors.hpp"
#include "framerestore/core/rng.hpp"
#include "framerestore/degrade/artifacts.hpp"

namespace framerestore::degrade {

// Seeded distribution over artifact lists. Defaults draw 1-3 kinds uniformly
// without replacement with deliberately mild parameter ranges; everything is
// overridable from the pipeline config.
struct SamplerConfig {
  std::vector<ArtifactKind> kinds = {
      ArtifactKind::ghost_color, ArtifactKind::interlacing, ArtifactKind::motion_blur,
      ArtifactKind::low_illumination, ArtifactKind::occlusion_blobs};
  int min_artifacts = 1;
  int max_artifacts = 3;

  int ghost_max_offset = 3;        // |dx|,|dy| drawn in [-v, v]
  int interlace_max_displacement = 4;
  int blur_max_length = 9;         // odd lengths in [3, v]
  double low_illumination_gain_min = 0.4;
  double low_illumination_gain_max = 0.8;
  double low_illumination_gamma_min = 1.2;
  double low_illumination_gamma_max = 2.0;
  int blob_count_min = 1;
  int blob_count_max = 4;

  void validate() const {
    if (kinds.empty()) throw ConfigError("sampler: kinds must be non-empty");
    if (min_artifacts < 0 || max_artifacts < min_artifacts)
      throw ConfigError("sampler: need 0 <= min_artifacts <= max_artifacts");
    if (ghost_max_offset < 0 || ghost_max_offset > 8)
      throw ConfigError("sampler: ghost_max_offset must be in [0, 8]");
    if (interlace_max_displacement < 0 || interlace_max_displacement > 8)
      throw ConfigError("sampler: interlace_max_displacement must be in [0, 8]");
    if (blur_max_length < 1 || blur_max_length > 31 || blur_max_length % 2 == 0)
      throw ConfigError("sampler: blur_max_length must be odd in [1, 31]");
  }
};

class SpecSampler {
 public:
  explicit SpecSampler(SamplerConfig config) : config_(std::move(config)) {
    config_.validate();
  }

  const SamplerConfig& config() const { return config_; }

  // Fully determined by frame_seed; draws kinds without replacement, then
  // parameters for each kind in a fixed order.
  std::vector<DegradationSpec> sample(std::uint64_t frame_seed) const {
    std::mt19937_64 rng(frame_seed);
    std::vector<ArtifactKind> kinds = config_.kinds;
    deterministic_shuffle(kinds, rng);
    int max_count = std::min<int>(config_.max_artifacts, static_cast<int>(kinds.size()));
    int min_count = std::min(config_.min_artifacts, max_count);
    int count = draw_int(rng, min_count, max_count);

    std::vector<DegradationSpec> specs;
    specs.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) specs.push_back(sample_spec(kinds[static_cast<std::size_t>(i)], rng));
    return specs;
  }

 private:
  DegradationSpec sample_spec(ArtifactKind kind, std::mt19937_64& rng) const {
    switch (kind) {
      case ArtifactKind::ghost_color: {
        int m = config_.ghost_max_offset;
        GhostColorParams p{draw_int(rng, -m, m), draw_int(rng, -m, m),
                           draw_int(rng, -m, m), draw_int(rng, -m, m)};
        return DegradationSpec::ghost_color(p);
      }
      case ArtifactKind::interlacing: {
        int m = config_.interlace_max_displacement;
        int d = draw_int(rng, -m, m);
        if (d == 0 && m > 0) d = 1;  // a zero displacement is no artifact at all
        return DegradationSpec::interlacing({d});
      }
      case ArtifactKind::motion_blur: {
        int max_idx = (config_.blur_max_length - 3) / 2;
        int length = config_.blur_max_length < 3 ? 1 : 3 + 2 * draw_int(rng, 0, max_idx);
        double angle = draw_range(rng, 0.0, std::numbers::pi);
        if (angle >= std::numbers::pi) angle = 0.0;
        return DegradationSpec::motion_blur({length, angle});
      }
      case ArtifactKind::low_illumination: {
        double gain = draw_range(rng, config_.low_illumination_gain_min,
                                 config_.low_illumination_gain_max);
        double gamma = draw_range(rng, config_.low_illumination_gamma_min,
                                  config_.low_illumination_gamma_max);
        return DegradationSpec::low_illumination({gain, gamma});
      }
      case ArtifactKind::occlusion_blobs: {
        int count = draw_int(rng, config_.blob_count_min, config_.blob_count_max);
        return DegradationSpec::occlusion_blobs({count}, rng());
      }
    }
    throw ConfigError("sampler: unknown kind");
  }

  SamplerConfig config_;
};

inline nlohmann::json sampler_config_to_json(const SamplerConfig& c) {
  nlohmann::json kinds = nlohmann::json::array();
  for (auto k : c.kinds) kinds.push_back(to_string(k));
  return {{"kinds", kinds},
          {"min_artifacts", c.min_artifacts},
          {"max_artifacts", c.max_artifacts},
          {"ghost_max_offset", c.ghost_max_offset},
          {"interlace_max_displacement", c.interlace_max_displacement},
          {"blur_max_length", c.blur_max_length},
          {"low_illumination_gain_min", c.low_illumination_gain_min},
          {"low_illumination_gain_max", c.low_illumination_gain_max},
          {"low_illumination_gamma_min", c.low_illumination_gamma_min},
          {"low_illumination_gamma_max", c.low_illumination_gamma_max},
          {"blob_count_min", c.blob_count_min},
          {"blob_count_max", c.blob_count_max}};
}

inline SamplerConfig sampler_config_from_json(const nlohmann::json& j) {
  SamplerConfig c;
  if (j.contains("kinds")) {
    c.kinds.clear();
    for (const auto& kj : j["kinds"]) c.kinds.push_back(artifact_kind_from_string(kj.get<std::string>()));
  }
  c.min_artifacts = j.value("min_artifacts", c.min_artifacts);
  c.max_artifacts = j.value("max_artifacts", c.max_artifacts);
  c.ghost_max_offset = j.value("ghost_max_offset", c.ghost_max_offset);
  c.interlace_max_displacement = j.value("interlace_max_displacement", c.interlace_max_displacement);
  c.blur_max_length = j.value("blur_max_length", c.blur_max_length);
  c.low_illumination_gain_min = j.value("low_illumination_gain_min", c.low_illumination_gain_min);
  c.low_illumination_gain_max = j.value("low_illumination_gain_max", c.low_illumination_gain_max);
  c.low_illumination_gamma_min = j.value("low_illumination_gamma_min", c.low_illumination_gamma_min);
  c.low_illumination_gamma_max = j.value("low_illumination_gamma_max", c.low_illumination_gamma_max);
  c.blob_count_min = j.value("blob_count_min", c.blob_count_min);
  c.blob_count_max = j.value("blob_count_max", c.blob_count_max);
  return c;
}

}  // namespace framerestore::degrade

#endif
