#ifndef FRAMERESTORE_PIPELINE_CONFIG_HPP
#define FRAMERESTORE_PIPELINE_CONFIG_HPP

#include <yaml-cpp/yaml.h>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "framerestore/core/errors.hpp"
#include "framerestore/core/rng.hpp"
#include "framerestore/core/split.hpp"
#include "framerestore/degrade/sampler.hpp"
#include "framerestore/gan/engine.hpp"
#include "framerestore/gan/losses.hpp"
#include "framerestore/gan/networks.hpp"
#include "framerestore/synth/scenes.hpp"

namespace framerestore::pipeline {

namespace detail {

// YAML scalars carry no type, so numbers/booleans are re-detected the way
// yaml-cpp's own conversions would.
inline nlohmann::json yaml_to_json(const YAML::Node& node) {
  switch (node.Type()) {
    case YAML::NodeType::Null:
      return nullptr;
    case YAML::NodeType::Scalar: {
      const std::string& s = node.Scalar();
      if (!node.Tag().empty() && node.Tag() == "!") return s;  // quoted scalar: keep as string
      bool b;
      if (YAML::convert<bool>::decode(node, b) && (s == "true" || s == "false")) return b;
      long long i;
      if (YAML::convert<long long>::decode(node, i) &&
          s.find_first_not_of("+-0123456789") == std::string::npos)
        return i;
      double d;
      if (YAML::convert<double>::decode(node, d) &&
          s.find_first_not_of("+-0123456789.eE") == std::string::npos)
        return d;
      return s;
    }
    case YAML::NodeType::Sequence: {
      nlohmann::json arr = nlohmann::json::array();
      for (const auto& item : node) arr.push_back(yaml_to_json(item));
      return arr;
    }
    case YAML::NodeType::Map: {
      nlohmann::json obj = nlohmann::json::object();
      for (const auto& kv : node) obj[kv.first.as<std::string>()] = yaml_to_json(kv.second);
      return obj;
    }
    default:
      return nullptr;
  }
}

}  // namespace detail

struct PipelineConfig {
  std::string name = "framerestore";
  std::uint64_t seed = 7;
  std::string scenario = "raw";  // raw | translated

  struct Paths {
    std::filesystem::path data_root = ".";
    std::filesystem::path out_root = "out";
  } paths;

  struct Split {
    SplitRatios ratios;
    std::uint64_t seed = 7;
  } split;

  struct Degrade {
    degrade::SamplerConfig sampler;
    std::uint64_t seed = 7;
  } degrade;

  struct Gan {
    gan::GeneratorConfig generator;
    gan::DiscriminatorConfig discriminator;
    gan::LossWeights weights;
    gan::TrainOptions train;
  } gan;

  struct Metrics {
    double conf_thresh = 0.25;
    double iou_thresh = 0.5;
    double detector_threshold = 0.5;
    int detector_channel = 0;
  } metrics;

  synth::SceneConfig synthetic;

  void validate() const {
    if (scenario != "raw" && scenario != "translated")
      throw ConfigError("config: scenario must be 'raw' or 'translated', got '" + scenario + "'");
    double sum = split.ratios.train + split.ratios.val + split.ratios.test;
    if (std::abs(sum - 1.0) > 1e-9)
      throw ConfigError("config: split ratios must sum to 1");
    gan.generator.validate();
    gan.discriminator.validate();
    gan.weights.validate();
    gan.train.validate();
    degrade.sampler.validate();
    if (metrics.conf_thresh < 0.0 || metrics.conf_thresh > 1.0)
      throw ConfigError("config: metrics.conf_thresh must be in [0, 1]");
    if (metrics.iou_thresh <= 0.0 || metrics.iou_thresh > 1.0)
      throw ConfigError("config: metrics.iou_thresh must be in (0, 1]");
    if (metrics.detector_channel < 0 || metrics.detector_channel > 2)
      throw ConfigError("config: metrics.detector_channel must be 0, 1 or 2");
  }

  nlohmann::json to_json() const {
    return {{"name", name},
            {"seed", seed},
            {"scenario", scenario},
            {"paths",
             {{"data_root", paths.data_root.string()}, {"out_root", paths.out_root.string()}}},
            {"split",
             {{"ratios", {split.ratios.train, split.ratios.val, split.ratios.test}},
              {"seed", split.seed}}},
            {"degrade",
             {{"sampler", degrade::sampler_config_to_json(degrade.sampler)},
              {"seed", degrade.seed}}},
            {"gan",
             {{"generator", gan::generator_config_to_json(gan.generator)},
              {"discriminator", gan::discriminator_config_to_json(gan.discriminator)},
              {"weights", gan::loss_weights_to_json(gan.weights)},
              {"train", gan::train_options_to_json(gan.train)}}},
            {"metrics",
             {{"conf_thresh", metrics.conf_thresh},
              {"iou_thresh", metrics.iou_thresh},
              {"detector_threshold", metrics.detector_threshold},
              {"detector_channel", metrics.detector_channel}}},
            {"synthetic",
             {{"n_scenes", synthetic.n_scenes},
              {"image_size", synthetic.image_size},
              {"n_patients", synthetic.n_patients},
              {"seed", synthetic.seed}}}};
  }

  static PipelineConfig from_json(const nlohmann::json& j) {
    PipelineConfig c;
    try {
      c.name = j.value("name", c.name);
      c.seed = j.value("seed", c.seed);
      c.scenario = j.value("scenario", c.scenario);
      if (j.contains("paths")) {
        c.paths.data_root = j["paths"].value("data_root", c.paths.data_root.string());
        c.paths.out_root = j["paths"].value("out_root", c.paths.out_root.string());
      }
      // Section seeds default to the global seed unless given explicitly.
      c.split.seed = c.degrade.seed = c.gan.train.seed = c.synthetic.seed = c.seed;
      if (j.contains("split")) {
        const auto& sj = j["split"];
        if (sj.contains("ratios")) {
          const auto& r = sj["ratios"];
          if (!r.is_array() || r.size() != 3)
            throw ConfigError("config: split.ratios must be [train, val, test]");
          c.split.ratios = {r[0].get<double>(), r[1].get<double>(), r[2].get<double>()};
        }
        c.split.seed = sj.value("seed", c.split.seed);
      }
      if (j.contains("degrade")) {
        const auto& dj = j["degrade"];
        if (dj.contains("sampler"))
          c.degrade.sampler = degrade::sampler_config_from_json(dj["sampler"]);
        c.degrade.seed = dj.value("seed", c.degrade.seed);
      }
      if (j.contains("gan")) {
        const auto& gj = j["gan"];
        if (gj.contains("generator"))
          c.gan.generator = gan::generator_config_from_json(gj["generator"]);
        if (gj.contains("discriminator"))
          c.gan.discriminator = gan::discriminator_config_from_json(gj["discriminator"]);
        if (gj.contains("weights")) c.gan.weights = gan::loss_weights_from_json(gj["weights"]);
        if (gj.contains("train")) {
          c.gan.train = gan::train_options_from_json(gj["train"]);
          if (!gj["train"].contains("seed")) c.gan.train.seed = c.seed;
        }
      }
      if (j.contains("metrics")) {
        const auto& mj = j["metrics"];
        c.metrics.conf_thresh = mj.value("conf_thresh", c.metrics.conf_thresh);
        c.metrics.iou_thresh = mj.value("iou_thresh", c.metrics.iou_thresh);
        c.metrics.detector_threshold = mj.value("detector_threshold", c.metrics.detector_threshold);
        c.metrics.detector_channel = mj.value("detector_channel", c.metrics.detector_channel);
      }
      if (j.contains("synthetic")) {
        const auto& yj = j["synthetic"];
        c.synthetic.n_scenes = yj.value("n_scenes", c.synthetic.n_scenes);
        c.synthetic.image_size = yj.value("image_size", c.synthetic.image_size);
        c.synthetic.n_patients = yj.value("n_patients", c.synthetic.n_patients);
        c.synthetic.seed = yj.value("seed", c.synthetic.seed);
      }
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("config: malformed JSON: ") + e.what());
    }
    c.validate();
    return c;
  }

  // FNV-1a of the canonical (key-sorted) serialization; stable under key
  // reordering in the source file.
  std::string hash() const {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(to_json().dump())));
    return buf;
  }
};

// JSON tried first, YAML as fallback — the two formats are interchangeable.
inline nlohmann::json load_config_source(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot read " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception&) {
    try {
      j = detail::yaml_to_json(YAML::Load(text));
    } catch (const YAML::Exception& e) {
      throw ConfigError("config: " + path.string() + " is neither valid JSON nor YAML: " +
                        e.what());
    }
    if (!j.is_object()) throw ConfigError("config: " + path.string() + " must be a mapping");
  }
  return j;
}

inline PipelineConfig load_pipeline_config(const std::filesystem::path& path) {
  return PipelineConfig::from_json(load_config_source(path));
}

// FRAMERESTORE_DETERMINISTIC=1 forces deterministic mode everywhere.
inline bool deterministic_env() {
  const char* v = std::getenv("FRAMERESTORE_DETERMINISTIC");
  return v != nullptr && std::string(v) == "1";
}

inline void apply_deterministic_env(PipelineConfig& config) {
  if (deterministic_env()) config.gan.train.deterministic = true;
}

}  // namespace framerestore::pipeline

#endif
