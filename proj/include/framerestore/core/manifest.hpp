#ifndef FRAMERESTORE_CORE_MANIFEST_HPP
#define FRAMERESTORE_CORE_MANIFEST_HPP

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "framerestore/core/errors.hpp"
#include "framerestore/core/geometry.hpp"

namespace framerestore {

inline constexpr const char* kQualityInformative = "informative";
inline constexpr const char* kQualityUninformative = "uninformative";

// One annotated frame. The quality label is stored as ingested so that
// validation can report bad labels instead of refusing to load them.
struct FrameRecord {
  std::string frame_id;
  std::string patient_id;
  std::string quality;
  std::vector<BoundingBox> gt_boxes;
  std::filesystem::path path;

  bool informative() const { return quality == kQualityInformative; }
  bool uninformative() const { return quality == kQualityUninformative; }
};

struct DatasetManifest {
  std::string name;
  std::vector<FrameRecord> records;
  std::optional<std::string> seed_note;
  std::optional<std::string> config_hash;

  std::size_t size() const { return records.size(); }
  bool empty() const { return records.empty(); }

  // Frame counts per patient, keyed in sorted order.
  std::map<std::string, std::size_t> frames_per_patient() const {
    std::map<std::string, std::size_t> counts;
    for (const auto& r : records) ++counts[r.patient_id];
    return counts;
  }

  DatasetManifest filtered(const std::string& quality_label) const {
    DatasetManifest out;
    out.name = name + "/" + quality_label;
    out.seed_note = seed_note;
    out.config_hash = config_hash;
    for (const auto& r : records)
      if (r.quality == quality_label) out.records.push_back(r);
    return out;
  }

  const FrameRecord* find(const std::string& frame_id) const {
    for (const auto& r : records)
      if (r.frame_id == frame_id) return &r;
    return nullptr;
  }
};

inline nlohmann::json manifest_to_json(const DatasetManifest& manifest) {
  nlohmann::json records = nlohmann::json::array();
  for (const auto& r : manifest.records) {
    nlohmann::json boxes = nlohmann::json::array();
    for (const auto& b : r.gt_boxes) boxes.push_back({b.x_min, b.y_min, b.x_max, b.y_max});
    records.push_back({{"frame_id", r.frame_id},
                       {"patient_id", r.patient_id},
                       {"quality", r.quality},
                       {"path", r.path.string()},
                       {"gt_boxes", boxes}});
  }
  nlohmann::json out{{"name", manifest.name}, {"records", records}};
  if (manifest.seed_note) out["seed_note"] = *manifest.seed_note;
  if (manifest.config_hash) out["config_hash"] = *manifest.config_hash;
  return out;
}

inline DatasetManifest manifest_from_json(const nlohmann::json& j) {
  DatasetManifest manifest;
  try {
    manifest.name = j.at("name").get<std::string>();
    for (const auto& rj : j.at("records")) {
      FrameRecord r;
      r.frame_id = rj.at("frame_id").get<std::string>();
      r.patient_id = rj.at("patient_id").get<std::string>();
      r.quality = rj.at("quality").get<std::string>();
      r.path = rj.at("path").get<std::string>();
      for (const auto& bj : rj.value("gt_boxes", nlohmann::json::array())) {
        if (!bj.is_array() || bj.size() != 4)
          throw DataError("manifest: gt_boxes entries must be [x_min, y_min, x_max, y_max]");
        r.gt_boxes.push_back(BoundingBox{bj[0].get<double>(), bj[1].get<double>(),
                                         bj[2].get<double>(), bj[3].get<double>()});
      }
      manifest.records.push_back(std::move(r));
    }
    if (j.contains("seed_note")) manifest.seed_note = j["seed_note"].get<std::string>();
    if (j.contains("config_hash")) manifest.config_hash = j["config_hash"].get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("manifest: malformed JSON: ") + e.what());
  }
  return manifest;
}

inline void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("save_manifest: cannot write " + path.string());
  out << manifest_to_json(manifest).dump(2) << "\n";
}

inline DatasetManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("load_manifest: cannot read " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("load_manifest: " + path.string() + ": " + e.what());
  }
  return manifest_from_json(j);
}

struct ManifestViolation {
  enum class Kind { duplicate_id, unresolvable_path, degenerate_box, invalid_quality };
  Kind kind;
  std::string frame_id;
  std::string detail;
};

struct ValidateOptions {
  bool check_paths = true;
};

// Violations are data, not exceptions: every problem in the manifest comes
// back in one pass.
inline std::vector<ManifestViolation> validate_manifest(const DatasetManifest& manifest,
                                                        ValidateOptions options = {}) {
  std::vector<ManifestViolation> violations;
  std::set<std::string> seen;
  for (const auto& r : manifest.records) {
    if (!seen.insert(r.frame_id).second)
      violations.push_back({ManifestViolation::Kind::duplicate_id, r.frame_id,
                            "frame_id appears more than once"});
    if (!r.informative() && !r.uninformative())
      violations.push_back({ManifestViolation::Kind::invalid_quality, r.frame_id,
                            "quality label '" + r.quality + "' is not one of {" +
                                kQualityInformative + ", " + kQualityUninformative + "}"});
    for (std::size_t i = 0; i < r.gt_boxes.size(); ++i)
      if (!r.gt_boxes[i].valid())
        violations.push_back({ManifestViolation::Kind::degenerate_box, r.frame_id,
                              "gt_boxes[" + std::to_string(i) + "] is degenerate"});
    if (options.check_paths && !std::filesystem::exists(r.path))
      violations.push_back({ManifestViolation::Kind::unresolvable_path, r.frame_id,
                            "path does not resolve: " + r.path.string()});
  }
  return violations;
}

}  // namespace framerestore

#endif
