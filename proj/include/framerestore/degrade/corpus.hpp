#ifndef FRAMERESTORE_DEGRADE_CORPUS_HPP
#define FRAMERESTORE_DEGRADE_CORPUS_HPP

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "framerestore/core/errors.hpp"
#include "framerestore/core/image.hpp"
#include "framerestore/core/manifest.hpp"
#include "framerestore/core/png_io.hpp"
#include "framerestore/core/rng.hpp"
#include "framerestore/degrade/sampler.hpp"

namespace framerestore::degrade {

struct FramePair {
  std::string clean_id;
  std::string degraded_id;
};

struct PairedCorpus {
  DatasetManifest clean;
  DatasetManifest degraded;
  std::vector<FramePair> pairs;
};

inline void save_pairing_table(const std::vector<FramePair>& pairs,
                               const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("save_pairing_table: cannot write " + path.string());
  out << "clean_id,degraded_id\n";
  for (const auto& p : pairs) out << p.clean_id << "," << p.degraded_id << "\n";
}

inline std::vector<FramePair> load_pairing_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("load_pairing_table: cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "clean_id,degraded_id")
    throw DataError("load_pairing_table: bad header in " + path.string());
  std::vector<FramePair> pairs;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto comma = line.find(',');
    if (comma == std::string::npos)
      throw DataError("load_pairing_table: malformed row '" + line + "'");
    pairs.push_back({line.substr(0, comma), line.substr(comma + 1)});
  }
  return pairs;
}

// Gives every clean frame exactly one degraded twin under out_dir. The twin
// keeps the ground-truth boxes (the artifacts are mild, local distortions)
// and is labeled uninformative. Per-frame randomness is hash(seed, frame_id),
// so corpus building is order-independent and reproducible byte for byte.
inline PairedCorpus build_paired_corpus(const DatasetManifest& manifest,
                                        const SpecSampler& sampler,
                                        const std::filesystem::path& out_dir,
                                        std::uint64_t seed) {
  if (manifest.empty()) throw DataError("build_paired_corpus: empty manifest");
  std::error_code ec;
  std::filesystem::create_directories(out_dir / "frames", ec);
  if (ec) throw DataError("build_paired_corpus: cannot create " + (out_dir / "frames").string());

  PairedCorpus corpus;
  corpus.clean = manifest;
  corpus.degraded.name = manifest.name + "/degraded";
  corpus.degraded.seed_note = "degraded with seed " + std::to_string(seed);
  nlohmann::json provenance = nlohmann::json::object();

  for (const auto& record : manifest.records) {
    ImageU8 raster;
    try {
      raster = read_png(record.path);
    } catch (const DataError& e) {
      throw DataError(std::string("build_paired_corpus: ") + e.what());
    }
    auto specs = sampler.sample(derive_seed(seed, record.frame_id));
    ImageTensor degraded = compose(to_unit(raster), specs);

    FrameRecord twin = record;
    twin.frame_id = record.frame_id + "__deg";
    twin.quality = kQualityUninformative;
    twin.path = out_dir / "frames" / (twin.frame_id + ".png");
    write_png(twin.path, to_bytes(degraded));

    provenance[twin.frame_id] = specs_to_json(specs);
    corpus.degraded.records.push_back(twin);
    corpus.pairs.push_back({record.frame_id, twin.frame_id});
  }

  save_pairing_table(corpus.pairs, out_dir / "pairs.csv");
  std::ofstream prov(out_dir / "provenance.json");
  if (!prov) throw DataError("build_paired_corpus: cannot write provenance.json");
  prov << provenance.dump(2) << "\n";
  return corpus;
}

}  // namespace framerestore::degrade

#endif
