#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "framerestore/core/png_io.hpp"
#include "framerestore/core/rng.hpp"
#include "framerestore/degrade/corpus.hpp"

namespace fr = framerestore;
namespace fd = framerestore::degrade;
namespace fs = std::filesystem;

namespace {

struct TempTree {
  fs::path root;
  explicit TempTree(const std::string& tag) {
    root = fs::temp_directory_path() / ("framerestore_" + tag);
    fs::remove_all(root);
    fs::create_directories(root);
  }
  ~TempTree() { fs::remove_all(root); }
};

fr::DatasetManifest write_tiny_corpus(const fs::path& dir, int n_frames) {
  fs::create_directories(dir / "frames");
  fr::DatasetManifest m;
  m.name = "tiny";
  std::mt19937_64 rng(4);
  for (int i = 0; i < n_frames; ++i) {
    fr::ImageU8 img(12, 12);
    for (auto& v : img.values) v = static_cast<std::uint8_t>(fr::draw_int(rng, 0, 255));
    fr::FrameRecord r;
    r.frame_id = "f" + std::to_string(i);
    r.patient_id = "p" + std::to_string(i % 3);
    r.quality = fr::kQualityInformative;
    r.path = dir / "frames" / (r.frame_id + ".png");
    fr::write_png(r.path, img);
    m.records.push_back(r);
  }
  return m;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

TEST(PairedCorpus, BijectivePairing) {
  TempTree tree("corpus_bijective");
  auto manifest = write_tiny_corpus(tree.root / "clean", 10);
  fd::SpecSampler sampler{fd::SamplerConfig{}};
  auto corpus = fd::build_paired_corpus(manifest, sampler, tree.root / "degraded", 7);

  EXPECT_EQ(corpus.pairs.size(), 10u);
  EXPECT_EQ(corpus.degraded.size(), 10u);
  std::set<std::string> clean_ids, degraded_ids;
  for (const auto& p : corpus.pairs) {
    EXPECT_TRUE(clean_ids.insert(p.clean_id).second);
    EXPECT_TRUE(degraded_ids.insert(p.degraded_id).second);
    EXPECT_NE(manifest.find(p.clean_id), nullptr);
    EXPECT_NE(corpus.degraded.find(p.degraded_id), nullptr);
  }
  for (const auto& r : corpus.degraded.records) {
    EXPECT_EQ(r.quality, fr::kQualityUninformative);
    EXPECT_TRUE(fs::exists(r.path));
  }
  // Pairing table round trip.
  auto pairs = fd::load_pairing_table(tree.root / "degraded" / "pairs.csv");
  ASSERT_EQ(pairs.size(), corpus.pairs.size());
  EXPECT_EQ(pairs[0].clean_id, corpus.pairs[0].clean_id);
  EXPECT_EQ(pairs[0].degraded_id, corpus.pairs[0].degraded_id);
}

TEST(PairedCorpus, SameSeedIsByteIdentical) {
  TempTree tree("corpus_determinism");
  auto manifest = write_tiny_corpus(tree.root / "clean", 6);
  fd::SpecSampler sampler{fd::SamplerConfig{}};
  fd::build_paired_corpus(manifest, sampler, tree.root / "run1", 99);
  fd::build_paired_corpus(manifest, sampler, tree.root / "run2", 99);
  for (const auto& entry : fs::directory_iterator(tree.root / "run1" / "frames")) {
    auto other = tree.root / "run2" / "frames" / entry.path().filename();
    ASSERT_TRUE(fs::exists(other));
    EXPECT_EQ(slurp(entry.path()), slurp(other)) << entry.path();
  }
  EXPECT_EQ(slurp(tree.root / "run1" / "pairs.csv"), slurp(tree.root / "run2" / "pairs.csv"));
}

TEST(PairedCorpus, IdentitySamplerGivesPixelEqualTwins) {
  TempTree tree("corpus_identity");
  auto manifest = write_tiny_corpus(tree.root / "clean", 4);
  fd::SamplerConfig config;
  config.kinds = {fd::ArtifactKind::ghost_color};
  config.min_artifacts = 1;
  config.max_artifacts = 1;
  config.ghost_max_offset = 0;  // all offsets zero -> identity
  auto corpus = fd::build_paired_corpus(manifest, fd::SpecSampler{config}, tree.root / "deg", 3);
  for (std::size_t i = 0; i < corpus.pairs.size(); ++i) {
    auto clean = fr::read_png(manifest.find(corpus.pairs[i].clean_id)->path);
    auto degraded = fr::read_png(corpus.degraded.find(corpus.pairs[i].degraded_id)->path);
    EXPECT_EQ(clean.values, degraded.values);
  }
}

TEST(PairedCorpus, MissingImageSurfacesPath) {
  TempTree tree("corpus_missing");
  auto manifest = write_tiny_corpus(tree.root / "clean", 2);
  manifest.records[1].path = tree.root / "clean" / "frames" / "gone.png";
  fd::SpecSampler sampler{fd::SamplerConfig{}};
  try {
    fd::build_paired_corpus(manifest, sampler, tree.root / "deg", 1);
    FAIL() << "expected DataError";
  } catch (const fr::DataError& e) {
    EXPECT_NE(std::string(e.what()).find("gone.png"), std::string::npos);
  }
}
