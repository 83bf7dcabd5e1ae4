#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "framerestore/core/split.hpp"

namespace fr = framerestore;

namespace {

fr::DatasetManifest make_manifest(const std::vector<std::pair<std::string, int>>& patients) {
  fr::DatasetManifest m;
  m.name = "split-test";
  int idx = 0;
  for (const auto& [patient, frames] : patients)
    for (int f = 0; f < frames; ++f) {
      fr::FrameRecord r;
      r.frame_id = "f" + std::to_string(idx++);
      r.patient_id = patient;
      r.quality = fr::kQualityInformative;
      r.path = "/tmp/" + r.frame_id + ".png";
      m.records.push_back(r);
    }
  return m;
}

// Independent reference: builds the shuffled patient order by explicit index
// removal instead of in-place swaps, then fills splits greedily against
// cumulative frame targets.
std::array<std::set<std::string>, 3> reference_assignment(
    const std::map<std::string, std::size_t>& frames_per_patient,
    std::array<double, 3> ratios, std::uint64_t seed, std::size_t total_frames) {
  std::vector<std::string> sorted_ids;
  for (const auto& [id, n] : frames_per_patient) sorted_ids.push_back(id);
  std::sort(sorted_ids.begin(), sorted_ids.end());

  // Fisher-Yates expressed as a permutation table.
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> perm(sorted_ids.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  for (std::size_t i = perm.size(); i > 1; --i) {
    std::uint64_t j = (i <= 1) ? 0 : rng() % i;
    std::swap(perm[i - 1], perm[static_cast<std::size_t>(j)]);
  }

  double t1 = ratios[0] * static_cast<double>(total_frames);
  double t2 = (ratios[0] + ratios[1]) * static_cast<double>(total_frames);
  std::array<std::set<std::string>, 3> out;
  double cum = 0.0;
  int split = 0;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    const std::string& patient = sorted_ids[perm[i]];
    while (split < 2 && cum >= (split == 0 ? t1 : t2)) ++split;
    out[static_cast<std::size_t>(split)].insert(patient);
    cum += static_cast<double>(frames_per_patient.at(patient));
  }
  return out;
}

std::set<std::string> patient_set(const fr::DatasetManifest& m) {
  std::set<std::string> out;
  for (const auto& r : m.records) out.insert(r.patient_id);
  return out;
}

}  // namespace

TEST(PatientSplit, SinglePatientAllInTrain) {
  auto m = make_manifest({{"p1", 5}});
  auto result = fr::patient_wise_split(m, {0.5, 0.3, 0.2}, 42);
  EXPECT_EQ(result.train.size(), 5u);
  EXPECT_TRUE(result.val.empty());
  EXPECT_TRUE(result.test.empty());
}

TEST(PatientSplit, AllTrainRatios) {
  auto m = make_manifest({{"p1", 3}, {"p2", 4}, {"p3", 2}});
  auto result = fr::patient_wise_split(m, {1.0, 0.0, 0.0}, 7);
  EXPECT_EQ(result.train.size(), m.size());
  EXPECT_TRUE(result.val.empty());
  EXPECT_TRUE(result.test.empty());
}

TEST(PatientSplit, FivePatientOracle) {
  // 5 patients x 4 frames, ratios (0.6, 0.2, 0.2), seed 7 -> sizes (12, 4, 4)
  // with membership matching the reference implementation.
  auto m = make_manifest({{"P1", 4}, {"P2", 4}, {"P3", 4}, {"P4", 4}, {"P5", 4}});
  auto result = fr::patient_wise_split(m, {0.6, 0.2, 0.2}, 7);
  EXPECT_EQ(result.train.size(), 12u);
  EXPECT_EQ(result.val.size(), 4u);
  EXPECT_EQ(result.test.size(), 4u);

  auto expected = reference_assignment(m.frames_per_patient(), {0.6, 0.2, 0.2}, 7, m.size());
  EXPECT_EQ(patient_set(result.train), expected[0]);
  EXPECT_EQ(patient_set(result.val), expected[1]);
  EXPECT_EQ(patient_set(result.test), expected[2]);
}

TEST(PatientSplit, OracleOnRandomInstances) {
  std::mt19937_64 gen(99);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::pair<std::string, int>> patients;
    int n_patients = 1 + static_cast<int>(gen() % 12);
    for (int p = 0; p < n_patients; ++p)
      patients.push_back({"pat" + std::to_string(p), 1 + static_cast<int>(gen() % 9)});
    auto m = make_manifest(patients);
    double a = static_cast<double>(gen() % 100) / 100.0;
    double b = (1.0 - a) * static_cast<double>(gen() % 100) / 100.0;
    std::array<double, 3> ratios{a, b, 1.0 - a - b};
    std::uint64_t seed = gen();

    auto result = fr::patient_wise_split(m, {ratios[0], ratios[1], ratios[2]}, seed);
    auto expected = reference_assignment(m.frames_per_patient(), ratios, seed, m.size());
    EXPECT_EQ(patient_set(result.train), expected[0]);
    EXPECT_EQ(patient_set(result.val), expected[1]);
    EXPECT_EQ(patient_set(result.test), expected[2]);
  }
}

TEST(PatientSplit, PartitionProperty) {
  auto m = make_manifest({{"a", 3}, {"b", 1}, {"c", 7}, {"d", 2}, {"e", 5}, {"f", 4}});
  auto result = fr::patient_wise_split(m, {0.5, 0.25, 0.25}, 123);

  // Pairwise disjoint by patient.
  auto train_p = patient_set(result.train);
  auto val_p = patient_set(result.val);
  auto test_p = patient_set(result.test);
  for (const auto& p : train_p) {
    EXPECT_FALSE(val_p.count(p));
    EXPECT_FALSE(test_p.count(p));
  }
  for (const auto& p : val_p) EXPECT_FALSE(test_p.count(p));

  // Union equals input by frame_id.
  std::set<std::string> all_frames;
  for (const auto* part : {&result.train, &result.val, &result.test})
    for (const auto& r : part->records) EXPECT_TRUE(all_frames.insert(r.frame_id).second);
  EXPECT_EQ(all_frames.size(), m.size());
}

TEST(PatientSplit, Deterministic) {
  auto m = make_manifest({{"a", 3}, {"b", 6}, {"c", 2}, {"d", 8}});
  auto r1 = fr::patient_wise_split(m, {0.7, 0.1, 0.2}, 5);
  auto r2 = fr::patient_wise_split(m, {0.7, 0.1, 0.2}, 5);
  EXPECT_EQ(fr::manifest_to_json(r1.train).dump(), fr::manifest_to_json(r2.train).dump());
  EXPECT_EQ(fr::manifest_to_json(r1.val).dump(), fr::manifest_to_json(r2.val).dump());
  EXPECT_EQ(fr::manifest_to_json(r1.test).dump(), fr::manifest_to_json(r2.test).dump());
}

TEST(PatientSplit, Errors) {
  fr::DatasetManifest empty;
  EXPECT_THROW(fr::patient_wise_split(empty, {0.7, 0.1, 0.2}, 1), fr::DataError);
  auto m = make_manifest({{"p", 2}});
  EXPECT_THROW(fr::patient_wise_split(m, {0.5, 0.1, 0.2}, 1), fr::ConfigError);
  EXPECT_THROW(fr::patient_wise_split(m, {-0.1, 0.6, 0.5}, 1), fr::ConfigError);
}
