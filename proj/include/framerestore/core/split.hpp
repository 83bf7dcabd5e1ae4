#ifndef FRAMERESTORE_CORE_SPLIT_HPP
#define FRAMERESTORE_CORE_SPLIT_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "framerestore/core/errors.hpp"
#include "framerestore/core/manifest.hpp"
#include "framerestore/core/rng.hpp"

namespace framerestore {

struct SplitRatios {
  double train = 0.7;
  double val = 0.1;
  double test = 0.2;
};

struct SplitResult {
  DatasetManifest train;
  DatasetManifest val;
  DatasetManifest test;
};

// Patient-atomic split: patients are shuffled deterministically by seed
// (Fisher-Yates over lexicographically sorted patient ids), then assigned
// greedily train -> val -> test until each split's cumulative frame fraction
// meets its ratio; the last split absorbs the rounding remainder. Every frame
// of a patient lands in exactly one split.
inline SplitResult patient_wise_split(const DatasetManifest& manifest,
                                      SplitRatios ratios, std::uint64_t seed) {
  if (manifest.empty()) throw DataError("patient_wise_split: empty manifest");
  if (ratios.train < 0.0 || ratios.val < 0.0 || ratios.test < 0.0)
    throw ConfigError("patient_wise_split: ratios must be nonnegative");
  double sum = ratios.train + ratios.val + ratios.test;
  if (std::abs(sum - 1.0) > 1e-9)
    throw ConfigError("patient_wise_split: ratios sum to " + std::to_string(sum) +
                      ", expected 1");

  auto per_patient = manifest.frames_per_patient();
  std::vector<std::string> patients;
  patients.reserve(per_patient.size());
  for (const auto& [patient, count] : per_patient) patients.push_back(patient);

  std::mt19937_64 rng(seed);
  deterministic_shuffle(patients, rng);

  double total = static_cast<double>(manifest.size());
  std::array<double, 2> cumulative_targets{ratios.train * total,
                                           (ratios.train + ratios.val) * total};
  std::array<std::set<std::string>, 3> assignment;
  std::size_t split = 0;
  std::size_t assigned = 0;
  for (const auto& patient : patients) {
    while (split < 2 && static_cast<double>(assigned) >= cumulative_targets[split]) ++split;
    assignment[split].insert(patient);
    assigned += per_patient[patient];
  }

  SplitResult result;
  DatasetManifest* outputs[3] = {&result.train, &result.val, &result.test};
  const char* suffix[3] = {"/train", "/val", "/test"};
  for (int s = 0; s < 3; ++s) {
    outputs[s]->name = manifest.name + suffix[s];
    outputs[s]->seed_note = "patient_wise_split seed=" + std::to_string(seed);
    outputs[s]->config_hash = manifest.config_hash;
  }
  // Input record order is preserved within each split.
  for (const auto& record : manifest.records) {
    for (int s = 0; s < 3; ++s) {
      if (assignment[static_cast<std::size_t>(s)].count(record.patient_id)) {
        outputs[s]->records.push_back(record);
        break;
      }
    }
  }
  return result;
}

}  // namespace framerestore

#endif
