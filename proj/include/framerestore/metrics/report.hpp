#ifndef FRAMERESTORE_METRICS_REPORT_HPP
#define FRAMERESTORE_METRICS_REPORT_HPP

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "framerestore/core/errors.hpp"

namespace framerestore::metrics {

struct MetricStat {
  double mean = 0.0;
  double std = 0.0;
};

// Point values of one evaluation run, as percentages in [0, 100].
struct RunMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double map50 = 0.0;
  double map5095 = 0.0;
};

inline constexpr std::array<const char*, 5> kMetricNames = {"precision", "recall", "f1",
                                                            "map50", "map5095"};

// The shape of a results table column: mean +- std per metric over n runs.
// aggregation_axis records what the runs varied over instead of guessing.
struct MetricsReport {
  MetricStat precision, recall, f1, map50, map5095;
  int n_runs = 0;
  std::string aggregation_axis = "runs";

  MetricStat& stat(std::size_t i) {
    MetricStat* stats[5] = {&precision, &recall, &f1, &map50, &map5095};
    return *stats[i];
  }
  const MetricStat& stat(std::size_t i) const {
    const MetricStat* stats[5] = {&precision, &recall, &f1, &map50, &map5095};
    return *stats[i];
  }
};

// Sample mean and sample std (n-1 denominator); std is 0 for a single run.
inline MetricsReport aggregate_runs(std::span<const RunMetrics> runs,
                                    std::string aggregation_axis = "runs") {
  if (runs.empty()) throw DataError("aggregate_runs: no runs");
  MetricsReport report;
  report.n_runs = static_cast<int>(runs.size());
  report.aggregation_axis = std::move(aggregation_axis);
  for (std::size_t m = 0; m < kMetricNames.size(); ++m) {
    auto value = [&](const RunMetrics& r) {
      const double* vals[5] = {&r.precision, &r.recall, &r.f1, &r.map50, &r.map5095};
      return *vals[m];
    };
    double mean = 0.0;
    for (const auto& r : runs) mean += value(r);
    mean /= static_cast<double>(runs.size());
    double var = 0.0;
    if (runs.size() > 1) {
      for (const auto& r : runs) var += (value(r) - mean) * (value(r) - mean);
      var /= static_cast<double>(runs.size() - 1);
    }
    report.stat(m) = {mean, std::sqrt(var)};
  }
  return report;
}

struct MetricDelta {
  std::string name;
  double delta = 0.0;  // translated - raw, in percentage points
};

inline std::vector<MetricDelta> compare_reports(const MetricsReport& raw,
                                                const MetricsReport& translated) {
  std::vector<MetricDelta> deltas;
  for (std::size_t m = 0; m < kMetricNames.size(); ++m)
    deltas.push_back({kMetricNames[m], translated.stat(m).mean - raw.stat(m).mean});
  return deltas;
}

inline nlohmann::json report_to_json(const MetricsReport& report) {
  nlohmann::json j;
  for (std::size_t m = 0; m < kMetricNames.size(); ++m)
    j[kMetricNames[m]] = {{"mean", report.stat(m).mean},
                          {"std", report.stat(m).std},
                          {"n", report.n_runs}};
  j["aggregation_axis"] = report.aggregation_axis;
  return j;
}

inline MetricsReport report_from_json(const nlohmann::json& j) {
  MetricsReport report;
  try {
    for (std::size_t m = 0; m < kMetricNames.size(); ++m) {
      const auto& mj = j.at(kMetricNames[m]);
      report.stat(m) = {mj.at("mean").get<double>(), mj.at("std").get<double>()};
      report.n_runs = mj.at("n").get<int>();
    }
    report.aggregation_axis = j.value("aggregation_axis", "runs");
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("report: malformed JSON: ") + e.what());
  }
  return report;
}

inline void save_report(const MetricsReport& report, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("save_report: cannot write " + path.string());
  out << report_to_json(report).dump(2) << "\n";
}

inline MetricsReport load_report(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("load_report: cannot read " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("load_report: " + path.string() + ": " + e.what());
  }
  return report_from_json(j);
}

// Two-column comparison table with per-metric deltas.
inline std::string render_comparison(const MetricsReport& raw, const MetricsReport& translated,
                                     const std::string& raw_label = "Raw Frames",
                                     const std::string& translated_label = "Translated Frames") {
  static constexpr std::array<const char*, 5> labels = {
      "Precision (%)", "Recall (%)", "F1-score (%)", "mAP@0.5 (%)", "mAP@0.5:0.95 (%)"};
  char line[160];
  std::string out;
  std::snprintf(line, sizeof(line), "%-18s %-18s %-18s %-8s\n", "Metric", raw_label.c_str(),
                translated_label.c_str(), "Delta");
  out += line;
  out += std::string(64, '-') + "\n";
  for (std::size_t m = 0; m < labels.size(); ++m) {
    char raw_cell[32], tr_cell[32];
    std::snprintf(raw_cell, sizeof(raw_cell), "%.2f +- %.2f", raw.stat(m).mean, raw.stat(m).std);
    std::snprintf(tr_cell, sizeof(tr_cell), "%.2f +- %.2f", translated.stat(m).mean,
                  translated.stat(m).std);
    std::snprintf(line, sizeof(line), "%-18s %-18s %-18s %+.2f\n", labels[m], raw_cell, tr_cell,
                  translated.stat(m).mean - raw.stat(m).mean);
    out += line;
  }
  return out;
}

// F1 must be the harmonic mean of the report's own P and R. Printed tables
// round, so the check allows 0.01 plus half an ULP of the stored value
// (stored_decimals = how many decimals the stored F1 carries; pass a large
// value for full-precision data).
inline bool f1_consistent(double precision, double recall, double stored_f1,
                          int stored_decimals = 12) {
  double pr = precision + recall;
  double recomputed = pr == 0.0 ? 0.0 : 2.0 * precision * recall / pr;
  double half_ulp = stored_decimals >= 12 ? 0.0 : 0.5 * std::pow(10.0, -stored_decimals);
  return std::abs(recomputed - stored_f1) <= 0.01 + half_ulp + 1e-12;
}

}  // namespace framerestore::metrics

#endif
