#ifndef FRAMERESTORE_METRICS_AVERAGE_PRECISION_HPP
#define FRAMERESTORE_METRICS_AVERAGE_PRECISION_HPP

#include <algorithm>
#include <numeric>
#include <span>
#include <vector>

#include "framerestore/core/errors.hpp"
#include "framerestore/metrics/matching.hpp"

namespace framerestore::metrics {

namespace detail {

// TP/FP flags of all detections pooled over frames, confidence-descending.
// Matching happens in rank order within each detection's own frame, mirroring
// the usual pooled-AP evaluation. Ties keep (frame, detection) input order.
inline std::vector<bool> ranked_tp_flags(std::span<const FrameDetections> frames,
                                         double iou_thresh, std::size_t* total_gt) {
  struct Pooled {
    double confidence;
    std::size_t frame;
    std::size_t index;
  };
  std::vector<Pooled> pool;
  *total_gt = 0;
  for (std::size_t f = 0; f < frames.size(); ++f) {
    *total_gt += frames[f].ground_truths.size();
    for (std::size_t d = 0; d < frames[f].detections.size(); ++d)
      pool.push_back({frames[f].detections[d].confidence, f, d});
  }
  std::stable_sort(pool.begin(), pool.end(),
                   [](const Pooled& l, const Pooled& r) { return l.confidence > r.confidence; });

  std::vector<std::vector<bool>> claimed(frames.size());
  for (std::size_t f = 0; f < frames.size(); ++f)
    claimed[f].assign(frames[f].ground_truths.size(), false);

  std::vector<bool> flags;
  flags.reserve(pool.size());
  for (const auto& entry : pool) {
    const auto& dets = frames[entry.frame].detections;
    const auto& gts = frames[entry.frame].ground_truths;
    double best_iou = 0.0;
    std::size_t best_gt = 0;
    bool found = false;
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (claimed[entry.frame][g]) continue;
      double overlap = iou(dets[entry.index].box, gts[g]);
      if (overlap > best_iou) {
        best_iou = overlap;
        best_gt = g;
        found = true;
      }
    }
    if (found && best_iou >= iou_thresh) {
      claimed[entry.frame][best_gt] = true;
      flags.push_back(true);
    } else {
      flags.push_back(false);
    }
  }
  return flags;
}

}  // namespace detail

// 101-point interpolated average precision at one IoU threshold:
// AP = (1/101) * sum over r in {0.00, 0.01, ..., 1.00} of
//      max{precision at recall >= r}.
inline double average_precision(std::span<const FrameDetections> frames, double iou_thresh) {
  std::size_t total_gt = 0;
  std::vector<bool> flags = detail::ranked_tp_flags(frames, iou_thresh, &total_gt);
  if (total_gt == 0) throw DataError("average_precision: no ground truth (recall undefined)");
  if (flags.empty()) return 0.0;

  // Cumulative precision/recall along the ranking.
  std::vector<double> precision(flags.size()), recall(flags.size());
  std::size_t tp = 0;
  for (std::size_t i = 0; i < flags.size(); ++i) {
    tp += flags[i] ? 1 : 0;
    precision[i] = static_cast<double>(tp) / static_cast<double>(i + 1);
    recall[i] = static_cast<double>(tp) / static_cast<double>(total_gt);
  }

  double sum = 0.0;
  for (int k = 0; k <= 100; ++k) {
    double r = static_cast<double>(k) / 100.0;
    double best = 0.0;
    for (std::size_t i = 0; i < flags.size(); ++i)
      if (recall[i] >= r) best = std::max(best, precision[i]);
    sum += best;
  }
  return sum / 101.0;
}

struct MapResult {
  double map50 = 0.0;
  double map5095 = 0.0;
};

// Thresholds are generated as (50 + 5k)/100 so that an IoU of exactly 0.6
// compares equal to the 0.60 threshold.
inline std::vector<double> map_thresholds() {
  std::vector<double> t;
  for (int k = 0; k <= 9; ++k) t.push_back(static_cast<double>(50 + 5 * k) / 100.0);
  return t;
}

inline MapResult map_range(std::span<const FrameDetections> frames) {
  MapResult out;
  double sum = 0.0;
  for (double t : map_thresholds()) {
    double ap = average_precision(frames, t);
    if (t == 0.5) out.map50 = ap;
    sum += ap;
  }
  out.map5095 = sum / 10.0;
  return out;
}

}  // namespace framerestore::metrics

#endif
