#ifndef FRAMERESTORE_METRICS_MATCHING_HPP
#define FRAMERESTORE_METRICS_MATCHING_HPP

#include <algorithm>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "framerestore/core/errors.hpp"
#include "framerestore/core/geometry.hpp"

namespace framerestore::metrics {

inline double iou(const BoundingBox& a, const BoundingBox& b) {
  if (!a.valid() || !b.valid()) throw DataError("iou: degenerate box");
  double ix = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
  double iy = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
  if (ix <= 0.0 || iy <= 0.0) return 0.0;
  double intersection = ix * iy;
  return intersection / (a.area() + b.area() - intersection);
}

struct DetectionMatch {
  bool is_tp = false;
  std::optional<std::size_t> gt_index;  // set iff is_tp
  double confidence = 0.0;
};

struct MatchResult {
  std::vector<DetectionMatch> detections;  // confidence-descending order
  std::size_t unmatched_gt = 0;            // FN source

  std::size_t tp() const {
    std::size_t n = 0;
    for (const auto& d : detections) n += d.is_tp ? 1 : 0;
    return n;
  }
  std::size_t fp() const { return detections.size() - tp(); }
};

// Greedy confidence-ranked matching: detections sorted by confidence
// descending (ties keep input order); each detection claims the unmatched
// ground truth with highest IoU when that IoU >= iou_thresh, else counts FP.
// No ground truth is ever claimed twice.
inline MatchResult match_detections(std::span<const Detection> detections,
                                    std::span<const BoundingBox> ground_truths,
                                    double iou_thresh) {
  if (iou_thresh <= 0.0 || iou_thresh > 1.0)
    throw ConfigError("match_detections: iou_thresh must be in (0, 1]");

  std::vector<std::size_t> order(detections.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
    return detections[l].confidence > detections[r].confidence;
  });

  MatchResult result;
  std::vector<bool> claimed(ground_truths.size(), false);
  for (std::size_t idx : order) {
    const Detection& det = detections[idx];
    double best_iou = 0.0;
    std::optional<std::size_t> best_gt;
    for (std::size_t g = 0; g < ground_truths.size(); ++g) {
      if (claimed[g]) continue;
      double overlap = iou(det.box, ground_truths[g]);
      if (overlap > best_iou) {
        best_iou = overlap;
        best_gt = g;
      }
    }
    DetectionMatch match;
    match.confidence = det.confidence;
    if (best_gt && best_iou >= iou_thresh) {
      match.is_tp = true;
      match.gt_index = best_gt;
      claimed[*best_gt] = true;
    }
    result.detections.push_back(match);
  }
  for (bool c : claimed)
    if (!c) ++result.unmatched_gt;
  return result;
}

// Detections and ground truth for one frame.
struct FrameDetections {
  std::vector<Detection> detections;
  std::vector<BoundingBox> ground_truths;
};

struct PrfResult {
  double precision = 1.0;
  double recall = 1.0;
  double f1 = 1.0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
};

// Detections below conf_thresh are excluded before matching. Precision is
// defined 1 with no detections, recall 1 with no ground truth, F1 zero when
// P + R vanishes.
inline PrfResult precision_recall_f1(std::span<const FrameDetections> frames,
                                     double conf_thresh, double iou_thresh) {
  PrfResult result;
  for (const auto& frame : frames) {
    std::vector<Detection> kept;
    for (const auto& det : frame.detections)
      if (det.confidence >= conf_thresh) kept.push_back(det);
    MatchResult matches = match_detections(kept, frame.ground_truths, iou_thresh);
    result.tp += matches.tp();
    result.fp += matches.fp();
    result.fn += matches.unmatched_gt;
  }
  result.precision = (result.tp + result.fp) == 0
                         ? 1.0
                         : static_cast<double>(result.tp) / static_cast<double>(result.tp + result.fp);
  result.recall = (result.tp + result.fn) == 0
                      ? 1.0
                      : static_cast<double>(result.tp) / static_cast<double>(result.tp + result.fn);
  double pr = result.precision + result.recall;
  result.f1 = pr == 0.0 ? 0.0 : 2.0 * result.precision * result.recall / pr;
  return result;
}

}  // namespace framerestore::metrics

#endif
