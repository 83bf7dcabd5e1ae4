#ifndef FRAMERESTORE_METRICS_BLOB_DETECTOR_HPP
#define FRAMERESTORE_METRICS_BLOB_DETECTOR_HPP

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "framerestore/core/errors.hpp"
#include "framerestore/core/geometry.hpp"
#include "framerestore/core/image.hpp"

namespace framerestore::metrics {

// Stand-in detector for closed-loop tests: 4-connected components of pixels
// whose designated channel exceeds the threshold, each reported as its tight
// box with confidence = component mean intensity. No learning involved, which
// makes the degraded-vs-translated comparison depend on the frames alone.
inline std::vector<Detection> toy_blob_detector(const ImageTensor& img, double threshold,
                                                int channel = 0) {
  if (channel < 0 || channel >= ImageTensor::kChannels)
    throw ConfigError("toy_blob_detector: channel must be in [0, 2]");
  const int h = img.height();
  const int w = img.width();
  std::vector<int> label(static_cast<std::size_t>(h) * w, -1);
  auto above = [&](int y, int x) { return static_cast<double>(img.at(y, x, channel)) > threshold; };

  std::vector<Detection> detections;
  std::vector<std::pair<int, int>> stack;
  for (int sy = 0; sy < h; ++sy)
    for (int sx = 0; sx < w; ++sx) {
      if (!above(sy, sx) || label[static_cast<std::size_t>(sy) * w + sx] >= 0) continue;
      int component = static_cast<int>(detections.size());
      int min_x = sx, max_x = sx, min_y = sy, max_y = sy;
      double sum = 0.0;
      std::size_t count = 0;
      stack.clear();
      stack.emplace_back(sy, sx);
      label[static_cast<std::size_t>(sy) * w + sx] = component;
      while (!stack.empty()) {
        auto [y, x] = stack.back();
        stack.pop_back();
        sum += img.at(y, x, channel);
        ++count;
        min_x = std::min(min_x, x);
        max_x = std::max(max_x, x);
        min_y = std::min(min_y, y);
        max_y = std::max(max_y, y);
        constexpr int dy[4] = {-1, 1, 0, 0};
        constexpr int dx[4] = {0, 0, -1, 1};
        for (int k = 0; k < 4; ++k) {
          int ny = y + dy[k], nx = x + dx[k];
          if (ny < 0 || ny >= h || nx < 0 || nx >= w) continue;
          std::size_t idx = static_cast<std::size_t>(ny) * w + nx;
          if (label[idx] >= 0 || !above(ny, nx)) continue;
          label[idx] = component;
          stack.emplace_back(ny, nx);
        }
      }
      Detection det;
      det.box = BoundingBox{static_cast<double>(min_x), static_cast<double>(min_y),
                            static_cast<double>(max_x + 1), static_cast<double>(max_y + 1)};
      det.confidence = std::min(1.0, sum / static_cast<double>(count));
      detections.push_back(det);
    }
  return detections;
}

// Detection file format: one line per detection,
//   frame_id x_min y_min x_max y_max confidence
// whitespace-separated, absolute pixel coordinates.
inline void save_detections(const std::map<std::string, std::vector<Detection>>& by_frame,
                            const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("save_detections: cannot write " + path.string());
  out.precision(6);
  out << std::fixed;
  for (const auto& [frame_id, detections] : by_frame)
    for (const auto& det : detections)
      out << frame_id << " " << det.box.x_min << " " << det.box.y_min << " " << det.box.x_max
          << " " << det.box.y_max << " " << det.confidence << "\n";
}

inline std::map<std::string, std::vector<Detection>> load_detections(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("load_detections: cannot read " + path.string());
  std::map<std::string, std::vector<Detection>> by_frame;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string frame_id;
    Detection det;
    if (!(ss >> frame_id >> det.box.x_min >> det.box.y_min >> det.box.x_max >> det.box.y_max >>
          det.confidence))
      throw DataError("load_detections: malformed line " + std::to_string(line_no) + " in " +
                      path.string());
    det.validate();
    by_frame[frame_id].push_back(det);
  }
  return by_frame;
}

}  // namespace framerestore::metrics

#endif
