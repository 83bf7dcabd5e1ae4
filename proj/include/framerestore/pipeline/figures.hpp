#ifndef FRAMERESTORE_PIPELINE_FIGURES_HPP
#define FRAMERESTORE_PIPELINE_FIGURES_HPP

#include <array>
#include <span>
#include <vector>

#include "framerestore/core/errors.hpp"
#include "framerestore/core/geometry.hpp"
#include "framerestore/core/image.hpp"

namespace framerestore::pipeline {

// 1-px rectangle outline, clipped to the image.
inline void draw_box(ImageU8& img, const BoundingBox& box, std::array<std::uint8_t, 3> rgb) {
  int x0 = std::clamp(static_cast<int>(std::lround(box.x_min)), 0, img.width - 1);
  int x1 = std::clamp(static_cast<int>(std::lround(box.x_max)) - 1, 0, img.width - 1);
  int y0 = std::clamp(static_cast<int>(std::lround(box.y_min)), 0, img.height - 1);
  int y1 = std::clamp(static_cast<int>(std::lround(box.y_max)) - 1, 0, img.height - 1);
  for (int x = x0; x <= x1; ++x)
    for (int y : {y0, y1})
      for (int c = 0; c < 3; ++c) img.at(y, x, c) = rgb[static_cast<std::size_t>(c)];
  for (int y = y0; y <= y1; ++y)
    for (int x : {x0, x1})
      for (int c = 0; c < 3; ++c) img.at(y, x, c) = rgb[static_cast<std::size_t>(c)];
}

inline constexpr std::array<std::uint8_t, 3> kGroundTruthColor = {0, 255, 0};
inline constexpr std::array<std::uint8_t, 3> kDetectionColor = {255, 32, 32};

// Horizontal strip with a thin white separator between panels.
inline ImageU8 compose_strip(std::span<const ImageU8> panels, int separator = 2) {
  if (panels.empty()) throw DataError("compose_strip: no panels");
  int height = panels.front().height;
  int width = 0;
  for (const auto& p : panels) {
    if (p.height != height) throw DataError("compose_strip: panel heights differ");
    width += p.width;
  }
  width += separator * static_cast<int>(panels.size() - 1);
  ImageU8 strip(height, width);
  for (auto& v : strip.values) v = 255;
  int x_off = 0;
  for (const auto& p : panels) {
    for (int y = 0; y < height; ++y)
      for (int x = 0; x < p.width; ++x)
        for (int c = 0; c < 3; ++c) strip.at(y, x_off + x, c) = p.at(y, x, c);
    x_off += p.width + separator;
  }
  return strip;
}

}  // namespace framerestore::pipeline

#endif
