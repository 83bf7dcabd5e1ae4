#ifndef FRAMERESTORE_CORE_GEOMETRY_HPP
#define FRAMERESTORE_CORE_GEOMETRY_HPP

#include <algorithm>
#include <string>

#include "framerestore/core/errors.hpp"

namespace framerestore {

// Axis-aligned box in absolute pixel corner coordinates. A pixel (x, y)
// occupies [x, x+1) x [y, y+1), so a tight box around pixels x0..x1 is
// [x0, x1 + 1).
struct BoundingBox {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  bool valid() const { return x_min < x_max && y_min < y_max; }
  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  double area() const { return valid() ? width() * height() : 0.0; }

  BoundingBox clipped(double image_width, double image_height) const {
    return BoundingBox{std::clamp(x_min, 0.0, image_width),
                       std::clamp(y_min, 0.0, image_height),
                       std::clamp(x_max, 0.0, image_width),
                       std::clamp(y_max, 0.0, image_height)};
  }

  bool operator==(const BoundingBox&) const = default;
};

// Single-class detector output; class 0 is "polyp" throughout this project.
struct Detection {
  BoundingBox box;
  double confidence = 0.0;
  int class_id = 0;

  void validate() const {
    if (confidence < 0.0 || confidence > 1.0)
      throw DataError("Detection: confidence " + std::to_string(confidence) +
                      " outside [0, 1]");
    if (!box.valid()) throw DataError("Detection: degenerate box");
  }
};

}  // namespace framerestore

#endif
