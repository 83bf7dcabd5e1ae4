#ifndef FRAMERESTORE_CORE_IMAGE_HPP
#define FRAMERESTORE_CORE_IMAGE_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "framerestore/core/errors.hpp"

namespace framerestore {

// H x W x 3 float raster, RGB interleaved. The working range depends on the
// stage: [-1, 1] after normalize (generator domain), [0, 1] display scale for
// degradations and detection, [0, 255] straight from an 8-bit source.
class ImageTensor {
 public:
  static constexpr int kChannels = 3;

  ImageTensor() = default;
  ImageTensor(int height, int width)
      : height_(height), width_(width),
        values_(static_cast<std::size_t>(height) * width * kChannels, 0.0f) {
    if (height < 1 || width < 1)
      throw DataError("ImageTensor: height and width must be >= 1, got " +
                      std::to_string(height) + "x" + std::to_string(width));
  }

  static ImageTensor filled(int height, int width, std::array<float, 3> rgb) {
    ImageTensor img(height, width);
    for (int y = 0; y < height; ++y)
      for (int x = 0; x < width; ++x)
        for (int c = 0; c < kChannels; ++c) img.at(y, x, c) = rgb[static_cast<std::size_t>(c)];
    return img;
  }

  int height() const { return height_; }
  int width() const { return width_; }
  bool empty() const { return values_.empty(); }

  float& at(int y, int x, int c) {
    return values_[(static_cast<std::size_t>(y) * width_ + x) * kChannels + c];
  }
  float at(int y, int x, int c) const {
    return values_[(static_cast<std::size_t>(y) * width_ + x) * kChannels + c];
  }

  std::vector<float>& data() { return values_; }
  const std::vector<float>& data() const { return values_; }

  bool same_shape(const ImageTensor& other) const {
    return height_ == other.height_ && width_ == other.width_;
  }

  bool all_finite() const {
    for (float v : values_)
      if (!std::isfinite(v)) return false;
    return true;
  }

 private:
  int height_ = 0;
  int width_ = 0;
  std::vector<float> values_;
};

// 8-bit RGB raster as it sits on disk.
struct ImageU8 {
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> values;  // H*W*3, RGB interleaved

  ImageU8() = default;
  ImageU8(int h, int w)
      : height(h), width(w), values(static_cast<std::size_t>(h) * w * 3, 0) {}

  std::uint8_t& at(int y, int x, int c) {
    return values[(static_cast<std::size_t>(y) * width + x) * 3 + c];
  }
  std::uint8_t at(int y, int x, int c) const {
    return values[(static_cast<std::size_t>(y) * width + x) * 3 + c];
  }
};

// [0,255] -> [-1,1]: out = 2*(in/255) - 1.
inline ImageTensor normalize(const ImageU8& raster) {
  ImageTensor out(raster.height, raster.width);
  for (std::size_t i = 0; i < raster.values.size(); ++i)
    out.data()[i] = 2.0f * (static_cast<float>(raster.values[i]) / 255.0f) - 1.0f;
  return out;
}

// Real-valued variant; rejects non-finite or out-of-range input.
inline ImageTensor normalize(const ImageTensor& raster) {
  ImageTensor out(raster.height(), raster.width());
  for (std::size_t i = 0; i < raster.data().size(); ++i) {
    float v = raster.data()[i];
    if (!std::isfinite(v) || v < 0.0f || v > 255.0f)
      throw DataError("normalize: input value " + std::to_string(v) +
                      " outside [0, 255]");
    out.data()[i] = 2.0f * (v / 255.0f) - 1.0f;
  }
  return out;
}

// [-1,1] -> [0,255] with clipping; round half away from zero so that
// denormalize(normalize(x)) == x for every integer x in [0, 255].
inline ImageU8 denormalize(const ImageTensor& img) {
  ImageU8 out(img.height(), img.width());
  for (std::size_t i = 0; i < img.data().size(); ++i) {
    double v = img.data()[i];
    if (v < -1.0) v = -1.0;
    if (v > 1.0) v = 1.0;
    out.values[i] = static_cast<std::uint8_t>(std::lround(255.0 * (v + 1.0) / 2.0));
  }
  return out;
}

// [0,255] u8 -> [0,1] display scale (degradation domain).
inline ImageTensor to_unit(const ImageU8& raster) {
  ImageTensor out(raster.height, raster.width);
  for (std::size_t i = 0; i < raster.values.size(); ++i)
    out.data()[i] = static_cast<float>(raster.values[i]) / 255.0f;
  return out;
}

// [0,1] -> u8, clipping then rounding.
inline ImageU8 to_bytes(const ImageTensor& img) {
  ImageU8 out(img.height(), img.width());
  for (std::size_t i = 0; i < img.data().size(); ++i) {
    double v = img.data()[i];
    if (v < 0.0) v = 0.0;
    if (v > 1.0) v = 1.0;
    out.values[i] = static_cast<std::uint8_t>(std::lround(255.0 * v));
  }
  return out;
}

// Peak signal-to-noise ratio on [0,1] scale; +inf for identical images.
inline double psnr(const ImageTensor& a, const ImageTensor& b) {
  if (!a.same_shape(b)) throw DataError("psnr: shape mismatch");
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) {
    double d = static_cast<double>(a.data()[i]) - static_cast<double>(b.data()[i]);
    sum_sq += d * d;
  }
  double mse = sum_sq / static_cast<double>(a.data().size());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(1.0 / mse);
}

}  // namespace framerestore

#endif
