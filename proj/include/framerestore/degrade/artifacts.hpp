#ifndef FRAMERESTORE_DEGRADE_ARTIFACTS_HPP
#define FRAMERESTORE_DEGRADE_ARTIFACTS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "framerestore/core/errors.hpp"
#include "framerestore/core/image.hpp"
#include "framerestore/core/rng.hpp"

namespace framerestore::degrade {

// Chromatic misalignment: red and blue channels translated, green untouched.
struct GhostColorParams {
  int dx_r = 0;
  int dy_r = 0;
  int dx_b = 0;
  int dy_b = 0;
};

// Odd scan rows displaced horizontally, as left by field-interleaved capture.
struct InterlacingParams {
  int displacement = 0;
};

// Normalized line kernel of `length` taps at `angle` radians in [0, pi).
struct MotionBlurParams {
  int length = 1;
  double angle = 0.0;
};

// out = clip(gain * in^gamma, 0, 1) on display scale.
struct LowIlluminationParams {
  double gain = 1.0;
  double gamma = 1.0;
};

// Soft-edged brown-tinted ellipses composited over the frame.
struct OcclusionBlobsParams {
  int count = 0;
};

enum class ArtifactKind {
  ghost_color,
  interlacing,
  motion_blur,
  low_illumination,
  occlusion_blobs,
};

inline const char* to_string(ArtifactKind kind) {
  switch (kind) {
    case ArtifactKind::ghost_color: return "ghost_color";
    case ArtifactKind::interlacing: return "interlacing";
    case ArtifactKind::motion_blur: return "motion_blur";
    case ArtifactKind::low_illumination: return "low_illumination";
    case ArtifactKind::occlusion_blobs: return "occlusion_blobs";
  }
  return "unknown";
}

inline ArtifactKind artifact_kind_from_string(const std::string& s) {
  if (s == "ghost_color") return ArtifactKind::ghost_color;
  if (s == "interlacing") return ArtifactKind::interlacing;
  if (s == "motion_blur") return ArtifactKind::motion_blur;
  if (s == "low_illumination") return ArtifactKind::low_illumination;
  if (s == "occlusion_blobs") return ArtifactKind::occlusion_blobs;
  throw ConfigError("unknown artifact kind '" + s + "'");
}

using ArtifactParams = std::variant<GhostColorParams, InterlacingParams, MotionBlurParams,
                                    LowIlluminationParams, OcclusionBlobsParams>;

// Identical spec + identical input => bit-identical output.
struct DegradationSpec {
  ArtifactKind kind;
  ArtifactParams params;
  std::uint64_t seed = 0;

  static DegradationSpec ghost_color(GhostColorParams p) {
    return {ArtifactKind::ghost_color, p, 0};
  }
  static DegradationSpec interlacing(InterlacingParams p) {
    return {ArtifactKind::interlacing, p, 0};
  }
  static DegradationSpec motion_blur(MotionBlurParams p) {
    return {ArtifactKind::motion_blur, p, 0};
  }
  static DegradationSpec low_illumination(LowIlluminationParams p) {
    return {ArtifactKind::low_illumination, p, 0};
  }
  static DegradationSpec occlusion_blobs(OcclusionBlobsParams p, std::uint64_t seed) {
    return {ArtifactKind::occlusion_blobs, p, seed};
  }
};

namespace detail {

inline void require(bool ok, const std::string& field, const std::string& why) {
  if (!ok) throw ConfigError("degradation parameter " + field + " " + why);
}

inline int clamp_index(int v, int size) { return std::clamp(v, 0, size - 1); }

// out(y, x) = in(y - dy, x - dx) with edge replication.
inline ImageTensor shift_channel(const ImageTensor& img, ImageTensor out, int channel,
                                 int dx, int dy) {
  for (int y = 0; y < img.height(); ++y) {
    int src_y = clamp_index(y - dy, img.height());
    for (int x = 0; x < img.width(); ++x) {
      int src_x = clamp_index(x - dx, img.width());
      out.at(y, x, channel) = img.at(src_y, src_x, channel);
    }
  }
  return out;
}

inline ImageTensor apply_ghost_color(const ImageTensor& img, const GhostColorParams& p) {
  require(std::abs(p.dx_r) <= 8, "ghost_color.dx_r", "must satisfy |dx| <= 8");
  require(std::abs(p.dy_r) <= 8, "ghost_color.dy_r", "must satisfy |dy| <= 8");
  require(std::abs(p.dx_b) <= 8, "ghost_color.dx_b", "must satisfy |dx| <= 8");
  require(std::abs(p.dy_b) <= 8, "ghost_color.dy_b", "must satisfy |dy| <= 8");
  ImageTensor out = img;
  out = shift_channel(img, std::move(out), 0, p.dx_r, p.dy_r);
  out = shift_channel(img, std::move(out), 2, p.dx_b, p.dy_b);
  return out;
}

inline ImageTensor apply_interlacing(const ImageTensor& img, const InterlacingParams& p) {
  require(std::abs(p.displacement) <= 8, "interlacing.displacement", "must satisfy |d| <= 8");
  ImageTensor out = img;
  for (int y = 1; y < img.height(); y += 2)
    for (int x = 0; x < img.width(); ++x) {
      int src_x = clamp_index(x - p.displacement, img.width());
      for (int c = 0; c < ImageTensor::kChannels; ++c) out.at(y, x, c) = img.at(y, src_x, c);
    }
  return out;
}

// Line kernel: `length` unit taps splatted bilinearly along (cos a, sin a)
// through the center of a length x length grid, then normalized to sum 1.
inline std::vector<double> motion_blur_kernel(int length, double angle) {
  std::vector<double> kernel(static_cast<std::size_t>(length) * length, 0.0);
  double center = (length - 1) / 2.0;
  double dir_x = std::cos(angle);
  double dir_y = std::sin(angle);
  for (int t = 0; t < length; ++t) {
    double offset = static_cast<double>(t) - center;
    double px = center + offset * dir_x;
    double py = center + offset * dir_y;
    int x0 = static_cast<int>(std::floor(px));
    int y0 = static_cast<int>(std::floor(py));
    double fx = px - x0;
    double fy = py - y0;
    for (int sy = 0; sy < 2; ++sy)
      for (int sx = 0; sx < 2; ++sx) {
        int kx = x0 + sx;
        int ky = y0 + sy;
        if (kx < 0 || kx >= length || ky < 0 || ky >= length) continue;
        double w = (sx ? fx : 1.0 - fx) * (sy ? fy : 1.0 - fy);
        kernel[static_cast<std::size_t>(ky) * length + kx] += w;
      }
  }
  double sum = 0.0;
  for (double w : kernel) sum += w;
  for (double& w : kernel) w /= sum;
  return kernel;
}

inline ImageTensor apply_motion_blur(const ImageTensor& img, const MotionBlurParams& p) {
  require(p.length >= 1 && p.length <= 31, "motion_blur.length", "must be in [1, 31]");
  require(p.length % 2 == 1, "motion_blur.length", "must be odd");
  require(p.angle >= 0.0 && p.angle < std::numbers::pi, "motion_blur.angle",
          "must be in [0, pi)");
  std::vector<double> kernel = motion_blur_kernel(p.length, p.angle);
  int radius = (p.length - 1) / 2;
  ImageTensor out(img.height(), img.width());
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x)
      for (int c = 0; c < ImageTensor::kChannels; ++c) {
        double acc = 0.0;
        for (int ky = 0; ky < p.length; ++ky) {
          int src_y = clamp_index(y + ky - radius, img.height());
          for (int kx = 0; kx < p.length; ++kx) {
            double w = kernel[static_cast<std::size_t>(ky) * p.length + kx];
            if (w == 0.0) continue;
            int src_x = clamp_index(x + kx - radius, img.width());
            acc += w * static_cast<double>(img.at(src_y, src_x, c));
          }
        }
        out.at(y, x, c) = static_cast<float>(acc);
      }
  return out;
}

inline ImageTensor apply_low_illumination(const ImageTensor& img,
                                          const LowIlluminationParams& p) {
  require(p.gain > 0.0 && p.gain <= 1.0, "low_illumination.gain", "must be in (0, 1]");
  require(p.gamma >= 1.0 && p.gamma <= 3.0, "low_illumination.gamma", "must be in [1, 3]");
  ImageTensor out(img.height(), img.width());
  for (std::size_t i = 0; i < img.data().size(); ++i) {
    double v = std::max(0.0, static_cast<double>(img.data()[i]));
    double shaded = p.gain * std::pow(v, p.gamma);
    out.data()[i] = static_cast<float>(std::clamp(shaded, 0.0, 1.0));
  }
  return out;
}

inline ImageTensor apply_occlusion_blobs(const ImageTensor& img, const OcclusionBlobsParams& p,
                                         std::uint64_t seed) {
  require(p.count >= 0 && p.count <= 10, "occlusion_blobs.count", "must be in [0, 10]");
  ImageTensor out = img;
  std::mt19937_64 rng(seed);
  double scale = std::min(img.height(), img.width());
  for (int i = 0; i < p.count; ++i) {
    double cx = draw_range(rng, 0.1, 0.9) * img.width();
    double cy = draw_range(rng, 0.1, 0.9) * img.height();
    double ax = std::max(2.0, draw_range(rng, 0.06, 0.18) * scale);
    double ay = std::max(2.0, draw_range(rng, 0.06, 0.18) * scale);
    double rot = draw_range(rng, 0.0, std::numbers::pi);
    // Brown tint with mild jitter.
    float color[3] = {static_cast<float>(std::clamp(0.45 + draw_range(rng, -0.08, 0.08), 0.0, 1.0)),
                      static_cast<float>(std::clamp(0.29 + draw_range(rng, -0.08, 0.08), 0.0, 1.0)),
                      static_cast<float>(std::clamp(0.15 + draw_range(rng, -0.08, 0.08), 0.0, 1.0))};
    double alpha_max = draw_range(rng, 0.75, 0.95);
    double cos_r = std::cos(rot);
    double sin_r = std::sin(rot);
    constexpr double softness = 0.25;  // fraction of the radius that fades out
    int y_lo = std::max(0, static_cast<int>(std::floor(cy - std::max(ax, ay) - 1)));
    int y_hi = std::min(img.height() - 1, static_cast<int>(std::ceil(cy + std::max(ax, ay) + 1)));
    int x_lo = std::max(0, static_cast<int>(std::floor(cx - std::max(ax, ay) - 1)));
    int x_hi = std::min(img.width() - 1, static_cast<int>(std::ceil(cx + std::max(ax, ay) + 1)));
    for (int y = y_lo; y <= y_hi; ++y)
      for (int x = x_lo; x <= x_hi; ++x) {
        double px = (x + 0.5) - cx;
        double py = (y + 0.5) - cy;
        double u = (px * cos_r + py * sin_r) / ax;
        double v = (-px * sin_r + py * cos_r) / ay;
        double r = std::sqrt(u * u + v * v);
        if (r >= 1.0) continue;
        double t = std::clamp((1.0 - r) / softness, 0.0, 1.0);
        double alpha = alpha_max * (t * t * (3.0 - 2.0 * t));  // smoothstep edge
        for (int c = 0; c < ImageTensor::kChannels; ++c) {
          double blended = alpha * color[c] + (1.0 - alpha) * out.at(y, x, c);
          out.at(y, x, c) = static_cast<float>(blended);
        }
      }
  }
  return out;
}

}  // namespace detail

// Applies one artifact to a [0,1] display-scale image. Shape and channel
// count are always preserved; output stays within [0,1].
inline ImageTensor apply_artifact(const ImageTensor& img, const DegradationSpec& spec) {
  if (img.empty()) throw DataError("apply_artifact: empty image");
  switch (spec.kind) {
    case ArtifactKind::ghost_color:
      return detail::apply_ghost_color(img, std::get<GhostColorParams>(spec.params));
    case ArtifactKind::interlacing:
      return detail::apply_interlacing(img, std::get<InterlacingParams>(spec.params));
    case ArtifactKind::motion_blur:
      return detail::apply_motion_blur(img, std::get<MotionBlurParams>(spec.params));
    case ArtifactKind::low_illumination:
      return detail::apply_low_illumination(img, std::get<LowIlluminationParams>(spec.params));
    case ArtifactKind::occlusion_blobs:
      return detail::apply_occlusion_blobs(img, std::get<OcclusionBlobsParams>(spec.params),
                                           spec.seed);
  }
  throw ConfigError("apply_artifact: unknown kind");
}

// Left-to-right composition; compose(img, {}) == img.
inline ImageTensor compose(const ImageTensor& img, std::span<const DegradationSpec> specs) {
  ImageTensor out = img;
  for (const auto& spec : specs) out = apply_artifact(out, spec);
  return out;
}

inline ImageTensor compose(const ImageTensor& img, const std::vector<DegradationSpec>& specs) {
  return compose(img, std::span<const DegradationSpec>(specs));
}

// Provenance serialization: {"kind", "params": {...}, "seed"}.
inline nlohmann::json spec_to_json(const DegradationSpec& spec) {
  nlohmann::json params;
  switch (spec.kind) {
    case ArtifactKind::ghost_color: {
      const auto& p = std::get<GhostColorParams>(spec.params);
      params = {{"dx_r", p.dx_r}, {"dy_r", p.dy_r}, {"dx_b", p.dx_b}, {"dy_b", p.dy_b}};
      break;
    }
    case ArtifactKind::interlacing: {
      const auto& p = std::get<InterlacingParams>(spec.params);
      params = {{"displacement", p.displacement}};
      break;
    }
    case ArtifactKind::motion_blur: {
      const auto& p = std::get<MotionBlurParams>(spec.params);
      params = {{"length", p.length}, {"angle", p.angle}};
      break;
    }
    case ArtifactKind::low_illumination: {
      const auto& p = std::get<LowIlluminationParams>(spec.params);
      params = {{"gain", p.gain}, {"gamma", p.gamma}};
      break;
    }
    case ArtifactKind::occlusion_blobs: {
      const auto& p = std::get<OcclusionBlobsParams>(spec.params);
      params = {{"count", p.count}};
      break;
    }
  }
  return {{"kind", to_string(spec.kind)}, {"params", params}, {"seed", spec.seed}};
}

inline DegradationSpec spec_from_json(const nlohmann::json& j) {
  DegradationSpec spec;
  try {
    spec.kind = artifact_kind_from_string(j.at("kind").get<std::string>());
    spec.seed = j.value("seed", 0ULL);
    const auto& p = j.at("params");
    switch (spec.kind) {
      case ArtifactKind::ghost_color:
        spec.params = GhostColorParams{p.value("dx_r", 0), p.value("dy_r", 0),
                                       p.value("dx_b", 0), p.value("dy_b", 0)};
        break;
      case ArtifactKind::interlacing:
        spec.params = InterlacingParams{p.value("displacement", 0)};
        break;
      case ArtifactKind::motion_blur:
        spec.params = MotionBlurParams{p.value("length", 1), p.value("angle", 0.0)};
        break;
      case ArtifactKind::low_illumination:
        spec.params = LowIlluminationParams{p.value("gain", 1.0), p.value("gamma", 1.0)};
        break;
      case ArtifactKind::occlusion_blobs:
        spec.params = OcclusionBlobsParams{p.value("count", 0)};
        break;
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("degradation spec: malformed JSON: ") + e.what());
  }
  return spec;
}

inline nlohmann::json specs_to_json(const std::vector<DegradationSpec>& specs) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& s : specs) out.push_back(spec_to_json(s));
  return out;
}

inline std::vector<DegradationSpec> specs_from_json(const nlohmann::json& j) {
  std::vector<DegradationSpec> specs;
  for (const auto& sj : j) specs.push_back(spec_from_json(sj));
  return specs;
}

}  // namespace framerestore::degrade

#endif
