#ifndef FRAMERESTORE_CORE_PNG_IO_HPP
#define FRAMERESTORE_CORE_PNG_IO_HPP

#include <png.h>

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "framerestore/core/errors.hpp"
#include "framerestore/core/image.hpp"

namespace framerestore {

namespace detail {

struct FileCloser {
  std::FILE* f = nullptr;
  ~FileCloser() {
    if (f) std::fclose(f);
  }
};

}  // namespace detail

// Reads any PNG as 8-bit RGB (palette expanded, gray promoted, 16-bit and
// alpha stripped).
inline ImageU8 read_png(const std::filesystem::path& path) {
  detail::FileCloser file{std::fopen(path.string().c_str(), "rb")};
  if (!file.f) throw DataError("read_png: cannot open " + path.string());

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw DataError("read_png: libpng init failed for " + path.string());
  }

  ImageU8 out;
  std::vector<png_bytep> rows;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw DataError("read_png: decode error in " + path.string());
  }

  png_init_io(png, file.f);
  png_read_info(png, info);

  png_uint_32 width = png_get_image_width(png, info);
  png_uint_32 height = png_get_image_height(png, info);
  png_byte color_type = png_get_color_type(png, info);
  png_byte bit_depth = png_get_bit_depth(png, info);

  if (bit_depth == 16) png_set_strip_16(png);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA)
    png_set_gray_to_rgb(png);
  png_set_strip_alpha(png);
  png_read_update_info(png, info);

  out = ImageU8(static_cast<int>(height), static_cast<int>(width));
  rows.resize(height);
  for (png_uint_32 y = 0; y < height; ++y)
    rows[y] = out.values.data() + static_cast<std::size_t>(y) * width * 3;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return out;
}

// Writes 8-bit RGB with pinned compression settings (level 6, filter NONE) so
// that a corpus produced twice from the same seed is byte-identical.
inline void write_png(const std::filesystem::path& path, const ImageU8& img) {
  if (img.height < 1 || img.width < 1) throw DataError("write_png: empty image");
  detail::FileCloser file{std::fopen(path.string().c_str(), "wb")};
  if (!file.f) throw DataError("write_png: cannot open " + path.string() + " for writing");

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw DataError("write_png: libpng init failed for " + path.string());
  }

  std::vector<png_bytep> rows(static_cast<std::size_t>(img.height));
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw DataError("write_png: encode error for " + path.string());
  }

  png_init_io(png, file.f);
  png_set_compression_level(png, 6);
  png_set_filter(png, 0, PNG_FILTER_NONE);
  png_set_IHDR(png, info, static_cast<png_uint_32>(img.width),
               static_cast<png_uint_32>(img.height), 8, PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < img.height; ++y)
    rows[static_cast<std::size_t>(y)] =
        const_cast<png_bytep>(img.values.data() + static_cast<std::size_t>(y) * img.width * 3);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace framerestore

#endif
