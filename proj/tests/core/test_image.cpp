#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "framerestore/core/image.hpp"
#include "framerestore/core/png_io.hpp"
#include "framerestore/core/rng.hpp"

namespace fr = framerestore;

TEST(Normalize, Bounds) {
  fr::ImageU8 raster(1, 3);
  raster.at(0, 0, 0) = 0;
  raster.at(0, 1, 0) = 255;
  raster.at(0, 2, 0) = 128;
  fr::ImageTensor out = fr::normalize(raster);
  EXPECT_FLOAT_EQ(out.at(0, 0, 0), -1.0f);
  EXPECT_FLOAT_EQ(out.at(0, 1, 0), 1.0f);
  EXPECT_NEAR(out.at(0, 2, 0), 2.0 * 128.0 / 255.0 - 1.0, 1e-6);
}

TEST(Normalize, RejectsOutOfRangeAndNonFinite) {
  fr::ImageTensor raster(1, 1);
  raster.at(0, 0, 0) = 300.0f;
  EXPECT_THROW(fr::normalize(raster), fr::DataError);
  raster.at(0, 0, 0) = -1.0f;
  EXPECT_THROW(fr::normalize(raster), fr::DataError);
  raster.at(0, 0, 0) = std::numeric_limits<float>::quiet_NaN();
  EXPECT_THROW(fr::normalize(raster), fr::DataError);
}

TEST(Denormalize, Bounds) {
  fr::ImageTensor img(1, 3);
  img.at(0, 0, 0) = -1.0f;
  img.at(0, 1, 0) = 1.0f;
  img.at(0, 2, 0) = 0.0f;
  fr::ImageU8 out = fr::denormalize(img);
  EXPECT_EQ(out.at(0, 0, 0), 0);
  EXPECT_EQ(out.at(0, 1, 0), 255);
  EXPECT_EQ(out.at(0, 2, 0), 128);
}

TEST(Denormalize, ClipsOvershoot) {
  fr::ImageTensor img(1, 2);
  img.at(0, 0, 0) = -1.25f;
  img.at(0, 1, 0) = 1.25f;
  fr::ImageU8 out = fr::denormalize(img);
  EXPECT_EQ(out.at(0, 0, 0), 0);
  EXPECT_EQ(out.at(0, 1, 0), 255);
}

TEST(Normalize, RoundTripExactForAllBytes) {
  fr::ImageU8 raster(16, 16);
  for (int i = 0; i < 256; ++i) raster.values[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(i);
  fr::ImageU8 back = fr::denormalize(fr::normalize(raster));
  EXPECT_EQ(raster.values, back.values);
}

TEST(Normalize, Monotone) {
  std::mt19937_64 rng(3);
  fr::ImageU8 lo(4, 4), hi(4, 4);
  for (std::size_t i = 0; i < lo.values.size(); ++i) {
    int a = fr::draw_int(rng, 0, 255);
    int b = fr::draw_int(rng, 0, 255);
    lo.values[i] = static_cast<std::uint8_t>(std::min(a, b));
    hi.values[i] = static_cast<std::uint8_t>(std::max(a, b));
  }
  fr::ImageTensor nlo = fr::normalize(lo), nhi = fr::normalize(hi);
  for (std::size_t i = 0; i < nlo.data().size(); ++i) EXPECT_LE(nlo.data()[i], nhi.data()[i]);
}

TEST(Psnr, IdenticalIsInfinite) {
  fr::ImageTensor a = fr::ImageTensor::filled(4, 4, {0.5f, 0.5f, 0.5f});
  EXPECT_TRUE(std::isinf(fr::psnr(a, a)));
}

TEST(Psnr, KnownValue) {
  fr::ImageTensor a = fr::ImageTensor::filled(4, 4, {0.5f, 0.5f, 0.5f});
  fr::ImageTensor b = fr::ImageTensor::filled(4, 4, {0.6f, 0.6f, 0.6f});
  // MSE = 0.01 -> PSNR = 20 dB.
  EXPECT_NEAR(fr::psnr(a, b), 20.0, 1e-4);
}

TEST(PngIo, RoundTripAndDeterministicBytes) {
  auto dir = std::filesystem::temp_directory_path() / "framerestore_png_test";
  std::filesystem::create_directories(dir);
  fr::ImageU8 img(9, 7);
  std::mt19937_64 rng(11);
  for (auto& v : img.values) v = static_cast<std::uint8_t>(fr::draw_int(rng, 0, 255));

  fr::write_png(dir / "a.png", img);
  fr::write_png(dir / "b.png", img);
  fr::ImageU8 back = fr::read_png(dir / "a.png");
  EXPECT_EQ(back.height, img.height);
  EXPECT_EQ(back.width, img.width);
  EXPECT_EQ(back.values, img.values);

  auto slurp = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  };
  EXPECT_EQ(slurp(dir / "a.png"), slurp(dir / "b.png"));
  std::filesystem::remove_all(dir);
}

TEST(PngIo, MissingFileThrows) {
  EXPECT_THROW(fr::read_png("/nonexistent/nope.png"), fr::DataError);
}
