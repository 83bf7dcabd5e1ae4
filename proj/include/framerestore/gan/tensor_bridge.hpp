#ifndef FRAMERESTORE_GAN_TENSOR_BRIDGE_HPP
#define FRAMERESTORE_GAN_TENSOR_BRIDGE_HPP

#include <torch/torch.h>

#include <span>
#include <vector>

#include "framerestore/core/errors.hpp"
#include "framerestore/core/image.hpp"

namespace framerestore::gan {

// HWC float image -> CHW tensor (no batch dimension).
inline torch::Tensor image_to_tensor(const ImageTensor& img) {
  auto t = torch::empty({ImageTensor::kChannels, img.height(), img.width()}, torch::kFloat32);
  auto acc = t.accessor<float, 3>();
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x)
      for (int c = 0; c < ImageTensor::kChannels; ++c) acc[c][y][x] = img.at(y, x, c);
  return t;
}

inline ImageTensor tensor_to_image(const torch::Tensor& tensor) {
  torch::Tensor t = tensor;
  if (t.dim() == 4) {
    if (t.size(0) != 1) throw DataError("tensor_to_image: expected a single image");
    t = t.squeeze(0);
  }
  if (t.dim() != 3 || t.size(0) != ImageTensor::kChannels)
    throw DataError("tensor_to_image: expected [3, H, W]");
  t = t.to(torch::kFloat32).contiguous();
  ImageTensor img(static_cast<int>(t.size(1)), static_cast<int>(t.size(2)));
  auto acc = t.accessor<float, 3>();
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x)
      for (int c = 0; c < ImageTensor::kChannels; ++c) img.at(y, x, c) = acc[c][y][x];
  return img;
}

// Stack of same-shape images -> [N, 3, H, W] batch.
inline torch::Tensor images_to_batch(std::span<const ImageTensor> images) {
  if (images.empty()) throw DataError("images_to_batch: empty batch");
  std::vector<torch::Tensor> tensors;
  tensors.reserve(images.size());
  for (const auto& img : images) {
    if (!img.same_shape(images.front()))
      throw DataError("images_to_batch: images must share one shape");
    tensors.push_back(image_to_tensor(img));
  }
  return torch::stack(tensors);
}

}  // namespace framerestore::gan

#endif
