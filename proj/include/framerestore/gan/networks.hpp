#ifndef FRAMERESTORE_GAN_NETWORKS_HPP
#define FRAMERESTORE_GAN_NETWORKS_HPP

#include <torch/torch.h>

#include <string>

#include <json.hpp>

#include "framerestore/core/errors.hpp"

namespace framerestore::gan {

// ResNet-style translator: reflection-padded 7x7 stem, two stride-2
// downsamplings, n residual blocks at 1/4 resolution, two transposed-conv
// upsamplings, tanh output. Output spatial size equals input spatial size.
struct GeneratorConfig {
  int base_width = 64;
  int n_res_blocks = 6;  // 6 for inputs <= 128 px, 9 at 256 px

  void validate() const {
    if (base_width < 1) throw ConfigError("generator: base_width must be >= 1");
    if (n_res_blocks < 1) throw ConfigError("generator: n_res_blocks must be >= 1");
  }
};

inline int res_blocks_for(int image_size) { return image_size >= 256 ? 9 : 6; }

// 70-pixel receptive field PatchGAN with the C64-C128-C256-C512 schedule at
// the defaults; emits a 1-channel score map of unbounded reals.
struct DiscriminatorConfig {
  int base_width = 64;
  int n_layers = 3;  // stride-2 convolutions before the stride-1 head

  void validate() const {
    if (base_width < 1) throw ConfigError("discriminator: base_width must be >= 1");
    if (n_layers < 1) throw ConfigError("discriminator: n_layers must be >= 1");
  }
};

namespace detail {

struct ResidualBlockImpl : torch::nn::Module {
  explicit ResidualBlockImpl(int channels) {
    body = torch::nn::Sequential(
        torch::nn::ReflectionPad2d(1),
        torch::nn::Conv2d(torch::nn::Conv2dOptions(channels, channels, 3)),
        torch::nn::InstanceNorm2d(channels), torch::nn::ReLU(true),
        torch::nn::ReflectionPad2d(1),
        torch::nn::Conv2d(torch::nn::Conv2dOptions(channels, channels, 3)),
        torch::nn::InstanceNorm2d(channels));
    register_module("body", body);
  }

  torch::Tensor forward(const torch::Tensor& x) { return x + body->forward(x); }

  torch::nn::Sequential body;
};
TORCH_MODULE(ResidualBlock);

inline void init_weights(torch::nn::Module& module, std::pair<double, double> normal = {0.0, 0.02}) {
  torch::NoGradGuard no_grad;
  for (const auto& m : module.modules(/*include_self=*/false)) {
    if (auto* conv = m->as<torch::nn::Conv2dImpl>()) {
      torch::nn::init::normal_(conv->weight, normal.first, normal.second);
      if (conv->bias.defined()) torch::nn::init::zeros_(conv->bias);
    } else if (auto* deconv = m->as<torch::nn::ConvTranspose2dImpl>()) {
      torch::nn::init::normal_(deconv->weight, normal.first, normal.second);
      if (deconv->bias.defined()) torch::nn::init::zeros_(deconv->bias);
    }
  }
}

}  // namespace detail

struct ResnetGeneratorImpl : torch::nn::Module {
  explicit ResnetGeneratorImpl(GeneratorConfig config = {}) : config_(config) {
    config.validate();
    const int w = config.base_width;
    model = torch::nn::Sequential();
    model->push_back(torch::nn::ReflectionPad2d(3));
    model->push_back(torch::nn::Conv2d(torch::nn::Conv2dOptions(3, w, 7)));
    model->push_back(torch::nn::InstanceNorm2d(w));
    model->push_back(torch::nn::ReLU(true));
    // Two stride-2 downsamplings.
    for (int i = 0; i < 2; ++i) {
      int in = w << i;
      model->push_back(
          torch::nn::Conv2d(torch::nn::Conv2dOptions(in, in * 2, 3).stride(2).padding(1)));
      model->push_back(torch::nn::InstanceNorm2d(in * 2));
      model->push_back(torch::nn::ReLU(true));
    }
    for (int i = 0; i < config.n_res_blocks; ++i) model->push_back(detail::ResidualBlock(4 * w));
    for (int i = 0; i < 2; ++i) {
      int in = 4 * w >> i;
      model->push_back(torch::nn::ConvTranspose2d(
          torch::nn::ConvTranspose2dOptions(in, in / 2, 3).stride(2).padding(1).output_padding(1)));
      model->push_back(torch::nn::InstanceNorm2d(in / 2));
      model->push_back(torch::nn::ReLU(true));
    }
    model->push_back(torch::nn::ReflectionPad2d(3));
    model->push_back(torch::nn::Conv2d(torch::nn::Conv2dOptions(w, 3, 7)));
    model->push_back(torch::nn::Tanh());
    register_module("model", model);
    detail::init_weights(*this);
  }

  // Shape errors fire before any compute.
  torch::Tensor forward(const torch::Tensor& input) {
    if (input.dim() != 4 || input.size(1) != 3)
      throw DataError("generator: expected [N, 3, H, W] input");
    auto h = input.size(2), w = input.size(3);
    if (h % 4 != 0 || w % 4 != 0 || h < 8 || w < 8)
      throw DataError("generator: spatial size " + std::to_string(h) + "x" + std::to_string(w) +
                      " must be divisible by 4 and at least 8");
    return model->forward(input);
  }

  const GeneratorConfig& config() const { return config_; }

  torch::nn::Sequential model;
  GeneratorConfig config_;
};
TORCH_MODULE(ResnetGenerator);

// Spatial size of the discriminator score map; the convolution arithmetic of
// n_layers stride-2 (k4 p1) convolutions followed by two stride-1 (k4 p1).
inline int score_map_extent(int input, int n_layers) {
  int size = input;
  for (int i = 0; i < n_layers; ++i) size = (size + 2 - 4) / 2 + 1;
  size = size + 2 - 4 + 1;
  size = size + 2 - 4 + 1;
  return size;
}

struct PatchGanDiscriminatorImpl : torch::nn::Module {
  explicit PatchGanDiscriminatorImpl(DiscriminatorConfig config = {}) : config_(config) {
    config.validate();
    const int w = config.base_width;
    model = torch::nn::Sequential();
    model->push_back(torch::nn::Conv2d(torch::nn::Conv2dOptions(3, w, 4).stride(2).padding(1)));
    model->push_back(torch::nn::LeakyReLU(torch::nn::LeakyReLUOptions().negative_slope(0.2)));
    int mult = 1;
    for (int i = 1; i < config.n_layers; ++i) {
      int prev = mult;
      mult = std::min(1 << i, 8);
      model->push_back(torch::nn::Conv2d(
          torch::nn::Conv2dOptions(w * prev, w * mult, 4).stride(2).padding(1)));
      model->push_back(torch::nn::InstanceNorm2d(w * mult));
      model->push_back(torch::nn::LeakyReLU(torch::nn::LeakyReLUOptions().negative_slope(0.2)));
    }
    int prev = mult;
    mult = std::min(1 << config.n_layers, 8);
    model->push_back(
        torch::nn::Conv2d(torch::nn::Conv2dOptions(w * prev, w * mult, 4).stride(1).padding(1)));
    model->push_back(torch::nn::InstanceNorm2d(w * mult));
    model->push_back(torch::nn::LeakyReLU(torch::nn::LeakyReLUOptions().negative_slope(0.2)));
    model->push_back(torch::nn::Conv2d(torch::nn::Conv2dOptions(w * mult, 1, 4).stride(1).padding(1)));
    register_module("model", model);
    detail::init_weights(*this);
  }

  torch::Tensor forward(const torch::Tensor& input) {
    if (input.dim() != 4 || input.size(1) != 3)
      throw DataError("discriminator: expected [N, 3, H, W] input");
    int h = score_map_extent(static_cast<int>(input.size(2)), config_.n_layers);
    int w = score_map_extent(static_cast<int>(input.size(3)), config_.n_layers);
    if (h < 1 || w < 1)
      throw DataError("discriminator: input " + std::to_string(input.size(2)) + "x" +
                      std::to_string(input.size(3)) + " too small for the " +
                      std::to_string(config_.n_layers) + "-layer schedule");
    return model->forward(input);
  }

  const DiscriminatorConfig& config() const { return config_; }

  torch::nn::Sequential model;
  DiscriminatorConfig config_;
};
TORCH_MODULE(PatchGanDiscriminator);

inline nlohmann::json generator_config_to_json(const GeneratorConfig& c) {
  return {{"base_width", c.base_width}, {"n_res_blocks", c.n_res_blocks}};
}

inline GeneratorConfig generator_config_from_json(const nlohmann::json& j) {
  GeneratorConfig c;
  c.base_width = j.value("base_width", c.base_width);
  c.n_res_blocks = j.value("n_res_blocks", c.n_res_blocks);
  return c;
}

inline nlohmann::json discriminator_config_to_json(const DiscriminatorConfig& c) {
  return {{"base_width", c.base_width}, {"n_layers", c.n_layers}};
}

inline DiscriminatorConfig discriminator_config_from_json(const nlohmann::json& j) {
  DiscriminatorConfig c;
  c.base_width = j.value("base_width", c.base_width);
  c.n_layers = j.value("n_layers", c.n_layers);
  return c;
}

}  // namespace framerestore::gan

#endif
