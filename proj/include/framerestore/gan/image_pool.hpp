#ifndef FRAMERESTORE_GAN_IMAGE_POOL_HPP
#define FRAMERESTORE_GAN_IMAGE_POOL_HPP

#include <torch/torch.h>

#include <cstdint>
#include <string>
#include <vector>

#include "framerestore/core/errors.hpp"
#include "framerestore/core/rng.hpp"

namespace framerestore::gan {

// Replay buffer of previously generated images, sampled when updating the
// discriminators to decorrelate their updates from the newest generator
// output. Query semantics per image: below capacity the input is stored and
// returned unchanged; at capacity a coin flip (swap_probability) either
// returns the input or swaps it against a random stored image. A batch of n
// always comes back as exactly n images of the input shape.
class ImagePool {
 public:
  explicit ImagePool(std::size_t capacity = 50, double swap_probability = 0.5,
                     std::uint64_t seed = 0)
      : capacity_(capacity), swap_probability_(swap_probability), rng_(seed) {
    if (swap_probability < 0.0 || swap_probability > 1.0)
      throw ConfigError("ImagePool: swap_probability must be in [0, 1]");
  }

  torch::Tensor query(const torch::Tensor& batch) {
    if (batch.dim() != 4) throw DataError("ImagePool: expected [N, C, H, W] batch");
    if (batch.size(0) == 0) throw DataError("ImagePool: empty batch");
    if (capacity_ == 0) return batch;
    std::vector<torch::Tensor> out;
    out.reserve(static_cast<std::size_t>(batch.size(0)));
    for (std::int64_t i = 0; i < batch.size(0); ++i) {
      torch::Tensor image = batch[i].detach();
      if (buffer_.size() < capacity_) {
        buffer_.push_back(image.clone());
        out.push_back(image);
      } else if (draw_unit(rng_) < swap_probability_) {
        std::size_t slot = static_cast<std::size_t>(draw_below(rng_, buffer_.size()));
        torch::Tensor stored = buffer_[slot].clone();
        buffer_[slot] = image.clone();
        out.push_back(stored);
      } else {
        out.push_back(image);
      }
    }
    return torch::stack(out);
  }

  std::size_t size() const { return buffer_.size(); }
  std::size_t capacity() const { return capacity_; }

  // State capture for resumable training.
  std::vector<torch::Tensor> buffer_snapshot() const { return buffer_; }
  std::string rng_state() const { return rng_state_to_string(rng_); }
  void restore(std::vector<torch::Tensor> buffer, const std::string& rng_state) {
    if (buffer.size() > capacity_) throw DataError("ImagePool: snapshot exceeds capacity");
    buffer_ = std::move(buffer);
    rng_ = rng_state_from_string(rng_state);
  }

 private:
  std::size_t capacity_;
  double swap_probability_;
  std::vector<torch::Tensor> buffer_;
  std::mt19937_64 rng_;
};

}  // namespace framerestore::gan

#endif
