#ifndef FRAMERESTORE_GAN_LOSSES_HPP
#define FRAMERESTORE_GAN_LOSSES_HPP

#include <torch/torch.h>

#include <string>

#include <json.hpp>

#include "framerestore/core/errors.hpp"

namespace framerestore::gan {

// Weights of the composite generator objective:
//   lambda_adv * (adv_AB + adv_BA) + lambda_cyc * cycle + lambda_idt * identity
struct LossWeights {
  double lambda_adv = 1.0;
  double lambda_cyc = 10.0;
  double lambda_idt = 5.0;

  void validate() const {
    if (lambda_adv < 0 || lambda_cyc < 0 || lambda_idt < 0)
      throw ConfigError("loss weights must be nonnegative");
  }
};

inline nlohmann::json loss_weights_to_json(const LossWeights& w) {
  return {{"lambda_adv", w.lambda_adv}, {"lambda_cyc", w.lambda_cyc}, {"lambda_idt", w.lambda_idt}};
}

inline LossWeights loss_weights_from_json(const nlohmann::json& j) {
  LossWeights w;
  w.lambda_adv = j.value("lambda_adv", w.lambda_adv);
  w.lambda_cyc = j.value("lambda_cyc", w.lambda_cyc);
  w.lambda_idt = j.value("lambda_idt", w.lambda_idt);
  return w;
}

// Least-squares discriminator objective, as printed (no 1/2 factor):
//   mean((real - 1)^2) + mean(fake^2).
// Zero iff real scores are identically 1 and fake scores identically 0.
inline torch::Tensor adversarial_loss_discriminator(const torch::Tensor& real_scores,
                                                    const torch::Tensor& fake_scores) {
  if (real_scores.numel() == 0 || fake_scores.numel() == 0)
    throw DataError("adversarial_loss_discriminator: empty score batch");
  return (real_scores - 1.0).pow(2).mean() + fake_scores.pow(2).mean();
}

// Generator side: mean((fake - 1)^2); zero iff the discriminator is fooled
// into scoring every patch 1.
inline torch::Tensor adversarial_loss_generator(const torch::Tensor& fake_scores) {
  if (fake_scores.numel() == 0) throw DataError("adversarial_loss_generator: empty score batch");
  return (fake_scores - 1.0).pow(2).mean();
}

namespace detail {

inline void check_same_shape(const torch::Tensor& a, const torch::Tensor& b, const char* what) {
  if (a.sizes() != b.sizes())
    throw DataError(std::string(what) + ": shape mismatch " + c10::str(a.sizes()) + " vs " +
                    c10::str(b.sizes()));
}

}  // namespace detail

// L1 cycle-consistency: mean|rec_a - a| + mean|rec_b - b|, per-element means
// so the weight semantics do not depend on resolution.
inline torch::Tensor cycle_loss(const torch::Tensor& a, const torch::Tensor& rec_a,
                                const torch::Tensor& b, const torch::Tensor& rec_b) {
  detail::check_same_shape(a, rec_a, "cycle_loss(a)");
  detail::check_same_shape(b, rec_b, "cycle_loss(b)");
  return (rec_a - a).abs().mean() + (rec_b - b).abs().mean();
}

// Identity mapping penalty: mean|G_AB(b) - b| + mean|G_BA(a) - a|; keeps the
// translators color-faithful on images already in their target domain.
inline torch::Tensor identity_loss(const torch::Tensor& a, const torch::Tensor& idt_a,
                                   const torch::Tensor& b, const torch::Tensor& idt_b) {
  detail::check_same_shape(a, idt_a, "identity_loss(a)");
  detail::check_same_shape(b, idt_b, "identity_loss(b)");
  return (idt_a - a).abs().mean() + (idt_b - b).abs().mean();
}

// Composite objective; rejects non-finite parts by name.
inline torch::Tensor total_generator_objective(const torch::Tensor& adv_ab,
                                               const torch::Tensor& adv_ba,
                                               const torch::Tensor& cycle,
                                               const torch::Tensor& identity,
                                               const LossWeights& weights) {
  auto check = [](const torch::Tensor& t, const char* name) {
    if (!torch::isfinite(t).all().item<bool>())
      throw NumericError(std::string("total_generator_objective: non-finite term '") + name + "'");
  };
  check(adv_ab, "adv_ab");
  check(adv_ba, "adv_ba");
  check(cycle, "cycle");
  check(identity, "identity");
  return weights.lambda_adv * (adv_ab + adv_ba) + weights.lambda_cyc * cycle +
         weights.lambda_idt * identity;
}

}  // namespace framerestore::gan

#endif
