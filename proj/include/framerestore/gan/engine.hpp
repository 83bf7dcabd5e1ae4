#ifndef FRAMERESTORE_GAN_ENGINE_HPP
#define FRAMERESTORE_GAN_ENGINE_HPP

#include <torch/torch.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "framerestore/core/errors.hpp"
#include "framerestore/core/image.hpp"
#include "framerestore/core/manifest.hpp"
#include "framerestore/core/png_io.hpp"
#include "framerestore/core/rng.hpp"
#include "framerestore/gan/image_pool.hpp"
#include "framerestore/gan/losses.hpp"
#include "framerestore/gan/networks.hpp"
#include "framerestore/gan/tensor_bridge.hpp"

namespace framerestore::gan {

struct TrainOptions {
  double lr = 2e-4;
  double beta1 = 0.5;
  double beta2 = 0.999;
  int epochs = 1;
  int batch_size = 1;
  std::size_t pool_capacity = 50;
  double pool_swap_probability = 0.5;
  bool use_pool = true;
  std::uint64_t seed = 0;
  bool deterministic = false;

  void validate() const {
    if (lr <= 0.0) throw ConfigError("train: lr must be positive");
    if (epochs < 1) throw ConfigError("train: epochs must be >= 1");
    if (batch_size < 1) throw ConfigError("train: batch_size must be >= 1");
  }
};

inline nlohmann::json train_options_to_json(const TrainOptions& o) {
  return {{"lr", o.lr},         {"beta1", o.beta1},
          {"beta2", o.beta2},   {"epochs", o.epochs},
          {"batch_size", o.batch_size}, {"pool_capacity", o.pool_capacity},
          {"pool_swap_probability", o.pool_swap_probability}, {"use_pool", o.use_pool},
          {"seed", o.seed},     {"deterministic", o.deterministic}};
}

inline TrainOptions train_options_from_json(const nlohmann::json& j) {
  TrainOptions o;
  o.lr = j.value("lr", o.lr);
  o.beta1 = j.value("beta1", o.beta1);
  o.beta2 = j.value("beta2", o.beta2);
  o.epochs = j.value("epochs", o.epochs);
  o.batch_size = j.value("batch_size", o.batch_size);
  o.pool_capacity = j.value("pool_capacity", o.pool_capacity);
  o.pool_swap_probability = j.value("pool_swap_probability", o.pool_swap_probability);
  o.use_pool = j.value("use_pool", o.use_pool);
  o.seed = j.value("seed", o.seed);
  o.deterministic = j.value("deterministic", o.deterministic);
  return o;
}

// Every component of one step: the four generator-objective parts, their
// weighted total, and both discriminator losses.
struct LossRecord {
  double adv_g_ab = 0.0;
  double adv_g_ba = 0.0;
  double cycle = 0.0;
  double identity = 0.0;
  double total_generator = 0.0;
  double disc_a = 0.0;
  double disc_b = 0.0;

  bool operator==(const LossRecord&) const = default;
};

inline nlohmann::json loss_record_to_json(const LossRecord& r) {
  return {{"adv_g_ab", r.adv_g_ab}, {"adv_g_ba", r.adv_g_ba},   {"cycle", r.cycle},
          {"identity", r.identity}, {"total_generator", r.total_generator},
          {"disc_a", r.disc_a},     {"disc_b", r.disc_b}};
}

inline LossRecord loss_record_from_json(const nlohmann::json& j) {
  LossRecord r;
  r.adv_g_ab = j.value("adv_g_ab", 0.0);
  r.adv_g_ba = j.value("adv_g_ba", 0.0);
  r.cycle = j.value("cycle", 0.0);
  r.identity = j.value("identity", 0.0);
  r.total_generator = j.value("total_generator", 0.0);
  r.disc_a = j.value("disc_a", 0.0);
  r.disc_b = j.value("disc_b", 0.0);
  return r;
}

// Constant learning rate for the first half of the epochs, then linear decay
// reaching zero one epoch past the end.
inline double lr_multiplier(int epoch, int total_epochs) {
  int decay_epochs = total_epochs / 2;
  int constant_epochs = total_epochs - decay_epochs;
  if (epoch < constant_epochs) return 1.0;
  return static_cast<double>(total_epochs - epoch) / static_cast<double>(decay_epochs + 1);
}

// Two generators, two discriminators, their optimizers and pools: one
// self-contained training state. Deterministic mode pins the thread count so
// fixed seeds give bit-identical loss trajectories on one build and device.
class CycleGanEngine {
 public:
  CycleGanEngine(GeneratorConfig gen_config, DiscriminatorConfig disc_config,
                 LossWeights weights, TrainOptions options)
      : gen_config_(gen_config),
        disc_config_(disc_config),
        weights_(weights),
        options_(options),
        pool_a_(options.use_pool ? options.pool_capacity : 0, options.pool_swap_probability,
                derive_seed(options.seed, "pool_a")),
        pool_b_(options.use_pool ? options.pool_capacity : 0, options.pool_swap_probability,
                derive_seed(options.seed, "pool_b")),
        order_rng_(derive_seed(options.seed, "batch_order")) {
    gen_config.validate();
    disc_config.validate();
    weights.validate();
    options.validate();
    if (options_.deterministic) torch::set_num_threads(1);
    torch::manual_seed(options_.seed);
    g_ab_ = ResnetGenerator(gen_config);
    g_ba_ = ResnetGenerator(gen_config);
    d_a_ = PatchGanDiscriminator(disc_config);
    d_b_ = PatchGanDiscriminator(disc_config);

    std::vector<torch::Tensor> gen_params = g_ab_->parameters();
    for (auto& p : g_ba_->parameters()) gen_params.push_back(p);
    auto adam = [&](const std::vector<torch::Tensor>& params) {
      return std::make_unique<torch::optim::Adam>(
          params, torch::optim::AdamOptions(options_.lr).betas({options_.beta1, options_.beta2}));
    };
    opt_g_ = adam(gen_params);
    opt_d_a_ = adam(d_a_->parameters());
    opt_d_b_ = adam(d_b_->parameters());
  }

  ResnetGenerator& g_ab() { return g_ab_; }
  ResnetGenerator& g_ba() { return g_ba_; }
  PatchGanDiscriminator& d_a() { return d_a_; }
  PatchGanDiscriminator& d_b() { return d_b_; }
  const TrainOptions& options() const { return options_; }
  const LossWeights& weights() const { return weights_; }
  int epoch() const { return epoch_; }
  std::mt19937_64& order_rng() { return order_rng_; }
  const std::vector<LossRecord>& epoch_history() const { return epoch_history_; }

  // Identifies the architecture + objective a checkpoint was trained under.
  std::string config_hash() const {
    nlohmann::json j{{"generator", generator_config_to_json(gen_config_)},
                     {"discriminator", discriminator_config_to_json(disc_config_)},
                     {"weights", loss_weights_to_json(weights_)}};
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(j.dump())));
    return buf;
  }

  struct GeneratorLossParts {
    torch::Tensor adv_ab, adv_ba, cycle, identity, total;
  };

  // Full generator-side forward pass; grad mode controlled by the caller.
  GeneratorLossParts generator_losses(const torch::Tensor& batch_a, const torch::Tensor& batch_b) {
    auto fake_b = g_ab_->forward(batch_a);
    auto rec_a = g_ba_->forward(fake_b);
    auto fake_a = g_ba_->forward(batch_b);
    auto rec_b = g_ab_->forward(fake_a);
    auto idt_a = g_ba_->forward(batch_a);
    auto idt_b = g_ab_->forward(batch_b);

    GeneratorLossParts parts;
    parts.adv_ab = adversarial_loss_generator(d_b_->forward(fake_b));
    parts.adv_ba = adversarial_loss_generator(d_a_->forward(fake_a));
    parts.cycle = cycle_loss(batch_a, rec_a, batch_b, rec_b);
    parts.identity = identity_loss(batch_a, idt_a, batch_b, idt_b);
    parts.total = total_generator_objective(parts.adv_ab, parts.adv_ba, parts.cycle,
                                            parts.identity, weights_);
    last_fake_a_ = fake_a.detach();
    last_fake_b_ = fake_b.detach();
    return parts;
  }

  double evaluate_generator_objective(const torch::Tensor& batch_a, const torch::Tensor& batch_b) {
    torch::NoGradGuard no_grad;
    return generator_losses(batch_a, batch_b).total.item<double>();
  }

  // One optimizer step on the composite objective, discriminators frozen.
  GeneratorLossParts generator_update(const torch::Tensor& batch_a, const torch::Tensor& batch_b) {
    set_requires_grad(*d_a_, false);
    set_requires_grad(*d_b_, false);
    opt_g_->zero_grad();
    auto parts = generator_losses(batch_a, batch_b);
    parts.total.backward();
    opt_g_->step();
    set_requires_grad(*d_a_, true);
    set_requires_grad(*d_b_, true);
    return parts;
  }

  // One update each for D_A and D_B against current reals and pool-sampled
  // fakes.
  std::pair<double, double> discriminator_update(const torch::Tensor& batch_a,
                                                 const torch::Tensor& batch_b,
                                                 const torch::Tensor& fake_a,
                                                 const torch::Tensor& fake_b) {
    auto step_one = [&](PatchGanDiscriminator& disc, torch::optim::Adam& opt,
                        const torch::Tensor& real, const torch::Tensor& fake) {
      opt.zero_grad();
      auto loss = adversarial_loss_discriminator(disc->forward(real), disc->forward(fake.detach()));
      if (!torch::isfinite(loss).all().item<bool>())
        throw NumericError("discriminator loss became non-finite");
      loss.backward();
      opt.step();
      return loss.item<double>();
    };
    torch::Tensor pooled_a = pool_a_.query(fake_a);
    torch::Tensor pooled_b = pool_b_.query(fake_b);
    double loss_a = step_one(d_a_, *opt_d_a_, batch_a, pooled_a);
    double loss_b = step_one(d_b_, *opt_d_b_, batch_b, pooled_b);
    return {loss_a, loss_b};
  }

  // Generator update first (discriminators held fixed), then one update each
  // for the discriminators.
  LossRecord train_step(const torch::Tensor& batch_a, const torch::Tensor& batch_b) {
    check_batch(batch_a, "batch_a");
    check_batch(batch_b, "batch_b");
    auto parts = generator_update(batch_a, batch_b);
    double total = parts.total.item<double>();
    if (!std::isfinite(total)) throw NumericError("generator objective became non-finite");
    auto [disc_a, disc_b] = discriminator_update(batch_a, batch_b, last_fake_a_, last_fake_b_);

    LossRecord record;
    record.adv_g_ab = parts.adv_ab.item<double>();
    record.adv_g_ba = parts.adv_ba.item<double>();
    record.cycle = parts.cycle.item<double>();
    record.identity = parts.identity.item<double>();
    record.total_generator = total;
    record.disc_a = disc_a;
    record.disc_b = disc_b;
    return record;
  }

  void set_learning_rate(double lr) {
    for (auto* opt : {opt_g_.get(), opt_d_a_.get(), opt_d_b_.get()})
      for (auto& group : opt->param_groups())
        static_cast<torch::optim::AdamOptions&>(group.options()).lr(lr);
  }

  void apply_lr_schedule(int epoch, int total_epochs) {
    set_learning_rate(options_.lr * lr_multiplier(epoch, total_epochs));
  }

  void advance_epoch(LossRecord epoch_means) {
    epoch_history_.push_back(epoch_means);
    ++epoch_;
  }

  // Checkpoint layout: weight blob per network, optimizer blobs, pool blobs,
  // manifest.json {epoch, config_hash, seed, loss_means, rng states}.
  void save_checkpoint(const std::filesystem::path& dir) const {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw DataError("save_checkpoint: cannot create " + dir.string());
    torch::save(g_ab_, (dir / "g_ab.pt").string());
    torch::save(g_ba_, (dir / "g_ba.pt").string());
    torch::save(d_a_, (dir / "d_a.pt").string());
    torch::save(d_b_, (dir / "d_b.pt").string());
    torch::save(*opt_g_, (dir / "opt_g.pt").string());
    torch::save(*opt_d_a_, (dir / "opt_d_a.pt").string());
    torch::save(*opt_d_b_, (dir / "opt_d_b.pt").string());
    auto save_pool = [&](const ImagePool& pool, const std::string& name) {
      auto buffer = pool.buffer_snapshot();
      if (!buffer.empty()) torch::save(buffer, (dir / (name + ".pt")).string());
      return nlohmann::json{{"size", buffer.size()}, {"rng", pool.rng_state()}};
    };
    nlohmann::json manifest{
        {"epoch", epoch_},
        {"config_hash", config_hash()},
        {"seed", options_.seed},
        {"pool_a", save_pool(pool_a_, "pool_a")},
        {"pool_b", save_pool(pool_b_, "pool_b")},
        {"order_rng", rng_state_to_string(order_rng_)},
    };
    nlohmann::json history = nlohmann::json::array();
    for (const auto& r : epoch_history_) history.push_back(loss_record_to_json(r));
    manifest["loss_means"] =
        epoch_history_.empty() ? nlohmann::json(nullptr) : history.back();
    manifest["loss_history"] = history;
    std::ofstream out(dir / "manifest.json");
    if (!out) throw DataError("save_checkpoint: cannot write manifest.json in " + dir.string());
    out << manifest.dump(2) << "\n";
  }

  // Restores weights, optimizer moments, pool contents and RNG streams; in
  // deterministic mode training resumes to bit-identical loss values.
  void load_checkpoint(const std::filesystem::path& dir) {
    nlohmann::json manifest = read_checkpoint_manifest(dir);
    if (manifest.at("config_hash").get<std::string>() != config_hash())
      throw ConfigError("load_checkpoint: checkpoint " + dir.string() +
                        " was produced under a different architecture/objective (hash mismatch)");
    torch::load(g_ab_, (dir / "g_ab.pt").string());
    torch::load(g_ba_, (dir / "g_ba.pt").string());
    torch::load(d_a_, (dir / "d_a.pt").string());
    torch::load(d_b_, (dir / "d_b.pt").string());
    torch::load(*opt_g_, (dir / "opt_g.pt").string());
    torch::load(*opt_d_a_, (dir / "opt_d_a.pt").string());
    torch::load(*opt_d_b_, (dir / "opt_d_b.pt").string());
    auto load_pool = [&](ImagePool& pool, const std::string& name) {
      const auto& pj = manifest.at(name);
      std::vector<torch::Tensor> buffer;
      if (pj.at("size").get<std::size_t>() > 0)
        torch::load(buffer, (dir / (name + ".pt")).string());
      pool.restore(std::move(buffer), pj.at("rng").get<std::string>());
    };
    load_pool(pool_a_, "pool_a");
    load_pool(pool_b_, "pool_b");
    order_rng_ = rng_state_from_string(manifest.at("order_rng").get<std::string>());
    epoch_ = manifest.at("epoch").get<int>();
    epoch_history_.clear();
    for (const auto& rj : manifest.value("loss_history", nlohmann::json::array()))
      epoch_history_.push_back(loss_record_from_json(rj));
  }

  static nlohmann::json read_checkpoint_manifest(const std::filesystem::path& dir) {
    std::ifstream in(dir / "manifest.json");
    if (!in) throw DataError("checkpoint manifest missing: " + (dir / "manifest.json").string());
    nlohmann::json manifest;
    try {
      in >> manifest;
    } catch (const nlohmann::json::exception& e) {
      throw DataError("checkpoint manifest unreadable: " + std::string(e.what()));
    }
    return manifest;
  }

 private:
  static void set_requires_grad(torch::nn::Module& module, bool value) {
    for (auto& p : module.parameters()) p.set_requires_grad(value);
  }

  static void check_batch(const torch::Tensor& batch, const char* name) {
    if (batch.dim() != 4 || batch.size(1) != 3)
      throw DataError(std::string("train_step: ") + name + " must be [N, 3, H, W]");
    if (batch.size(0) < 1) throw DataError(std::string("train_step: ") + name + " is empty");
  }

  GeneratorConfig gen_config_;
  DiscriminatorConfig disc_config_;
  LossWeights weights_;
  TrainOptions options_;
  ResnetGenerator g_ab_{nullptr}, g_ba_{nullptr};
  PatchGanDiscriminator d_a_{nullptr}, d_b_{nullptr};
  std::unique_ptr<torch::optim::Adam> opt_g_, opt_d_a_, opt_d_b_;
  ImagePool pool_a_, pool_b_;
  std::mt19937_64 order_rng_;
  int epoch_ = 0;
  std::vector<LossRecord> epoch_history_;
  torch::Tensor last_fake_a_, last_fake_b_;
};

// In-memory training set: normalized [-1, 1] tensors for one domain.
inline std::vector<torch::Tensor> load_domain_tensors(const DatasetManifest& manifest) {
  if (manifest.empty()) throw DataError("load_domain_tensors: empty domain manifest");
  std::vector<torch::Tensor> tensors;
  tensors.reserve(manifest.size());
  for (const auto& record : manifest.records)
    tensors.push_back(image_to_tensor(normalize(read_png(record.path))));
  return tensors;
}

struct FitResult {
  std::vector<std::filesystem::path> checkpoints;
  std::vector<LossRecord> epoch_means;
  int steps_per_epoch = 0;
};

// Trains domain A (uninformative) against domain B (informative) and writes
// one checkpoint per epoch. steps_per_epoch = floor(min(|A|, |B|) /
// batch_size); both domains are reshuffled each epoch from the engine's own
// RNG stream, so a restored engine replays the identical batch sequence.
inline FitResult fit(CycleGanEngine& engine, const std::vector<torch::Tensor>& domain_a,
                     const std::vector<torch::Tensor>& domain_b,
                     const std::filesystem::path& checkpoint_root,
                     const std::function<void(int, const LossRecord&)>& on_epoch = {}) {
  if (domain_a.empty() || domain_b.empty())
    throw DataError("fit: both domains must be non-empty");
  const auto& options = engine.options();
  int steps = static_cast<int>(std::min(domain_a.size(), domain_b.size())) / options.batch_size;
  if (steps < 1) throw DataError("fit: batch_size exceeds the smaller domain");

  std::error_code ec;
  std::filesystem::create_directories(checkpoint_root, ec);
  if (ec) throw DataError("fit: cannot create checkpoint dir " + checkpoint_root.string());

  FitResult result;
  result.steps_per_epoch = steps;
  auto gather = [&](const std::vector<torch::Tensor>& domain, const std::vector<std::size_t>& order,
                    int step) {
    std::vector<torch::Tensor> batch;
    for (int i = 0; i < options.batch_size; ++i)
      batch.push_back(domain[order[static_cast<std::size_t>(step * options.batch_size + i)]]);
    return torch::stack(batch);
  };

  for (int epoch = engine.epoch(); epoch < options.epochs; ++epoch) {
    engine.apply_lr_schedule(epoch, options.epochs);
    std::vector<std::size_t> order_a(domain_a.size()), order_b(domain_b.size());
    for (std::size_t i = 0; i < order_a.size(); ++i) order_a[i] = i;
    for (std::size_t i = 0; i < order_b.size(); ++i) order_b[i] = i;
    deterministic_shuffle(order_a, engine.order_rng());
    deterministic_shuffle(order_b, engine.order_rng());

    LossRecord sums;
    for (int step = 0; step < steps; ++step) {
      LossRecord r = engine.train_step(gather(domain_a, order_a, step),
                                       gather(domain_b, order_b, step));
      sums.adv_g_ab += r.adv_g_ab;
      sums.adv_g_ba += r.adv_g_ba;
      sums.cycle += r.cycle;
      sums.identity += r.identity;
      sums.total_generator += r.total_generator;
      sums.disc_a += r.disc_a;
      sums.disc_b += r.disc_b;
    }
    LossRecord means{sums.adv_g_ab / steps, sums.adv_g_ba / steps,  sums.cycle / steps,
                     sums.identity / steps, sums.total_generator / steps,
                     sums.disc_a / steps,   sums.disc_b / steps};
    engine.advance_epoch(means);
    result.epoch_means.push_back(means);

    char name[32];
    std::snprintf(name, sizeof(name), "epoch_%04d", epoch + 1);
    auto dir = checkpoint_root / name;
    engine.save_checkpoint(dir);
    result.checkpoints.push_back(dir);
    if (on_epoch) on_epoch(epoch + 1, means);
  }
  return result;
}

}  // namespace framerestore::gan

#endif
