#include <gtest/gtest.h>
#include <torch/torch.h>

#include <filesystem>

#include "framerestore/gan/engine.hpp"

namespace fg = framerestore::gan;
namespace fr = framerestore;
namespace fs = std::filesystem;

namespace {

fg::GeneratorConfig micro_gen() { return {4, 1}; }
fg::DiscriminatorConfig micro_disc() { return {4, 1}; }

fg::TrainOptions micro_options(std::uint64_t seed = 17) {
  fg::TrainOptions o;
  o.seed = seed;
  o.deterministic = true;
  o.pool_capacity = 4;
  return o;
}

torch::Tensor seeded_batch(std::uint64_t seed, int n = 1, int size = 8) {
  torch::manual_seed(seed);
  return torch::rand({n, 3, size, size}) * 2 - 1;
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("framerestore_engine_" + tag);
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::vector<torch::Tensor> seeded_domain(std::uint64_t seed, int n, int size = 8) {
  torch::manual_seed(seed);
  std::vector<torch::Tensor> out;
  for (int i = 0; i < n; ++i) out.push_back(torch::rand({3, size, size}) * 2 - 1);
  return out;
}

}  // namespace

TEST(LrSchedule, ConstantThenLinearDecay) {
  // 30 epochs: flat for 15, then strictly decreasing toward zero.
  EXPECT_DOUBLE_EQ(fg::lr_multiplier(0, 30), 1.0);
  EXPECT_DOUBLE_EQ(fg::lr_multiplier(14, 30), 1.0);
  double prev = 1.0;
  for (int e = 15; e < 30; ++e) {
    double m = fg::lr_multiplier(e, 30);
    EXPECT_LT(m, prev);
    EXPECT_GT(m, 0.0);
    prev = m;
  }
  EXPECT_NEAR(fg::lr_multiplier(29, 30), 1.0 / 16.0, 1e-12);
  // Single-epoch run never decays.
  EXPECT_DOUBLE_EQ(fg::lr_multiplier(0, 1), 1.0);
}

TEST(Engine, TrainStepProducesFiniteRecord) {
  fg::CycleGanEngine engine(micro_gen(), micro_disc(), {}, micro_options());
  auto record = engine.train_step(seeded_batch(1), seeded_batch(2));
  for (double v : {record.adv_g_ab, record.adv_g_ba, record.cycle, record.identity,
                   record.total_generator, record.disc_a, record.disc_b})
    EXPECT_TRUE(std::isfinite(v));
  EXPECT_GT(record.total_generator, 0.0);
}

TEST(Engine, TotalCombinesPartsWithWeights) {
  fg::LossWeights weights{1.0, 10.0, 5.0};
  fg::CycleGanEngine engine(micro_gen(), micro_disc(), weights, micro_options());
  auto record = engine.train_step(seeded_batch(3), seeded_batch(4));
  double expected = record.adv_g_ab + record.adv_g_ba + 10.0 * record.cycle + 5.0 * record.identity;
  EXPECT_NEAR(record.total_generator, expected, 1e-5);  // parts and total are float32 sums
}

TEST(Engine, DeterministicLossRecords) {
  // Two fresh engines with the same seed produce bit-identical records.
  auto run = [] {
    fg::CycleGanEngine engine(micro_gen(), micro_disc(), {}, micro_options(23));
    std::vector<fg::LossRecord> records;
    for (int step = 0; step < 5; ++step)
      records.push_back(engine.train_step(seeded_batch(100 + step), seeded_batch(200 + step)));
    return records;
  };
  auto a = run();
  auto b = run();
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i], b[i]) << "step " << i;
}

TEST(Engine, RestoredStateReplaysIdenticalStep) {
  TempDir dir("replay");
  fg::CycleGanEngine engine(micro_gen(), micro_disc(), {}, micro_options(31));
  engine.train_step(seeded_batch(11), seeded_batch(12));
  engine.save_checkpoint(dir.path / "ckpt");

  auto next = engine.train_step(seeded_batch(13), seeded_batch(14));

  fg::CycleGanEngine restored(micro_gen(), micro_disc(), {}, micro_options(31));
  restored.load_checkpoint(dir.path / "ckpt");
  auto replayed = restored.train_step(seeded_batch(13), seeded_batch(14));
  EXPECT_EQ(next, replayed);
}

TEST(Engine, CheckpointHashGuardsArchitecture) {
  TempDir dir("hash");
  fg::CycleGanEngine engine(micro_gen(), micro_disc(), {}, micro_options());
  engine.save_checkpoint(dir.path / "ckpt");
  fg::CycleGanEngine other({8, 2}, micro_disc(), {}, micro_options());
  EXPECT_THROW(other.load_checkpoint(dir.path / "ckpt"), fr::ConfigError);
}

TEST(Engine, GeneratorStepDescendsAtTinyLearningRate) {
  // One generator update at lr 1e-5 must not increase the objective on the
  // same batch (discriminators untouched in between).
  fg::TrainOptions options = micro_options(41);
  options.lr = 1e-5;
  fg::CycleGanEngine engine(micro_gen(), micro_disc(), {}, options);
  auto a = seeded_batch(51), b = seeded_batch(52);
  double before = engine.evaluate_generator_objective(a, b);
  engine.generator_update(a, b);
  double after = engine.evaluate_generator_objective(a, b);
  EXPECT_LE(after, before + 1e-9);
}

TEST(Engine, NonFiniteBatchAborts) {
  fg::CycleGanEngine engine(micro_gen(), micro_disc(), {}, micro_options());
  auto poisoned = seeded_batch(61);
  poisoned[0][0][0][0] = std::numeric_limits<float>::quiet_NaN();
  EXPECT_THROW(engine.train_step(poisoned, seeded_batch(62)), fr::NumericError);
}

TEST(Engine, ShapeMismatchRejected) {
  fg::CycleGanEngine engine(micro_gen(), micro_disc(), {}, micro_options());
  EXPECT_THROW(engine.train_step(torch::rand({1, 3, 8}), seeded_batch(1)), fr::DataError);
}

TEST(Fit, SingleEpochEmitsOneCheckpoint) {
  TempDir dir("fit_smoke");
  fg::TrainOptions options = micro_options(71);
  options.epochs = 1;
  fg::CycleGanEngine engine(micro_gen(), micro_disc(), {}, options);
  auto result = fg::fit(engine, seeded_domain(1, 4), seeded_domain(2, 4), dir.path / "ckpts");
  ASSERT_EQ(result.checkpoints.size(), 1u);
  EXPECT_EQ(result.steps_per_epoch, 4);
  EXPECT_TRUE(fs::exists(result.checkpoints[0] / "manifest.json"));
  EXPECT_TRUE(fs::exists(result.checkpoints[0] / "g_ab.pt"));
  auto manifest = fg::CycleGanEngine::read_checkpoint_manifest(result.checkpoints[0]);
  EXPECT_EQ(manifest.at("epoch").get<int>(), 1);
  EXPECT_EQ(manifest.at("config_hash").get<std::string>(), engine.config_hash());
  EXPECT_FALSE(manifest.at("loss_means").is_null());
}

TEST(Fit, ResumeReproducesNextEpochBitExactly) {
  TempDir dir("fit_resume");
  auto domain_a = seeded_domain(5, 4);
  auto domain_b = seeded_domain(6, 4);

  fg::TrainOptions two_epochs = micro_options(77);
  two_epochs.epochs = 2;
  fg::CycleGanEngine full(micro_gen(), micro_disc(), {}, two_epochs);
  auto full_result = fg::fit(full, domain_a, domain_b, dir.path / "full");
  ASSERT_EQ(full_result.epoch_means.size(), 2u);

  fg::CycleGanEngine resumed(micro_gen(), micro_disc(), {}, two_epochs);
  resumed.load_checkpoint(dir.path / "full" / "epoch_0001");
  auto resumed_result = fg::fit(resumed, domain_a, domain_b, dir.path / "resumed");
  ASSERT_EQ(resumed_result.epoch_means.size(), 1u);
  EXPECT_EQ(resumed_result.epoch_means[0], full_result.epoch_means[1]);
}

TEST(Fit, EmptyDomainRejected) {
  fg::TrainOptions options = micro_options();
  fg::CycleGanEngine engine(micro_gen(), micro_disc(), {}, options);
  std::vector<torch::Tensor> empty;
  EXPECT_THROW(fg::fit(engine, empty, seeded_domain(1, 2), "/tmp/nope"), fr::DataError);
}
