// tests/test_train.cc

// Copyright 2026  pedfuse authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <filesystem>

#include "doctest.h"
#include "pedfuse/model/checkpoint.h"
#include "pedfuse/nn/adam.h"
#include "pedfuse/pipeline/losses.h"
#include "pedfuse/pipeline/train.h"
#include "pedfuse/rng.h"

using namespace pedfuse;
namespace fs = std::filesystem;

namespace {

// Desk-size model so the loop itself can be exercised quickly.
ModelConfig tiny_config() {
  ModelConfig cfg;
  cfg.feature_dim = 32;
  cfg.audio_channels = 8;
  cfg.visual_channels = 8;
  cfg.conv_channels_per_scale = 4;
  cfg.visual_stage_channels = {4, 4, 8, 8};
  cfg.detect_hidden = 16;
  cfg.regress_hidden = {32, 16};
  cfg.input_size = 64;
  cfg.seg_base = 8;
  cfg.seg_channels = 4;
  return cfg;
}

// Synthetic in-memory store: spectrogram patterns carry the box position so
// the task is learnable; masks follow the in-FOV flag.
SampleStore synthetic_store(size_t n, uint64_t seed, int size = 64) {
  SampleStore store;
  store.config.target_size = size;
  Rng rng(seed);
  for (size_t i = 0; i < n; ++i) {
    StoreSample s;
    s.id = "t" + std::to_string(i);
    s.split = (i % 5 == 4) ? 1 : 0;  // 80/20
    const double x = rng.uniform(-2, 2);
    const double y = rng.uniform(-1.5, 1.5);
    // Yaw varies smoothly with position so the memorization target carries
    // structure instead of per-sample noise.
    s.box = {x, y, 0.85, 0.5, 0.5, 1.7, wrap_angle(0.8 * x + 0.6 * y)};
    s.in_fov = x > 0;
    s.d = s.in_fov ? 1.0 : 0.0;

    // Value scale matches log1p mel power on real footsteps (~0..10); the
    // two terms keep x and y separately recoverable from the pattern.
    s.mel = Tensor<float>({4, 16, 9});
    for (int c = 0; c < 4; ++c)
      for (size_t j = 0; j < 16 * 9; ++j)
        s.mel[c * 16 * 9 + j] = 4.0f * static_cast<float>(
            std::abs(std::sin(0.9 * x + 0.3 * c + 0.07 * j)) +
            std::abs(std::sin(1.3 * y + 0.5 * c + 0.11 * j)));

    s.image.width = size;
    s.image.height = size;
    s.image.channels = 3;
    s.image.pixels.assign(static_cast<size_t>(size) * size * 3, 90);
    Tensor<float> mask({size, size});
    if (s.in_fov) {
      const int cx = static_cast<int>((y + 1.5) / 3.0 * (size - 8)) + 4;
      for (int yy = size / 3; yy < size - 4; ++yy)
        for (int xx = cx - 3; xx < cx + 3; ++xx) {
          for (int ch = 0; ch < 3; ++ch)
            s.image.pixels[(yy * size + xx) * 3 + ch] = 220;
          mask.at(yy, xx) = 1.0f;
        }
    }
    s.mask_bits = pack_mask(mask);
    store.samples.push_back(std::move(s));
  }
  return store;
}

std::vector<float> snapshot(const PedFuseNet<float>& net) {
  std::vector<float> out;
  for (size_t i = 0; i < net.params().size(); ++i) {
    const auto& v = net.params()[i].value;
    out.insert(out.end(), v.data(), v.data() + v.numel());
  }
  return out;
}

}  // namespace

TEST_CASE("train: step count and log shape") {
  auto store = synthetic_store(200, 3);
  PedFuseNet<float> net(tiny_config());
  TrainConfig cfg;
  cfg.epochs = 2;
  cfg.batch_size = 16;
  cfg.out_dir = "train_test_out";
  fs::remove_all(cfg.out_dir);

  auto idx = store.split_of(0);
  REQUIRE(idx.size() == 160);
  auto result = train_on(net, store, idx, store.split_of(1), cfg);
  REQUIRE(result.log.epochs.size() == 2);
  CHECK(result.log.epochs[0].steps == 10);  // 160 samples / batch 16
  CHECK(result.log.epochs[0].loss_t > 0.0);
  CHECK(result.best_epoch >= 0);
  CHECK(fs::exists(result.checkpoint_path));
  CHECK(fs::exists(fs::path(cfg.out_dir) / "train_log.jsonl"));
  fs::remove_all(cfg.out_dir);
}

TEST_CASE("train: same seed gives identical loss sequences") {
  auto store = synthetic_store(60, 4);
  TrainConfig cfg;
  cfg.epochs = 3;
  cfg.batch_size = 8;
  cfg.seed = 99;
  cfg.validate_every_epoch = false;

  PedFuseNet<float> net1(tiny_config());
  PedFuseNet<float> net2(tiny_config());
  auto r1 = train_on(net1, store, store.split_of(0), {}, cfg);
  auto r2 = train_on(net2, store, store.split_of(0), {}, cfg);
  REQUIRE(r1.log.epochs.size() == r2.log.epochs.size());
  for (size_t e = 0; e < r1.log.epochs.size(); ++e) {
    CHECK(r1.log.epochs[e].loss_r == r2.log.epochs[e].loss_r);
    CHECK(r1.log.epochs[e].loss_d == r2.log.epochs[e].loss_d);
    CHECK(r1.log.epochs[e].loss_s == r2.log.epochs[e].loss_s);
    CHECK(r1.log.epochs[e].loss_t == r2.log.epochs[e].loss_t);
  }
  CHECK(snapshot(net1) == snapshot(net2));

  // A different seed takes a different path.
  PedFuseNet<float> net3(tiny_config());
  TrainConfig cfg3 = cfg;
  cfg3.seed = 100;
  auto r3 = train_on(net3, store, store.split_of(0), {}, cfg3);
  CHECK(r3.log.epochs[0].loss_t != r1.log.epochs[0].loss_t);

  std::remove("best.ckpt");
}

TEST_CASE("train: thread count does not change the result") {
  auto store = synthetic_store(40, 8);
  TrainConfig cfg;
  cfg.epochs = 1;
  cfg.batch_size = 8;
  cfg.validate_every_epoch = false;

  PedFuseNet<float> net1(tiny_config());
  cfg.num_threads = 1;
  auto r1 = train_on(net1, store, store.split_of(0), {}, cfg);

  PedFuseNet<float> net4(tiny_config());
  cfg.num_threads = 4;
  auto r4 = train_on(net4, store, store.split_of(0), {}, cfg);

  CHECK(r1.log.epochs[0].loss_t == r4.log.epochs[0].loss_t);
  CHECK(snapshot(net1) == snapshot(net4));
  std::remove("best.ckpt");
}

TEST_CASE("adam: zero learning rate leaves parameters unchanged") {
  auto store = synthetic_store(16, 5);
  PedFuseNet<float> net(tiny_config());
  const auto before = snapshot(net);

  TrainConfig cfg;
  cfg.epochs = 1;
  cfg.batch_size = 16;
  cfg.validate_every_epoch = false;
  cfg.lr = 0.0;
  // lr = 0 fails config validation by design; drive the optimizer directly.
  CHECK_THROWS_AS(cfg.validate(), ConfigError);

  std::vector<size_t> all(store.samples.size());
  for (size_t i = 0; i < all.size(); ++i) all[i] = i;
  nn::Adam<float> adam(0.0f);
  std::vector<Tensor<float>> grads;
  for (size_t i = 0; i < net.params().size(); ++i) {
    grads.push_back(Tensor<float>(net.params()[i].value.shape()));
    for (size_t j = 0; j < grads.back().numel(); ++j)
      grads.back()[j] = 0.1f * static_cast<float>(j % 7);
  }
  adam.step(net.params(), grads);
  CHECK(snapshot(net) == before);
}

TEST_CASE("train: overfits a 16-sample memorization set end to end") {
  // Gradient-flow smoke test: 200 epochs of per-sample updates must drive
  // the total loss far down and every component must move. The measured
  // floor for this architecture sits near 12% of the initial loss (the
  // auxiliary cross-entropies bottom out well above zero and the attention
  // gate closes features for out-of-view samples), so that is the pinned
  // contract rather than an arbitrary smaller number.
  auto store = synthetic_store(16, 6);
  for (auto& s : store.samples) s.split = 0;
  PedFuseNet<float> net(tiny_config());

  TrainConfig cfg;
  cfg.epochs = 200;
  cfg.batch_size = 1;  // 16 samples -> 3200 optimizer steps
  cfg.lr = 3e-3;       // memorization schedule; the default 1e-4 moves each
                       // parameter by at most epochs * lr over this budget
  cfg.validate_every_epoch = false;

  auto result = train_on(net, store, store.split_of(0), {}, cfg);
  const auto& first = result.log.epochs.front();
  const auto& last = result.log.epochs.back();
  CHECK(last.loss_t < 0.15 * first.loss_t);
  CHECK(last.loss_r < 0.30 * first.loss_r);
  CHECK(last.loss_d < 0.10 * first.loss_d);
  CHECK(last.loss_s < 0.30 * first.loss_s);
  std::remove("best.ckpt");
}

TEST_CASE("infer: deterministic, label-free, total on dark input") {
  PedFuseNet<float> net(tiny_config());
  AudioSegment seg;
  seg.sample_rate = 48000;
  seg.samples.assign(4, std::vector<float>(19200));
  Rng rng(9);
  for (auto& ch : seg.samples)
    for (auto& v : ch) v = static_cast<float>(rng.uniform(-0.5, 0.5));
  Tensor<float> image({3, 64, 64});
  for (size_t i = 0; i < image.numel(); ++i)
    image[i] = static_cast<float>(rng.uniform());

  MelParams mp;
  mp.n_mels = 16;
  const auto r1 = infer(net, seg, image, mp);
  const auto r2 = infer(net, seg, image, mp);
  CHECK(r1.box.center.x == r2.box.center.x);
  CHECK(r1.dhat == r2.dhat);
  r1.box.validate();

  // Black image still yields a finite box.
  Tensor<float> dark({3, 64, 64});
  const auto rd = infer(net, seg, dark, mp);
  CHECK(std::isfinite(rd.box.center.x));
  CHECK(std::isfinite(rd.box.size.z));
  rd.box.validate();
}
