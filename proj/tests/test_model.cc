// tests/test_model.cc

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
#include <cstdio>
#include <filesystem>

#include "doctest.h"
#include "pedfuse/model/checkpoint.h"
#include "pedfuse/model/net.h"
#include "pedfuse/nn/adam.h"
#include "pedfuse/nn/graph.h"
#include "pedfuse/rng.h"

using namespace pedfuse;

namespace {

Tensor<float> random_input(std::vector<int> shape, uint64_t seed,
                           float lo = 0.0f, float hi = 1.0f) {
  Tensor<float> t(std::move(shape));
  Rng rng(seed);
  for (size_t i = 0; i < t.numel(); ++i)
    t[i] = static_cast<float>(rng.uniform(lo, hi));
  return t;
}

bool bitwise_equal(const std::array<float, 7>& a, const std::array<float, 7>& b) {
  for (int i = 0; i < 7; ++i)
    if (a[static_cast<size_t>(i)] != b[static_cast<size_t>(i)]) return false;
  return true;
}

}  // namespace

TEST_CASE("model: declared output shapes") {
  ModelConfig cfg;
  PedFuseNet<float> net(cfg);
  const auto mel = random_input({4, 256, 256}, 1, 0.0f, 8.0f);
  const auto img = random_input({3, 256, 256}, 2);

  const auto af = net.audio_forward(mel);
  CHECK(af.shape() == std::vector<int>{64, 512});
  const auto vf = net.visual_forward(img);
  CHECK(vf.shape() == std::vector<int>{64, 512});
  const float dhat = net.detect_head(vf);
  CHECK(dhat >= 0.0f);
  CHECK(dhat <= 1.0f);
  const auto fused = net.fuse(af, vf, dhat);
  CHECK(fused.shape() == std::vector<int>{512});
  const auto box = net.regress_head(fused);
  CHECK(box[3] > 0.0f);
  CHECK(box[4] > 0.0f);
  CHECK(box[5] > 0.0f);
  CHECK(box[6] > -3.1415927f);
  CHECK(box[6] <= 3.1415927f);
  const auto seg = net.seg_decode(af);
  CHECK(seg.shape() == std::vector<int>{2, 256, 256});

  const auto out = net.forward(mel, img, /*with_segmentation=*/true);
  CHECK(out.seg.shape() == std::vector<int>{2, 256, 256});
}

TEST_CASE("model: zero spectrogram gives a constant bias image") {
  ModelConfig cfg;
  PedFuseNet<float> net(cfg);
  Tensor<float> zero({4, 256, 256});
  const auto a1 = net.audio_forward(zero);
  Tensor<float> zero2({4, 256, 256});
  const auto a2 = net.audio_forward(zero2);
  for (size_t i = 0; i < a1.numel(); ++i) CHECK(a1[i] == a2[i]);
}

TEST_CASE("model: deterministic inference") {
  ModelConfig cfg;
  PedFuseNet<float> net(cfg);
  const auto mel = random_input({4, 256, 256}, 3, 0.0f, 5.0f);
  const auto img = random_input({3, 256, 256}, 4);
  const auto o1 = net.forward(mel, img);
  const auto o2 = net.forward(mel, img);
  CHECK(bitwise_equal(o1.box, o2.box));
  CHECK(o1.dhat == o2.dhat);
}

TEST_CASE("model: head squashing ranges over random inputs") {
  ModelConfig cfg;
  PedFuseNet<float> net(cfg);
  Rng rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    Tensor<float> vf({64, 512});
    for (size_t i = 0; i < vf.numel(); ++i)
      vf[i] = static_cast<float>(rng.uniform(-20, 20));
    const float d = net.detect_head(vf);
    CHECK(d >= 0.0f);
    CHECK(d <= 1.0f);

    Tensor<float> fused({512});
    for (size_t i = 0; i < fused.numel(); ++i)
      fused[i] = static_cast<float>(rng.uniform(-20, 20));
    const auto box = net.regress_head(fused);
    CHECK(box[3] > 0.0f);
    CHECK(box[4] > 0.0f);
    CHECK(box[5] > 0.0f);
    CHECK(box[6] > -3.14159275f);
    CHECK(box[6] <= 3.14159275f);
  }
}

TEST_CASE("model: gate annihilation in literal mode") {
  ModelConfig cfg;
  cfg.gating = GatingMode::kLiteral;
  PedFuseNet<float> net(cfg);

  std::array<float, 7> reference{};
  for (int trial = 0; trial < 10; ++trial) {
    const auto mel = random_input({4, 256, 256}, 100 + trial, 0.0f, 6.0f);
    const auto img = random_input({3, 256, 256}, 200 + trial);

    nn::Graph<float> g;
    PedFuseNet<float>::BuildOptions opt;
    opt.forced_gate = 0.0f;
    opt.with_segmentation = false;
    const auto f = net.build(g, mel, img, opt);
    const auto& fused = g.value(f.fused);
    for (size_t i = 0; i < fused.numel(); ++i) CHECK(fused[i] == 0.0f);
    const auto& box = g.value(f.box);
    std::array<float, 7> out{};
    for (int i = 0; i < 7; ++i) out[static_cast<size_t>(i)] = box[i];
    if (trial == 0)
      reference = out;
    else
      CHECK(bitwise_equal(out, reference));
  }
}

TEST_CASE("model: visual-only gating ignores the image at gate 0") {
  ModelConfig cfg;
  cfg.gating = GatingMode::kVisualOnly;
  PedFuseNet<float> net(cfg);

  const auto mel = random_input({4, 256, 256}, 42, 0.0f, 6.0f);
  const auto img1 = random_input({3, 256, 256}, 43);
  const auto img2 = random_input({3, 256, 256}, 44);  // perturbed image

  auto run = [&](const Tensor<float>& img) {
    nn::Graph<float> g;
    PedFuseNet<float>::BuildOptions opt;
    opt.forced_gate = 0.0f;
    opt.with_segmentation = false;
    const auto f = net.build(g, mel, img, opt);
    std::array<float, 7> out{};
    for (int i = 0; i < 7; ++i) out[static_cast<size_t>(i)] = g.value(f.box)[i];
    return out;
  };
  CHECK(bitwise_equal(run(img1), run(img2)));

  // Audio-only sufficiency: with a unit gate the image does matter.
  auto run_gate1 = [&](const Tensor<float>& img) {
    nn::Graph<float> g;
    PedFuseNet<float>::BuildOptions opt;
    opt.forced_gate = 1.0f;
    opt.with_segmentation = false;
    const auto f = net.build(g, mel, img, opt);
    std::array<float, 7> out{};
    for (int i = 0; i < 7; ++i) out[static_cast<size_t>(i)] = g.value(f.box)[i];
    return out;
  };
  CHECK_FALSE(bitwise_equal(run_gate1(img1), run_gate1(img2)));
}

TEST_CASE("model: both gating modes agree at gate 1") {
  ModelConfig lit;
  lit.gating = GatingMode::kLiteral;
  ModelConfig vis = lit;
  vis.gating = GatingMode::kVisualOnly;
  PedFuseNet<float> net_lit(lit);
  PedFuseNet<float> net_vis(vis);

  Tensor<float> af = random_input({64, 512}, 7, -1.0f, 1.0f);
  Tensor<float> vf = random_input({64, 512}, 8, -1.0f, 1.0f);
  const auto f1 = net_lit.fuse(af, vf, 1.0f);
  const auto f2 = net_vis.fuse(af, vf, 1.0f);
  for (size_t i = 0; i < f1.numel(); ++i)
    CHECK(f1[i] == doctest::Approx(f2[i]).epsilon(1e-6));

  // Visual-only at gate 0 keeps the audio column sum.
  const auto f0 = net_vis.fuse(af, vf, 0.0f);
  for (int j = 0; j < 512; ++j) {
    float acc = 0;
    for (int c = 0; c < 64; ++c) acc += af.at(c, j);
    CHECK(f0[j] == doctest::Approx(acc).epsilon(1e-5));
  }
}

TEST_CASE("model: time translation permutes pre-pooling feature columns") {
  ModelConfig cfg;
  PedFuseNet<float> net(cfg);
  const auto mel = random_input({4, 256, 256}, 77, 0.0f, 4.0f);

  // Circular shift along the time axis by one step.
  Tensor<float> shifted({4, 256, 256});
  for (int c = 0; c < 4; ++c)
    for (int f = 0; f < 256; ++f)
      for (int t = 0; t < 256; ++t)
        shifted.at(c, f, t) = mel.at(c, f, (t + 1) % 256);

  const auto img = random_input({3, 256, 256}, 78);
  PedFuseNet<float>::BuildOptions opt;
  opt.capture_audio_maps = true;
  opt.circular_conv = true;
  opt.with_segmentation = false;

  nn::Graph<float> g0, g1;
  const auto f0 = net.build(g0, mel, img, opt);
  const auto f1 = net.build(g1, shifted, img, opt);
  REQUIRE(f0.time_maps.size() == 3);
  for (size_t s = 0; s < f0.time_maps.size(); ++s) {
    const auto& m0 = g0.value(f0.time_maps[s]);
    const auto& m1 = g1.value(f1.time_maps[s]);
    REQUIRE(m0.same_shape(m1));
    const int k = m0.dim(0), p = m0.dim(1);
    for (int ki = 0; ki < k; ++ki)
      for (int pi = 0; pi < p; ++pi)
        CHECK(m1.at(ki, pi) ==
              doctest::Approx(m0.at(ki, (pi + 1) % p)).epsilon(1e-4));
  }
}

TEST_CASE("model: per-pixel softmax sums to one") {
  ModelConfig cfg;
  PedFuseNet<float> net(cfg);
  const auto af = random_input({64, 512}, 11, -1.0f, 1.0f);
  const auto seg = net.seg_decode(af);
  const size_t plane = seg.numel() / 2;
  for (size_t i = 0; i < plane; i += 97) {
    const float sum = seg[i] + seg[plane + i];
    CHECK(std::abs(sum - 1.0f) < 1e-6f);
    CHECK(seg[plane + i] >= 0.0f);
    CHECK(seg[plane + i] <= 1.0f);
  }
}

TEST_CASE("model: frozen backbone stays bit-identical across a step") {
  ModelConfig cfg;
  cfg.backbone = BackboneMode::kFrozen;
  PedFuseNet<float> net(cfg);

  std::vector<Tensor<float>> before;
  for (size_t i = 0; i < net.params().size(); ++i)
    before.push_back(net.params()[i].value.clone());

  // One optimization step on a random sample.
  const auto mel = random_input({4, 256, 256}, 21, 0.0f, 5.0f);
  const auto img = random_input({3, 256, 256}, 22);
  nn::Graph<float> g;
  const auto f = net.build(g, mel, img, {});
  Tensor<float> target({7});
  const int loss = nn::mse_box_loss(g, f.box, target);
  g.backward(loss);

  std::vector<Tensor<float>> grads;
  for (size_t i = 0; i < net.params().size(); ++i) {
    const int leaf = f.param_leaf[i];
    grads.push_back(g.has_grad(leaf) ? g.grad(leaf).clone()
                                     : Tensor<float>(net.params()[i].value.shape()));
  }
  nn::Adam<float> adam(1e-2f);
  adam.step(net.params(), grads);

  bool any_changed = false;
  for (size_t i = 0; i < net.params().size(); ++i) {
    const auto& p = net.params()[i];
    bool changed = false;
    for (size_t j = 0; j < p.value.numel(); ++j)
      changed = changed || p.value[j] != before[i][j];
    if (p.name.rfind("visual.stage", 0) == 0) {
      CHECK_FALSE(changed);  // frozen
    }
    any_changed = any_changed || changed;
  }
  CHECK(any_changed);
}

TEST_CASE("model: checkpoint round trip") {
  ModelConfig cfg;
  cfg.gating = GatingMode::kVisualOnly;
  PedFuseNet<float> net(cfg);
  const std::string path = "model_ckpt_test.bin";
  save_checkpoint(net, path);
  auto loaded = load_checkpoint(path);
  CHECK(loaded.config().gating == GatingMode::kVisualOnly);
  const auto mel = random_input({4, 256, 256}, 31, 0.0f, 5.0f);
  const auto img = random_input({3, 256, 256}, 32);
  const auto o1 = net.forward(mel, img);
  const auto o2 = loaded.forward(mel, img);
  CHECK(bitwise_equal(o1.box, o2.box));
  CHECK(o1.dhat == o2.dhat);

  // Corruption is detected.
  {
    std::FILE* f = std::fopen(path.c_str(), "r+b");
    std::fseek(f, 2, SEEK_SET);
    std::fputc('X', f);
    std::fclose(f);
  }
  CHECK_THROWS_AS(load_checkpoint(path), IoError);
  std::remove(path.c_str());
}
