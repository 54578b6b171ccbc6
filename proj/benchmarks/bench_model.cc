// benchmarks/bench_model.cc

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

#include <benchmark/benchmark.h>

#include "pedfuse/eval/metrics.h"
#include "pedfuse/model/net.h"
#include "pedfuse/nn/graph.h"
#include "pedfuse/rng.h"

using namespace pedfuse;

namespace {

Tensor<float> random_tensor(std::vector<int> shape, uint64_t seed, float lo,
                            float hi) {
  Tensor<float> t(std::move(shape));
  Rng rng(seed);
  for (size_t i = 0; i < t.numel(); ++i)
    t[i] = static_cast<float>(rng.uniform(lo, hi));
  return t;
}

}  // namespace

static void BM_ForwardInference(benchmark::State& state) {
  ModelConfig cfg;
  PedFuseNet<float> net(cfg);
  const auto mel = random_tensor({4, 256, 256}, 1, 0.0f, 8.0f);
  const auto img = random_tensor({3, 256, 256}, 2, 0.0f, 1.0f);
  for (auto _ : state) {
    auto out = net.forward(mel, img, /*with_segmentation=*/false);
    benchmark::DoNotOptimize(out);
  }
}
BENCHMARK(BM_ForwardInference)->Unit(benchmark::kMillisecond);

static void BM_ForwardBackward(benchmark::State& state) {
  ModelConfig cfg;
  PedFuseNet<float> net(cfg);
  const auto mel = random_tensor({4, 256, 256}, 3, 0.0f, 8.0f);
  const auto img = random_tensor({3, 256, 256}, 4, 0.0f, 1.0f);
  Tensor<float> box_target({7});
  Tensor<float> mask({256, 256});
  for (auto _ : state) {
    nn::Graph<float> g;
    const auto f = net.build(g, mel, img, {});
    const int lr_ = nn::mse_box_loss(g, f.box, box_target);
    const int ld = nn::bce_scalar_loss(g, f.dhat, 1.0f);
    const int p1 = nn::slice_channel(g, f.seg, 1);
    const int ls = nn::bce_map_loss(g, p1, mask);
    const int lt = nn::weighted_sum(g, {lr_, ld, ls}, {1.0f, 0.3f, 0.3f});
    g.backward(lt);
    benchmark::DoNotOptimize(g);
  }
}
BENCHMARK(BM_ForwardBackward)->Unit(benchmark::kMillisecond);

static void BM_Iou3d(benchmark::State& state) {
  Rng rng(5);
  std::vector<Box3D> boxes;
  for (int i = 0; i < 256; ++i)
    boxes.push_back(Box3D{{rng.uniform(-2, 2), rng.uniform(-2, 2), 0.85},
                          {0.5, 0.5, 1.7},
                          0.0});
  size_t i = 0;
  for (auto _ : state) {
    const double v = iou3d(boxes[i % 256], boxes[(i + 1) % 256]);
    benchmark::DoNotOptimize(v);
    ++i;
  }
}
BENCHMARK(BM_Iou3d);
