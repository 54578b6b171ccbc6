// benchmarks/bench_dsp.cc

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

#include "pedfuse/fft.h"
#include "pedfuse/image.h"
#include "pedfuse/mel.h"
#include "pedfuse/rng.h"

using namespace pedfuse;

static void BM_Fft2048(benchmark::State& state) {
  Rng rng(1);
  std::vector<std::complex<double>> x(2048);
  for (auto& v : x) v = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
  for (auto _ : state) {
    auto y = x;
    fft_inplace(y);
    benchmark::DoNotOptimize(y);
  }
}
BENCHMARK(BM_Fft2048);

static void BM_MelSegment(benchmark::State& state) {
  Rng rng(2);
  std::vector<std::vector<float>> chans(4, std::vector<float>(19200));
  for (auto& ch : chans)
    for (auto& v : ch) v = static_cast<float>(rng.uniform(-1, 1));
  MelParams p;
  for (auto _ : state) {
    auto spec = mel_spectrogram(chans, p);
    benchmark::DoNotOptimize(spec);
  }
}
BENCHMARK(BM_MelSegment);

static void BM_ResizeMelTo256(benchmark::State& state) {
  Rng rng(3);
  Tensor<float> mel({4, 128, 17});
  for (size_t i = 0; i < mel.numel(); ++i)
    mel[i] = static_cast<float>(rng.uniform(0, 10));
  for (auto _ : state) {
    auto r = resize_bilinear(mel, 256, 256);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_ResizeMelTo256);

BENCHMARK_MAIN();
