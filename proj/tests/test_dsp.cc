// tests/test_dsp.cc

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
#include <complex>
#include <vector>

#include "doctest.h"
#include "pedfuse/fft.h"
#include "pedfuse/geometry.h"
#include "pedfuse/mel.h"
#include "pedfuse/rng.h"
#include "pedfuse/wav.h"

using namespace pedfuse;

namespace {

// Quadratic-cost DFT used as the oracle for the radix-2 implementation.
std::vector<std::complex<double>> naive_dft(
    const std::vector<std::complex<double>>& x) {
  const size_t n = x.size();
  std::vector<std::complex<double>> out(n);
  for (size_t k = 0; k < n; ++k) {
    std::complex<double> acc(0, 0);
    for (size_t j = 0; j < n; ++j) {
      const double ang = -2.0 * kPi * static_cast<double>(k * j) / n;
      acc += x[j] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    out[k] = acc;
  }
  return out;
}

}  // namespace

TEST_CASE("fft matches naive dft") {
  Rng rng(123);
  for (size_t n : {8u, 64u, 256u}) {
    std::vector<std::complex<double>> x(n);
    for (auto& v : x) v = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
    auto expect = naive_dft(x);
    auto got = x;
    fft_inplace(got);
    for (size_t k = 0; k < n; ++k) {
      CHECK(std::abs(got[k] - expect[k]) < 1e-9);
    }
  }
}

TEST_CASE("fft round trip") {
  Rng rng(7);
  std::vector<std::complex<double>> x(2048);
  for (auto& v : x) v = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
  auto y = x;
  fft_inplace(y);
  fft_inplace(y, /*inverse=*/true);
  for (size_t i = 0; i < x.size(); ++i) CHECK(std::abs(y[i] - x[i]) < 1e-10);
}

TEST_CASE("mel frame count for the default segment") {
  // 0.4 s at 48 kHz, window 2048, hop 1024.
  CHECK(stft_num_frames(19200, 2048, 1024) == 17);
  // Formula holds across random valid lengths.
  Rng rng(99);
  for (int i = 0; i < 50; ++i) {
    const size_t len = 2048 + rng.uniform_int(100000);
    const int expect = static_cast<int>((len - 2048) / 1024) + 1;
    CHECK(stft_num_frames(len, 2048, 1024) == expect);
  }
}

TEST_CASE("mel spectrogram shape, non-negativity, zero input") {
  MelParams p;
  std::vector<std::vector<float>> chans(4, std::vector<float>(19200, 0.0f));
  auto spec = mel_spectrogram(chans, p);
  REQUIRE(spec.shape() == std::vector<int>{4, 128, 17});
  for (size_t i = 0; i < spec.numel(); ++i) CHECK(spec[i] == 0.0f);

  Rng rng(5);
  for (auto& ch : chans)
    for (auto& v : ch) v = static_cast<float>(rng.uniform(-1, 1));
  spec = mel_spectrogram(chans, p);
  for (size_t i = 0; i < spec.numel(); ++i) CHECK(spec[i] >= 0.0f);
}

TEST_CASE("mel rejects short segments") {
  MelParams p;
  std::vector<std::vector<float>> chans(4, std::vector<float>(1024, 0.0f));
  CHECK_THROWS_AS(mel_spectrogram(chans, p), ConfigError);
}

TEST_CASE("1 kHz tone lands in the predicted mel band") {
  MelParams p;
  const double f0 = 1000.0;
  std::vector<std::vector<float>> chans(1, std::vector<float>(19200));
  for (size_t i = 0; i < chans[0].size(); ++i)
    chans[0][i] =
        static_cast<float>(std::sin(2.0 * kPi * f0 * i / p.sample_rate));
  auto spec = mel_spectrogram(chans, p);

  // Band whose center is nearest 1 kHz on the mel scale.
  const auto centers = mel_band_centers_hz(p);
  int predicted = 0;
  double best = 1e18;
  for (int m = 0; m < p.n_mels; ++m) {
    const double d = std::abs(hz_to_mel(centers[m]) - hz_to_mel(f0));
    if (d < best) {
      best = d;
      predicted = m;
    }
  }

  const int frames = spec.dim(2);
  for (int t = 0; t < frames; ++t) {
    int argmax = 0;
    float vmax = -1;
    for (int m = 0; m < p.n_mels; ++m) {
      if (spec.at(0, m, t) > vmax) {
        vmax = spec.at(0, m, t);
        argmax = m;
      }
    }
    CHECK(std::abs(argmax - predicted) <= 1);
  }
}

TEST_CASE("channel permutation permutes spectrogram channels") {
  MelParams p;
  Rng rng(17);
  std::vector<std::vector<float>> chans(4, std::vector<float>(4096));
  for (auto& ch : chans)
    for (auto& v : ch) v = static_cast<float>(rng.uniform(-1, 1));
  auto spec = mel_spectrogram(chans, p);

  std::vector<std::vector<float>> permuted = {chans[2], chans[0], chans[3],
                                              chans[1]};
  auto spec_p = mel_spectrogram(permuted, p);
  const int perm[4] = {2, 0, 3, 1};
  const size_t plane = spec.numel() / 4;
  for (int c = 0; c < 4; ++c)
    for (size_t i = 0; i < plane; ++i)
      CHECK(spec_p[c * plane + i] == spec[perm[c] * plane + i]);
}

TEST_CASE("wav round trip") {
  Rng rng(31);
  AudioBuffer a;
  a.sample_rate = 48000;
  a.channels.assign(4, std::vector<float>(1000));
  for (auto& ch : a.channels)
    for (auto& v : ch) v = static_cast<float>(rng.uniform(-0.9, 0.9));

  const std::string path = "test_roundtrip.wav";
  write_wav_s16le(path, a);
  AudioBuffer b = read_wav_s16le(path);
  REQUIRE(b.sample_rate == 48000);
  REQUIRE(b.num_channels() == 4);
  REQUIRE(b.num_samples() == 1000);
  for (int c = 0; c < 4; ++c)
    for (size_t i = 0; i < 1000; ++i)
      CHECK(std::abs(b.channels[c][i] - a.channels[c][i]) < 1.0 / 32000.0);
  std::remove(path.c_str());
}

TEST_CASE("rng determinism and ranges") {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
  Rng c(1);
  for (int i = 0; i < 1000; ++i) {
    const double u = c.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("wrap_angle maps into (-pi, pi]") {
  CHECK(wrap_angle(kPi) == doctest::Approx(kPi));
  CHECK(wrap_angle(-kPi) == doctest::Approx(kPi));
  CHECK(wrap_angle(2 * kPi - 0.2) == doctest::Approx(-0.2));
  CHECK(wrap_angle(0.3) == doctest::Approx(0.3));
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    const double a = rng.uniform(-50, 50);
    const double w = wrap_angle(a);
    CHECK(w > -kPi - 1e-12);
    CHECK(w <= kPi + 1e-12);
    // Same angle modulo 2*pi.
    CHECK(std::abs(std::remainder(a - w, 2 * kPi)) < 1e-9);
  }
}
