// core/src/mel.cc

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

#include "pedfuse/mel.h"

#include <cmath>

#include "pedfuse/fft.h"
#include "pedfuse/geometry.h"

namespace pedfuse {

std::vector<std::vector<double>> mel_filterbank(const MelParams& p) {
  PF_CHECK_CFG(p.n_mels > 0 && p.window > 1 && p.hop > 0, "mel: bad params");
  const int n_bins = p.window / 2 + 1;
  const double nyquist = p.sample_rate / 2.0;
  const double mel_max = hz_to_mel(nyquist);

  // n_mels + 2 edge points, uniformly spaced on the mel scale.
  std::vector<double> edges_hz(static_cast<size_t>(p.n_mels) + 2);
  for (size_t i = 0; i < edges_hz.size(); ++i)
    edges_hz[i] = mel_to_hz(mel_max * static_cast<double>(i) /
                            static_cast<double>(p.n_mels + 1));

  std::vector<std::vector<double>> fb(
      static_cast<size_t>(p.n_mels), std::vector<double>(n_bins, 0.0));
  for (int m = 0; m < p.n_mels; ++m) {
    const double f0 = edges_hz[m], f1 = edges_hz[m + 1], f2 = edges_hz[m + 2];
    for (int k = 0; k < n_bins; ++k) {
      const double f = static_cast<double>(k) * p.sample_rate / p.window;
      double w = 0.0;
      if (f > f0 && f < f1)
        w = (f - f0) / (f1 - f0);
      else if (f >= f1 && f < f2)
        w = (f2 - f) / (f2 - f1);
      fb[m][k] = w;
    }
  }
  return fb;
}

std::vector<double> mel_band_centers_hz(const MelParams& p) {
  const double mel_max = hz_to_mel(p.sample_rate / 2.0);
  std::vector<double> centers(static_cast<size_t>(p.n_mels));
  for (int m = 0; m < p.n_mels; ++m)
    centers[m] = mel_to_hz(mel_max * (m + 1) / static_cast<double>(p.n_mels + 1));
  return centers;
}

Tensor<float> mel_spectrogram(const std::vector<std::vector<float>>& channels,
                              const MelParams& p) {
  PF_CHECK_MSG(!channels.empty(), "mel: no channels");
  PF_CHECK_MSG((p.window & (p.window - 1)) == 0,
               "mel: window must be a power of two");
  const size_t len = channels[0].size();
  for (const auto& ch : channels)
    PF_CHECK_MSG(ch.size() == len, "mel: ragged channels");
  PF_CHECK_CFG(len >= static_cast<size_t>(p.window),
               "mel: segment shorter than the analysis window");

  const int frames = stft_num_frames(len, p.window, p.hop);
  const int c = static_cast<int>(channels.size());
  const auto fb = mel_filterbank(p);

  // Periodic Hann.
  std::vector<double> hann(static_cast<size_t>(p.window));
  for (int i = 0; i < p.window; ++i)
    hann[i] = 0.5 - 0.5 * std::cos(2.0 * kPi * i / p.window);

  Tensor<float> out({c, p.n_mels, frames});
  std::vector<double> frame(static_cast<size_t>(p.window));
  for (int ch = 0; ch < c; ++ch) {
    for (int t = 0; t < frames; ++t) {
      const size_t off = static_cast<size_t>(t) * p.hop;
      for (int i = 0; i < p.window; ++i)
        frame[i] = static_cast<double>(channels[ch][off + i]) * hann[i];
      const std::vector<double> pow_spec = power_spectrum(frame);
      for (int m = 0; m < p.n_mels; ++m) {
        double acc = 0.0;
        const auto& w = fb[m];
        for (size_t k = 0; k < w.size(); ++k) acc += w[k] * pow_spec[k];
        out.at(ch, m, t) = static_cast<float>(std::log1p(acc));
      }
    }
  }
  return out;
}

}  // namespace pedfuse
