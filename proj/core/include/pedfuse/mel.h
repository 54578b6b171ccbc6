// core/include/pedfuse/mel.h

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

#ifndef PEDFUSE_MEL_H_
#define PEDFUSE_MEL_H_

#include <cmath>
#include <vector>

#include "pedfuse/tensor.h"

namespace pedfuse {

struct MelParams {
  int sample_rate = 48000;
  int n_mels = 128;
  int window = 2048;  // must be a power of two
  int hop = 1024;
};

inline double hz_to_mel(double hz) {
  return 2595.0 * std::log10(1.0 + hz / 700.0);
}
inline double mel_to_hz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

// Frames produced by an uncentered STFT over a signal of length n.
inline int stft_num_frames(size_t n, int window, int hop) {
  if (n < static_cast<size_t>(window)) return 0;
  return static_cast<int>((n - static_cast<size_t>(window)) /
                          static_cast<size_t>(hop)) +
         1;
}

// Triangular filterbank, n_mels bands spanning 0..sample_rate/2 on the mel
// scale. Row k holds the weights over the window/2+1 power-spectrum bins.
std::vector<std::vector<double>> mel_filterbank(const MelParams& p);

// Center frequency (Hz) of each mel band; used to predict where a tone lands.
std::vector<double> mel_band_centers_hz(const MelParams& p);

// Log-compressed mel spectrogram of a multichannel segment.
// Input: [C, L] samples in [-1,1] with L >= window. Output: [C, n_mels,
// frames] where each entry is log(1 + mel power) >= 0.
Tensor<float> mel_spectrogram(const std::vector<std::vector<float>>& channels,
                              const MelParams& p);

}  // namespace pedfuse

#endif  // PEDFUSE_MEL_H_
