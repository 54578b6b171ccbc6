// core/src/ingest/segment.cc

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

#include "pedfuse/ingest/segment.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pedfuse/common.h"
#include "pedfuse/rng.h"

namespace pedfuse {

// Index of the value in sorted `times` nearest to t.
static size_t nearest_index(const std::vector<double>& times, double t) {
  const auto it = std::lower_bound(times.begin(), times.end(), t);
  if (it == times.begin()) return 0;
  if (it == times.end()) return times.size() - 1;
  const size_t hi = static_cast<size_t>(it - times.begin());
  return (t - times[hi - 1] <= times[hi] - t) ? hi - 1 : hi;
}

SegmentationResult segment_stream(const AudioBuffer& audio,
                                  const std::vector<double>& frame_times,
                                  double frame_rate, double window_s) {
  PF_CHECK_CFG(audio.sample_rate > 0, "segment_stream: missing sample rate");
  PF_CHECK_CFG(window_s > 0 && frame_rate > 0, "segment_stream: bad params");

  SegmentationResult out;
  const size_t win =
      static_cast<size_t>(std::llround(window_s * audio.sample_rate));
  const size_t n = audio.num_samples();
  if (n < win || frame_times.empty()) return out;

  const double tol = 0.5 / frame_rate;
  const size_t count = n / win;
  for (size_t k = 0; k < count; ++k) {
    const double t_start =
        static_cast<double>(k * win) / audio.sample_rate;
    const double t_center = t_start + window_s / 2.0;
    const size_t fi = nearest_index(frame_times, t_center);
    if (std::abs(frame_times[fi] - t_center) > tol + 1e-9) {
      ++out.dropped_no_frame;
      continue;
    }
    SegmentPair pair;
    pair.frame_index = fi;
    pair.segment.sample_rate = audio.sample_rate;
    pair.segment.t_start = t_start;
    pair.segment.t_center = t_center;
    pair.segment.samples.reserve(audio.channels.size());
    for (const auto& ch : audio.channels)
      pair.segment.samples.emplace_back(ch.begin() + k * win,
                                        ch.begin() + (k + 1) * win);
    out.pairs.push_back(std::move(pair));
  }
  return out;
}

double segment_energy(const AudioSegment& seg) {
  PF_CHECK_MSG(!seg.samples.empty() && !seg.samples[0].empty(),
               "segment_energy: empty segment");
  double acc = 0.0;
  size_t n = 0;
  for (const auto& ch : seg.samples) {
    for (float v : ch) acc += static_cast<double>(v) * v;
    n += ch.size();
  }
  return acc / static_cast<double>(n);
}

double mean_energy(const std::vector<double>& energies) {
  PF_CHECK_CFG(!energies.empty(), "energy filter: empty input set");
  return std::accumulate(energies.begin(), energies.end(), 0.0) /
         static_cast<double>(energies.size());
}

std::vector<size_t> energy_filter_indices(const std::vector<double>& energies,
                                          double threshold) {
  std::vector<size_t> keep;
  for (size_t i = 0; i < energies.size(); ++i)
    if (energies[i] >= threshold) keep.push_back(i);
  return keep;
}

std::vector<AudioSegment> energy_filter(const std::vector<AudioSegment>& segs) {
  std::vector<double> energies;
  energies.reserve(segs.size());
  for (const auto& s : segs) energies.push_back(segment_energy(s));
  const double threshold = mean_energy(energies);
  std::vector<AudioSegment> kept;
  for (size_t i : energy_filter_indices(energies, threshold))
    kept.push_back(segs[i]);
  return kept;
}

std::pair<std::vector<size_t>, std::vector<size_t>> split_indices(
    size_t n, double train_frac, uint64_t seed) {
  PF_CHECK_CFG(n >= 2, "split: need at least 2 samples");
  PF_CHECK_CFG(train_frac > 0.0 && train_frac < 1.0,
               "split: train_frac must lie in (0,1)");
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(derive_seed(seed, "split"));
  rng.shuffle(order);

  size_t n_train = static_cast<size_t>(
      std::llround(train_frac * static_cast<double>(n)));
  n_train = std::clamp<size_t>(n_train, 1, n - 1);
  std::vector<size_t> train(order.begin(), order.begin() + n_train);
  std::vector<size_t> val(order.begin() + n_train, order.end());
  std::sort(train.begin(), train.end());
  std::sort(val.begin(), val.end());
  return {train, val};
}

}  // namespace pedfuse
