// core/include/pedfuse/ingest/segment.h

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

#ifndef PEDFUSE_INGEST_SEGMENT_H_
#define PEDFUSE_INGEST_SEGMENT_H_

#include <cstdint>
#include <utility>
#include <vector>

#include "pedfuse/wav.h"

namespace pedfuse {

inline constexpr double kSegmentWindowS = 0.4;

struct AudioSegment {
  std::vector<std::vector<float>> samples;  // [channels][length]
  int sample_rate = 0;
  double t_start = 0.0;
  double t_center = 0.0;
};

struct SegmentPair {
  AudioSegment segment;
  size_t frame_index = 0;  // frame nearest the segment center
};

struct SegmentationResult {
  std::vector<SegmentPair> pairs;
  size_t dropped_no_frame = 0;  // centers with no frame within tolerance
};

// Tiles the stream into consecutive non-overlapping windows and pairs each
// with the frame nearest its center. A segment whose center has no frame
// within half a frame period is dropped and counted. A stream shorter than
// one window yields an empty list.
SegmentationResult segment_stream(const AudioBuffer& audio,
                                  const std::vector<double>& frame_times,
                                  double frame_rate,
                                  double window_s = kSegmentWindowS);

// Mean over channels and samples of squared amplitude.
double segment_energy(const AudioSegment& seg);

// Arithmetic mean; the energy-filter threshold. Throws on empty input.
double mean_energy(const std::vector<double>& energies);

// Keep iff energy >= threshold (inclusive, so an all-equal set survives).
std::vector<size_t> energy_filter_indices(const std::vector<double>& energies,
                                          double threshold);

// Convenience form matching the per-set contract: threshold is fit on the
// given segments themselves.
std::vector<AudioSegment> energy_filter(const std::vector<AudioSegment>& segs);

// Deterministic shuffled split of n items into train/val index sets.
// Requires n >= 2 and train_frac in (0, 1); the result is disjoint and
// exhaustive with round(n * train_frac) training items.
std::pair<std::vector<size_t>, std::vector<size_t>> split_indices(
    size_t n, double train_frac, uint64_t seed);

}  // namespace pedfuse

#endif  // PEDFUSE_INGEST_SEGMENT_H_
