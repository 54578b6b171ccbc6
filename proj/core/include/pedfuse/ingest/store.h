// core/include/pedfuse/ingest/store.h

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

#ifndef PEDFUSE_INGEST_STORE_H_
#define PEDFUSE_INGEST_STORE_H_

#include <array>
#include <string>
#include <vector>

#include "pedfuse/ingest/segment.h"
#include "pedfuse/mel.h"
#include "pedfuse/png_io.h"
#include "pedfuse/sim/dataset.h"
#include "pedfuse/teacher/teacher.h"
#include "pedfuse/tensor.h"

namespace pedfuse {

struct IngestConfig {
  double window_s = kSegmentWindowS;
  MelParams mel;
  int target_size = 256;
  double train_frac = 0.8;
  uint64_t seed = 7;
  // The threshold is always fit on the training pool; these switches decide
  // where it is applied.
  bool filter_train = true;
  bool filter_val = true;
};

struct IngestCounts {
  size_t windows = 0;
  size_t dropped_no_frame = 0;
  size_t dropped_low_energy = 0;
  size_t dropped_no_box = 0;
  size_t train = 0;
  size_t val = 0;
};

// One preprocessed training unit, fully resident.
struct StoreSample {
  std::string id;
  double t_start = 0.0;
  double t_center = 0.0;
  size_t frame_index = 0;
  int split = 0;  // 0 train, 1 val
  double energy = 0.0;
  Tensor<float> mel;               // [C, n_mels, frames], before resizing
  Image8 image;                    // target_size RGB
  std::vector<uint8_t> mask_bits;  // bit-packed target_size^2 silhouette
  std::array<double, 7> box{};     // Y: center, size, yaw
  double d = 0.0;                  // D
  bool in_fov = false;
};

class SampleStore {
 public:
  static SampleStore load(const std::string& dir);

  IngestConfig config;
  double energy_threshold = 0.0;
  IngestCounts counts;
  std::string source_root;
  std::vector<StoreSample> samples;

  std::vector<size_t> split_of(int split) const;
};

// Runs the full ingest pipeline over a simulator (or recorded) dataset and
// writes the processed-sample store: shape-prefixed float32 spectrograms in
// mel.bin, resized images and masks as PNG, and index.json.
IngestCounts preprocess_dataset(const DatasetManifest& manifest,
                                TeacherProvider& teacher,
                                const IngestConfig& cfg,
                                const std::string& out_dir);

// Model-input assembly helpers.
Tensor<float> store_mel_input(const StoreSample& s, int target_size);
Tensor<float> store_image_input(const StoreSample& s, int target_size = 0);
Tensor<float> store_mask_target(const StoreSample& s, int target_size);

std::vector<uint8_t> pack_mask(const Tensor<float>& mask);
Tensor<float> unpack_mask(const std::vector<uint8_t>& bits, int size);

}  // namespace pedfuse

#endif  // PEDFUSE_INGEST_STORE_H_
