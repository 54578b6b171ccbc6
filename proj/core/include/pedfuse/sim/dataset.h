// core/include/pedfuse/sim/dataset.h

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

#ifndef PEDFUSE_SIM_DATASET_H_
#define PEDFUSE_SIM_DATASET_H_

#include <string>
#include <vector>

#include "pedfuse/sim/audio_synth.h"
#include "pedfuse/sim/scene.h"

namespace pedfuse {

struct FrameRecord {
  double t = 0.0;
  std::string image;  // path relative to the dataset root
  std::string mask;
  Box3D box;
  bool in_fov = false;
};

struct DatasetManifest {
  int version = 1;
  uint64_t seed = 0;
  SceneConfig config;
  std::string audio_file;
  int audio_sample_rate = 0;
  int audio_channels = 0;
  std::string audio_sample_format;
  SynthStats synth_stats;
  std::vector<FrameRecord> frames;

  std::string root;  // directory the manifest was loaded from / written to
};

// Writes audio.wav, frames/*.png, masks/*.png and manifest.json under
// out_dir. Deterministic (byte-identical) for a fixed config.seed.
DatasetManifest generate_dataset(const SceneConfig& config, double duration_s,
                                 const std::string& out_dir);

DatasetManifest load_manifest(const std::string& dataset_dir);

}  // namespace pedfuse

#endif  // PEDFUSE_SIM_DATASET_H_
