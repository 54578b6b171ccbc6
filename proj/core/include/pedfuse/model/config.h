// core/include/pedfuse/model/config.h

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

#ifndef PEDFUSE_MODEL_CONFIG_H_
#define PEDFUSE_MODEL_CONFIG_H_

#include <cstdint>
#include <string>
#include <vector>

#include "pedfuse/common.h"

namespace pedfuse {

// How the presence gate is applied to the concatenated features.
enum class GatingMode {
  kLiteral,     // gate scales both audio and visual channels
  kVisualOnly,  // gate scales the visual channels only
};

enum class BackboneMode {
  kCompact,  // trainable 4-stage CNN (default)
  kFrozen,   // same stack with frozen weights behind the adapter seam
};

struct ModelConfig {
  int feature_dim = 512;     // F
  int audio_channels = 64;   // C_a
  int visual_channels = 64;  // C_v
  std::vector<int> time_kernel_widths{3, 5, 7};
  std::vector<int> freq_kernel_heights{3, 5, 7};
  int conv_channels_per_scale = 8;
  std::vector<int> visual_stage_channels{8, 16, 32, 64};
  int detect_hidden = 128;
  std::vector<int> regress_hidden{512, 256};
  int box_dim = 7;
  int input_size = 256;
  int mel_channels = 4;
  int seg_channels = 8;
  int seg_base = 32;  // decoder seed resolution
  GatingMode gating = GatingMode::kLiteral;
  bool use_attention = true;
  bool use_segmentation = true;
  BackboneMode backbone = BackboneMode::kCompact;
  // Input ablation: zero the spectrogram at train and test time (the
  // visual-only comparison model).
  bool zero_audio = false;
  uint64_t init_seed = 1;

  void validate() const {
    PF_CHECK_CFG(feature_dim > 0 && audio_channels > 0 && visual_channels > 0,
                 "model: dims must be positive");
    PF_CHECK_CFG(!time_kernel_widths.empty() && !freq_kernel_heights.empty(),
                 "model: kernel scale lists must be non-empty");
    PF_CHECK_CFG(conv_channels_per_scale > 0 && detect_hidden > 0,
                 "model: dims must be positive");
    PF_CHECK_CFG(box_dim == 7, "model: box_dim must be 7");
    PF_CHECK_CFG(input_size % seg_base == 0 &&
                     (input_size / seg_base) == 8,  // three doubling stages
                 "model: input_size must be seg_base * 8");
    PF_CHECK_CFG(visual_stage_channels.size() == 4,
                 "model: expected 4 visual stages");
  }
};

std::string model_config_to_json(const ModelConfig& c);
ModelConfig model_config_from_json(const std::string& text);

const char* gating_mode_name(GatingMode m);
GatingMode gating_mode_from_name(const std::string& name);

}  // namespace pedfuse

#endif  // PEDFUSE_MODEL_CONFIG_H_
