// core/src/model/config.cc

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

#include "pedfuse/model/config.h"

#include "json.hpp"

namespace pedfuse {

using nlohmann::ordered_json;

const char* gating_mode_name(GatingMode m) {
  return m == GatingMode::kLiteral ? "literal" : "visual-only";
}

GatingMode gating_mode_from_name(const std::string& name) {
  if (name == "literal") return GatingMode::kLiteral;
  if (name == "visual-only") return GatingMode::kVisualOnly;
  throw ConfigError("unknown gating mode: " + name);
}

std::string model_config_to_json(const ModelConfig& c) {
  ordered_json j;
  j["feature_dim"] = c.feature_dim;
  j["audio_channels"] = c.audio_channels;
  j["visual_channels"] = c.visual_channels;
  j["time_kernel_widths"] = c.time_kernel_widths;
  j["freq_kernel_heights"] = c.freq_kernel_heights;
  j["conv_channels_per_scale"] = c.conv_channels_per_scale;
  j["visual_stage_channels"] = c.visual_stage_channels;
  j["detect_hidden"] = c.detect_hidden;
  j["regress_hidden"] = c.regress_hidden;
  j["box_dim"] = c.box_dim;
  j["input_size"] = c.input_size;
  j["mel_channels"] = c.mel_channels;
  j["seg_channels"] = c.seg_channels;
  j["seg_base"] = c.seg_base;
  j["gating"] = gating_mode_name(c.gating);
  j["use_attention"] = c.use_attention;
  j["use_segmentation"] = c.use_segmentation;
  j["backbone"] = c.backbone == BackboneMode::kCompact ? "compact" : "frozen";
  j["zero_audio"] = c.zero_audio;
  j["init_seed"] = c.init_seed;
  return j.dump(2);
}

ModelConfig model_config_from_json(const std::string& text) {
  const ordered_json j = ordered_json::parse(text);
  ModelConfig c;
  c.feature_dim = j.value("feature_dim", c.feature_dim);
  c.audio_channels = j.value("audio_channels", c.audio_channels);
  c.visual_channels = j.value("visual_channels", c.visual_channels);
  if (j.contains("time_kernel_widths"))
    c.time_kernel_widths = j["time_kernel_widths"].get<std::vector<int>>();
  if (j.contains("freq_kernel_heights"))
    c.freq_kernel_heights = j["freq_kernel_heights"].get<std::vector<int>>();
  c.conv_channels_per_scale =
      j.value("conv_channels_per_scale", c.conv_channels_per_scale);
  if (j.contains("visual_stage_channels"))
    c.visual_stage_channels = j["visual_stage_channels"].get<std::vector<int>>();
  c.detect_hidden = j.value("detect_hidden", c.detect_hidden);
  if (j.contains("regress_hidden"))
    c.regress_hidden = j["regress_hidden"].get<std::vector<int>>();
  c.box_dim = j.value("box_dim", c.box_dim);
  c.input_size = j.value("input_size", c.input_size);
  c.mel_channels = j.value("mel_channels", c.mel_channels);
  c.seg_channels = j.value("seg_channels", c.seg_channels);
  c.seg_base = j.value("seg_base", c.seg_base);
  if (j.contains("gating"))
    c.gating = gating_mode_from_name(j["gating"].get<std::string>());
  c.use_attention = j.value("use_attention", c.use_attention);
  c.use_segmentation = j.value("use_segmentation", c.use_segmentation);
  if (j.contains("backbone")) {
    const std::string b = j["backbone"].get<std::string>();
    if (b == "compact")
      c.backbone = BackboneMode::kCompact;
    else if (b == "frozen")
      c.backbone = BackboneMode::kFrozen;
    else
      throw ConfigError("unknown backbone mode: " + b);
  }
  c.zero_audio = j.value("zero_audio", c.zero_audio);
  c.init_seed = j.value("init_seed", c.init_seed);
  c.validate();
  return c;
}

}  // namespace pedfuse
