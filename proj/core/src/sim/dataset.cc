// core/src/sim/dataset.cc

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

#include "pedfuse/sim/dataset.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "pedfuse/image.h"
#include "pedfuse/sim/camera.h"

namespace pedfuse {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

std::string frame_name(const char* dir, size_t k) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s/%06zu.png", dir, k);
  return buf;
}

Image8 mask_to_image(const Tensor<float>& mask) {
  Image8 img;
  img.width = mask.dim(1);
  img.height = mask.dim(0);
  img.channels = 1;
  img.pixels.resize(mask.numel());
  for (size_t i = 0; i < mask.numel(); ++i)
    img.pixels[i] = mask[i] > 0.5f ? 255 : 0;
  return img;
}

}  // namespace

DatasetManifest generate_dataset(const SceneConfig& config, double duration_s,
                                 const std::string& out_dir) {
  config.validate();
  PF_CHECK_CFG(duration_s > 0, "generate_dataset: duration must be positive");

  std::error_code ec;
  fs::create_directories(fs::path(out_dir) / "frames", ec);
  fs::create_directories(fs::path(out_dir) / "masks", ec);
  if (ec) throw IoError("generate_dataset: cannot create " + out_dir);

  const Trajectory traj = generate_trajectory(config, duration_s, config.seed);

  DatasetManifest m;
  m.seed = config.seed;
  m.config = config;
  m.audio_file = "audio.wav";
  m.audio_sample_rate = config.sample_rate;
  m.audio_channels = 4;
  m.audio_sample_format = "S16LE";
  m.root = out_dir;
  m.synth_stats = synthesize_audio_to_wav(
      traj, config, (fs::path(out_dir) / m.audio_file).string());

  const Vec3 rig = config.rig_center_world();
  m.frames.reserve(traj.size());
  for (size_t k = 0; k < traj.size(); ++k) {
    const double t = traj.times[k];
    FrameRecord rec;
    rec.t = t;
    rec.image = frame_name("frames", k);
    rec.mask = frame_name("masks", k);
    rec.box.center = {traj.positions[k][0] - rig.x,
                      traj.positions[k][1] - rig.y, config.person_dims.z / 2.0};
    rec.box.size = config.person_dims;
    rec.box.yaw = wrap_angle(traj.headings[k]);

    const Tensor<float> frame = render_frame(traj, t, config, 1.0);
    const Tensor<float> mask = render_mask(traj, t, config);
    rec.in_fov = false;
    for (size_t i = 0; i < mask.numel() && !rec.in_fov; ++i)
      rec.in_fov = mask[i] > 0.5f;

    write_png((fs::path(out_dir) / rec.image).string(), tensor_to_image(frame));
    write_png((fs::path(out_dir) / rec.mask).string(), mask_to_image(mask));
    m.frames.push_back(std::move(rec));
  }

  ordered_json j;
  j["version"] = m.version;
  j["seed"] = m.seed;
  j["config"] = ordered_json::parse(scene_config_to_json(config));
  j["audio"] = {{"file", m.audio_file},
                {"sample_rate", m.audio_sample_rate},
                {"channels", m.audio_channels},
                {"sample_format", m.audio_sample_format}};
  j["synth"] = {{"steps", m.synth_stats.steps},
                {"clamped_distances", m.synth_stats.clamped_distances}};
  j["frames"] = ordered_json::array();
  for (const auto& rec : m.frames) {
    j["frames"].push_back(
        {{"t", rec.t},
         {"image", rec.image},
         {"mask", rec.mask},
         {"box3d",
          {{"center", {rec.box.center.x, rec.box.center.y, rec.box.center.z}},
           {"size", {rec.box.size.x, rec.box.size.y, rec.box.size.z}},
           {"yaw", rec.box.yaw}}},
         {"in_fov", rec.in_fov}});
  }

  std::ofstream out(fs::path(out_dir) / "manifest.json", std::ios::binary);
  if (!out) throw IoError("generate_dataset: cannot write manifest.json");
  out << j.dump(2) << "\n";
  out.close();
  if (!out) throw IoError("generate_dataset: manifest write failed");
  return m;
}

DatasetManifest load_manifest(const std::string& dataset_dir) {
  std::ifstream in(fs::path(dataset_dir) / "manifest.json", std::ios::binary);
  if (!in) throw IoError("load_manifest: cannot open manifest.json in " +
                         dataset_dir);
  ordered_json j;
  in >> j;

  DatasetManifest m;
  m.root = dataset_dir;
  m.version = j.value("version", 1);
  m.seed = j.value("seed", 0ULL);
  m.config = scene_config_from_json(j.at("config").dump());
  const auto& a = j.at("audio");
  m.audio_file = a.at("file").get<std::string>();
  m.audio_sample_rate = a.at("sample_rate").get<int>();
  m.audio_channels = a.at("channels").get<int>();
  m.audio_sample_format = a.at("sample_format").get<std::string>();
  if (j.contains("synth")) {
    m.synth_stats.steps = j["synth"].value("steps", 0ULL);
    m.synth_stats.clamped_distances = j["synth"].value("clamped_distances", 0ULL);
  }
  for (const auto& f : j.at("frames")) {
    FrameRecord rec;
    rec.t = f.at("t").get<double>();
    rec.image = f.at("image").get<std::string>();
    rec.mask = f.at("mask").get<std::string>();
    const auto& b = f.at("box3d");
    rec.box.center = {b.at("center")[0], b.at("center")[1], b.at("center")[2]};
    rec.box.size = {b.at("size")[0], b.at("size")[1], b.at("size")[2]};
    rec.box.yaw = b.at("yaw").get<double>();
    rec.in_fov = f.at("in_fov").get<bool>();
    m.frames.push_back(std::move(rec));
  }
  return m;
}

}  // namespace pedfuse
