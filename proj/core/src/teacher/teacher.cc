// core/src/teacher/teacher.cc

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

#include "pedfuse/teacher/teacher.h"

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "pedfuse/image.h"
#include "pedfuse/png_io.h"

namespace pedfuse {

namespace fs = std::filesystem;

namespace {

Tensor<float> load_binary_mask(const std::string& path, int target_size) {
  const Image8 img = read_png(path);
  PF_CHECK_MSG(img.channels == 1, "teacher: mask png must be grayscale");
  Tensor<float> native({img.height, img.width});
  for (size_t i = 0; i < native.numel(); ++i)
    native[i] = img.pixels[i] > 127 ? 1.0f : 0.0f;
  return resize_nearest_plane(native, target_size, target_size);
}

}  // namespace

OracleTeacher::OracleTeacher(const DatasetManifest& manifest)
    : manifest_(&manifest) {}

Tensor<float> OracleTeacher::mask_for(const TeacherContext& ctx) {
  PF_CHECK_MSG(ctx.frame != nullptr || ctx.frame_index < manifest_->frames.size(),
               "oracle teacher: context has no frame");
  const FrameRecord& rec =
      ctx.frame ? *ctx.frame : manifest_->frames[ctx.frame_index];

  std::lock_guard<std::mutex> lock(mu_);
  if (cached_index_ == ctx.frame_index && cached_size_ == ctx.target_size)
    return cached_mask_;
  const std::string root =
      ctx.dataset_root.empty() ? manifest_->root : ctx.dataset_root;
  cached_mask_ =
      load_binary_mask((fs::path(root) / rec.mask).string(), ctx.target_size);
  cached_index_ = ctx.frame_index;
  cached_size_ = ctx.target_size;
  return cached_mask_;
}

std::optional<Box3D> OracleTeacher::pseudo_box3d(const TeacherContext& ctx) {
  const FrameRecord& rec =
      ctx.frame ? *ctx.frame : manifest_->frames.at(ctx.frame_index);
  return rec.box;
}

double OracleTeacher::pseudo_detect2d(const TeacherContext& ctx) {
  const Tensor<float> m = mask_for(ctx);
  for (size_t i = 0; i < m.numel(); ++i)
    if (m[i] > 0.5f) return 1.0;
  return 0.0;
}

Tensor<float> OracleTeacher::pseudo_segmask(const TeacherContext& ctx) {
  return mask_for(ctx);
}

FileLabelTeacher::FileLabelTeacher(const std::string& label_file) {
  std::ifstream in(label_file, std::ios::binary);
  if (!in) throw IoError("teacher: cannot open label file " + label_file);
  nlohmann::json j;
  in >> j;
  root_ = fs::path(label_file).parent_path().string();

  for (const auto& [id, rec] : j.at("labels").items()) {
    Entry e;
    if (rec.contains("box3d") && !rec["box3d"].is_null()) {
      const auto& b = rec["box3d"];
      Box3D box;
      box.center = {b.at("center")[0], b.at("center")[1], b.at("center")[2]};
      box.size = {b.at("size")[0], b.at("size")[1], b.at("size")[2]};
      box.yaw = b.at("yaw").get<double>();
      e.box = box;
    }
    e.confidence = std::clamp(rec.value("confidence", 0.0), 0.0, 1.0);
    e.mask_file = rec.value("mask", "");
    entries_.emplace(id, std::move(e));
  }
}

const FileLabelTeacher::Entry* FileLabelTeacher::find(
    const std::string& id) const {
  auto it = entries_.find(id);
  return it == entries_.end() ? nullptr : &it->second;
}

std::optional<Box3D> FileLabelTeacher::pseudo_box3d(const TeacherContext& ctx) {
  const Entry* e = find(ctx.sample_id);
  if (!e) return std::nullopt;
  return e->box;
}

double FileLabelTeacher::pseudo_detect2d(const TeacherContext& ctx) {
  const Entry* e = find(ctx.sample_id);
  return e ? e->confidence : 0.0;
}

Tensor<float> FileLabelTeacher::pseudo_segmask(const TeacherContext& ctx) {
  const Entry* e = find(ctx.sample_id);
  if (!e || e->mask_file.empty())
    return Tensor<float>({ctx.target_size, ctx.target_size});
  return load_binary_mask((fs::path(root_) / e->mask_file).string(),
                          ctx.target_size);
}

}  // namespace pedfuse
