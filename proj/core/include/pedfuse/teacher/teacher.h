// core/include/pedfuse/teacher/teacher.h

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

#ifndef PEDFUSE_TEACHER_TEACHER_H_
#define PEDFUSE_TEACHER_TEACHER_H_

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>

#include "pedfuse/geometry.h"
#include "pedfuse/sim/dataset.h"
#include "pedfuse/tensor.h"

namespace pedfuse {

// Everything a label provider may inspect for one synchronized sample.
struct TeacherContext {
  std::string sample_id;
  std::string dataset_root;
  size_t frame_index = 0;
  const FrameRecord* frame = nullptr;  // set when fed from a dataset manifest
  int target_size = 256;
};

struct PseudoLabels {
  Box3D box;             // Y
  double detect = 0.0;   // D in [0, 1]
  Tensor<float> mask;    // S, target_size x target_size, values {0, 1}
};

// Label source the student trains against. Implementations must be
// deterministic and safe for concurrent queries after construction.
class TeacherProvider {
 public:
  virtual ~TeacherProvider() = default;

  // One 3D box per sample; nullopt means the sample carries no label and is
  // dropped (and counted) upstream.
  virtual std::optional<Box3D> pseudo_box3d(const TeacherContext& ctx) = 0;

  // Pedestrian presence confidence in [0, 1].
  virtual double pseudo_detect2d(const TeacherContext& ctx) = 0;

  // Binary pedestrian mask aligned with the resized camera image.
  virtual Tensor<float> pseudo_segmask(const TeacherContext& ctx) = 0;
};

// Plays the teacher role from simulator ground truth: the box comes from the
// trajectory, the mask from the rendered silhouette (nearest-neighbor
// resized), and the detection flag from that same resized silhouette so the
// two labels never disagree.
class OracleTeacher : public TeacherProvider {
 public:
  explicit OracleTeacher(const DatasetManifest& manifest);

  std::optional<Box3D> pseudo_box3d(const TeacherContext& ctx) override;
  double pseudo_detect2d(const TeacherContext& ctx) override;
  Tensor<float> pseudo_segmask(const TeacherContext& ctx) override;

 private:
  Tensor<float> mask_for(const TeacherContext& ctx);

  const DatasetManifest* manifest_;
  std::mutex mu_;
  size_t cached_index_ = static_cast<size_t>(-1);
  int cached_size_ = 0;
  Tensor<float> cached_mask_;
};

// Adapter over precomputed label files from external detection models.
// File format: JSON {"labels": {"<sample id>": {"box3d": {"center": [x,y,z],
// "size": [l,w,h], "yaw": r} | null, "confidence": c, "mask": "file.png"}}}.
// Mask paths are relative to the label file's directory; a missing mask
// entry means all-background. Confidences are clamped to [0, 1].
class FileLabelTeacher : public TeacherProvider {
 public:
  explicit FileLabelTeacher(const std::string& label_file);

  std::optional<Box3D> pseudo_box3d(const TeacherContext& ctx) override;
  double pseudo_detect2d(const TeacherContext& ctx) override;
  Tensor<float> pseudo_segmask(const TeacherContext& ctx) override;

 private:
  struct Entry {
    std::optional<Box3D> box;
    double confidence = 0.0;
    std::string mask_file;
  };
  const Entry* find(const std::string& id) const;

  std::string root_;
  std::unordered_map<std::string, Entry> entries_;
};

}  // namespace pedfuse

#endif  // PEDFUSE_TEACHER_TEACHER_H_
