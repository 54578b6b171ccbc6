// core/include/pedfuse/pipeline/train.h

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

#ifndef PEDFUSE_PIPELINE_TRAIN_H_
#define PEDFUSE_PIPELINE_TRAIN_H_

#include <array>
#include <string>
#include <vector>

#include "pedfuse/ingest/store.h"
#include "pedfuse/model/net.h"

namespace pedfuse {

struct TrainConfig {
  double lr = 1e-4;
  int batch_size = 16;
  int epochs = 50;
  double lambda1 = 0.3;
  double lambda2 = 0.3;
  uint64_t seed = 7;
  std::array<double, 2> aug_brightness{0.05, 1.0};
  // Worker threads per batch. Results are identical for any thread count:
  // per-sample gradients are reduced in sample order.
  int num_threads = 1;
  bool validate_every_epoch = true;
  std::string out_dir;  // train_log.jsonl, best.ckpt, diagnostics

  void validate() const {
    PF_CHECK_CFG(lr > 0, "train: lr must be positive");
    PF_CHECK_CFG(batch_size >= 1, "train: batch_size must be >= 1");
    PF_CHECK_CFG(epochs >= 1, "train: epochs must be >= 1");
    PF_CHECK_CFG(lambda1 >= 0 && lambda2 >= 0,
                 "train: loss weights must be non-negative");
    PF_CHECK_CFG(aug_brightness[0] >= 0 && aug_brightness[1] <= 1 &&
                     aug_brightness[0] <= aug_brightness[1],
                 "train: augmentation range must lie within [0,1]");
    PF_CHECK_CFG(num_threads >= 1, "train: need at least one thread");
  }
};

std::string train_config_to_json(const TrainConfig& c);
TrainConfig train_config_from_json(const std::string& text);

struct EpochLog {
  int epoch = 0;
  double loss_r = 0, loss_d = 0, loss_s = 0, loss_t = 0;
  double val_ap_ave = 0, val_ap03 = 0, val_dx = 0, val_dy = 0;
  int steps = 0;
  double seconds = 0;
};

struct TrainLog {
  std::vector<EpochLog> epochs;
  std::string to_jsonl() const;
};

struct TrainResult {
  TrainLog log;
  int best_epoch = -1;
  double best_ap_ave = 0;
  std::string checkpoint_path;  // best validation AP@Ave
};

// Standard entry: trains on the store's train split, validates on the val
// split, checkpoints the best AP@Ave epoch.
TrainResult train(PedFuseNet<float>& net, const SampleStore& store,
                  const TrainConfig& cfg);

// Explicit-split form used by the harnesses.
TrainResult train_on(PedFuseNet<float>& net, const SampleStore& store,
                     const std::vector<size_t>& train_idx,
                     const std::vector<size_t>& val_idx,
                     const TrainConfig& cfg);

struct InferResult {
  Box3D box;
  double dhat = 1.0;
};

// Preprocess (mel, resize) and run the student forward; the segmentation
// decoder is skipped (auxiliary task only).
InferResult infer(const PedFuseNet<float>& net, const AudioSegment& segment,
                  const Tensor<float>& image, const MelParams& mel_params);

}  // namespace pedfuse

#endif  // PEDFUSE_PIPELINE_TRAIN_H_
