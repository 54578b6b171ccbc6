// core/include/pedfuse/eval/metrics.h

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

#ifndef PEDFUSE_EVAL_METRICS_H_
#define PEDFUSE_EVAL_METRICS_H_

#include <array>
#include <string>
#include <vector>

#include "pedfuse/geometry.h"
#include "pedfuse/ingest/store.h"
#include "pedfuse/model/net.h"

namespace pedfuse {

// AP thresholds 0.20 .. 0.50 in steps of 0.05.
inline constexpr int kNumIouThresholds = 7;
inline std::array<double, kNumIouThresholds> iou_thresholds() {
  std::array<double, kNumIouThresholds> t{};
  for (int i = 0; i < kNumIouThresholds; ++i) t[i] = (20 + 5 * i) / 100.0;
  return t;
}

// Axis-aligned 3D IOU on yaw-dropped boxes.
double iou3d(const Box3D& a, const Box3D& b);

// Fraction of samples whose IOU clears tau (inclusive). The regressor emits
// exactly one unranked box per sample, so precision equals recall here.
double ap_from_ious(const std::vector<double>& ious, double tau);
double ap_at_threshold(const std::vector<Box3D>& preds,
                       const std::vector<Box3D>& gts, double tau);
double ap_average(const std::vector<Box3D>& preds,
                  const std::vector<Box3D>& gts);

struct CenterDistance {
  double dx = 0, dy = 0;                // mean absolute deviation (reported)
  double dx_signed = 0, dy_signed = 0;  // signed mean, kept for reference
};
CenterDistance center_distance(const std::vector<Box3D>& preds,
                               const std::vector<Box3D>& gts);

struct EvalReport {
  std::string approach;
  std::string condition;
  std::array<double, kNumIouThresholds> ap_by_threshold{};
  double ap_ave = 0;
  double ap_03 = 0;
  double dx = 0, dy = 0;
  double dx_signed = 0, dy_signed = 0;
  size_t n_samples = 0;
};

EvalReport make_report(const std::vector<Box3D>& preds,
                       const std::vector<Box3D>& gts, std::string approach,
                       std::string condition);

// Aligned plain-text table, one row per report:
// approach | condition | Dx | Dy | AP@0.3 | AP@Ave
std::string report_table(const std::vector<EvalReport>& rows);
std::string report_json(const std::vector<EvalReport>& rows);

enum class FovFilter { kAll, kIn, kOut };

struct EvalCondition {
  bool dark = false;  // brightness-0 images
  FovFilter fov = FovFilter::kAll;
  std::string name() const;
};

// Runs inference over the given store samples under a condition and
// aggregates the metrics. Throws on an empty (post-filter) set.
EvalReport evaluate(const PedFuseNet<float>& net, const SampleStore& store,
                    const std::vector<size_t>& indices,
                    const EvalCondition& condition, std::string approach);

}  // namespace pedfuse

#endif  // PEDFUSE_EVAL_METRICS_H_
