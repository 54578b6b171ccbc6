// core/src/eval/metrics.cc

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

#include "pedfuse/eval/metrics.h"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "json.hpp"
#include "pedfuse/image.h"

namespace pedfuse {

namespace {

struct Extents {
  double lo[3], hi[3];
};

Extents box_extents(const Box3D& b) {
  return {{b.center.x - b.size.x / 2, b.center.y - b.size.y / 2,
           b.center.z - b.size.z / 2},
          {b.center.x + b.size.x / 2, b.center.y + b.size.y / 2,
           b.center.z + b.size.z / 2}};
}

}  // namespace

double iou3d(const Box3D& a, const Box3D& b) {
  Extents ea = box_extents(a);
  Extents eb = box_extents(b);
  // Canonical operand order: the arithmetic below then runs identically for
  // (a,b) and (b,a), making symmetry structural rather than a rounding
  // accident (FMA contraction would otherwise break it by an ulp).
  for (int i = 0; i < 3; ++i) {
    if (ea.lo[i] != eb.lo[i]) {
      if (ea.lo[i] > eb.lo[i]) std::swap(ea, eb);
      break;
    }
    if (ea.hi[i] != eb.hi[i]) {
      if (ea.hi[i] > eb.hi[i]) std::swap(ea, eb);
      break;
    }
  }
  // All volumes come from the same evaluated bounds, so identical boxes give
  // exactly 1 and the result is symmetric bit for bit.
  double inter = 1.0, va = 1.0, vb = 1.0;
  for (int i = 0; i < 3; ++i) {
    inter *= std::max(0.0, std::min(ea.hi[i], eb.hi[i]) -
                               std::max(ea.lo[i], eb.lo[i]));
    va *= ea.hi[i] - ea.lo[i];
    vb *= eb.hi[i] - eb.lo[i];
  }
  const double uni = va + vb - inter;
  if (uni <= 0.0) return 0.0;
  return inter / uni;
}

double ap_from_ious(const std::vector<double>& ious, double tau) {
  PF_CHECK_CFG(!ious.empty(), "ap: empty input");
  size_t hits = 0;
  for (double v : ious) hits += v >= tau;
  return static_cast<double>(hits) / static_cast<double>(ious.size());
}

double ap_at_threshold(const std::vector<Box3D>& preds,
                       const std::vector<Box3D>& gts, double tau) {
  PF_CHECK_CFG(preds.size() == gts.size(), "ap: prediction/gt length mismatch");
  std::vector<double> ious(preds.size());
  for (size_t i = 0; i < preds.size(); ++i) ious[i] = iou3d(preds[i], gts[i]);
  return ap_from_ious(ious, tau);
}

double ap_average(const std::vector<Box3D>& preds,
                  const std::vector<Box3D>& gts) {
  double acc = 0;
  for (double tau : iou_thresholds()) acc += ap_at_threshold(preds, gts, tau);
  return acc / kNumIouThresholds;
}

CenterDistance center_distance(const std::vector<Box3D>& preds,
                               const std::vector<Box3D>& gts) {
  PF_CHECK_CFG(!preds.empty() && preds.size() == gts.size(),
               "center_distance: need matched non-empty inputs");
  CenterDistance cd;
  for (size_t i = 0; i < preds.size(); ++i) {
    const double ex = preds[i].center.x - gts[i].center.x;
    const double ey = preds[i].center.y - gts[i].center.y;
    cd.dx += std::abs(ex);
    cd.dy += std::abs(ey);
    cd.dx_signed += ex;
    cd.dy_signed += ey;
  }
  const double n = static_cast<double>(preds.size());
  cd.dx /= n;
  cd.dy /= n;
  cd.dx_signed /= n;
  cd.dy_signed /= n;
  return cd;
}

EvalReport make_report(const std::vector<Box3D>& preds,
                       const std::vector<Box3D>& gts, std::string approach,
                       std::string condition) {
  EvalReport r;
  r.approach = std::move(approach);
  r.condition = std::move(condition);
  const auto taus = iou_thresholds();
  for (int i = 0; i < kNumIouThresholds; ++i)
    r.ap_by_threshold[static_cast<size_t>(i)] =
        ap_at_threshold(preds, gts, taus[static_cast<size_t>(i)]);
  r.ap_ave = ap_average(preds, gts);
  r.ap_03 = r.ap_by_threshold[2];  // tau = 0.30
  const CenterDistance cd = center_distance(preds, gts);
  r.dx = cd.dx;
  r.dy = cd.dy;
  r.dx_signed = cd.dx_signed;
  r.dy_signed = cd.dy_signed;
  r.n_samples = preds.size();
  return r;
}

std::string report_table(const std::vector<EvalReport>& rows) {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof(line), "%-24s %-12s %8s %8s %9s %9s\n",
                "approach", "condition", "Dx", "Dy", "AP@0.3", "AP@Ave");
  out += line;
  out += std::string(74, '-') + "\n";
  for (const auto& r : rows) {
    std::snprintf(line, sizeof(line), "%-24s %-12s %8.3f %8.3f %8.1f%% %8.1f%%\n",
                  r.approach.c_str(), r.condition.c_str(), r.dx, r.dy,
                  100.0 * r.ap_03, 100.0 * r.ap_ave);
    out += line;
  }
  return out;
}

std::string report_json(const std::vector<EvalReport>& rows) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  const auto taus = iou_thresholds();
  for (const auto& r : rows) {
    nlohmann::ordered_json ap;
    for (int i = 0; i < kNumIouThresholds; ++i) {
      char key[16];
      std::snprintf(key, sizeof(key), "%.2f", taus[static_cast<size_t>(i)]);
      ap[key] = r.ap_by_threshold[static_cast<size_t>(i)];
    }
    j.push_back({{"approach", r.approach},
                 {"condition", r.condition},
                 {"dx", r.dx},
                 {"dy", r.dy},
                 {"dx_signed", r.dx_signed},
                 {"dy_signed", r.dy_signed},
                 {"ap_by_threshold", ap},
                 {"ap_0.3", r.ap_03},
                 {"ap_ave", r.ap_ave},
                 {"n_samples", r.n_samples}});
  }
  return j.dump(2);
}

std::string EvalCondition::name() const {
  std::string n = dark ? "dark" : "normal";
  if (fov == FovFilter::kIn) n += "/in-fov";
  if (fov == FovFilter::kOut) n += "/out-fov";
  return n;
}

EvalReport evaluate(const PedFuseNet<float>& net, const SampleStore& store,
                    const std::vector<size_t>& indices,
                    const EvalCondition& condition, std::string approach) {
  PF_CHECK_CFG(!indices.empty(), "evaluate: empty sample set");
  const int s = net.config().input_size;

  std::vector<Box3D> preds, gts;
  preds.reserve(indices.size());
  for (size_t idx : indices) {
    const StoreSample& sample = store.samples[idx];
    if (condition.fov == FovFilter::kIn && !sample.in_fov) continue;
    if (condition.fov == FovFilter::kOut && sample.in_fov) continue;

    Tensor<float> mel = store_mel_input(sample, s);
    Tensor<float> image = store_image_input(sample, s);
    if (condition.dark) image = brightness_scale(image, 0.0);

    const auto out = net.forward(mel, image, /*with_segmentation=*/false);
    Box3D pred;
    pred.center = {out.box[0], out.box[1], out.box[2]};
    pred.size = {out.box[3], out.box[4], out.box[5]};
    pred.yaw = out.box[6];
    preds.push_back(pred);
    gts.push_back(Box3D::from_array(
        {sample.box[0], sample.box[1], sample.box[2], sample.box[3],
         sample.box[4], sample.box[5], sample.box[6]}));
  }
  PF_CHECK_CFG(!preds.empty(), "evaluate: no samples match the condition");
  return make_report(preds, gts, std::move(approach), condition.name());
}

}  // namespace pedfuse
