// core/src/model/net.cc

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

#include "pedfuse/model/net.h"

#include <cmath>

#include "pedfuse/rng.h"

namespace pedfuse {

using nn::Graph;

template <typename T>
int ParamStore<T>::add(std::string name, std::string group, Tensor<T> value,
                       bool trainable) {
  Param<T> p;
  p.name = std::move(name);
  p.group = std::move(group);
  p.value = std::move(value);
  p.trainable = trainable;
  params_.push_back(std::move(p));
  return static_cast<int>(params_.size()) - 1;
}

template <typename T>
int ParamStore<T>::index_of(const std::string& name) const {
  for (size_t i = 0; i < params_.size(); ++i)
    if (params_[i].name == name) return static_cast<int>(i);
  return -1;
}

template <typename T>
std::vector<size_t> ParamStore<T>::group_indices(const std::string& group) const {
  std::vector<size_t> idx;
  for (size_t i = 0; i < params_.size(); ++i)
    if (params_[i].group == group) idx.push_back(i);
  return idx;
}

template <typename T>
size_t ParamStore<T>::total_values() const {
  size_t n = 0;
  for (const auto& p : params_) n += p.value.numel();
  return n;
}

namespace {

// He-normal weights, zero biases; each parameter gets its own stream so the
// initialization is independent of creation order changes elsewhere.
template <typename T>
Tensor<T> he_init(const std::vector<int>& shape, size_t fan_in, uint64_t seed,
                  uint64_t index) {
  Tensor<T> t(shape);
  Rng rng(derive_seed(seed, "param-init", index));
  const double stddev = std::sqrt(2.0 / static_cast<double>(fan_in));
  for (size_t i = 0; i < t.numel(); ++i)
    t[i] = static_cast<T>(rng.normal(0.0, stddev));
  return t;
}

}  // namespace

template <typename T>
PedFuseNet<T>::PedFuseNet(ModelConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  const int s = cfg_.input_size;
  const int k = cfg_.conv_channels_per_scale;
  const int depth = cfg_.mel_channels * s;  // full-axis kernel footprint
  uint64_t pidx = 0;
  auto weight = [&](const std::string& name, const std::string& group,
                    std::vector<int> shape, size_t fan_in, bool trainable = true) {
    Tensor<T> w = he_init<T>(shape, fan_in, cfg_.init_seed, pidx++);
    // Output heads start small so early predictions sit near the biases.
    if (name == "regress.out.W" || name == "fusion.detect1.W" ||
        name == "seg.out.K")
      for (size_t i = 0; i < w.numel(); ++i) w[i] *= T(0.1);
    store_.add(name, group, std::move(w), trainable);
  };
  auto bias = [&](const std::string& name, const std::string& group, int n,
                  bool trainable = true) {
    ++pidx;
    store_.add(name, group, Tensor<T>({n}), trainable);
  };

  for (size_t i = 0; i < cfg_.time_kernel_widths.size(); ++i) {
    const int w = cfg_.time_kernel_widths[i];
    weight("audio.time" + std::to_string(i) + ".K", "audio", {k, w, depth},
           static_cast<size_t>(w) * depth);
    bias("audio.time" + std::to_string(i) + ".b", "audio", k);
  }
  for (size_t i = 0; i < cfg_.freq_kernel_heights.size(); ++i) {
    const int h = cfg_.freq_kernel_heights[i];
    weight("audio.freq" + std::to_string(i) + ".K", "audio", {k, h, depth},
           static_cast<size_t>(h) * depth);
    bias("audio.freq" + std::to_string(i) + ".b", "audio", k);
  }
  // mean + max pooling per scale
  const int pooled = 2 * k * static_cast<int>(cfg_.time_kernel_widths.size() +
                                              cfg_.freq_kernel_heights.size());
  weight("audio.fc.W", "audio", {cfg_.audio_channels * cfg_.feature_dim, pooled},
         static_cast<size_t>(pooled));
  bias("audio.fc.b", "audio", cfg_.audio_channels * cfg_.feature_dim);

  const bool backbone_trainable = cfg_.backbone == BackboneMode::kCompact;
  int in_ch = 3;
  for (size_t i = 0; i < cfg_.visual_stage_channels.size(); ++i) {
    const int out_ch = cfg_.visual_stage_channels[i];
    weight("visual.stage" + std::to_string(i) + ".K", "visual",
           {out_ch, in_ch, 3, 3}, static_cast<size_t>(in_ch) * 9,
           backbone_trainable);
    bias("visual.stage" + std::to_string(i) + ".b", "visual", out_ch,
         backbone_trainable);
    in_ch = out_ch;
  }
  // The appended convolution and the projection stay trainable in both
  // backbone modes.
  weight("visual.appended.K", "visual", {cfg_.visual_channels, in_ch, 3, 3},
         static_cast<size_t>(in_ch) * 9);
  bias("visual.appended.b", "visual", cfg_.visual_channels);
  const int spatial = (s >> 5) * (s >> 5);  // five stride-2 layers
  weight("visual.proj.W", "visual", {cfg_.feature_dim, spatial},
         static_cast<size_t>(spatial));
  bias("visual.proj.b", "visual", cfg_.feature_dim);

  weight("fusion.detect0.W", "fusion", {cfg_.detect_hidden, cfg_.feature_dim},
         static_cast<size_t>(cfg_.feature_dim));
  bias("fusion.detect0.b", "fusion", cfg_.detect_hidden);
  weight("fusion.detect1.W", "fusion", {1, cfg_.detect_hidden},
         static_cast<size_t>(cfg_.detect_hidden));
  bias("fusion.detect1.b", "fusion", 1);

  int prev = cfg_.feature_dim;
  for (size_t i = 0; i < cfg_.regress_hidden.size(); ++i) {
    const int h = cfg_.regress_hidden[i];
    weight("regress.l" + std::to_string(i) + ".W", "regress", {h, prev},
           static_cast<size_t>(prev));
    bias("regress.l" + std::to_string(i) + ".b", "regress", h);
    prev = h;
  }
  weight("regress.out.W", "regress", {cfg_.box_dim, prev},
         static_cast<size_t>(prev));
  bias("regress.out.b", "regress", cfg_.box_dim);

  const int sb = cfg_.seg_base;
  const int sc = cfg_.seg_channels;
  weight("seg.fc.W", "seg", {sb * sb, cfg_.feature_dim},
         static_cast<size_t>(cfg_.feature_dim));
  bias("seg.fc.b", "seg", sb * sb);
  weight("seg.conv0.K", "seg", {sc, 1, 3, 3}, 9);
  bias("seg.conv0.b", "seg", sc);
  weight("seg.conv1.K", "seg", {sc, sc, 3, 3}, static_cast<size_t>(sc) * 9);
  bias("seg.conv1.b", "seg", sc);
  weight("seg.conv2.K", "seg", {sc, sc, 3, 3}, static_cast<size_t>(sc) * 9);
  bias("seg.conv2.b", "seg", sc);
  weight("seg.out.K", "seg", {2, 3 * sc, 1, 1}, static_cast<size_t>(3 * sc));
  bias("seg.out.b", "seg", 2);
}

template <typename T>
int PedFuseNet<T>::param_leaf(Graph<T>& g, const char* name,
                              std::vector<int>& leaves) const {
  const int idx = store_.index_of(name);
  PF_CHECK_MSG(idx >= 0, std::string("unknown parameter ") + name);
  // Leaves are registered in store order exactly once per graph.
  PF_CHECK_MSG(static_cast<size_t>(idx) == leaves.size(),
               "parameters must be bound in store order");
  const int id = g.leaf(store_[static_cast<size_t>(idx)].value,
                        store_[static_cast<size_t>(idx)].trainable);
  leaves.push_back(id);
  return id;
}

template <typename T>
int PedFuseNet<T>::build_audio(Graph<T>& g, int mel, const BuildOptions& opt,
                               std::vector<int>& leaves, Forward* capture) const {
  // Each scale contributes mean- and max-pooled responses; the max channel
  // keeps sharp per-kernel peaks that the mean washes out.
  const int xt = nn::pack_time(g, mel);
  std::vector<int> pooled;
  for (size_t i = 0; i < cfg_.time_kernel_widths.size(); ++i) {
    const std::string base = "audio.time" + std::to_string(i);
    const int K = param_leaf(g, (base + ".K").c_str(), leaves);
    const int b = param_leaf(g, (base + ".b").c_str(), leaves);
    const int conv = nn::seq_conv(g, xt, K, b, opt.circular_conv);
    if (capture && opt.capture_audio_maps) capture->time_maps.push_back(conv);
    const int act = nn::relu(g, conv);
    pooled.push_back(nn::row_mean(g, act));
    pooled.push_back(nn::row_max(g, act));
  }
  const int xf = nn::pack_freq(g, mel);
  for (size_t i = 0; i < cfg_.freq_kernel_heights.size(); ++i) {
    const std::string base = "audio.freq" + std::to_string(i);
    const int K = param_leaf(g, (base + ".K").c_str(), leaves);
    const int b = param_leaf(g, (base + ".b").c_str(), leaves);
    const int conv = nn::seq_conv(g, xf, K, b, opt.circular_conv);
    if (capture && opt.capture_audio_maps) capture->freq_maps.push_back(conv);
    const int act = nn::relu(g, conv);
    pooled.push_back(nn::row_mean(g, act));
    pooled.push_back(nn::row_max(g, act));
  }
  const int cat = nn::concat_vec(g, pooled);
  const int W = param_leaf(g, "audio.fc.W", leaves);
  const int b = param_leaf(g, "audio.fc.b", leaves);
  const int flat = nn::linear(g, cat, W, b);
  return nn::reshape_op(g, flat, {cfg_.audio_channels, cfg_.feature_dim});
}

template <typename T>
int PedFuseNet<T>::build_visual(Graph<T>& g, int image,
                                std::vector<int>& leaves) const {
  int x = image;
  for (size_t i = 0; i < cfg_.visual_stage_channels.size(); ++i) {
    const std::string base = "visual.stage" + std::to_string(i);
    const int K = param_leaf(g, (base + ".K").c_str(), leaves);
    const int b = param_leaf(g, (base + ".b").c_str(), leaves);
    x = nn::relu(g, nn::conv2d(g, x, K, b, /*stride=*/2, /*pad=*/1));
  }
  const int Ka = param_leaf(g, "visual.appended.K", leaves);
  const int ba = param_leaf(g, "visual.appended.b", leaves);
  x = nn::relu(g, nn::conv2d(g, x, Ka, ba, /*stride=*/2, /*pad=*/1));

  const auto& shape = g.value(x).shape();
  const int spatial = shape[1] * shape[2];
  const int rows = nn::reshape_op(g, x, {cfg_.visual_channels, spatial});
  const int W = param_leaf(g, "visual.proj.W", leaves);
  const int b = param_leaf(g, "visual.proj.b", leaves);
  return nn::rowwise_linear(g, rows, W, b);  // [C_v, F]
}

template <typename T>
int PedFuseNet<T>::build_detect(Graph<T>& g, int visual_feat,
                                std::vector<int>& leaves) const {
  const int pooled = nn::mean_rows(g, visual_feat);
  const int W0 = param_leaf(g, "fusion.detect0.W", leaves);
  const int b0 = param_leaf(g, "fusion.detect0.b", leaves);
  const int h = nn::relu(g, nn::linear(g, pooled, W0, b0));
  const int W1 = param_leaf(g, "fusion.detect1.W", leaves);
  const int b1 = param_leaf(g, "fusion.detect1.b", leaves);
  return nn::sigmoid_op(g, nn::linear(g, h, W1, b1));
}

template <typename T>
int PedFuseNet<T>::build_fuse(Graph<T>& g, int audio_feat, int visual_feat,
                              int dhat) const {
  const int rs_a = nn::sum_rows(g, audio_feat);
  const int rs_v = nn::sum_rows(g, visual_feat);
  if (dhat < 0)  // attention disabled: ungated channel sum
    return nn::add_vec(g, rs_a, rs_v);
  if (cfg_.gating == GatingMode::kLiteral)
    return nn::scale_by(g, nn::add_vec(g, rs_a, rs_v), dhat);
  return nn::add_vec(g, rs_a, nn::scale_by(g, rs_v, dhat));
}

template <typename T>
int PedFuseNet<T>::build_regress(Graph<T>& g, int fused,
                                 std::vector<int>& leaves) const {
  int x = fused;
  for (size_t i = 0; i < cfg_.regress_hidden.size(); ++i) {
    const std::string base = "regress.l" + std::to_string(i);
    const int W = param_leaf(g, (base + ".W").c_str(), leaves);
    const int b = param_leaf(g, (base + ".b").c_str(), leaves);
    x = nn::relu(g, nn::linear(g, x, W, b));
  }
  const int W = param_leaf(g, "regress.out.W", leaves);
  const int b = param_leaf(g, "regress.out.b", leaves);
  return nn::box_activation(g, nn::linear(g, x, W, b));
}

template <typename T>
int PedFuseNet<T>::build_seg(Graph<T>& g, int audio_feat,
                             std::vector<int>& leaves) const {
  const int sb = cfg_.seg_base;
  const int pooled = nn::mean_rows(g, audio_feat);
  const int W = param_leaf(g, "seg.fc.W", leaves);
  const int b = param_leaf(g, "seg.fc.b", leaves);
  int x = nn::reshape_op(g, nn::relu(g, nn::linear(g, pooled, W, b)),
                         {1, sb, sb});
  std::vector<int> stage_out;
  for (int i = 0; i < 3; ++i) {
    const std::string base = "seg.conv" + std::to_string(i);
    const int K = param_leaf(g, (base + ".K").c_str(), leaves);
    const int bb = param_leaf(g, (base + ".b").c_str(), leaves);
    x = nn::upsample_nearest(g, nn::relu(g, nn::conv2d(g, x, K, bb, 1, 1)), 2);
    stage_out.push_back(x);
  }
  // Stage outputs live at S/4, S/2 and S; bring them all to S and stack.
  std::vector<int> stacked = {nn::upsample_nearest(g, stage_out[0], 4),
                              nn::upsample_nearest(g, stage_out[1], 2),
                              stage_out[2]};
  const int cat = nn::concat_channels(g, stacked);
  const int Ko = param_leaf(g, "seg.out.K", leaves);
  const int bo = param_leaf(g, "seg.out.b", leaves);
  return nn::softmax_channels(g, nn::conv2d(g, cat, Ko, bo, 1, 0));
}

template <typename T>
typename PedFuseNet<T>::Forward PedFuseNet<T>::build(
    Graph<T>& g, const Tensor<T>& mel_input, const Tensor<T>& image,
    const BuildOptions& opt) const {
  const int s = cfg_.input_size;
  PF_CHECK_MSG(mel_input.ndim() == 3 && mel_input.dim(0) == cfg_.mel_channels &&
                   mel_input.dim(1) == s && mel_input.dim(2) == s,
               "forward: spectrogram shape mismatch");
  PF_CHECK_MSG(image.ndim() == 3 && image.dim(0) == 3 && image.dim(1) == s &&
                   image.dim(2) == s,
               "forward: image shape mismatch");

  Forward out;
  const Tensor<T> mel_used =
      cfg_.zero_audio ? Tensor<T>(mel_input.shape()) : mel_input;
  const int mel = g.leaf(mel_used, false);
  const int img = g.leaf(image, false);

  // Binds store params [leaves.size(), until) as plain leaves; keeps the
  // leaf list aligned with store order when a branch is skipped.
  auto bind_until = [&](size_t until) {
    for (size_t i = out.param_leaf.size(); i < until; ++i)
      out.param_leaf.push_back(
          g.leaf(store_[i].value, store_[i].trainable));
  };

  out.audio_feat = build_audio(g, mel, opt, out.param_leaf, &out);
  out.visual_feat = build_visual(g, img, out.param_leaf);

  int gate = -1;
  if (cfg_.use_attention) {
    out.dhat = build_detect(g, out.visual_feat, out.param_leaf);
    gate = out.dhat;
    if (opt.forced_gate.has_value()) {
      gate = g.leaf(Tensor<T>::scalar(*opt.forced_gate), false);
      out.dhat = gate;
    }
  } else {
    bind_until(static_cast<size_t>(store_.index_of("regress.l0.W")));
    out.dhat = -1;
  }

  out.fused = build_fuse(g, out.audio_feat, out.visual_feat,
                         cfg_.use_attention ? gate : -1);
  out.box = build_regress(g, out.fused, out.param_leaf);

  if (cfg_.use_segmentation && opt.with_segmentation) {
    out.seg = build_seg(g, out.audio_feat, out.param_leaf);
  } else {
    bind_until(store_.size());
    out.seg = -1;
  }
  return out;
}

// ---- plain-tensor wrappers --------------------------------------------------

template <typename T>
typename PedFuseNet<T>::Output PedFuseNet<T>::forward(
    const Tensor<T>& mel_input, const Tensor<T>& image,
    bool with_segmentation) const {
  Graph<T> g;
  BuildOptions opt;
  opt.with_segmentation = with_segmentation;
  const Forward f = build(g, mel_input, image, opt);
  Output out;
  const auto& box = g.value(f.box);
  for (int i = 0; i < 7; ++i) out.box[static_cast<size_t>(i)] = box[i];
  out.dhat = f.dhat >= 0 ? g.value(f.dhat)[0] : T(1);
  if (f.seg >= 0) out.seg = g.value(f.seg).clone();
  return out;
}

template <typename T>
Tensor<T> PedFuseNet<T>::audio_forward(const Tensor<T>& mel_input) const {
  Graph<T> g;
  std::vector<int> leaves;
  const Tensor<T> mel_used =
      cfg_.zero_audio ? Tensor<T>(mel_input.shape()) : mel_input;
  const int mel = g.leaf(mel_used, false);
  BuildOptions opt;
  return g.value(build_audio(g, mel, opt, leaves, nullptr)).clone();
}

template <typename T>
Tensor<T> PedFuseNet<T>::visual_forward(const Tensor<T>& image) const {
  PF_CHECK_MSG(image.ndim() == 3 && image.dim(0) == 3,
               "visual_forward: expected [3,H,W]");
  Graph<T> g;
  std::vector<int> leaves;
  // Leaf binding asserts store order; visual params start after the audio
  // block, so pre-bind the audio ones.
  const int audio_params = store_.index_of("visual.stage0.K");
  for (int i = 0; i < audio_params; ++i)
    leaves.push_back(g.leaf(store_[static_cast<size_t>(i)].value, false));
  const int img = g.leaf(image, false);
  return g.value(build_visual(g, img, leaves)).clone();
}

template <typename T>
T PedFuseNet<T>::detect_head(const Tensor<T>& visual_feat) const {
  Graph<T> g;
  std::vector<int> leaves;
  const int first = store_.index_of("fusion.detect0.W");
  for (int i = 0; i < first; ++i)
    leaves.push_back(g.leaf(store_[static_cast<size_t>(i)].value, false));
  const int vf = g.leaf(visual_feat, false);
  return g.value(build_detect(g, vf, leaves))[0];
}

template <typename T>
Tensor<T> PedFuseNet<T>::fuse(const Tensor<T>& audio_feat,
                              const Tensor<T>& visual_feat, T dhat) const {
  PF_CHECK_MSG(audio_feat.ndim() == 2 && visual_feat.ndim() == 2 &&
                   audio_feat.dim(1) == visual_feat.dim(1),
               "fuse: feature width mismatch");
  Graph<T> g;
  const int a = g.leaf(audio_feat, false);
  const int v = g.leaf(visual_feat, false);
  const int d = g.leaf(Tensor<T>::scalar(dhat), false);
  return g.value(build_fuse(g, a, v, d)).clone();
}

template <typename T>
std::array<T, 7> PedFuseNet<T>::regress_head(const Tensor<T>& fused) const {
  Graph<T> g;
  std::vector<int> leaves;
  const int first = store_.index_of("regress.l0.W");
  for (int i = 0; i < first; ++i)
    leaves.push_back(g.leaf(store_[static_cast<size_t>(i)].value, false));
  const int f = g.leaf(fused, false);
  const auto& v = g.value(build_regress(g, f, leaves));
  std::array<T, 7> out{};
  for (int i = 0; i < 7; ++i) out[static_cast<size_t>(i)] = v[i];
  return out;
}

template <typename T>
Tensor<T> PedFuseNet<T>::seg_decode(const Tensor<T>& audio_feat) const {
  Graph<T> g;
  std::vector<int> leaves;
  const int first = store_.index_of("seg.fc.W");
  for (int i = 0; i < first; ++i)
    leaves.push_back(g.leaf(store_[static_cast<size_t>(i)].value, false));
  const int a = g.leaf(audio_feat, false);
  return g.value(build_seg(g, a, leaves)).clone();
}

template class ParamStore<float>;
template class ParamStore<double>;
template class PedFuseNet<float>;
template class PedFuseNet<double>;

}  // namespace pedfuse
