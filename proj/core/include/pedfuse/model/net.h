// core/include/pedfuse/model/net.h

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

#ifndef PEDFUSE_MODEL_NET_H_
#define PEDFUSE_MODEL_NET_H_

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "pedfuse/model/config.h"
#include "pedfuse/nn/graph.h"

namespace pedfuse {

template <typename T>
struct Param {
  std::string name;
  std::string group;  // audio | visual | fusion | regress | seg
  Tensor<T> value;
  bool trainable = true;
};

template <typename T>
class ParamStore {
 public:
  int add(std::string name, std::string group, Tensor<T> value, bool trainable);
  size_t size() const { return params_.size(); }
  Param<T>& operator[](size_t i) { return params_[i]; }
  const Param<T>& operator[](size_t i) const { return params_[i]; }
  int index_of(const std::string& name) const;
  std::vector<size_t> group_indices(const std::string& group) const;
  size_t total_values() const;

 private:
  std::vector<Param<T>> params_;
};

// The audio-visual student network. One instance owns the parameters;
// build() lays the forward pass onto a caller-provided tape, so training,
// inference and the targeted tests share one code path.
template <typename T>
class PedFuseNet {
 public:
  explicit PedFuseNet(ModelConfig cfg);

  const ModelConfig& config() const { return cfg_; }
  ParamStore<T>& params() { return store_; }
  const ParamStore<T>& params() const { return store_; }

  struct BuildOptions {
    bool capture_audio_maps = false;  // expose pre-pooling conv feature maps
    bool circular_conv = false;       // circular padding (translation probe)
    std::optional<T> forced_gate;     // override the attention gate
    bool with_segmentation = true;    // build the decoder branch
  };

  struct Forward {
    int audio_feat = -1;   // [C_a, F]
    int visual_feat = -1;  // [C_v, F]
    int dhat = -1;         // scalar, -1 when attention disabled
    int fused = -1;        // [F]
    int box = -1;          // [7]
    int seg = -1;          // [2, S, S], -1 when the branch is off
    std::vector<int> time_maps, freq_maps;  // capture_audio_maps only
    std::vector<int> param_leaf;            // store-order leaf ids
  };

  Forward build(nn::Graph<T>& g, const Tensor<T>& mel_input,
                const Tensor<T>& image, const BuildOptions& opt) const;

  // Plain-tensor operation surface (inference, no gradients).
  struct Output {
    std::array<T, 7> box{};
    T dhat = T(1);
    Tensor<T> seg;  // defined only when requested
  };
  Output forward(const Tensor<T>& mel_input, const Tensor<T>& image,
                 bool with_segmentation = false) const;
  Tensor<T> audio_forward(const Tensor<T>& mel_input) const;
  Tensor<T> visual_forward(const Tensor<T>& image) const;
  T detect_head(const Tensor<T>& visual_feat) const;
  Tensor<T> fuse(const Tensor<T>& audio_feat, const Tensor<T>& visual_feat,
                 T dhat) const;
  std::array<T, 7> regress_head(const Tensor<T>& fused) const;
  Tensor<T> seg_decode(const Tensor<T>& audio_feat) const;

  template <typename U>
  PedFuseNet<U> cast() const {
    PedFuseNet<U> other(cfg_);
    for (size_t i = 0; i < store_.size(); ++i)
      other.params()[i].value = store_[i].value.template cast<U>();
    return other;
  }

 private:
  // Graph fragments shared by build() and the plain-tensor wrappers.
  int build_audio(nn::Graph<T>& g, int mel, const BuildOptions& opt,
                  std::vector<int>& param_leaf, Forward* capture) const;
  int build_visual(nn::Graph<T>& g, int image,
                   std::vector<int>& param_leaf) const;
  int build_detect(nn::Graph<T>& g, int visual_feat,
                   std::vector<int>& param_leaf) const;
  int build_fuse(nn::Graph<T>& g, int audio_feat, int visual_feat,
                 int dhat) const;
  int build_regress(nn::Graph<T>& g, int fused,
                    std::vector<int>& param_leaf) const;
  int build_seg(nn::Graph<T>& g, int audio_feat,
                std::vector<int>& param_leaf) const;

  int param_leaf(nn::Graph<T>& g, const char* name,
                 std::vector<int>& param_leaf) const;

  ModelConfig cfg_;
  ParamStore<T> store_;
};

}  // namespace pedfuse

#endif  // PEDFUSE_MODEL_NET_H_
