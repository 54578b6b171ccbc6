// core/include/pedfuse/nn/graph.h

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

#ifndef PEDFUSE_NN_GRAPH_H_
#define PEDFUSE_NN_GRAPH_H_

#include <functional>
#include <vector>

#include "pedfuse/tensor.h"

namespace pedfuse {
namespace nn {

// Reverse-mode autodiff tape. Nodes are created in topological order by the
// op builders below; backward() walks the tape in reverse. One graph per
// sample; parameters enter as leaves sharing the owning store's buffers.
template <typename T>
class Graph {
 public:
  using BackwardFn = std::function<void(Graph&, int)>;

  struct Node {
    Tensor<T> value;
    Tensor<T> grad;  // lazily allocated
    std::vector<int> parents;
    BackwardFn backward;
    bool requires_grad = false;
  };

  int leaf(Tensor<T> value, bool requires_grad = false);
  int add(Tensor<T> value, std::vector<int> parents, BackwardFn fn);

  const Tensor<T>& value(int id) const { return nodes_[id].value; }
  bool requires_grad(int id) const { return nodes_[id].requires_grad; }
  bool has_grad(int id) const { return nodes_[id].grad.defined(); }

  // Gradient buffer, allocated (zeroed) on first touch.
  Tensor<T>& grad(int id);

  // Seeds d(root)/d(root) = 1 and propagates; root must be scalar.
  void backward(int root);

  size_t num_nodes() const { return nodes_.size(); }

 private:
  std::vector<Node> nodes_;
};

// ---- op builders -----------------------------------------------------------

template <typename T>
int add_vec(Graph<T>& g, int a, int b);
template <typename T>
int scale_by(Graph<T>& g, int x, int scalar);  // y = value(scalar)[0] * x
template <typename T>
int relu(Graph<T>& g, int x);
template <typename T>
int sigmoid_op(Graph<T>& g, int x);
template <typename T>
int reshape_op(Graph<T>& g, int x, std::vector<int> shape);
template <typename T>
int concat_vec(Graph<T>& g, const std::vector<int>& parts);

// y = W x + b with x:[n], W:[m,n], b:[m].
template <typename T>
int linear(Graph<T>& g, int x, int W, int b);

// Shared per-row map: X:[C,n], W:[m,n], b:[m] -> [C,m].
template <typename T>
int rowwise_linear(Graph<T>& g, int X, int W, int b);

// Layout packers for the full-axis convolutions: [C,F,Tm] -> sequence-major
// matrices whose row p is one slice position.
template <typename T>
int pack_time(Graph<T>& g, int x);  // [Tm, C*F]
template <typename T>
int pack_freq(Graph<T>& g, int x);  // [F, C*Tm]

// 1D convolution along the packed axis: xp:[P,D], K:[k,w,D], b:[k].
// Valid padding yields [k, P-w+1]; circular (test mode) yields [k, P].
template <typename T>
int seq_conv(Graph<T>& g, int xp, int K, int b, bool circular);

template <typename T>
int row_mean(Graph<T>& g, int X);   // [k,P] -> [k]
template <typename T>
int row_max(Graph<T>& g, int X);    // [k,P] -> [k], grad routed to the argmax
template <typename T>
int mean_rows(Graph<T>& g, int X);  // [C,F] -> [F], mean over channel axis
template <typename T>
int sum_rows(Graph<T>& g, int X);   // [C,F] -> [F]

// 2D convolution with zero padding: x:[Ci,H,W], K:[Co,Ci,kh,kw], b:[Co].
template <typename T>
int conv2d(Graph<T>& g, int x, int K, int b, int stride, int pad);

template <typename T>
int upsample_nearest(Graph<T>& g, int x, int factor);  // [C,H,W]->[C,fH,fW]
template <typename T>
int concat_channels(Graph<T>& g, const std::vector<int>& parts);
template <typename T>
int softmax_channels(Graph<T>& g, int x);  // softmax over axis 0 of [K,H,W]
template <typename T>
int slice_channel(Graph<T>& g, int x, int k);  // [K,H,W] -> [H,W]

// Box head output map: components 0..2 pass through, 3..5 softplus,
// 6 wrapped to (-pi, pi] (unit derivative).
template <typename T>
int box_activation(Graph<T>& g, int raw);

// ---- losses ---------------------------------------------------------------

inline constexpr double kProbEps = 1e-7;

// Mean squared error over the 7 box parameters, yaw difference wrapped.
template <typename T>
int mse_box_loss(Graph<T>& g, int pred, const Tensor<T>& target);

// Binary cross-entropy with [eps, 1-eps] clamping; pred is a scalar node.
template <typename T>
int bce_scalar_loss(Graph<T>& g, int pred, T target);

// Per-pixel binary cross-entropy against a {0,1} mask, mean over pixels.
template <typename T>
int bce_map_loss(Graph<T>& g, int prob_map, const Tensor<T>& target);

// y = sum_i w[i] * s[i] over scalar nodes.
template <typename T>
int weighted_sum(Graph<T>& g, const std::vector<int>& scalars,
                 const std::vector<T>& weights);

}  // namespace nn
}  // namespace pedfuse

#endif  // PEDFUSE_NN_GRAPH_H_
