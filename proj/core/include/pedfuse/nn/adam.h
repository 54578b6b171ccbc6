// core/include/pedfuse/nn/adam.h

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

#ifndef PEDFUSE_NN_ADAM_H_
#define PEDFUSE_NN_ADAM_H_

#include <cmath>
#include <vector>

#include "pedfuse/model/net.h"

namespace pedfuse {
namespace nn {

// Adaptive-moment gradient descent with bias correction.
template <typename T>
class Adam {
 public:
  explicit Adam(T lr = static_cast<T>(1e-4), T beta1 = static_cast<T>(0.9),
                T beta2 = static_cast<T>(0.999), T eps = static_cast<T>(1e-8))
      : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {}

  T learning_rate() const { return lr_; }

  // grads must be aligned with the store; non-trainable entries are skipped.
  void step(ParamStore<T>& store, const std::vector<Tensor<T>>& grads) {
    PF_CHECK_MSG(grads.size() == store.size(), "adam: grad count mismatch");
    if (m_.empty()) {
      m_.resize(store.size());
      v_.resize(store.size());
      for (size_t i = 0; i < store.size(); ++i) {
        m_[i] = Tensor<T>(store[i].value.shape());
        v_[i] = Tensor<T>(store[i].value.shape());
      }
    }
    ++t_;
    const T bc1 = T(1) - std::pow(beta1_, static_cast<T>(t_));
    const T bc2 = T(1) - std::pow(beta2_, static_cast<T>(t_));
    for (size_t i = 0; i < store.size(); ++i) {
      if (!store[i].trainable) continue;
      auto& p = store[i].value;
      const auto& g = grads[i];
      auto& m = m_[i];
      auto& v = v_[i];
      for (size_t j = 0; j < p.numel(); ++j) {
        m[j] = beta1_ * m[j] + (T(1) - beta1_) * g[j];
        v[j] = beta2_ * v[j] + (T(1) - beta2_) * g[j] * g[j];
        const T mhat = m[j] / bc1;
        const T vhat = v[j] / bc2;
        p[j] -= lr_ * mhat / (std::sqrt(vhat) + eps_);
      }
    }
  }

 private:
  T lr_, beta1_, beta2_, eps_;
  int64_t t_ = 0;
  std::vector<Tensor<T>> m_, v_;
};

}  // namespace nn
}  // namespace pedfuse

#endif  // PEDFUSE_NN_ADAM_H_
