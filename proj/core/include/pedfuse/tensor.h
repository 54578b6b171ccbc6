// core/include/pedfuse/tensor.h

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

#ifndef PEDFUSE_TENSOR_H_
#define PEDFUSE_TENSOR_H_

#include <cstddef>
#include <memory>
#include <numeric>
#include <vector>

#include "pedfuse/common.h"

namespace pedfuse {

// Dense row-major tensor with shared storage. Ops never mutate their inputs,
// so sharing the buffer on copy is safe and keeps autodiff graphs cheap.
template <typename T>
class Tensor {
 public:
  Tensor() = default;

  explicit Tensor(std::vector<int> shape) : shape_(std::move(shape)) {
    numel_ = 1;
    for (int d : shape_) {
      PF_CHECK_MSG(d > 0, "tensor dims must be positive");
      numel_ *= static_cast<size_t>(d);
    }
    data_ = std::shared_ptr<T[]>(new T[numel_]());
  }

  static Tensor full(std::vector<int> shape, T v) {
    Tensor t(std::move(shape));
    for (size_t i = 0; i < t.numel_; ++i) t.data_[i] = v;
    return t;
  }

  static Tensor scalar(T v) { return full({1}, v); }

  bool defined() const { return data_ != nullptr; }
  const std::vector<int>& shape() const { return shape_; }
  size_t numel() const { return numel_; }
  int dim(int i) const { return shape_[static_cast<size_t>(i)]; }
  int ndim() const { return static_cast<int>(shape_.size()); }

  T* data() { return data_.get(); }
  const T* data() const { return data_.get(); }

  T& operator[](size_t i) { return data_[i]; }
  const T& operator[](size_t i) const { return data_[i]; }

  T& at(int i, int j) { return data_[static_cast<size_t>(i) * dim(1) + j]; }
  const T& at(int i, int j) const {
    return data_[static_cast<size_t>(i) * dim(1) + j];
  }
  T& at(int i, int j, int k) {
    return data_[(static_cast<size_t>(i) * dim(1) + j) * dim(2) + k];
  }
  const T& at(int i, int j, int k) const {
    return data_[(static_cast<size_t>(i) * dim(1) + j) * dim(2) + k];
  }

  Tensor clone() const {
    Tensor t;
    t.shape_ = shape_;
    t.numel_ = numel_;
    t.data_ = std::shared_ptr<T[]>(new T[numel_]);
    std::copy(data_.get(), data_.get() + numel_, t.data_.get());
    return t;
  }

  // Same storage, new shape (numel must match).
  Tensor reshaped(std::vector<int> shape) const {
    size_t n = 1;
    for (int d : shape) n *= static_cast<size_t>(d);
    PF_CHECK_MSG(n == numel_, "reshape numel mismatch");
    Tensor t;
    t.shape_ = std::move(shape);
    t.numel_ = numel_;
    t.data_ = data_;
    return t;
  }

  bool same_shape(const Tensor& o) const { return shape_ == o.shape_; }

  template <typename U>
  Tensor<U> cast() const {
    Tensor<U> t(shape_);
    for (size_t i = 0; i < numel_; ++i) t[i] = static_cast<U>(data_[i]);
    return t;
  }

 private:
  template <typename U>
  friend class Tensor;

  std::vector<int> shape_;
  size_t numel_ = 0;
  std::shared_ptr<T[]> data_;
};

}  // namespace pedfuse

#endif  // PEDFUSE_TENSOR_H_
