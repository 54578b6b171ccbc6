// core/include/pedfuse/image.h

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

#ifndef PEDFUSE_IMAGE_H_
#define PEDFUSE_IMAGE_H_

#include "pedfuse/png_io.h"
#include "pedfuse/tensor.h"

namespace pedfuse {

// Bilinear resize of a single plane (half-pixel centers, edge clamp).
// Output values are convex combinations of inputs, so extrema never grow.
template <typename T>
Tensor<T> resize_bilinear_plane(const Tensor<T>& in, int out_h, int out_w);

// Per-channel bilinear resize of a [C,H,W] tensor.
template <typename T>
Tensor<T> resize_bilinear(const Tensor<T>& in, int out_h, int out_w);

// Nearest-neighbor resize of a [H,W] plane; used for label masks so the
// value set {0,1} is preserved exactly.
template <typename T>
Tensor<T> resize_nearest_plane(const Tensor<T>& in, int out_h, int out_w);

// Pixelwise multiply by factor in [0, 1]; throws ConfigError outside.
template <typename T>
Tensor<T> brightness_scale(const Tensor<T>& image, double factor);

// [H,W,interleaved u8] <-> [C,H,W] float in [0,1].
Tensor<float> image_to_tensor(const Image8& img);
Image8 tensor_to_image(const Tensor<float>& t);

}  // namespace pedfuse

#endif  // PEDFUSE_IMAGE_H_
