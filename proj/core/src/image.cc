// core/src/image.cc

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

#include "pedfuse/image.h"

#include <algorithm>
#include <cmath>

namespace pedfuse {

template <typename T>
Tensor<T> resize_bilinear_plane(const Tensor<T>& in, int out_h, int out_w) {
  PF_CHECK_MSG(in.ndim() == 2, "resize: expected [H,W] plane");
  PF_CHECK_CFG(out_h > 0 && out_w > 0, "resize: non-positive target size");
  const int ih = in.dim(0), iw = in.dim(1);
  if (ih == out_h && iw == out_w) return in.clone();

  Tensor<T> out({out_h, out_w});
  const double sy = static_cast<double>(ih) / out_h;
  const double sx = static_cast<double>(iw) / out_w;
  for (int y = 0; y < out_h; ++y) {
    double fy = (y + 0.5) * sy - 0.5;
    fy = std::max(0.0, std::min(fy, static_cast<double>(ih - 1)));
    const int y0 = static_cast<int>(fy);
    const int y1 = std::min(y0 + 1, ih - 1);
    const double wy = fy - y0;
    for (int x = 0; x < out_w; ++x) {
      double fx = (x + 0.5) * sx - 0.5;
      fx = std::max(0.0, std::min(fx, static_cast<double>(iw - 1)));
      const int x0 = static_cast<int>(fx);
      const int x1 = std::min(x0 + 1, iw - 1);
      const double wx = fx - x0;
      const double v = (1 - wy) * ((1 - wx) * in.at(y0, x0) + wx * in.at(y0, x1)) +
                       wy * ((1 - wx) * in.at(y1, x0) + wx * in.at(y1, x1));
      out.at(y, x) = static_cast<T>(v);
    }
  }
  return out;
}

template <typename T>
Tensor<T> resize_bilinear(const Tensor<T>& in, int out_h, int out_w) {
  PF_CHECK_MSG(in.ndim() == 3, "resize: expected [C,H,W]");
  const int c = in.dim(0), ih = in.dim(1), iw = in.dim(2);
  Tensor<T> out({c, out_h, out_w});
  for (int k = 0; k < c; ++k) {
    Tensor<T> plane({ih, iw});
    std::copy(in.data() + static_cast<size_t>(k) * ih * iw,
              in.data() + static_cast<size_t>(k + 1) * ih * iw, plane.data());
    Tensor<T> r = resize_bilinear_plane(plane, out_h, out_w);
    std::copy(r.data(), r.data() + r.numel(),
              out.data() + static_cast<size_t>(k) * out_h * out_w);
  }
  return out;
}

template <typename T>
Tensor<T> resize_nearest_plane(const Tensor<T>& in, int out_h, int out_w) {
  PF_CHECK_MSG(in.ndim() == 2, "resize: expected [H,W] plane");
  const int ih = in.dim(0), iw = in.dim(1);
  Tensor<T> out({out_h, out_w});
  for (int y = 0; y < out_h; ++y) {
    int sy = static_cast<int>((y + 0.5) * ih / out_h);
    sy = std::min(sy, ih - 1);
    for (int x = 0; x < out_w; ++x) {
      int sx = static_cast<int>((x + 0.5) * iw / out_w);
      sx = std::min(sx, iw - 1);
      out.at(y, x) = in.at(sy, sx);
    }
  }
  return out;
}

template <typename T>
Tensor<T> brightness_scale(const Tensor<T>& image, double factor) {
  PF_CHECK_CFG(factor >= 0.0 && factor <= 1.0,
               "brightness factor must lie in [0,1]");
  Tensor<T> out(image.shape());
  const T f = static_cast<T>(factor);
  for (size_t i = 0; i < image.numel(); ++i) out[i] = image[i] * f;
  return out;
}

Tensor<float> image_to_tensor(const Image8& img) {
  Tensor<float> t({img.channels, img.height, img.width});
  for (int c = 0; c < img.channels; ++c)
    for (int y = 0; y < img.height; ++y)
      for (int x = 0; x < img.width; ++x)
        t.at(c, y, x) = static_cast<float>(img.at(y, x, c)) / 255.0f;
  return t;
}

Image8 tensor_to_image(const Tensor<float>& t) {
  PF_CHECK_MSG(t.ndim() == 3 && (t.dim(0) == 1 || t.dim(0) == 3),
               "tensor_to_image: expected [1|3,H,W]");
  Image8 img;
  img.channels = t.dim(0);
  img.height = t.dim(1);
  img.width = t.dim(2);
  img.pixels.resize(static_cast<size_t>(img.channels) * img.height * img.width);
  for (int c = 0; c < img.channels; ++c)
    for (int y = 0; y < img.height; ++y)
      for (int x = 0; x < img.width; ++x) {
        const float v = std::max(0.0f, std::min(1.0f, t.at(c, y, x)));
        img.at(y, x, c) = static_cast<uint8_t>(std::lround(v * 255.0f));
      }
  return img;
}

template Tensor<float> resize_bilinear_plane(const Tensor<float>&, int, int);
template Tensor<double> resize_bilinear_plane(const Tensor<double>&, int, int);
template Tensor<float> resize_bilinear(const Tensor<float>&, int, int);
template Tensor<double> resize_bilinear(const Tensor<double>&, int, int);
template Tensor<float> resize_nearest_plane(const Tensor<float>&, int, int);
template Tensor<double> resize_nearest_plane(const Tensor<double>&, int, int);
template Tensor<float> brightness_scale(const Tensor<float>&, double);
template Tensor<double> brightness_scale(const Tensor<double>&, double);

}  // namespace pedfuse
