// core/src/nn/graph.cc

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

#include "pedfuse/nn/graph.h"

#include <algorithm>
#include <cmath>

#include "pedfuse/geometry.h"

namespace pedfuse {
namespace nn {

namespace {

// Lane-split reduction; the fixed-width inner loop vectorizes without
// reassociation flags and keeps the summation order deterministic.
template <typename T>
T dot(const T* a, const T* b, size_t n) {
  constexpr size_t kLanes = 16;
  T lanes[kLanes] = {};
  size_t i = 0;
  for (; i + kLanes <= n; i += kLanes)
    for (size_t j = 0; j < kLanes; ++j) lanes[j] += a[i + j] * b[i + j];
  T acc = 0;
  for (; i < n; ++i) acc += a[i] * b[i];
  for (size_t j = 0; j < kLanes; ++j) acc += lanes[j];
  return acc;
}

template <typename T>
void axpy(T* y, const T* x, T a, size_t n) {
  for (size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

template <typename T>
T stable_softplus(T x) {
  if (x > T(30)) return x;
  if (x < T(-30)) return std::exp(x);
  return std::log1p(std::exp(x));
}

template <typename T>
T stable_sigmoid(T x) {
  if (x >= 0) {
    const T e = std::exp(-x);
    return T(1) / (T(1) + e);
  }
  const T e = std::exp(x);
  return e / (T(1) + e);
}

}  // namespace

template <typename T>
int Graph<T>::leaf(Tensor<T> value, bool requires_grad) {
  Node n;
  n.value = std::move(value);
  n.requires_grad = requires_grad;
  nodes_.push_back(std::move(n));
  return static_cast<int>(nodes_.size()) - 1;
}

template <typename T>
int Graph<T>::add(Tensor<T> value, std::vector<int> parents, BackwardFn fn) {
  Node n;
  n.value = std::move(value);
  n.parents = std::move(parents);
  for (int p : n.parents)
    if (nodes_[p].requires_grad) n.requires_grad = true;
  if (n.requires_grad) n.backward = std::move(fn);
  nodes_.push_back(std::move(n));
  return static_cast<int>(nodes_.size()) - 1;
}

template <typename T>
Tensor<T>& Graph<T>::grad(int id) {
  Node& n = nodes_[id];
  if (!n.grad.defined()) n.grad = Tensor<T>(n.value.shape());
  return n.grad;
}

template <typename T>
void Graph<T>::backward(int root) {
  PF_CHECK_MSG(nodes_[root].value.numel() == 1,
               "backward: root must be scalar");
  PF_CHECK_MSG(nodes_[root].requires_grad,
               "backward: root does not depend on any trainable leaf");
  grad(root)[0] = T(1);
  for (int i = root; i >= 0; --i) {
    Node& n = nodes_[i];
    if (n.requires_grad && n.grad.defined() && n.backward) n.backward(*this, i);
  }
}

// ---- elementwise ------------------------------------------------------------

template <typename T>
int add_vec(Graph<T>& g, int a, int b) {
  const auto& va = g.value(a);
  const auto& vb = g.value(b);
  PF_CHECK_MSG(va.same_shape(vb), "add: shape mismatch");
  Tensor<T> out(va.shape());
  for (size_t i = 0; i < out.numel(); ++i) out[i] = va[i] + vb[i];
  return g.add(std::move(out), {a, b}, [a, b](Graph<T>& gr, int id) {
    const auto& go = gr.grad(id);
    if (gr.requires_grad(a)) {
      auto& ga = gr.grad(a);
      for (size_t i = 0; i < go.numel(); ++i) ga[i] += go[i];
    }
    if (gr.requires_grad(b)) {
      auto& gb = gr.grad(b);
      for (size_t i = 0; i < go.numel(); ++i) gb[i] += go[i];
    }
  });
}

template <typename T>
int scale_by(Graph<T>& g, int x, int scalar) {
  const auto& vx = g.value(x);
  const auto& vs = g.value(scalar);
  PF_CHECK_MSG(vs.numel() == 1, "scale_by: gate must be scalar");
  const T s = vs[0];
  Tensor<T> out(vx.shape());
  for (size_t i = 0; i < out.numel(); ++i) out[i] = vx[i] * s;
  return g.add(std::move(out), {x, scalar}, [x, scalar, s](Graph<T>& gr, int id) {
    const auto& go = gr.grad(id);
    const auto& vx2 = gr.value(x);
    if (gr.requires_grad(x)) {
      auto& gx = gr.grad(x);
      for (size_t i = 0; i < go.numel(); ++i) gx[i] += go[i] * s;
    }
    if (gr.requires_grad(scalar)) {
      T acc = 0;
      for (size_t i = 0; i < go.numel(); ++i) acc += go[i] * vx2[i];
      gr.grad(scalar)[0] += acc;
    }
  });
}

template <typename T>
int relu(Graph<T>& g, int x) {
  const auto& vx = g.value(x);
  Tensor<T> out(vx.shape());
  for (size_t i = 0; i < out.numel(); ++i) out[i] = vx[i] > T(0) ? vx[i] : T(0);
  return g.add(std::move(out), {x}, [x](Graph<T>& gr, int id) {
    if (!gr.requires_grad(x)) return;
    const auto& go = gr.grad(id);
    const auto& vx2 = gr.value(x);
    auto& gx = gr.grad(x);
    for (size_t i = 0; i < go.numel(); ++i)
      if (vx2[i] > T(0)) gx[i] += go[i];
  });
}

template <typename T>
int sigmoid_op(Graph<T>& g, int x) {
  const auto& vx = g.value(x);
  Tensor<T> out(vx.shape());
  for (size_t i = 0; i < out.numel(); ++i) out[i] = stable_sigmoid(vx[i]);
  return g.add(std::move(out), {x}, [x](Graph<T>& gr, int id) {
    if (!gr.requires_grad(x)) return;
    const auto& go = gr.grad(id);
    const auto& y = gr.value(id);
    auto& gx = gr.grad(x);
    for (size_t i = 0; i < go.numel(); ++i)
      gx[i] += go[i] * y[i] * (T(1) - y[i]);
  });
}

template <typename T>
int reshape_op(Graph<T>& g, int x, std::vector<int> shape) {
  Tensor<T> out = g.value(x).reshaped(std::move(shape));
  return g.add(std::move(out), {x}, [x](Graph<T>& gr, int id) {
    if (!gr.requires_grad(x)) return;
    const auto& go = gr.grad(id);
    auto& gx = gr.grad(x);
    for (size_t i = 0; i < go.numel(); ++i) gx[i] += go[i];
  });
}

template <typename T>
int concat_vec(Graph<T>& g, const std::vector<int>& parts) {
  size_t total = 0;
  for (int p : parts) total += g.value(p).numel();
  Tensor<T> out({static_cast<int>(total)});
  size_t off = 0;
  for (int p : parts) {
    const auto& v = g.value(p);
    std::copy(v.data(), v.data() + v.numel(), out.data() + off);
    off += v.numel();
  }
  return g.add(std::move(out), parts, [parts](Graph<T>& gr, int id) {
    const auto& go = gr.grad(id);
    size_t off2 = 0;
    for (int p : parts) {
      const size_t n = gr.value(p).numel();
      if (gr.requires_grad(p)) {
        auto& gp = gr.grad(p);
        for (size_t i = 0; i < n; ++i) gp[i] += go[off2 + i];
      }
      off2 += n;
    }
  });
}

// ---- dense layers -----------------------------------------------------------

template <typename T>
int linear(Graph<T>& g, int x, int W, int b) {
  const auto& vx = g.value(x);
  const auto& vw = g.value(W);
  const auto& vb = g.value(b);
  PF_CHECK_MSG(vw.ndim() == 2, "linear: W must be [m,n]");
  const int m = vw.dim(0), n = vw.dim(1);
  PF_CHECK_MSG(static_cast<size_t>(n) == vx.numel(), "linear: input size mismatch");
  PF_CHECK_MSG(static_cast<size_t>(m) == vb.numel(), "linear: bias size mismatch");

  Tensor<T> out({m});
  for (int i = 0; i < m; ++i)
    out[i] = vb[i] + dot(vw.data() + static_cast<size_t>(i) * n, vx.data(),
                         static_cast<size_t>(n));
  return g.add(std::move(out), {x, W, b}, [x, W, b, m, n](Graph<T>& gr, int id) {
    const auto& go = gr.grad(id);
    const auto& vx2 = gr.value(x);
    const auto& vw2 = gr.value(W);
    const size_t nn = static_cast<size_t>(n);
    if (gr.requires_grad(x)) {
      auto& gx = gr.grad(x);
      for (int i = 0; i < m; ++i)
        axpy(gx.data(), vw2.data() + static_cast<size_t>(i) * nn, go[i], nn);
    }
    if (gr.requires_grad(W)) {
      auto& gw = gr.grad(W);
      for (int i = 0; i < m; ++i)
        axpy(gw.data() + static_cast<size_t>(i) * nn, vx2.data(), go[i], nn);
    }
    if (gr.requires_grad(b)) {
      auto& gb = gr.grad(b);
      for (int i = 0; i < m; ++i) gb[i] += go[i];
    }
  });
}

template <typename T>
int rowwise_linear(Graph<T>& g, int X, int W, int b) {
  const auto& vx = g.value(X);
  const auto& vw = g.value(W);
  const auto& vb = g.value(b);
  PF_CHECK_MSG(vx.ndim() == 2 && vw.ndim() == 2, "rowwise_linear: bad shapes");
  const int c = vx.dim(0), n = vx.dim(1);
  const int m = vw.dim(0);
  PF_CHECK_MSG(vw.dim(1) == n && vb.numel() == static_cast<size_t>(m),
               "rowwise_linear: size mismatch");

  Tensor<T> out({c, m});
  for (int r = 0; r < c; ++r) {
    const T* xr = vx.data() + static_cast<size_t>(r) * n;
    T* yr = out.data() + static_cast<size_t>(r) * m;
    for (int i = 0; i < m; ++i)
      yr[i] = vb[i] + dot(vw.data() + static_cast<size_t>(i) * n, xr,
                          static_cast<size_t>(n));
  }
  return g.add(std::move(out), {X, W, b},
               [X, W, b, c, m, n](Graph<T>& gr, int id) {
    const auto& go = gr.grad(id);
    const auto& vx2 = gr.value(X);
    const auto& vw2 = gr.value(W);
    const size_t nn = static_cast<size_t>(n);
    for (int r = 0; r < c; ++r) {
      const T* gor = go.data() + static_cast<size_t>(r) * m;
      const T* xr = vx2.data() + static_cast<size_t>(r) * nn;
      if (gr.requires_grad(X)) {
        T* gxr = gr.grad(X).data() + static_cast<size_t>(r) * nn;
        for (int i = 0; i < m; ++i)
          axpy(gxr, vw2.data() + static_cast<size_t>(i) * nn, gor[i], nn);
      }
      if (gr.requires_grad(W)) {
        auto& gw = gr.grad(W);
        for (int i = 0; i < m; ++i)
          axpy(gw.data() + static_cast<size_t>(i) * nn, xr, gor[i], nn);
      }
      if (gr.requires_grad(b)) {
        auto& gb = gr.grad(b);
        for (int i = 0; i < m; ++i) gb[i] += gor[i];
      }
    }
  });
}

// ---- spectrogram packing and full-axis convolution --------------------------

template <typename T>
int pack_time(Graph<T>& g, int x) {
  const auto& v = g.value(x);
  PF_CHECK_MSG(v.ndim() == 3, "pack_time: expected [C,F,T]");
  const int c = v.dim(0), f = v.dim(1), t = v.dim(2);
  Tensor<T> out({t, c * f});
  for (int ci = 0; ci < c; ++ci)
    for (int fi = 0; fi < f; ++fi) {
      const T* src = v.data() + (static_cast<size_t>(ci) * f + fi) * t;
      for (int ti = 0; ti < t; ++ti)
        out.data()[static_cast<size_t>(ti) * (c * f) + ci * f + fi] = src[ti];
    }
  return g.add(std::move(out), {x}, [x, c, f, t](Graph<T>& gr, int id) {
    if (!gr.requires_grad(x)) return;
    const auto& go = gr.grad(id);
    auto& gx = gr.grad(x);
    for (int ci = 0; ci < c; ++ci)
      for (int fi = 0; fi < f; ++fi) {
        T* dst = gx.data() + (static_cast<size_t>(ci) * f + fi) * t;
        for (int ti = 0; ti < t; ++ti)
          dst[ti] += go.data()[static_cast<size_t>(ti) * (c * f) + ci * f + fi];
      }
  });
}

template <typename T>
int pack_freq(Graph<T>& g, int x) {
  const auto& v = g.value(x);
  PF_CHECK_MSG(v.ndim() == 3, "pack_freq: expected [C,F,T]");
  const int c = v.dim(0), f = v.dim(1), t = v.dim(2);
  Tensor<T> out({f, c * t});
  for (int ci = 0; ci < c; ++ci)
    for (int fi = 0; fi < f; ++fi) {
      const T* src = v.data() + (static_cast<size_t>(ci) * f + fi) * t;
      T* dst = out.data() + static_cast<size_t>(fi) * (c * t) + ci * t;
      std::copy(src, src + t, dst);
    }
  return g.add(std::move(out), {x}, [x, c, f, t](Graph<T>& gr, int id) {
    if (!gr.requires_grad(x)) return;
    const auto& go = gr.grad(id);
    auto& gx = gr.grad(x);
    for (int ci = 0; ci < c; ++ci)
      for (int fi = 0; fi < f; ++fi) {
        T* dst = gx.data() + (static_cast<size_t>(ci) * f + fi) * t;
        const T* src = go.data() + static_cast<size_t>(fi) * (c * t) + ci * t;
        for (int ti = 0; ti < t; ++ti) dst[ti] += src[ti];
      }
  });
}

template <typename T>
int seq_conv(Graph<T>& g, int xp, int K, int b, bool circular) {
  const auto& vx = g.value(xp);
  const auto& vk = g.value(K);
  const auto& vb = g.value(b);
  PF_CHECK_MSG(vx.ndim() == 2 && vk.ndim() == 3, "seq_conv: bad shapes");
  const int p = vx.dim(0), d = vx.dim(1);
  const int k = vk.dim(0), w = vk.dim(1);
  PF_CHECK_MSG(vk.dim(2) == d, "seq_conv: kernel depth mismatch");
  PF_CHECK_MSG(w <= p, "seq_conv: kernel longer than sequence");
  PF_CHECK_MSG(vb.numel() == static_cast<size_t>(k), "seq_conv: bias mismatch");
  const int out_p = circular ? p : p - w + 1;

  Tensor<T> out({k, out_p});
  const size_t dd = static_cast<size_t>(d);
  for (int ki = 0; ki < k; ++ki) {
    T* yr = out.data() + static_cast<size_t>(ki) * out_p;
    for (int pi = 0; pi < out_p; ++pi) {
      T acc = vb[ki];
      for (int j = 0; j < w; ++j) {
        const int row = circular ? (pi + j) % p : pi + j;
        acc += dot(vk.data() + (static_cast<size_t>(ki) * w + j) * dd,
                   vx.data() + static_cast<size_t>(row) * dd, dd);
      }
      yr[pi] = acc;
    }
  }
  return g.add(std::move(out), {xp, K, b},
               [xp, K, b, p, d, k, w, out_p, circular](Graph<T>& gr, int id) {
    const auto& go = gr.grad(id);
    const auto& vx2 = gr.value(xp);
    const auto& vk2 = gr.value(K);
    const size_t dd = static_cast<size_t>(d);
    const bool need_x = gr.requires_grad(xp);
    const bool need_k = gr.requires_grad(K);
    const bool need_b = gr.requires_grad(b);
    for (int ki = 0; ki < k; ++ki) {
      const T* gor = go.data() + static_cast<size_t>(ki) * out_p;
      for (int pi = 0; pi < out_p; ++pi) {
        const T gy = gor[pi];
        if (gy == T(0)) continue;
        if (need_b) gr.grad(b)[ki] += gy;
        for (int j = 0; j < w; ++j) {
          const int row = circular ? (pi + j) % p : pi + j;
          if (need_k)
            axpy(gr.grad(K).data() + (static_cast<size_t>(ki) * w + j) * dd,
                 vx2.data() + static_cast<size_t>(row) * dd, gy, dd);
          if (need_x)
            axpy(gr.grad(xp).data() + static_cast<size_t>(row) * dd,
                 vk2.data() + (static_cast<size_t>(ki) * w + j) * dd, gy, dd);
        }
      }
    }
  });
}

template <typename T>
int row_mean(Graph<T>& g, int X) {
  const auto& v = g.value(X);
  PF_CHECK_MSG(v.ndim() == 2, "row_mean: expected [k,P]");
  const int k = v.dim(0), p = v.dim(1);
  Tensor<T> out({k});
  for (int i = 0; i < k; ++i) {
    T acc = 0;
    const T* r = v.data() + static_cast<size_t>(i) * p;
    for (int j = 0; j < p; ++j) acc += r[j];
    out[i] = acc / static_cast<T>(p);
  }
  return g.add(std::move(out), {X}, [X, k, p](Graph<T>& gr, int id) {
    if (!gr.requires_grad(X)) return;
    const auto& go = gr.grad(id);
    auto& gx = gr.grad(X);
    for (int i = 0; i < k; ++i) {
      const T gy = go[i] / static_cast<T>(p);
      T* r = gx.data() + static_cast<size_t>(i) * p;
      for (int j = 0; j < p; ++j) r[j] += gy;
    }
  });
}

template <typename T>
int row_max(Graph<T>& g, int X) {
  const auto& v = g.value(X);
  PF_CHECK_MSG(v.ndim() == 2, "row_max: expected [k,P]");
  const int k = v.dim(0), p = v.dim(1);
  Tensor<T> out({k});
  std::vector<int> argmax(static_cast<size_t>(k), 0);
  for (int i = 0; i < k; ++i) {
    const T* r = v.data() + static_cast<size_t>(i) * p;
    int best = 0;
    for (int j = 1; j < p; ++j)
      if (r[j] > r[best]) best = j;
    argmax[static_cast<size_t>(i)] = best;
    out[i] = r[best];
  }
  return g.add(std::move(out), {X},
               [X, k, p, argmax = std::move(argmax)](Graph<T>& gr, int id) {
    if (!gr.requires_grad(X)) return;
    const auto& go = gr.grad(id);
    auto& gx = gr.grad(X);
    for (int i = 0; i < k; ++i)
      gx.data()[static_cast<size_t>(i) * p + argmax[static_cast<size_t>(i)]] +=
          go[i];
  });
}

template <typename T>
static int rows_reduce(Graph<T>& g, int X, bool mean) {
  const auto& v = g.value(X);
  PF_CHECK_MSG(v.ndim() == 2, "rows_reduce: expected [C,F]");
  const int c = v.dim(0), f = v.dim(1);
  const T scale = mean ? T(1) / static_cast<T>(c) : T(1);
  Tensor<T> out({f});
  for (int r = 0; r < c; ++r)
    axpy(out.data(), v.data() + static_cast<size_t>(r) * f, scale,
         static_cast<size_t>(f));
  return g.add(std::move(out), {X}, [X, c, f, scale](Graph<T>& gr, int id) {
    if (!gr.requires_grad(X)) return;
    const auto& go = gr.grad(id);
    auto& gx = gr.grad(X);
    for (int r = 0; r < c; ++r)
      axpy(gx.data() + static_cast<size_t>(r) * f, go.data(), scale,
           static_cast<size_t>(f));
  });
}

template <typename T>
int mean_rows(Graph<T>& g, int X) {
  return rows_reduce(g, X, true);
}

template <typename T>
int sum_rows(Graph<T>& g, int X) {
  return rows_reduce(g, X, false);
}

// ---- 2D convolution stack ---------------------------------------------------

template <typename T>
int conv2d(Graph<T>& g, int x, int K, int b, int stride, int pad) {
  const auto& vx = g.value(x);
  const auto& vk = g.value(K);
  const auto& vb = g.value(b);
  PF_CHECK_MSG(vx.ndim() == 3 && vk.ndim() == 4, "conv2d: bad shapes");
  const int ci = vx.dim(0), h = vx.dim(1), w = vx.dim(2);
  const int co = vk.dim(0), kh = vk.dim(2), kw = vk.dim(3);
  PF_CHECK_MSG(vk.dim(1) == ci, "conv2d: channel mismatch");
  PF_CHECK_MSG(vb.numel() == static_cast<size_t>(co), "conv2d: bias mismatch");
  const int oh = (h + 2 * pad - kh) / stride + 1;
  const int ow = (w + 2 * pad - kw) / stride + 1;
  PF_CHECK_MSG(oh > 0 && ow > 0, "conv2d: empty output");

  // Kernel-outer layout: for each (ky,kx) tap the inner loop runs over a
  // contiguous output row, which vectorizes.
  auto tap_ranges = [stride, pad](int k, int in_extent, int out_extent,
                                  int& o0, int& o1) {
    // valid o where i = o*stride + k - pad lies in [0, in_extent)
    o0 = 0;
    while (o0 < out_extent && o0 * stride + k - pad < 0) ++o0;
    o1 = out_extent - 1;
    while (o1 >= 0 && o1 * stride + k - pad >= in_extent) --o1;
  };

  Tensor<T> out({co, oh, ow});
  for (int o = 0; o < co; ++o) {
    T* plane = out.data() + static_cast<size_t>(o) * oh * ow;
    for (int i = 0; i < oh * ow; ++i) plane[i] = vb[o];
    for (int c = 0; c < ci; ++c) {
      const T* xplane = vx.data() + static_cast<size_t>(c) * h * w;
      for (int ky = 0; ky < kh; ++ky) {
        int oy0, oy1;
        tap_ranges(ky, h, oh, oy0, oy1);
        for (int kx = 0; kx < kw; ++kx) {
          const T kval =
              vk.data()[((static_cast<size_t>(o) * ci + c) * kh + ky) * kw + kx];
          int ox0, ox1;
          tap_ranges(kx, w, ow, ox0, ox1);
          for (int oy = oy0; oy <= oy1; ++oy) {
            const T* xrow = xplane + (oy * stride + ky - pad) * w + kx - pad;
            T* orow = plane + static_cast<size_t>(oy) * ow;
            if (stride == 1) {
              for (int ox = ox0; ox <= ox1; ++ox) orow[ox] += kval * xrow[ox];
            } else {
              for (int ox = ox0; ox <= ox1; ++ox)
                orow[ox] += kval * xrow[ox * stride];
            }
          }
        }
      }
    }
  }
  return g.add(std::move(out), {x, K, b},
               [x, K, b, ci, h, w, co, kh, kw, stride, pad, oh, ow,
                tap_ranges](Graph<T>& gr, int id) {
    const auto& go = gr.grad(id);
    const auto& vx2 = gr.value(x);
    const auto& vk2 = gr.value(K);
    const bool need_x = gr.requires_grad(x);
    const bool need_k = gr.requires_grad(K);
    const bool need_b = gr.requires_grad(b);
    for (int o = 0; o < co; ++o) {
      const T* gplane = go.data() + static_cast<size_t>(o) * oh * ow;
      if (need_b) {
        T acc = 0;
        for (int i = 0; i < oh * ow; ++i) acc += gplane[i];
        gr.grad(b)[o] += acc;
      }
      for (int c = 0; c < ci; ++c) {
        const T* xplane = vx2.data() + static_cast<size_t>(c) * h * w;
        T* gxplane =
            need_x ? gr.grad(x).data() + static_cast<size_t>(c) * h * w : nullptr;
        for (int ky = 0; ky < kh; ++ky) {
          int oy0, oy1;
          tap_ranges(ky, h, oh, oy0, oy1);
          for (int kx = 0; kx < kw; ++kx) {
            const size_t kidx =
                ((static_cast<size_t>(o) * ci + c) * kh + ky) * kw + kx;
            int ox0, ox1;
            tap_ranges(kx, w, ow, ox0, ox1);
            const T kval = vk2.data()[kidx];
            T kacc = 0;
            for (int oy = oy0; oy <= oy1; ++oy) {
              const T* grow = gplane + static_cast<size_t>(oy) * ow;
              const int in_off = (oy * stride + ky - pad) * w + kx - pad;
              if (need_k) {
                const T* xrow = xplane + in_off;
                if (stride == 1) {
                  kacc += dot(grow + ox0, xrow + ox0,
                              static_cast<size_t>(ox1 - ox0 + 1));
                } else {
                  for (int ox = ox0; ox <= ox1; ++ox)
                    kacc += grow[ox] * xrow[ox * stride];
                }
              }
              if (need_x) {
                T* gxrow = gxplane + in_off;
                if (stride == 1) {
                  for (int ox = ox0; ox <= ox1; ++ox)
                    gxrow[ox] += kval * grow[ox];
                } else {
                  for (int ox = ox0; ox <= ox1; ++ox)
                    gxrow[ox * stride] += kval * grow[ox];
                }
              }
            }
            if (need_k) gr.grad(K).data()[kidx] += kacc;
          }
        }
      }
    }
  });
}

template <typename T>
int upsample_nearest(Graph<T>& g, int x, int factor) {
  const auto& v = g.value(x);
  PF_CHECK_MSG(v.ndim() == 3 && factor >= 1, "upsample: bad input");
  const int c = v.dim(0), h = v.dim(1), w = v.dim(2);
  Tensor<T> out({c, h * factor, w * factor});
  for (int ch = 0; ch < c; ++ch)
    for (int y = 0; y < h * factor; ++y) {
      const T* src = v.data() + (static_cast<size_t>(ch) * h + y / factor) * w;
      T* dst = out.data() + (static_cast<size_t>(ch) * h * factor + y) * (w * factor);
      for (int xx = 0; xx < w * factor; ++xx) dst[xx] = src[xx / factor];
    }
  return g.add(std::move(out), {x}, [x, c, h, w, factor](Graph<T>& gr, int id) {
    if (!gr.requires_grad(x)) return;
    const auto& go = gr.grad(id);
    auto& gx = gr.grad(x);
    for (int ch = 0; ch < c; ++ch)
      for (int y = 0; y < h * factor; ++y) {
        const T* src = go.data() +
                       (static_cast<size_t>(ch) * h * factor + y) * (w * factor);
        T* dst = gx.data() + (static_cast<size_t>(ch) * h + y / factor) * w;
        for (int xx = 0; xx < w * factor; ++xx) dst[xx / factor] += src[xx];
      }
  });
}

template <typename T>
int concat_channels(Graph<T>& g, const std::vector<int>& parts) {
  PF_CHECK_MSG(!parts.empty(), "concat_channels: empty");
  const auto& first = g.value(parts[0]);
  PF_CHECK_MSG(first.ndim() == 3, "concat_channels: expected [C,H,W]");
  const int h = first.dim(1), w = first.dim(2);
  int total_c = 0;
  for (int p : parts) {
    const auto& v = g.value(p);
    PF_CHECK_MSG(v.dim(1) == h && v.dim(2) == w, "concat_channels: size mismatch");
    total_c += v.dim(0);
  }
  Tensor<T> out({total_c, h, w});
  size_t off = 0;
  for (int p : parts) {
    const auto& v = g.value(p);
    std::copy(v.data(), v.data() + v.numel(), out.data() + off);
    off += v.numel();
  }
  return g.add(std::move(out), parts, [parts](Graph<T>& gr, int id) {
    const auto& go = gr.grad(id);
    size_t off2 = 0;
    for (int p : parts) {
      const size_t n = gr.value(p).numel();
      if (gr.requires_grad(p)) {
        auto& gp = gr.grad(p);
        for (size_t i = 0; i < n; ++i) gp[i] += go[off2 + i];
      }
      off2 += n;
    }
  });
}

template <typename T>
int softmax_channels(Graph<T>& g, int x) {
  const auto& v = g.value(x);
  PF_CHECK_MSG(v.ndim() == 3, "softmax_channels: expected [K,H,W]");
  const int k = v.dim(0);
  const size_t plane = v.numel() / static_cast<size_t>(k);
  Tensor<T> out(v.shape());
  for (size_t i = 0; i < plane; ++i) {
    T m = v[i];
    for (int c = 1; c < k; ++c) m = std::max(m, v[c * plane + i]);
    T z = 0;
    for (int c = 0; c < k; ++c) {
      const T e = std::exp(v[c * plane + i] - m);
      out[c * plane + i] = e;
      z += e;
    }
    for (int c = 0; c < k; ++c) out[c * plane + i] /= z;
  }
  return g.add(std::move(out), {x}, [x, k, plane](Graph<T>& gr, int id) {
    if (!gr.requires_grad(x)) return;
    const auto& go = gr.grad(id);
    const auto& y = gr.value(id);
    auto& gx = gr.grad(x);
    for (size_t i = 0; i < plane; ++i) {
      T dotv = 0;
      for (int c = 0; c < k; ++c) dotv += go[c * plane + i] * y[c * plane + i];
      for (int c = 0; c < k; ++c)
        gx[c * plane + i] += y[c * plane + i] * (go[c * plane + i] - dotv);
    }
  });
}

template <typename T>
int slice_channel(Graph<T>& g, int x, int k) {
  const auto& v = g.value(x);
  PF_CHECK_MSG(v.ndim() == 3 && k >= 0 && k < v.dim(0), "slice_channel: bad k");
  const int h = v.dim(1), w = v.dim(2);
  const size_t plane = static_cast<size_t>(h) * w;
  Tensor<T> out({h, w});
  std::copy(v.data() + k * plane, v.data() + (k + 1) * plane, out.data());
  return g.add(std::move(out), {x}, [x, k, plane](Graph<T>& gr, int id) {
    if (!gr.requires_grad(x)) return;
    const auto& go = gr.grad(id);
    auto& gx = gr.grad(x);
    for (size_t i = 0; i < plane; ++i) gx[k * plane + i] += go[i];
  });
}

template <typename T>
int box_activation(Graph<T>& g, int raw) {
  const auto& v = g.value(raw);
  PF_CHECK_MSG(v.numel() == 7, "box_activation: expected 7 values");
  Tensor<T> out({7});
  for (int i = 0; i < 3; ++i) out[i] = v[i];
  for (int i = 3; i < 6; ++i) out[i] = stable_softplus(v[i]);
  out[6] = static_cast<T>(wrap_angle(static_cast<double>(v[6])));
  return g.add(std::move(out), {raw}, [raw](Graph<T>& gr, int id) {
    if (!gr.requires_grad(raw)) return;
    const auto& go = gr.grad(id);
    const auto& v2 = gr.value(raw);
    auto& gx = gr.grad(raw);
    for (int i = 0; i < 3; ++i) gx[i] += go[i];
    for (int i = 3; i < 6; ++i) gx[i] += go[i] * stable_sigmoid(v2[i]);
    gx[6] += go[6];  // wrap has unit derivative
  });
}

// ---- losses -----------------------------------------------------------------

template <typename T>
int mse_box_loss(Graph<T>& g, int pred, const Tensor<T>& target) {
  const auto& vp = g.value(pred);
  PF_CHECK_MSG(vp.numel() == 7 && target.numel() == 7,
               "mse_box_loss: expected 7-parameter boxes");
  Tensor<T> diff({7});
  for (int i = 0; i < 6; ++i) diff[i] = vp[i] - target[i];
  diff[6] = static_cast<T>(
      wrap_angle(static_cast<double>(vp[6]) - static_cast<double>(target[6])));
  T acc = 0;
  for (int i = 0; i < 7; ++i) acc += diff[i] * diff[i];
  Tensor<T> out = Tensor<T>::scalar(acc / T(7));
  return g.add(std::move(out), {pred}, [pred, diff](Graph<T>& gr, int id) {
    if (!gr.requires_grad(pred)) return;
    const T gy = gr.grad(id)[0];
    auto& gp = gr.grad(pred);
    for (int i = 0; i < 7; ++i) gp[i] += gy * T(2) / T(7) * diff[i];
  });
}

template <typename T>
int bce_scalar_loss(Graph<T>& g, int pred, T target) {
  const auto& vp = g.value(pred);
  PF_CHECK_MSG(vp.numel() == 1, "bce_scalar_loss: pred must be scalar");
  const T eps = static_cast<T>(kProbEps);
  const T p = std::clamp(vp[0], eps, T(1) - eps);
  const T loss = -(target * std::log(p) + (T(1) - target) * std::log(T(1) - p));
  const bool clamped = vp[0] < eps || vp[0] > T(1) - eps;
  return g.add(Tensor<T>::scalar(loss), {pred},
               [pred, p, target, clamped](Graph<T>& gr, int id) {
    if (!gr.requires_grad(pred) || clamped) return;
    const T gy = gr.grad(id)[0];
    gr.grad(pred)[0] += gy * (-(target / p) + (T(1) - target) / (T(1) - p));
  });
}

template <typename T>
int bce_map_loss(Graph<T>& g, int prob_map, const Tensor<T>& target) {
  const auto& vp = g.value(prob_map);
  PF_CHECK_MSG(vp.same_shape(target), "bce_map_loss: shape mismatch");
  const T eps = static_cast<T>(kProbEps);
  const size_t n = vp.numel();
  T acc = 0;
  for (size_t i = 0; i < n; ++i) {
    const T p = std::clamp(vp[i], eps, T(1) - eps);
    acc -= target[i] * std::log(p) + (T(1) - target[i]) * std::log(T(1) - p);
  }
  Tensor<T> out = Tensor<T>::scalar(acc / static_cast<T>(n));
  return g.add(std::move(out), {prob_map},
               [prob_map, target, eps, n](Graph<T>& gr, int id) {
    if (!gr.requires_grad(prob_map)) return;
    const T gy = gr.grad(id)[0] / static_cast<T>(n);
    const auto& vp2 = gr.value(prob_map);
    auto& gp = gr.grad(prob_map);
    for (size_t i = 0; i < n; ++i) {
      if (vp2[i] < eps || vp2[i] > T(1) - eps) continue;
      gp[i] += gy * (-(target[i] / vp2[i]) + (T(1) - target[i]) / (T(1) - vp2[i]));
    }
  });
}

template <typename T>
int weighted_sum(Graph<T>& g, const std::vector<int>& scalars,
                 const std::vector<T>& weights) {
  PF_CHECK_MSG(scalars.size() == weights.size(), "weighted_sum: size mismatch");
  T acc = 0;
  for (size_t i = 0; i < scalars.size(); ++i) {
    PF_CHECK_MSG(g.value(scalars[i]).numel() == 1,
                 "weighted_sum: inputs must be scalars");
    acc += weights[i] * g.value(scalars[i])[0];
  }
  return g.add(Tensor<T>::scalar(acc), scalars,
               [scalars, weights](Graph<T>& gr, int id) {
    const T gy = gr.grad(id)[0];
    for (size_t i = 0; i < scalars.size(); ++i)
      if (gr.requires_grad(scalars[i]))
        gr.grad(scalars[i])[0] += gy * weights[i];
  });
}

// ---- explicit instantiations -------------------------------------------------

#define PEDFUSE_INSTANTIATE(T)                                              \
  template class Graph<T>;                                                  \
  template int add_vec(Graph<T>&, int, int);                                \
  template int scale_by(Graph<T>&, int, int);                               \
  template int relu(Graph<T>&, int);                                        \
  template int sigmoid_op(Graph<T>&, int);                                  \
  template int reshape_op(Graph<T>&, int, std::vector<int>);                \
  template int concat_vec(Graph<T>&, const std::vector<int>&);              \
  template int linear(Graph<T>&, int, int, int);                            \
  template int rowwise_linear(Graph<T>&, int, int, int);                    \
  template int pack_time(Graph<T>&, int);                                   \
  template int pack_freq(Graph<T>&, int);                                   \
  template int seq_conv(Graph<T>&, int, int, int, bool);                    \
  template int row_mean(Graph<T>&, int);                                    \
  template int row_max(Graph<T>&, int);                                     \
  template int mean_rows(Graph<T>&, int);                                   \
  template int sum_rows(Graph<T>&, int);                                    \
  template int conv2d(Graph<T>&, int, int, int, int, int);                  \
  template int upsample_nearest(Graph<T>&, int, int);                       \
  template int concat_channels(Graph<T>&, const std::vector<int>&);         \
  template int softmax_channels(Graph<T>&, int);                            \
  template int slice_channel(Graph<T>&, int, int);                          \
  template int box_activation(Graph<T>&, int);                              \
  template int mse_box_loss(Graph<T>&, int, const Tensor<T>&);              \
  template int bce_scalar_loss(Graph<T>&, int, T);                          \
  template int bce_map_loss(Graph<T>&, int, const Tensor<T>&);              \
  template int weighted_sum(Graph<T>&, const std::vector<int>&,             \
                            const std::vector<T>&);

PEDFUSE_INSTANTIATE(float)
PEDFUSE_INSTANTIATE(double)

#undef PEDFUSE_INSTANTIATE

}  // namespace nn
}  // namespace pedfuse
