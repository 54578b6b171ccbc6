// tests/test_image.cc

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

#include <algorithm>
#include <cstdio>

#include "doctest.h"
#include "pedfuse/image.h"
#include "pedfuse/png_io.h"
#include "pedfuse/rng.h"

using namespace pedfuse;

TEST_CASE("png round trip rgb and gray") {
  Rng rng(11);
  for (int channels : {1, 3}) {
    Image8 img;
    img.width = 37;
    img.height = 23;
    img.channels = channels;
    img.pixels.resize(static_cast<size_t>(37) * 23 * channels);
    for (auto& p : img.pixels)
      p = static_cast<uint8_t>(rng.uniform_int(256));

    auto bytes = encode_png(img);
    Image8 back = decode_png(bytes);
    REQUIRE(back.width == img.width);
    REQUIRE(back.height == img.height);
    REQUIRE(back.channels == img.channels);
    CHECK(back.pixels == img.pixels);
  }
}

TEST_CASE("png encoding is deterministic") {
  Image8 img;
  img.width = 16;
  img.height = 16;
  img.channels = 3;
  img.pixels.resize(16 * 16 * 3);
  Rng rng(2);
  for (auto& p : img.pixels) p = static_cast<uint8_t>(rng.uniform_int(256));
  CHECK(encode_png(img) == encode_png(img));
}

TEST_CASE("resize: constant stays constant") {
  Tensor<float> in = Tensor<float>::full({5, 9}, 0.37f);
  auto out = resize_bilinear_plane(in, 256, 256);
  REQUIRE(out.shape() == std::vector<int>{256, 256});
  for (size_t i = 0; i < out.numel(); ++i)
    CHECK(out[i] == doctest::Approx(0.37f).epsilon(1e-6));
}

TEST_CASE("resize: identity at same size") {
  Rng rng(4);
  Tensor<float> in({256, 256});
  for (size_t i = 0; i < in.numel(); ++i)
    in[i] = static_cast<float>(rng.uniform());
  auto out = resize_bilinear_plane(in, 256, 256);
  for (size_t i = 0; i < in.numel(); ++i) CHECK(out[i] == in[i]);
}

TEST_CASE("resize: output extrema within input extrema") {
  Tensor<float> in({2, 2});
  in.at(0, 0) = 0.0f;
  in.at(0, 1) = 1.0f;
  in.at(1, 0) = 0.0f;
  in.at(1, 1) = 1.0f;
  auto out = resize_bilinear_plane(in, 33, 47);
  for (size_t i = 0; i < out.numel(); ++i) {
    CHECK(out[i] >= 0.0f);
    CHECK(out[i] <= 1.0f);
  }

  Rng rng(9);
  Tensor<float> r({13, 7});
  for (size_t i = 0; i < r.numel(); ++i)
    r[i] = static_cast<float>(rng.uniform(-3, 5));
  float lo = *std::min_element(r.data(), r.data() + r.numel());
  float hi = *std::max_element(r.data(), r.data() + r.numel());
  auto ro = resize_bilinear_plane(r, 64, 64);
  for (size_t i = 0; i < ro.numel(); ++i) {
    CHECK(ro[i] >= lo - 1e-6f);
    CHECK(ro[i] <= hi + 1e-6f);
  }
}

TEST_CASE("nearest resize preserves the binary value set") {
  Rng rng(21);
  Tensor<float> mask({240, 320});
  for (size_t i = 0; i < mask.numel(); ++i)
    mask[i] = rng.uniform() < 0.2 ? 1.0f : 0.0f;
  auto out = resize_nearest_plane(mask, 256, 256);
  for (size_t i = 0; i < out.numel(); ++i)
    CHECK((out[i] == 0.0f || out[i] == 1.0f));
}

TEST_CASE("brightness scaling") {
  Tensor<float> img = Tensor<float>::full({3, 4, 4}, 0.8f);
  auto half = brightness_scale(img, 0.5);
  for (size_t i = 0; i < half.numel(); ++i)
    CHECK(half[i] == doctest::Approx(0.4f));
  auto zero = brightness_scale(img, 0.0);
  for (size_t i = 0; i < zero.numel(); ++i) CHECK(zero[i] == 0.0f);
  auto same = brightness_scale(img, 1.0);
  for (size_t i = 0; i < same.numel(); ++i) CHECK(same[i] == img[i]);
  CHECK_THROWS_AS(brightness_scale(img, 1.5), ConfigError);
  CHECK_THROWS_AS(brightness_scale(img, -0.1), ConfigError);
}

TEST_CASE("image tensor conversion round trip") {
  Rng rng(33);
  Image8 img;
  img.width = 12;
  img.height = 8;
  img.channels = 3;
  img.pixels.resize(12 * 8 * 3);
  for (auto& p : img.pixels) p = static_cast<uint8_t>(rng.uniform_int(256));
  auto t = image_to_tensor(img);
  auto back = tensor_to_image(t);
  CHECK(back.pixels == img.pixels);
}
