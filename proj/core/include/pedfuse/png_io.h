// core/include/pedfuse/png_io.h

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

#ifndef PEDFUSE_PNG_IO_H_
#define PEDFUSE_PNG_IO_H_

#include <cstdint>
#include <string>
#include <vector>

namespace pedfuse {

// 8-bit interleaved image, channels = 1 (gray) or 3 (RGB).
struct Image8 {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<uint8_t> pixels;  // row-major, interleaved

  uint8_t& at(int y, int x, int c) {
    return pixels[(static_cast<size_t>(y) * width + x) * channels + c];
  }
  uint8_t at(int y, int x, int c) const {
    return pixels[(static_cast<size_t>(y) * width + x) * channels + c];
  }
};

// Minimal deterministic PNG codec (8-bit gray / RGB, no interlace).
void write_png(const std::string& path, const Image8& img);
Image8 read_png(const std::string& path);

std::vector<uint8_t> encode_png(const Image8& img);
Image8 decode_png(const std::vector<uint8_t>& bytes);

}  // namespace pedfuse

#endif  // PEDFUSE_PNG_IO_H_
