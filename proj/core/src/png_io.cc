// core/src/png_io.cc

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

#include "pedfuse/png_io.h"

#include <zlib.h>

#include <cstdio>
#include <cstdlib>
#include <cstring>

#include "pedfuse/common.h"

namespace pedfuse {
namespace {

void put_u32be(std::vector<uint8_t>& out, uint32_t v) {
  out.push_back((v >> 24) & 0xff);
  out.push_back((v >> 16) & 0xff);
  out.push_back((v >> 8) & 0xff);
  out.push_back(v & 0xff);
}

uint32_t get_u32be(const uint8_t* p) {
  return (static_cast<uint32_t>(p[0]) << 24) |
         (static_cast<uint32_t>(p[1]) << 16) |
         (static_cast<uint32_t>(p[2]) << 8) | static_cast<uint32_t>(p[3]);
}

void append_chunk(std::vector<uint8_t>& out, const char type[4],
                  const uint8_t* data, size_t len) {
  put_u32be(out, static_cast<uint32_t>(len));
  const size_t start = out.size();
  out.insert(out.end(), type, type + 4);
  if (len) out.insert(out.end(), data, data + len);
  uint32_t crc = crc32(0L, Z_NULL, 0);
  crc = crc32(crc, out.data() + start, static_cast<uInt>(4 + len));
  put_u32be(out, crc);
}

int paeth(int a, int b, int c) {
  const int p = a + b - c;
  const int pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
  if (pa <= pb && pa <= pc) return a;
  if (pb <= pc) return b;
  return c;
}

}  // namespace

std::vector<uint8_t> encode_png(const Image8& img) {
  PF_CHECK_MSG(img.channels == 1 || img.channels == 3,
               "png: only gray or RGB");
  PF_CHECK_MSG(img.width > 0 && img.height > 0, "png: empty image");
  PF_CHECK_MSG(img.pixels.size() == static_cast<size_t>(img.width) *
                                        img.height * img.channels,
               "png: pixel buffer size mismatch");

  const size_t stride = static_cast<size_t>(img.width) * img.channels;
  std::vector<uint8_t> raw((stride + 1) * img.height);
  for (int y = 0; y < img.height; ++y) {
    raw[(stride + 1) * y] = 0;  // filter: none
    std::memcpy(&raw[(stride + 1) * y + 1], &img.pixels[stride * y], stride);
  }

  uLongf comp_len = compressBound(static_cast<uLong>(raw.size()));
  std::vector<uint8_t> comp(comp_len);
  // Fixed compression level for byte-reproducible output.
  if (compress2(comp.data(), &comp_len, raw.data(),
                static_cast<uLong>(raw.size()), 6) != Z_OK)
    throw IoError("png: deflate failed");
  comp.resize(comp_len);

  std::vector<uint8_t> out;
  static const uint8_t sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  out.insert(out.end(), sig, sig + 8);

  uint8_t ihdr[13];
  ihdr[0] = (img.width >> 24) & 0xff;
  ihdr[1] = (img.width >> 16) & 0xff;
  ihdr[2] = (img.width >> 8) & 0xff;
  ihdr[3] = img.width & 0xff;
  ihdr[4] = (img.height >> 24) & 0xff;
  ihdr[5] = (img.height >> 16) & 0xff;
  ihdr[6] = (img.height >> 8) & 0xff;
  ihdr[7] = img.height & 0xff;
  ihdr[8] = 8;                                  // bit depth
  ihdr[9] = (img.channels == 3) ? 2 : 0;        // color type
  ihdr[10] = ihdr[11] = ihdr[12] = 0;           // deflate/adaptive/no interlace
  append_chunk(out, "IHDR", ihdr, 13);
  append_chunk(out, "IDAT", comp.data(), comp.size());
  append_chunk(out, "IEND", nullptr, 0);
  return out;
}

Image8 decode_png(const std::vector<uint8_t>& bytes) {
  static const uint8_t sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  if (bytes.size() < 8 || std::memcmp(bytes.data(), sig, 8) != 0)
    throw IoError("png: bad signature");

  Image8 img;
  int bit_depth = 0, color_type = -1, interlace = 0;
  std::vector<uint8_t> idat;

  size_t pos = 8;
  while (pos + 8 <= bytes.size()) {
    const uint32_t len = get_u32be(&bytes[pos]);
    if (pos + 12 + len > bytes.size()) throw IoError("png: truncated chunk");
    const char* type = reinterpret_cast<const char*>(&bytes[pos + 4]);
    const uint8_t* data = &bytes[pos + 8];
    if (std::memcmp(type, "IHDR", 4) == 0) {
      PF_CHECK_MSG(len == 13, "png: bad IHDR");
      img.width = static_cast<int>(get_u32be(data));
      img.height = static_cast<int>(get_u32be(data + 4));
      bit_depth = data[8];
      color_type = data[9];
      interlace = data[12];
    } else if (std::memcmp(type, "IDAT", 4) == 0) {
      idat.insert(idat.end(), data, data + len);
    } else if (std::memcmp(type, "IEND", 4) == 0) {
      break;
    }
    pos += 12 + len;
  }

  if (bit_depth != 8 || (color_type != 0 && color_type != 2) || interlace != 0)
    throw IoError("png: unsupported format (need 8-bit gray/RGB, no interlace)");
  img.channels = (color_type == 2) ? 3 : 1;

  const size_t stride = static_cast<size_t>(img.width) * img.channels;
  std::vector<uint8_t> raw((stride + 1) * img.height);
  uLongf raw_len = static_cast<uLongf>(raw.size());
  if (uncompress(raw.data(), &raw_len, idat.data(),
                 static_cast<uLong>(idat.size())) != Z_OK ||
      raw_len != raw.size())
    throw IoError("png: inflate failed");

  img.pixels.resize(stride * img.height);
  const int bpp = img.channels;
  for (int y = 0; y < img.height; ++y) {
    const uint8_t filter = raw[(stride + 1) * y];
    const uint8_t* src = &raw[(stride + 1) * y + 1];
    uint8_t* dst = &img.pixels[stride * y];
    const uint8_t* up = (y > 0) ? &img.pixels[stride * (y - 1)] : nullptr;
    for (size_t i = 0; i < stride; ++i) {
      const int a = (i >= static_cast<size_t>(bpp)) ? dst[i - bpp] : 0;
      const int b = up ? up[i] : 0;
      const int c = (up && i >= static_cast<size_t>(bpp)) ? up[i - bpp] : 0;
      int v = src[i];
      switch (filter) {
        case 0: break;
        case 1: v += a; break;
        case 2: v += b; break;
        case 3: v += (a + b) / 2; break;
        case 4: v += paeth(a, b, c); break;
        default: throw IoError("png: unknown filter");
      }
      dst[i] = static_cast<uint8_t>(v & 0xff);
    }
  }
  return img;
}

void write_png(const std::string& path, const Image8& img) {
  const std::vector<uint8_t> bytes = encode_png(img);
  FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw IoError("png: cannot create " + path);
  const size_t n = std::fwrite(bytes.data(), 1, bytes.size(), f);
  std::fclose(f);
  if (n != bytes.size()) throw IoError("png: write failed: " + path);
}

Image8 read_png(const std::string& path) {
  FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) throw IoError("png: cannot open " + path);
  std::fseek(f, 0, SEEK_END);
  const long sz = std::ftell(f);
  std::fseek(f, 0, SEEK_SET);
  std::vector<uint8_t> bytes(static_cast<size_t>(sz));
  const size_t n = std::fread(bytes.data(), 1, bytes.size(), f);
  std::fclose(f);
  if (n != bytes.size()) throw IoError("png: read failed: " + path);
  return decode_png(bytes);
}

}  // namespace pedfuse
