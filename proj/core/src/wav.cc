// core/src/wav.cc

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

#include "pedfuse/wav.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>

#include "pedfuse/common.h"

namespace pedfuse {
namespace {

void put_u32(uint8_t* p, uint32_t v) {
  p[0] = v & 0xff;
  p[1] = (v >> 8) & 0xff;
  p[2] = (v >> 16) & 0xff;
  p[3] = (v >> 24) & 0xff;
}
void put_u16(uint8_t* p, uint16_t v) {
  p[0] = v & 0xff;
  p[1] = (v >> 8) & 0xff;
}
uint32_t get_u32(const uint8_t* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) |
         (static_cast<uint32_t>(p[3]) << 24);
}
uint16_t get_u16(const uint8_t* p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

// Inverse of the decode convention s16 / 32768.
int16_t quantize_s16(float v) {
  long x = std::lround(static_cast<double>(v) * 32768.0);
  x = std::max(-32768L, std::min(32767L, x));
  return static_cast<int16_t>(x);
}

// 44-byte canonical PCM header.
void write_header(FILE* f, int sample_rate, int channels, uint32_t data_bytes) {
  uint8_t h[44];
  std::memcpy(h, "RIFF", 4);
  put_u32(h + 4, 36 + data_bytes);
  std::memcpy(h + 8, "WAVE", 4);
  std::memcpy(h + 12, "fmt ", 4);
  put_u32(h + 16, 16);
  put_u16(h + 20, 1);  // PCM
  put_u16(h + 22, static_cast<uint16_t>(channels));
  put_u32(h + 24, static_cast<uint32_t>(sample_rate));
  put_u32(h + 28, static_cast<uint32_t>(sample_rate * channels * 2));
  put_u16(h + 32, static_cast<uint16_t>(channels * 2));
  put_u16(h + 34, 16);
  std::memcpy(h + 36, "data", 4);
  put_u32(h + 40, data_bytes);
  if (std::fwrite(h, 1, 44, f) != 44) throw IoError("wav: header write failed");
}

}  // namespace

void write_wav_s16le(const std::string& path, const AudioBuffer& audio) {
  PF_CHECK_MSG(!audio.channels.empty(), "wav: no channels");
  const size_t n = audio.num_samples();
  for (const auto& ch : audio.channels)
    PF_CHECK_MSG(ch.size() == n, "wav: ragged channels");

  WavStreamWriter w(path, audio.sample_rate, audio.num_channels());
  w.append(audio.channels);
  w.close();
}

AudioBuffer read_wav_s16le(const std::string& path) {
  FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) throw IoError("wav: cannot open " + path);
  uint8_t h[12];
  if (std::fread(h, 1, 12, f) != 12 || std::memcmp(h, "RIFF", 4) != 0 ||
      std::memcmp(h + 8, "WAVE", 4) != 0) {
    std::fclose(f);
    throw IoError("wav: not a RIFF/WAVE file: " + path);
  }

  int channels = 0, sample_rate = 0, bits = 0;
  std::vector<uint8_t> data;
  // Chunk walk.
  uint8_t ch[8];
  while (std::fread(ch, 1, 8, f) == 8) {
    const uint32_t size = get_u32(ch + 4);
    if (std::memcmp(ch, "fmt ", 4) == 0) {
      std::vector<uint8_t> fmt(size);
      if (std::fread(fmt.data(), 1, size, f) != size) break;
      const uint16_t tag = get_u16(fmt.data());
      channels = get_u16(fmt.data() + 2);
      sample_rate = static_cast<int>(get_u32(fmt.data() + 4));
      bits = get_u16(fmt.data() + 14);
      if (tag != 1 || bits != 16) {
        std::fclose(f);
        throw IoError("wav: only PCM S16LE supported: " + path);
      }
    } else if (std::memcmp(ch, "data", 4) == 0) {
      data.resize(size);
      if (std::fread(data.data(), 1, size, f) != size) {
        std::fclose(f);
        throw IoError("wav: truncated data chunk: " + path);
      }
    } else {
      std::fseek(f, static_cast<long>(size + (size & 1)), SEEK_CUR);
    }
  }
  std::fclose(f);
  if (channels <= 0 || sample_rate <= 0)
    throw IoError("wav: missing fmt chunk: " + path);

  AudioBuffer out;
  out.sample_rate = sample_rate;
  const size_t frames = data.size() / (static_cast<size_t>(channels) * 2);
  out.channels.assign(static_cast<size_t>(channels),
                      std::vector<float>(frames));
  const uint8_t* p = data.data();
  for (size_t i = 0; i < frames; ++i) {
    for (int c = 0; c < channels; ++c) {
      const int16_t s = static_cast<int16_t>(get_u16(p));
      p += 2;
      out.channels[static_cast<size_t>(c)][i] =
          static_cast<float>(s) / 32768.0f;
    }
  }
  return out;
}

struct WavStreamReader::Impl {
  FILE* f = nullptr;
  size_t frames_left = 0;
};

WavStreamReader::WavStreamReader(const std::string& path) : impl_(new Impl) {
  impl_->f = std::fopen(path.c_str(), "rb");
  if (!impl_->f) {
    delete impl_;
    throw IoError("wav: cannot open " + path);
  }
  uint8_t h[12];
  if (std::fread(h, 1, 12, impl_->f) != 12 || std::memcmp(h, "RIFF", 4) != 0 ||
      std::memcmp(h + 8, "WAVE", 4) != 0) {
    std::fclose(impl_->f);
    delete impl_;
    throw IoError("wav: not a RIFF/WAVE file: " + path);
  }
  uint8_t ch[8];
  uint32_t data_size = 0;
  bool have_data = false;
  while (!have_data && std::fread(ch, 1, 8, impl_->f) == 8) {
    const uint32_t size = get_u32(ch + 4);
    if (std::memcmp(ch, "fmt ", 4) == 0) {
      std::vector<uint8_t> fmt(size);
      if (std::fread(fmt.data(), 1, size, impl_->f) != size) break;
      if (get_u16(fmt.data()) != 1 || get_u16(fmt.data() + 14) != 16) {
        std::fclose(impl_->f);
        delete impl_;
        throw IoError("wav: only PCM S16LE supported: " + path);
      }
      channels_ = get_u16(fmt.data() + 2);
      sample_rate_ = static_cast<int>(get_u32(fmt.data() + 4));
    } else if (std::memcmp(ch, "data", 4) == 0) {
      data_size = size;
      have_data = true;  // reader positioned at the first sample
    } else {
      std::fseek(impl_->f, static_cast<long>(size + (size & 1)), SEEK_CUR);
    }
  }
  if (!have_data || channels_ <= 0 || sample_rate_ <= 0) {
    std::fclose(impl_->f);
    delete impl_;
    throw IoError("wav: missing fmt/data chunk: " + path);
  }
  total_frames_ = data_size / (static_cast<size_t>(channels_) * 2);
  impl_->frames_left = total_frames_;
}

WavStreamReader::~WavStreamReader() {
  if (impl_) {
    if (impl_->f) std::fclose(impl_->f);
    delete impl_;
  }
}

size_t WavStreamReader::read(size_t n, std::vector<std::vector<float>>& block) {
  const size_t want = std::min(n, impl_->frames_left);
  block.assign(static_cast<size_t>(channels_), std::vector<float>(want));
  if (want == 0) return 0;
  std::vector<uint8_t> buf(want * static_cast<size_t>(channels_) * 2);
  const size_t got_bytes = std::fread(buf.data(), 1, buf.size(), impl_->f);
  const size_t got = got_bytes / (static_cast<size_t>(channels_) * 2);
  const uint8_t* p = buf.data();
  for (size_t i = 0; i < got; ++i)
    for (int c = 0; c < channels_; ++c) {
      block[static_cast<size_t>(c)][i] =
          static_cast<float>(static_cast<int16_t>(get_u16(p))) / 32768.0f;
      p += 2;
    }
  for (auto& chan : block) chan.resize(got);
  impl_->frames_left -= got;
  return got;
}

struct WavStreamWriter::Impl {
  FILE* f = nullptr;
  int sample_rate = 0;
  int channels = 0;
  bool closed = false;
};

WavStreamWriter::WavStreamWriter(const std::string& path, int sample_rate,
                                 int channels)
    : impl_(new Impl) {
  PF_CHECK_CFG(sample_rate > 0 && channels > 0, "wav: bad stream params");
  impl_->f = std::fopen(path.c_str(), "wb");
  if (!impl_->f) {
    delete impl_;
    impl_ = nullptr;
    throw IoError("wav: cannot create " + path);
  }
  impl_->sample_rate = sample_rate;
  impl_->channels = channels;
  write_header(impl_->f, sample_rate, channels, 0);
}

WavStreamWriter::~WavStreamWriter() {
  if (impl_) {
    if (!impl_->closed && impl_->f) {
      std::fclose(impl_->f);  // best effort; close() not called
    }
    delete impl_;
  }
}

void WavStreamWriter::append(const std::vector<std::vector<float>>& block) {
  PF_CHECK(impl_ && !impl_->closed);
  PF_CHECK_MSG(static_cast<int>(block.size()) == impl_->channels,
               "wav: channel count mismatch");
  const size_t n = block[0].size();
  for (const auto& ch : block)
    PF_CHECK_MSG(ch.size() == n, "wav: ragged block");

  std::vector<uint8_t> buf(n * static_cast<size_t>(impl_->channels) * 2);
  uint8_t* p = buf.data();
  for (size_t i = 0; i < n; ++i) {
    for (int c = 0; c < impl_->channels; ++c) {
      const int16_t s = quantize_s16(block[static_cast<size_t>(c)][i]);
      put_u16(p, static_cast<uint16_t>(s));
      p += 2;
    }
  }
  if (std::fwrite(buf.data(), 1, buf.size(), impl_->f) != buf.size())
    throw IoError("wav: write failed");
  frames_ += n;
}

void WavStreamWriter::close() {
  if (!impl_ || impl_->closed) return;
  const uint32_t data_bytes =
      static_cast<uint32_t>(frames_ * static_cast<size_t>(impl_->channels) * 2);
  std::fseek(impl_->f, 0, SEEK_SET);
  write_header(impl_->f, impl_->sample_rate, impl_->channels, data_bytes);
  std::fclose(impl_->f);
  impl_->f = nullptr;
  impl_->closed = true;
}

}  // namespace pedfuse
