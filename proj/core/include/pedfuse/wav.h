// core/include/pedfuse/wav.h

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

#ifndef PEDFUSE_WAV_H_
#define PEDFUSE_WAV_H_

#include <cstdint>
#include <string>
#include <vector>

namespace pedfuse {

// Planar multichannel audio in [-1, 1]; persisted as PCM S16LE WAV.
struct AudioBuffer {
  int sample_rate = 0;
  // channels[c][n]
  std::vector<std::vector<float>> channels;

  int num_channels() const { return static_cast<int>(channels.size()); }
  size_t num_samples() const {
    return channels.empty() ? 0 : channels[0].size();
  }
};

void write_wav_s16le(const std::string& path, const AudioBuffer& audio);
AudioBuffer read_wav_s16le(const std::string& path);

// Sequential reader; pulls fixed-size frame blocks without loading the
// whole stream.
class WavStreamReader {
 public:
  explicit WavStreamReader(const std::string& path);
  ~WavStreamReader();

  int sample_rate() const { return sample_rate_; }
  int channels() const { return channels_; }
  size_t total_frames() const { return total_frames_; }

  // Reads up to n frames into block[c]; returns frames actually read.
  size_t read(size_t n, std::vector<std::vector<float>>& block);

 private:
  struct Impl;
  Impl* impl_;
  int sample_rate_ = 0;
  int channels_ = 0;
  size_t total_frames_ = 0;
};

// Incremental writer for long streams; samples are interleaved and
// quantized to S16LE as they arrive, header patched on close.
class WavStreamWriter {
 public:
  WavStreamWriter(const std::string& path, int sample_rate, int channels);
  ~WavStreamWriter();

  // block[c] must all have equal length.
  void append(const std::vector<std::vector<float>>& block);
  void close();

  size_t frames_written() const { return frames_; }

 private:
  struct Impl;
  Impl* impl_;
  size_t frames_ = 0;
};

}  // namespace pedfuse

#endif  // PEDFUSE_WAV_H_
